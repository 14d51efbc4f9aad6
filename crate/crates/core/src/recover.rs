//! Entanglement recovery with a compensating filter on qubit B.
//!
//! For a state with no local Bloch vectors (Bell-diagonal up to local
//! unitaries) and correlation matrix `T`, local filters of strengths
//! `g_A`, `g_B` along `a`, `b` leave the concurrence
//!
//! ```text
//! C = C0 / (cosh g_A cosh g_B + (T a . b) sinh g_A sinh g_B)
//! ```
//!
//! which is maximized by pointing `b` against `T a` and choosing
//! `g_B = atanh(|T a| tanh g_A)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{apply_filters, pauli_channel_state, FilterElement, PauliNoiseSpec};
use crate::error::{Error, Result};
use crate::qstate::{concurrence, correlation_matrix, mutual_information, CorrelationMatrix, DensityMatrix};
use crate::stokes::{norm, UnitVector};

/// The inherent channel filter defines `|H>` for qubit A, so it sits on `+z`.
pub const CHANNEL_FILTER_AXIS: UnitVector = UnitVector::Z;

const ZERO_TOL: f64 = 1e-12;

/// How the qubit-B filter magnitude is chosen during a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// No filter on B.
    None,
    /// `g_B = g_A`.
    Match,
    /// `g_B = atanh(|T a| tanh g_A)`.
    Optimal,
    /// `g_B = ratio * g_A` (ratio scans).
    #[value(skip)]
    Ratio,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::None => "none",
            Strategy::Match => "match",
            Strategy::Optimal => "optimal",
            Strategy::Ratio => "ratio",
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One row of a filter sweep. Field order is the CSV column order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub gamma_a: f64,
    pub gamma_b: f64,
    pub strategy: Strategy,
    #[serde(rename = "mutual_info_bits")]
    pub mutual_info: f64,
    pub concurrence: f64,
    pub transmission: f64,
}

impl SweepPoint {
    /// `g_B / g_A`, or 0 when `g_A` is 0.
    pub fn ratio(&self) -> f64 {
        if self.gamma_a > 0.0 {
            self.gamma_b / self.gamma_a
        } else {
            0.0
        }
    }
}

/// Which column an argmax is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    MutualInformation,
    Concurrence,
}

/// Optimal compensating filter for a given channel filter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecoveryPlan {
    pub gamma_b_opt: f64,
    pub orientation_b: UnitVector,
    pub predicted_concurrence: f64,
    /// Set when the input is separable and no filter can help.
    pub nothing_to_recover: bool,
}

/// Closed-form concurrence after filtering a state with concurrence `c0` and
/// correlation matrix `t`.
pub fn concurrence_after_filtering(
    c0: f64,
    t: &CorrelationMatrix,
    filter_a: &FilterElement,
    filter_b: &FilterElement,
) -> Result<f64> {
    if !(0.0..=1.0 + 1e-12).contains(&c0) {
        return Err(Error::InvalidParameter(format!(
            "concurrence must lie in [0, 1], got {c0}"
        )));
    }
    let (ga, gb) = (filter_a.magnitude(), filter_b.magnitude());
    let dot = t.contract(&filter_a.orientation(), &filter_b.orientation());
    let denom = ga.cosh() * gb.cosh() + dot * ga.sinh() * gb.sinh();
    if !(denom > 0.0) {
        return Err(Error::UnphysicalFilter(denom));
    }
    if c0 == 0.0 {
        return Ok(0.0);
    }
    Ok(c0 / denom)
}

/// The qubit-B direction minimizing `T a . b`, i.e. `-T a / |T a|`.
pub fn optimal_orientation(t: &CorrelationMatrix, gamma_a_hat: &UnitVector) -> Result<UnitVector> {
    let ta = t.apply(gamma_a_hat);
    if norm(&ta) < ZERO_TOL {
        return Err(Error::UndefinedOrientation);
    }
    // 0.0 - x rather than -x keeps zero components unsigned
    UnitVector::normalize([0.0 - ta[0], 0.0 - ta[1], 0.0 - ta[2]])
}

/// `atanh(|T a| tanh g_A)`.
pub fn optimal_magnitude(t: &CorrelationMatrix, gamma_a_hat: &UnitVector, gamma_a: f64) -> Result<f64> {
    if !(gamma_a >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "filter magnitude must be >= 0, got {gamma_a}"
        )));
    }
    let n = norm(&t.apply(gamma_a_hat));
    if n > 1.0 + 1e-9 {
        return Err(Error::InvalidCorrelation(n));
    }
    Ok((n.min(1.0) * gamma_a.tanh()).atanh())
}

/// `optimal_orientation`, falling back to `-a` when `T a` vanishes and every
/// orientation performs the same.
fn compensating_orientation(t: &CorrelationMatrix, gamma_a_hat: &UnitVector) -> Result<UnitVector> {
    match optimal_orientation(t, gamma_a_hat) {
        Err(Error::UndefinedOrientation) => Ok(-*gamma_a_hat),
        other => other,
    }
}

/// Best qubit-B filter for `rho_in` given the channel filter `filter_a`.
pub fn plan_recovery(rho_in: &DensityMatrix, filter_a: &FilterElement) -> Result<RecoveryPlan> {
    let c0 = concurrence(rho_in)?;
    let t = correlation_matrix(rho_in)?;
    let a_hat = filter_a.orientation();
    if c0 < ZERO_TOL {
        return Ok(RecoveryPlan {
            gamma_b_opt: 0.0,
            orientation_b: -a_hat,
            predicted_concurrence: 0.0,
            nothing_to_recover: true,
        });
    }
    let orientation_b = compensating_orientation(&t, &a_hat)?;
    let gamma_b_opt = optimal_magnitude(&t, &a_hat, filter_a.magnitude())?;
    let filter_b = FilterElement::new(gamma_b_opt, orientation_b)?;
    let predicted_concurrence = concurrence_after_filtering(c0, &t, filter_a, &filter_b)?;
    Ok(RecoveryPlan {
        gamma_b_opt,
        orientation_b,
        predicted_concurrence,
        nothing_to_recover: false,
    })
}

/// Concurrence times transmission after filtering.
pub fn average_entanglement(
    rho_in: &DensityMatrix,
    filter_a: &FilterElement,
    filter_b: &FilterElement,
) -> Result<f64> {
    let out = apply_filters(rho_in, filter_a, filter_b)?;
    Ok(concurrence(&out.state)? * out.transmission)
}

fn evaluate(
    rho: &DensityMatrix,
    filter_a: FilterElement,
    filter_b: FilterElement,
    strategy: Strategy,
    normalization: f64,
) -> Result<SweepPoint> {
    let out = apply_filters(rho, &filter_a, &filter_b)?;
    Ok(SweepPoint {
        gamma_a: filter_a.magnitude(),
        gamma_b: filter_b.magnitude(),
        strategy,
        mutual_info: mutual_information(&out.state)? * normalization,
        concurrence: concurrence(&out.state)?,
        transmission: out.transmission,
    })
}

fn check_grid(values: &[f64], what: &str) -> Result<()> {
    if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "{what} values must be finite and >= 0, got {bad}"
        )));
    }
    Ok(())
}

/// Mutual information, concurrence and transmission along a grid of channel
/// filter strengths. The channel filter points along
/// [`CHANNEL_FILTER_AXIS`]; the qubit-B filter is oriented against `T a`.
/// `normalization` scales the reported mutual information only.
pub fn sweep(
    noise: &PauliNoiseSpec,
    gamma_a_grid: &[f64],
    strategy: Strategy,
    normalization: f64,
) -> Result<Vec<SweepPoint>> {
    check_grid(gamma_a_grid, "gamma_a")?;
    if !(normalization > 0.0 && normalization <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "normalization must lie in (0, 1], got {normalization}"
        )));
    }
    if strategy == Strategy::Ratio {
        return Err(Error::InvalidParameter(
            "ratio strategy is only available through ratio_scan".into(),
        ));
    }
    let rho = pauli_channel_state(noise);
    let t = correlation_matrix(&rho)?;
    let a_hat = CHANNEL_FILTER_AXIS;
    let b_hat = compensating_orientation(&t, &a_hat)?;

    gamma_a_grid
        .par_iter()
        .map(|&ga| {
            let gb = match strategy {
                Strategy::None => 0.0,
                Strategy::Match => ga,
                Strategy::Optimal => optimal_magnitude(&t, &a_hat, ga)?,
                Strategy::Ratio => unreachable!(),
            };
            let fa = FilterElement::new(ga, a_hat)?;
            let fb = FilterElement::new(gb, b_hat)?;
            evaluate(&rho, fa, fb, strategy, normalization)
        })
        .collect()
}

/// Scans `g_B = ratio * g_A` at fixed `g_A`, with the compensating orientation.
pub fn ratio_scan(noise: &PauliNoiseSpec, gamma_a: f64, ratio_grid: &[f64]) -> Result<Vec<SweepPoint>> {
    if !(gamma_a > 0.0 && gamma_a.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "gamma_a must be > 0, got {gamma_a}"
        )));
    }
    check_grid(ratio_grid, "ratio")?;
    let rho = pauli_channel_state(noise);
    let t = correlation_matrix(&rho)?;
    let a_hat = CHANNEL_FILTER_AXIS;
    let b_hat = compensating_orientation(&t, &a_hat)?;
    let fa = FilterElement::new(gamma_a, a_hat)?;

    ratio_grid
        .par_iter()
        .map(|&r| {
            let fb = FilterElement::new(r * gamma_a, b_hat)?;
            evaluate(&rho, fa, fb, Strategy::Ratio, 1.0)
        })
        .collect()
}

/// Index of the first maximum of `metric` in `points`.
pub fn argmax(points: &[SweepPoint], metric: Metric) -> Option<usize> {
    let value = |p: &SweepPoint| match metric {
        Metric::MutualInformation => p.mutual_info,
        Metric::Concurrence => p.concurrence,
    };
    let mut best: Option<(usize, f64)> = None;
    for (i, p) in points.iter().enumerate() {
        let v = value(p);
        match best {
            Some((_, b)) if v <= b => {}
            _ => best = Some((i, v)),
        }
    }
    best.map(|(i, _)| i)
}

/// `n` evenly spaced values from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { stop } else { start + step * i as f64 })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{bell_state, BellLabel};

    fn bf_t(p: f64) -> CorrelationMatrix {
        CorrelationMatrix::diagonal([1.0, -(1.0 - p), 1.0 - p])
    }

    fn pf_t(p: f64) -> CorrelationMatrix {
        CorrelationMatrix::diagonal([1.0 - p, -(1.0 - p), 1.0])
    }

    #[test]
    fn closed_form_examples() {
        let t = pf_t(0.33);
        let id = FilterElement::identity();
        assert_eq!(concurrence_after_filtering(0.67, &t, &id, &id).unwrap(), 0.67);

        let g = 0.9;
        let fa = FilterElement::new(g, UnitVector::Z).unwrap();
        let fb = FilterElement::new(g, -UnitVector::Z).unwrap();
        let c = concurrence_after_filtering(0.67, &t, &fa, &fb).unwrap();
        assert!((c - 0.67).abs() < 1e-12);
        assert!(concurrence_after_filtering(1.5, &t, &fa, &fb).is_err());
    }

    #[test]
    fn orientation_examples() {
        let p = 0.33;
        let b = optimal_orientation(&pf_t(p), &UnitVector::Z).unwrap();
        assert!((b.z() + 1.0).abs() < 1e-15);
        assert!((pf_t(p).contract(&UnitVector::Z, &b) + 1.0).abs() < 1e-15);

        // the channel filter sits on the smaller T entry in the bit-flip case
        let b = optimal_orientation(&bf_t(p), &UnitVector::Z).unwrap();
        assert!((bf_t(p).contract(&UnitVector::Z, &b) + (1.0 - p)).abs() < 1e-15);

        let a = UnitVector::normalize([0.3, -0.4, 0.5]).unwrap();
        let b = optimal_orientation(&CorrelationMatrix::diagonal([1.0; 3]), &a).unwrap();
        assert!((b.dot(&a) + 1.0).abs() < 1e-15);

        let t = CorrelationMatrix::diagonal([1.0, 0.0, 0.0]);
        assert!(matches!(
            optimal_orientation(&t, &UnitVector::Z),
            Err(Error::UndefinedOrientation)
        ));
    }

    #[test]
    fn magnitude_examples() {
        assert!((optimal_magnitude(&pf_t(0.33), &UnitVector::Z, 0.857).unwrap() - 0.857).abs() < 1e-12);
        assert_eq!(optimal_magnitude(&bf_t(0.33), &UnitVector::Z, 0.0).unwrap(), 0.0);
        for ga in [0.820, 0.857, 0.869] {
            let gb = optimal_magnitude(&bf_t(0.33), &UnitVector::Z, ga).unwrap();
            assert!((gb / ga - 0.59).abs() < 0.01, "{ga}: {}", gb / ga);
        }
        let bad = CorrelationMatrix::diagonal([0.0, 0.0, 1.5]);
        assert!(matches!(
            optimal_magnitude(&bad, &UnitVector::Z, 1.0),
            Err(Error::InvalidCorrelation(_))
        ));
    }

    #[test]
    fn separable_input_has_nothing_to_recover() {
        let rho = DensityMatrix::maximally_mixed(4).unwrap();
        let plan = plan_recovery(&rho, &FilterElement::new(0.5, UnitVector::Z).unwrap()).unwrap();
        assert!(plan.nothing_to_recover);
        assert_eq!(plan.gamma_b_opt, 0.0);
        let t = CorrelationMatrix::diagonal([0.0; 3]);
        let fa = FilterElement::new(0.5, UnitVector::Z).unwrap();
        assert_eq!(concurrence_after_filtering(0.0, &t, &fa, &fa).unwrap(), 0.0);
    }

    #[test]
    fn average_entanglement_unfiltered() {
        let rho = pauli_channel_state(&PauliNoiseSpec::bit_flip(0.33).unwrap());
        let id = FilterElement::identity();
        let v = average_entanglement(&rho, &id, &id).unwrap();
        assert!((v - 0.67).abs() < 1e-12);
        let phi = bell_state(BellLabel::PhiPlus);
        let fa = FilterElement::new(0.857, UnitVector::Z).unwrap();
        let v1 = average_entanglement(&phi, &fa, &FilterElement::new(0.857, -UnitVector::Z).unwrap()).unwrap();
        let v2 = average_entanglement(&phi, &fa, &FilterElement::new(0.857, UnitVector::X).unwrap()).unwrap();
        assert!((v1 - v2).abs() < 1e-9);
    }

    #[test]
    fn argmax_takes_first_maximum() {
        let mk = |mi: f64| SweepPoint {
            gamma_a: 1.0,
            gamma_b: 0.0,
            strategy: Strategy::Ratio,
            mutual_info: mi,
            concurrence: 0.0,
            transmission: 1.0,
        };
        let pts = [mk(0.1), mk(0.5), mk(0.5), mk(0.2)];
        assert_eq!(argmax(&pts, Metric::MutualInformation), Some(1));
        assert_eq!(argmax(&[], Metric::Concurrence), None);
    }

    #[test]
    fn sweep_rejects_bad_inputs() {
        let n = PauliNoiseSpec::bit_flip(0.33).unwrap();
        assert!(sweep(&n, &[0.0, -1.0], Strategy::None, 1.0).is_err());
        assert!(sweep(&n, &[0.0], Strategy::None, 0.0).is_err());
        assert!(sweep(&n, &[0.0], Strategy::Ratio, 1.0).is_err());
        assert!(ratio_scan(&n, 0.0, &[0.5]).is_err());
    }

    #[test]
    fn linspace_endpoints() {
        let g = linspace(0.0, 1.2, 60);
        assert_eq!(g.len(), 60);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[59], 1.2);
    }
}
