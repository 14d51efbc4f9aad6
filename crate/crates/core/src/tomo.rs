//! Simulated two-photon polarization tomography.
//!
//! Each side projects onto one of the six Pauli eigenstates, giving 36
//! analyzer pairs. Counts are Poisson with mean
//! `exposure * (Tr[rho Pi_A (x) Pi_B] + dark_prob)`. The state is recovered
//! by linear inversion of the two-qubit Stokes parameters followed by
//! eigenvalue clipping.
//!
//! Random numbers come from ChaCha8 seeded with the record seed; setting `i`
//! draws from stream `i`, so counts are reproducible and independent of the
//! order in which settings are simulated.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::ComplexMatrix;
use crate::qstate::DensityMatrix;
use crate::stokes::UnitVector;

/// Per-gate accidental coincidence probability of the reference detectors.
pub const DEFAULT_DARK_PROB: f64 = 4e-5;

const AXIS_TOL: f64 = 1e-9;
const AXIS_NAMES: [char; 3] = ['X', 'Y', 'Z'];

/// Analyzer directions for qubits A and B.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[UnitVector; 2]", into = "[UnitVector; 2]")]
pub struct MeasurementSetting {
    pub proj_a: UnitVector,
    pub proj_b: UnitVector,
}

impl From<[UnitVector; 2]> for MeasurementSetting {
    fn from([proj_a, proj_b]: [UnitVector; 2]) -> Self {
        MeasurementSetting { proj_a, proj_b }
    }
}

impl From<MeasurementSetting> for [UnitVector; 2] {
    fn from(s: MeasurementSetting) -> Self {
        [s.proj_a, s.proj_b]
    }
}

impl MeasurementSetting {
    /// `Pi_A (x) Pi_B` with `Pi = (I + n.sigma) / 2`.
    pub fn projector(&self) -> ComplexMatrix {
        let pa = analyzer(&self.proj_a);
        let pb = analyzer(&self.proj_b);
        ComplexMatrix::kron(&pa, &pb).expect("2x2 factors")
    }
}

fn analyzer(n: &UnitVector) -> ComplexMatrix {
    (ComplexMatrix::identity(2) + ComplexMatrix::pauli_dot(n.as_array())).scale_real(0.5)
}

/// Simulated coincidence counts and the acquisition parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRecord")]
pub struct TomographyRecord {
    pub settings: Vec<MeasurementSetting>,
    pub counts: Vec<u64>,
    pub exposure: f64,
    pub dark_prob: f64,
    pub seed: u64,
}

#[derive(Deserialize)]
struct RawRecord {
    settings: Vec<MeasurementSetting>,
    counts: Vec<u64>,
    exposure: f64,
    dark_prob: f64,
    seed: u64,
}

impl TryFrom<RawRecord> for TomographyRecord {
    type Error = Error;
    fn try_from(raw: RawRecord) -> Result<Self> {
        if raw.counts.len() != raw.settings.len() {
            return Err(Error::MalformedRecord(format!(
                "{} settings but {} counts",
                raw.settings.len(),
                raw.counts.len()
            )));
        }
        if !(raw.exposure > 0.0) || !(raw.dark_prob >= 0.0) {
            return Err(Error::MalformedRecord(
                "exposure must be > 0 and dark_prob >= 0".into(),
            ));
        }
        Ok(TomographyRecord {
            settings: raw.settings,
            counts: raw.counts,
            exposure: raw.exposure,
            dark_prob: raw.dark_prob,
            seed: raw.seed,
        })
    }
}

/// How counts are produced from their expected values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    /// Poisson draws.
    Poisson,
    /// Expected values rounded to the nearest integer.
    Expected,
}

/// The six Pauli eigenstates in analyzer order.
pub fn analyzer_states() -> [UnitVector; 6] {
    [
        UnitVector::Z,
        -UnitVector::Z,
        UnitVector::X,
        -UnitVector::X,
        UnitVector::Y,
        -UnitVector::Y,
    ]
}

/// All 36 analyzer pairs, qubit A outer, starting with `(+z, +z)`.
pub fn standard_settings() -> Vec<MeasurementSetting> {
    let states = analyzer_states();
    states
        .iter()
        .flat_map(|&a| {
            states.iter().map(move |&b| MeasurementSetting {
                proj_a: a,
                proj_b: b,
            })
        })
        .collect()
}

/// Mean coincidence count for each setting.
pub fn expected_counts(
    rho: &DensityMatrix,
    settings: &[MeasurementSetting],
    exposure: f64,
    dark_prob: f64,
) -> Result<Vec<f64>> {
    if rho.dim() != 4 {
        return Err(Error::Dimension {
            expected: 4,
            got: rho.dim(),
        });
    }
    if !(exposure > 0.0 && exposure.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "exposure must be > 0, got {exposure}"
        )));
    }
    if !(dark_prob >= 0.0 && dark_prob.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "dark_prob must be >= 0, got {dark_prob}"
        )));
    }
    Ok(settings
        .iter()
        .map(|s| {
            let prob = rho.matrix().trace_product(&s.projector()).re.max(0.0);
            exposure * (prob + dark_prob)
        })
        .collect())
}

/// Poisson-sampled record, deterministic in `seed`.
pub fn simulate_counts(
    rho: &DensityMatrix,
    settings: &[MeasurementSetting],
    exposure: f64,
    dark_prob: f64,
    seed: u64,
) -> Result<TomographyRecord> {
    simulate_counts_with(rho, settings, exposure, dark_prob, seed, Sampling::Poisson)
}

pub fn simulate_counts_with(
    rho: &DensityMatrix,
    settings: &[MeasurementSetting],
    exposure: f64,
    dark_prob: f64,
    seed: u64,
    sampling: Sampling,
) -> Result<TomographyRecord> {
    let means = expected_counts(rho, settings, exposure, dark_prob)?;
    let counts = means
        .par_iter()
        .enumerate()
        .map(|(i, &mu)| match sampling {
            Sampling::Expected => mu.round() as u64,
            Sampling::Poisson => {
                if mu <= 0.0 {
                    return 0;
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64);
                let dist = Poisson::new(mu).expect("positive finite mean");
                dist.sample(&mut rng) as u64
            }
        })
        .collect();
    Ok(TomographyRecord {
        settings: settings.to_vec(),
        counts,
        exposure,
        dark_prob,
        seed,
    })
}

/// Index of a Pauli axis and the sign of `n` along it.
fn pauli_axis(n: &UnitVector) -> Option<(usize, usize)> {
    let v = n.as_array();
    (0..3).find_map(|k| {
        let others_zero = (0..3).filter(|&j| j != k).all(|j| v[j].abs() < AXIS_TOL);
        if !others_zero {
            return None;
        }
        if (v[k] - 1.0).abs() < AXIS_TOL {
            Some((k, 0))
        } else if (v[k] + 1.0).abs() < AXIS_TOL {
            Some((k, 1))
        } else {
            None
        }
    })
}

/// Linear-inversion estimate from counts, projected onto the physical states.
pub fn reconstruct(record: &TomographyRecord) -> Result<DensityMatrix> {
    let counts: Vec<f64> = record.counts.iter().map(|&c| c as f64).collect();
    reconstruct_from_counts(&record.settings, &counts)
}

/// As [`reconstruct`], accepting non-integer (e.g. expected) counts.
pub fn reconstruct_from_counts(settings: &[MeasurementSetting], counts: &[f64]) -> Result<DensityMatrix> {
    if settings.len() != counts.len() {
        return Err(Error::MalformedRecord(format!(
            "{} settings but {} counts",
            settings.len(),
            counts.len()
        )));
    }
    // table[axis_a][sign_a][axis_b][sign_b]
    let mut table = [[[[0.0f64; 2]; 3]; 2]; 3];
    let mut seen = [[false; 3]; 3];
    for (s, &c) in settings.iter().zip(counts) {
        if !(c >= 0.0) {
            return Err(Error::MalformedRecord(format!("negative count {c}")));
        }
        let (ja, sa) = pauli_axis(&s.proj_a)
            .ok_or_else(|| Error::MalformedRecord("analyzer A is not a Pauli eigenstate".into()))?;
        let (jb, sb) = pauli_axis(&s.proj_b)
            .ok_or_else(|| Error::MalformedRecord("analyzer B is not a Pauli eigenstate".into()))?;
        table[ja][sa][jb][sb] += c;
        seen[ja][jb] = true;
    }

    let group_name = |ja: usize, jb: usize| format!("{}{}", AXIS_NAMES[ja], AXIS_NAMES[jb]);
    let mut stokes = [[0.0f64; 4]; 4];
    stokes[0][0] = 1.0;
    let mut marg_a = [[0.0f64; 2]; 3];
    let mut marg_b = [[0.0f64; 2]; 3];
    for ja in 0..3 {
        for jb in 0..3 {
            let g = &table[ja];
            let n = [[g[0][jb][0], g[0][jb][1]], [g[1][jb][0], g[1][jb][1]]];
            let total = n[0][0] + n[0][1] + n[1][0] + n[1][1];
            if !seen[ja][jb] || total <= 0.0 {
                return Err(Error::InsufficientStatistics(group_name(ja, jb)));
            }
            stokes[ja + 1][jb + 1] = (n[0][0] - n[0][1] - n[1][0] + n[1][1]) / total;
            for s in 0..2 {
                marg_a[ja][s] += n[s][0] + n[s][1];
                marg_b[jb][s] += n[0][s] + n[1][s];
            }
        }
    }
    for j in 0..3 {
        stokes[j + 1][0] = (marg_a[j][0] - marg_a[j][1]) / (marg_a[j][0] + marg_a[j][1]);
        stokes[0][j + 1] = (marg_b[j][0] - marg_b[j][1]) / (marg_b[j][0] + marg_b[j][1]);
    }

    let mut lin = ComplexMatrix::zeros(4);
    for (j, row) in stokes.iter().enumerate() {
        for (k, &s) in row.iter().enumerate() {
            if s == 0.0 {
                continue;
            }
            let op = ComplexMatrix::kron(&ComplexMatrix::pauli(j), &ComplexMatrix::pauli(k))?;
            lin = lin + op.scale_real(0.25 * s);
        }
    }
    project_physical(&lin)
}

/// Clips negative eigenvalues and renormalizes the trace.
fn project_physical(m: &ComplexMatrix) -> Result<DensityMatrix> {
    let eig = m.hermitian_eig()?;
    let total: f64 = eig.values.iter().map(|v| v.max(0.0)).sum();
    if !(total > 0.0) {
        return Err(Error::InsufficientStatistics("all".into()));
    }
    let clipped = eig.map_values(|v| v.max(0.0) / total);
    let clipped = (clipped + clipped.dagger()).scale_real(0.5);
    DensityMatrix::new(clipped)
}
