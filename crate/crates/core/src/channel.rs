//! Channel elements acting on the polarization qubits: mode filters
//! (polarization-dependent loss), birefringent rotations, and the Pauli noise
//! they produce on qubit A.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{ComplexMatrix, C64};
use crate::qstate::{bell_state, BellLabel, DensityMatrix};
use crate::stokes::UnitVector;

/// Traces below this after filtering mean the pair never gets through.
pub const BLOCKED_TRACE: f64 = 1e-14;

/// A partial polarizer with strength `magnitude` favouring `orientation`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterElement {
    magnitude: f64,
    orientation: UnitVector,
}

impl FilterElement {
    pub fn new(magnitude: f64, orientation: UnitVector) -> Result<Self> {
        if !magnitude.is_finite() || magnitude < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "filter magnitude must be finite and >= 0, got {magnitude}"
            )));
        }
        Ok(FilterElement {
            magnitude,
            orientation,
        })
    }

    /// A filter that does nothing.
    pub fn identity() -> Self {
        FilterElement {
            magnitude: 0.0,
            orientation: UnitVector::Z,
        }
    }

    pub fn magnitude(&self) -> f64 {
        self.magnitude
    }

    pub fn orientation(&self) -> UnitVector {
        self.orientation
    }
}

/// Probabilistic Pauli rotation about `axis` applied with weight `p / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliNoiseSpec {
    axis: UnitVector,
    p: f64,
}

impl PauliNoiseSpec {
    pub fn new(axis: UnitVector, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "noise weight p must lie in [0, 1], got {p}"
            )));
        }
        Ok(PauliNoiseSpec { axis, p })
    }

    /// Birefringence on the equator, perpendicular to the channel filter.
    pub fn bit_flip(p: f64) -> Result<Self> {
        Self::new(UnitVector::X, p)
    }

    /// Birefringence at the pole, collinear with the channel filter.
    pub fn phase_flip(p: f64) -> Result<Self> {
        Self::new(UnitVector::Z, p)
    }

    pub fn axis(&self) -> UnitVector {
        self.axis
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// A birefringent element with differential group delay `dgd` (ps) seen by a
/// photon whose angular-frequency spread has RMS width `spectral_width`
/// (rad/ps).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BirefringenceSpec {
    dgd: f64,
    axis: UnitVector,
    spectral_width: f64,
}

impl BirefringenceSpec {
    pub fn new(dgd: f64, axis: UnitVector, spectral_width: f64) -> Result<Self> {
        if !(dgd >= 0.0) || dgd.is_infinite() {
            return Err(Error::InvalidParameter(format!(
                "differential group delay must be finite and >= 0, got {dgd}"
            )));
        }
        if !(spectral_width > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "spectral width must be > 0, got {spectral_width}"
            )));
        }
        Ok(BirefringenceSpec {
            dgd,
            axis,
            spectral_width,
        })
    }

    pub fn dgd(&self) -> f64 {
        self.dgd
    }

    pub fn axis(&self) -> UnitVector {
        self.axis
    }

    pub fn spectral_width(&self) -> f64 {
        self.spectral_width
    }

    /// Residual transverse coherence `exp(-(dgd * width)^2 / 2)` for a
    /// Gaussian power spectrum.
    pub fn decoherence_factor(&self) -> f64 {
        if self.dgd == 0.0 {
            return 1.0;
        }
        let x = self.dgd * self.spectral_width;
        (-0.5 * x * x).exp()
    }
}

/// `P = exp(gamma/2 g.sigma) = cosh(gamma/2) I + sinh(gamma/2) g.sigma`.
///
/// Eigenvalues are `e^{+-gamma/2}`, so `det P = 1`.
pub fn filter_operator(f: &FilterElement) -> ComplexMatrix {
    let half = 0.5 * f.magnitude;
    let ns = ComplexMatrix::pauli_dot(f.orientation.as_array());
    ComplexMatrix::identity(2).scale_real(half.cosh()) + ns.scale_real(half.sinh())
}

/// `e^{-gamma/2} P`: the favoured mode passes with probability one.
pub fn passive_filter_operator(f: &FilterElement) -> ComplexMatrix {
    filter_operator(f).scale_real((-0.5 * f.magnitude).exp())
}

/// `U = cos(theta/2) I - i sin(theta/2) axis.sigma`.
pub fn unitary_operator(axis: &UnitVector, angle: f64) -> ComplexMatrix {
    let (s, c) = (0.5 * angle).sin_cos();
    let ns = ComplexMatrix::pauli_dot(axis.as_array());
    ComplexMatrix::identity(2).scale_real(c) + ns.scale(C64::new(0.0, -s))
}

/// Applies `rho -> (1 - p/2) rho + (p/2) (n.sigma) rho (n.sigma)` to a
/// one-qubit state.
pub fn apply_pauli_channel(spec: &PauliNoiseSpec, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            got: rho.dim(),
        });
    }
    let ns = ComplexMatrix::pauli_dot(spec.axis.as_array());
    Ok(pauli_mix(spec.p, rho.matrix(), &ns))
}

fn pauli_mix(p: f64, rho: &ComplexMatrix, k: &ComplexMatrix) -> DensityMatrix {
    let flipped = k * &(rho * k);
    DensityMatrix::new_unchecked(rho.scale_real(1.0 - 0.5 * p) + flipped.scale_real(0.5 * p))
}

/// Choi state of the Pauli channel: the channel applied to qubit A of
/// `|phi+>`. Axis `x` gives the bit-flip mixture, axis `z` the phase-flip one.
pub fn pauli_channel_state(spec: &PauliNoiseSpec) -> DensityMatrix {
    let phi = bell_state(BellLabel::PhiPlus);
    let ns = ComplexMatrix::pauli_dot(spec.axis.as_array());
    let k = ComplexMatrix::kron(&ns, &ComplexMatrix::identity(2)).expect("2x2 factors");
    pauli_mix(spec.p, phi.matrix(), &k)
}

/// Pauli channel equivalent to averaging the birefringent rotation over a
/// Gaussian photon spectrum: transverse Bloch components shrink by the
/// decoherence factor `d`, so `p = 1 - d`.
pub fn dephasing_from_spectrum(spec: &BirefringenceSpec) -> PauliNoiseSpec {
    let p = (1.0 - spec.decoherence_factor()).clamp(0.0, 1.0);
    PauliNoiseSpec { axis: spec.axis, p }
}

/// A filtered, renormalized state and the probability that the pair survived
/// the passive filters.
#[derive(Debug, Clone, Copy)]
pub struct FilteredState {
    pub state: DensityMatrix,
    pub transmission: f64,
}

/// `(P_A (x) P_B) rho (P_A (x) P_B)^dagger`, renormalized.
pub fn apply_filters(
    rho_in: &DensityMatrix,
    filter_a: &FilterElement,
    filter_b: &FilterElement,
) -> Result<FilteredState> {
    if rho_in.dim() != 4 {
        return Err(Error::Dimension {
            expected: 4,
            got: rho_in.dim(),
        });
    }
    let k = ComplexMatrix::kron(
        &passive_filter_operator(filter_a),
        &passive_filter_operator(filter_b),
    )?;
    let out = k.matmul(rho_in.matrix())?.matmul(&k.dagger())?;
    let transmission = out.trace().re;
    if !(transmission > BLOCKED_TRACE) {
        return Err(Error::Blocked(transmission));
    }
    let normalized = out.scale_real(1.0 / transmission);
    // filters are Hermitian, so the result is Hermitian up to rounding
    let normalized = (normalized + normalized.dagger()).scale_real(0.5);
    Ok(FilteredState {
        state: DensityMatrix::new_unchecked(normalized),
        transmission: transmission.min(1.0),
    })
}

/// The spheroid traced by qubit A's Bloch sphere under the noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochEllipsoid {
    /// Symmetry axis, the birefringence direction.
    pub axis: UnitVector,
    /// Semi-axis along `axis`, then the two transverse semi-axes.
    pub semi_axes: [f64; 3],
}

pub fn bloch_ellipsoid(spec: &PauliNoiseSpec) -> BlochEllipsoid {
    let t = 1.0 - spec.p;
    BlochEllipsoid {
        axis: spec.axis,
        semi_axes: [1.0, t, t],
    }
}
