//! Density matrices and the information measures computed from them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::qmat::{ComplexMatrix, Qubit, C64, PSD_TOL, ZERO};
use crate::stokes::{UnitVector, Vec3};

/// Tolerance used when validating a density matrix.
pub const STATE_TOL: f64 = 1e-10;

/// Eigenvalues below this are left out of entropy sums.
pub const ENTROPY_CUTOFF: f64 = 1e-12;

/// Eigenvalues of a trace-one state below this are treated as exact zeros
/// when factoring the state for the concurrence. Jacobi leaves noise of
/// order 1e-16 on null eigenvalues, which the square roots in the Wootters
/// formula would otherwise amplify to order 1e-8.
pub const RANK_CUTOFF: f64 = 1e-14;

const BASIS_2: [&str; 2] = ["H", "V"];
const BASIS_4: [&str; 4] = ["HH", "HV", "VH", "VV"];

/// A unit-trace, Hermitian, positive semidefinite one- or two-qubit state.
#[derive(Clone, Copy, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    /// Validates hermiticity, unit trace and positivity within [`STATE_TOL`].
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_finite() {
            return Err(Error::NonFinite);
        }
        let dev = mat.hermiticity_deviation();
        if dev > STATE_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::NotNormalized(tr.re));
        }
        let eig = mat.hermitian_eig()?;
        let min = *eig.values.last().expect("non-empty spectrum");
        if min < -PSD_TOL {
            return Err(Error::NotPositive(min));
        }
        Ok(DensityMatrix(mat))
    }

    /// Divides a positive operator by its trace.
    pub fn from_unnormalized(mat: ComplexMatrix) -> Result<Self> {
        let tr = mat.trace().re;
        if !(tr > 0.0) {
            return Err(Error::NotNormalized(tr));
        }
        Self::new(mat.scale_real(1.0 / tr))
    }

    pub(crate) fn new_unchecked(mat: ComplexMatrix) -> Self {
        DensityMatrix(mat)
    }

    /// The pure state `|psi><psi|`, normalizing `psi`.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let n: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(n > 0.0) {
            return Err(Error::NotNormalized(n));
        }
        let v: Vec<C64> = psi.iter().map(|z| z / n).collect();
        Self::new(ComplexMatrix::outer(&v)?)
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim != 2 && dim != 4 {
            return Err(Error::UnsupportedDimension(dim));
        }
        Ok(DensityMatrix(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64)))
    }

    /// Product state `rho_a (x) rho_b`.
    pub fn product(a: &DensityMatrix, b: &DensityMatrix) -> Result<Self> {
        Ok(DensityMatrix(ComplexMatrix::kron(&a.0, &b.0)?))
    }

    /// One-qubit state with Bloch vector `r` (|r| <= 1).
    pub fn from_bloch(r: &Vec3) -> Result<Self> {
        let m = (ComplexMatrix::identity(2) + ComplexMatrix::pauli_dot(r)).scale_real(0.5);
        Self::new(m)
    }

    /// Bloch vector of a one-qubit state.
    pub fn bloch_vector(&self) -> Result<Vec3> {
        if self.dim() != 2 {
            return Err(Error::Dimension {
                expected: 2,
                got: self.dim(),
            });
        }
        let mut r = [0.0; 3];
        for (k, rk) in r.iter_mut().enumerate() {
            *rk = self.0.trace_product(&ComplexMatrix::pauli(k + 1)).re;
        }
        Ok(r)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn purity(&self) -> f64 {
        self.0.trace_product(&self.0).re
    }

    /// `U rho U^dagger`.
    pub fn transform_unitary(&self, u: &ComplexMatrix) -> Result<Self> {
        let out = u.matmul(&self.0)?.matmul(&u.dagger())?;
        Ok(DensityMatrix(out))
    }

    pub fn reduced(&self, keep: Qubit) -> Result<DensityMatrix> {
        self.require_two_qubit()?;
        Ok(DensityMatrix(self.0.partial_trace(keep)?))
    }

    fn require_two_qubit(&self) -> Result<()> {
        if self.dim() != 4 {
            return Err(Error::Dimension {
                expected: 4,
                got: self.dim(),
            });
        }
        Ok(())
    }

    /// Eigenvalues, descending, with `[-PSD_TOL, 0)` clipped to zero.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        let eig = self.0.hermitian_eig()?;
        Ok(eig.values.iter().map(|&x| x.max(0.0)).collect())
    }
}

impl fmt::Debug for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DensityMatrix {:?}", self.0)
    }
}

/// The four Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellLabel {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellLabel {
    pub const ALL: [BellLabel; 4] = [
        BellLabel::PhiPlus,
        BellLabel::PhiMinus,
        BellLabel::PsiPlus,
        BellLabel::PsiMinus,
    ];

    /// State vector in the `HH, HV, VH, VV` basis.
    pub fn vector(self) -> [C64; 4] {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        match self {
            BellLabel::PhiPlus => [h, ZERO, ZERO, h],
            BellLabel::PhiMinus => [h, ZERO, ZERO, -h],
            BellLabel::PsiPlus => [ZERO, h, h, ZERO],
            BellLabel::PsiMinus => [ZERO, h, -h, ZERO],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BellLabel::PhiPlus => "phi+",
            BellLabel::PhiMinus => "phi-",
            BellLabel::PsiPlus => "psi+",
            BellLabel::PsiMinus => "psi-",
        }
    }
}

impl fmt::Display for BellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BellLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "phi+" | "phi_plus" | "phiplus" | "φ⁺" | "φ+" => Ok(BellLabel::PhiPlus),
            "phi-" | "phi_minus" | "phiminus" | "φ⁻" | "φ-" => Ok(BellLabel::PhiMinus),
            "psi+" | "psi_plus" | "psiplus" | "ψ⁺" | "ψ+" => Ok(BellLabel::PsiPlus),
            "psi-" | "psi_minus" | "psiminus" | "ψ⁻" | "ψ-" => Ok(BellLabel::PsiMinus),
            _ => Err(Error::UnknownBellLabel(s.to_string())),
        }
    }
}

pub fn bell_state(label: BellLabel) -> DensityMatrix {
    let m = ComplexMatrix::outer(&label.vector()).expect("4-vector");
    DensityMatrix(m)
}

/// `-sum lambda log2 lambda` in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let s: f64 = rho
        .spectrum()?
        .into_iter()
        .filter(|&l| l > ENTROPY_CUTOFF)
        .map(|l| -l * l.log2())
        .sum();
    Ok(s.max(0.0))
}

/// `S(A) + S(B) - S(AB)` in bits.
pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    rho.require_two_qubit()?;
    let sa = von_neumann_entropy(&rho.reduced(Qubit::A)?)?;
    let sb = von_neumann_entropy(&rho.reduced(Qubit::B)?)?;
    let sab = von_neumann_entropy(rho)?;
    Ok((sa + sb - sab).max(0.0))
}

/// `sigma_y (x) sigma_y`, which is real.
fn spin_flip() -> ComplexMatrix {
    let y = ComplexMatrix::pauli(2);
    ComplexMatrix::kron(&y, &y).expect("2x2 factors")
}

/// Wootters concurrence.
///
/// The square roots of the eigenvalues of `rho rho~` are the singular values
/// of `W^T (sigma_y (x) sigma_y) W` for any factor `rho = W W^dagger`; here
/// `W` has columns `sqrt(lambda_k) v_k`. Taking singular values through a
/// Hermitian dilation keeps vanishing ones at machine precision.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    rho.require_two_qubit()?;
    let eig = rho.matrix().hermitian_eig()?;
    let mut w = ComplexMatrix::zeros(4);
    for k in 0..4 {
        let lam = eig.values[k];
        if lam <= RANK_CUTOFF {
            continue;
        }
        let s = lam.sqrt();
        for i in 0..4 {
            w.set(i, k, eig.vectors.get(i, k) * s);
        }
    }
    let mut wt = ComplexMatrix::zeros(4);
    for i in 0..4 {
        for j in 0..4 {
            wt.set(i, j, w.get(j, i));
        }
    }
    let tau = wt.matmul(&spin_flip())?.matmul(&w)?;
    let sv = tau.singular_values()?;
    Ok((sv[0] - sv[1] - sv[2] - sv[3]).clamp(0.0, 1.0))
}

/// Real 3x3 correlation matrix `t_jk = Tr[rho (sigma_j (x) sigma_k)]`.
///
/// Row index belongs to qubit A and column index to qubit B, so `T` carries a
/// direction `a` on qubit A to the vector `(T a)_k = sum_j a_j t_jk` that is
/// compared against directions on qubit B.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix(pub [[f64; 3]; 3]);

impl CorrelationMatrix {
    pub fn diagonal(t: [f64; 3]) -> Self {
        let mut m = [[0.0; 3]; 3];
        for j in 0..3 {
            m[j][j] = t[j];
        }
        CorrelationMatrix(m)
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.0[j][k]
    }

    pub fn diag(&self) -> [f64; 3] {
        [self.0[0][0], self.0[1][1], self.0[2][2]]
    }

    /// `T a` as a qubit-B direction.
    pub fn apply(&self, a: &UnitVector) -> Vec3 {
        let a = a.as_array();
        let mut out = [0.0; 3];
        for (k, o) in out.iter_mut().enumerate() {
            *o = (0..3).map(|j| a[j] * self.0[j][k]).sum();
        }
        out
    }

    /// `T a . b`.
    pub fn contract(&self, a: &UnitVector, b: &UnitVector) -> f64 {
        crate::stokes::dot(&self.apply(a), b.as_array())
    }

    /// Largest off-diagonal magnitude.
    pub fn off_diagonal_max(&self) -> f64 {
        let mut m: f64 = 0.0;
        for j in 0..3 {
            for k in 0..3 {
                if j != k {
                    m = m.max(self.0[j][k].abs());
                }
            }
        }
        m
    }
}

pub fn correlation_matrix(rho: &DensityMatrix) -> Result<CorrelationMatrix> {
    rho.require_two_qubit()?;
    let mut t = [[0.0; 3]; 3];
    for (j, row) in t.iter_mut().enumerate() {
        for (k, tjk) in row.iter_mut().enumerate() {
            let op = ComplexMatrix::kron(&ComplexMatrix::pauli(j + 1), &ComplexMatrix::pauli(k + 1))?;
            *tjk = rho.matrix().trace_product(&op).re;
        }
    }
    Ok(CorrelationMatrix(t))
}

/// Overlaps `<B|rho|B>` with the four Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellWeights {
    pub phi_plus: f64,
    pub phi_minus: f64,
    pub psi_plus: f64,
    pub psi_minus: f64,
    /// Frobenius norm of the off-diagonal part of `rho` in the Bell basis.
    /// Zero for a Bell-diagonal state.
    pub coherence: f64,
}

impl BellWeights {
    pub fn get(&self, label: BellLabel) -> f64 {
        match label {
            BellLabel::PhiPlus => self.phi_plus,
            BellLabel::PhiMinus => self.phi_minus,
            BellLabel::PsiPlus => self.psi_plus,
            BellLabel::PsiMinus => self.psi_minus,
        }
    }

    pub fn sum(&self) -> f64 {
        self.phi_plus + self.phi_minus + self.psi_plus + self.psi_minus
    }

    pub fn max(&self) -> f64 {
        self.phi_plus
            .max(self.phi_minus)
            .max(self.psi_plus)
            .max(self.psi_minus)
    }

    /// True when the weights sum to one and no Bell-basis coherence remains.
    pub fn is_bell_diagonal(&self, tol: f64) -> bool {
        (self.sum() - 1.0).abs() <= tol && self.coherence <= tol
    }
}

pub fn bell_diagonal_weights(rho: &DensityMatrix) -> Result<BellWeights> {
    rho.require_two_qubit()?;
    let vecs: Vec<[C64; 4]> = BellLabel::ALL.iter().map(|b| b.vector()).collect();
    let m = rho.matrix();
    let elem = |a: &[C64; 4], b: &[C64; 4]| -> C64 {
        let mut acc = ZERO;
        for i in 0..4 {
            for j in 0..4 {
                acc += a[i].conj() * m.get(i, j) * b[j];
            }
        }
        acc
    };
    let mut w = [0.0; 4];
    let mut off = 0.0;
    for (i, a) in vecs.iter().enumerate() {
        for (j, b) in vecs.iter().enumerate() {
            let e = elem(a, b);
            if i == j {
                w[i] = e.re;
            } else {
                off += e.norm_sqr();
            }
        }
    }
    Ok(BellWeights {
        phi_plus: w[0],
        phi_minus: w[1],
        psi_plus: w[2],
        psi_minus: w[3],
        coherence: off.sqrt(),
    })
}

/// `Tr[rho target]` for a pure `target`.
pub fn fidelity_pure(rho: &DensityMatrix, target: &DensityMatrix) -> Result<f64> {
    if rho.dim() != target.dim() {
        return Err(Error::Dimension {
            expected: target.dim(),
            got: rho.dim(),
        });
    }
    let purity = target.purity();
    if (purity - 1.0).abs() > 1e-9 {
        return Err(Error::NotPure(purity));
    }
    Ok(rho.matrix().trace_product(target.matrix()).re.clamp(0.0, 1.0))
}

/// Uhlmann fidelity `(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Dimension {
            expected: sigma.dim(),
            got: rho.dim(),
        });
    }
    let s = rho.matrix().matrix_sqrt_psd()?;
    let inner = s.matmul(sigma.matrix())?.matmul(&s)?;
    let inner = (inner + inner.dagger()).scale_real(0.5);
    let root = inner.matrix_sqrt_psd()?;
    let f = root.trace().re;
    Ok((f * f).clamp(0.0, 1.0))
}

/// Frobenius distance between two states.
pub fn frobenius_distance(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    (*a.matrix() - *b.matrix()).frobenius_norm()
}

#[derive(Serialize, Deserialize)]
struct DensityMatrixJson {
    basis: Vec<String>,
    matrix: Vec<Vec<[f64; 2]>>,
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let basis: &[&str] = if self.dim() == 4 { &BASIS_4 } else { &BASIS_2 };
        let json = DensityMatrixJson {
            basis: basis.iter().map(|s| s.to_string()).collect(),
            matrix: self
                .0
                .rows()
                .into_iter()
                .map(|row| row.into_iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        };
        json.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let json = DensityMatrixJson::deserialize(deserializer)?;
        let dim = json.matrix.len();
        let expected: &[&str] = match dim {
            2 => &BASIS_2,
            4 => &BASIS_4,
            d => return Err(D::Error::custom(Error::UnsupportedDimension(d))),
        };
        if json.basis.iter().map(String::as_str).ne(expected.iter().copied()) {
            return Err(D::Error::custom(format!(
                "basis must be {expected:?}, got {:?}",
                json.basis
            )));
        }
        let mut flat = Vec::with_capacity(dim * dim);
        for row in &json.matrix {
            if row.len() != dim {
                return Err(D::Error::custom("matrix rows must be square"));
            }
            flat.extend(row.iter().map(|[re, im]| C64::new(*re, *im)));
        }
        let m = ComplexMatrix::new(dim, &flat).map_err(D::Error::custom)?;
        DensityMatrix::new(m).map_err(D::Error::custom)
    }
}
