//! Dense complex linear algebra for one- and two-qubit operators.
//!
//! Matrices are stored row-major. Two-qubit operators use the computational
//! basis order `|HH>, |HV>, |VH>, |VV>`, qubit A being the left tensor factor.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Hermiticity tolerance on `||m - m^dagger||_F` accepted by the eigensolver.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues in `[-PSD_TOL, 0)` are treated as rounding noise and clipped.
pub const PSD_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 64;

/// A 2x2 or 4x4 complex matrix.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: [C64; 16],
}

/// Which qubit of a two-qubit operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Qubit {
    A,
    B,
}

impl Qubit {
    pub fn from_index(index: usize) -> Result<Self> {
        match index {
            0 => Ok(Qubit::A),
            1 => Ok(Qubit::B),
            other => Err(Error::InvalidQubit(other)),
        }
    }
}

/// Eigenvalues sorted descending, with the matching orthonormal eigenvectors
/// stored as the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// `V diag(f(lambda)) V^dagger`.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.vectors.dim;
        let mut out = ComplexMatrix::zeros(n);
        for (k, &lam) in self.values.iter().enumerate() {
            let w = f(lam);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = self.vectors.get(i, k);
                for j in 0..n {
                    let vjk = self.vectors.get(j, k);
                    out.data[i * n + j] += vik * vjk.conj() * w;
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_values(|x| x)
    }

    /// Column `k` of the eigenvector matrix.
    pub fn vector(&self, k: usize) -> Vec<C64> {
        (0..self.vectors.dim).map(|i| self.vectors.get(i, k)).collect()
    }
}

fn check_dim(dim: usize) -> Result<()> {
    match dim {
        2 | 4 => Ok(()),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(dim: usize, entries: &[C64]) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::Dimension {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        if !entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut data = [ZERO; 16];
        data[..entries.len()].copy_from_slice(entries);
        Ok(ComplexMatrix { dim, data })
    }

    pub fn from_rows<const N: usize>(rows: [[C64; N]; N]) -> Result<Self> {
        let flat: Vec<C64> = rows.iter().flatten().copied().collect();
        Self::new(N, &flat)
    }

    /// # Panics
    /// If `dim` is not 2 or 4.
    pub fn zeros(dim: usize) -> Self {
        check_dim(dim).expect("dimension must be 2 or 4");
        ComplexMatrix {
            dim,
            data: [ZERO; 16],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        check_dim(diag.len())?;
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, C64::new(d, 0.0));
        }
        Ok(m)
    }

    /// The projector `|v><v|`.
    pub fn outer(v: &[C64]) -> Result<Self> {
        check_dim(v.len())?;
        let n = v.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = v[i] * v[j].conj();
            }
        }
        Ok(m)
    }

    /// Pauli matrix `sigma_k`, with `k = 0` the identity and 1, 2, 3 = X, Y, Z.
    ///
    /// # Panics
    /// If `k > 3`.
    pub fn pauli(k: usize) -> Self {
        let rows = match k {
            0 => [[ONE, ZERO], [ZERO, ONE]],
            1 => [[ZERO, ONE], [ONE, ZERO]],
            2 => [[ZERO, -I], [I, ZERO]],
            3 => [[ONE, ZERO], [ZERO, -ONE]],
            _ => panic!("Pauli index must be in 0..=3"),
        };
        Self::from_rows(rows).expect("static Pauli matrix")
    }

    /// `n . sigma` for a real three-vector `n`.
    pub fn pauli_dot(n: &[f64; 3]) -> Self {
        let mut m = Self::zeros(2);
        for (k, &c) in n.iter().enumerate() {
            m = m + Self::pauli(k + 1).scale_real(c);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: C64) {
        self.data[i * self.dim + j] = value;
    }

    pub fn entries(&self) -> &[C64] {
        &self.data[..self.dim * self.dim]
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = *self;
        out.data.iter_mut().for_each(|z| *z *= s);
        out
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn dagger(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        let mut out = *self;
        out.data.iter_mut().for_each(|z| *z = z.conj());
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `||m - m^dagger||_F`.
    pub fn hermiticity_deviation(&self) -> f64 {
        (*self - self.dagger()).frobenius_norm()
    }

    pub fn is_finite(&self) -> bool {
        self.entries()
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                got: rhs.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    /// `Tr[self * rhs]` without forming the product.
    pub fn trace_product(&self, rhs: &Self) -> C64 {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut acc = ZERO;
        for i in 0..n {
            for k in 0..n {
                acc += self.data[i * n + k] * rhs.data[k * n + i];
            }
        }
        acc
    }

    /// `a (x) b` with entry `[(2i+k),(2j+l)] = a[i,j] * b[k,l]`.
    pub fn kron(a: &Self, b: &Self) -> Result<Self> {
        for m in [a, b] {
            if m.dim != 2 {
                return Err(Error::Dimension {
                    expected: 2,
                    got: m.dim,
                });
            }
        }
        let mut out = Self::zeros(4);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        out.set(2 * i + k, 2 * j + l, a.get(i, j) * b.get(k, l));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Reduced operator on `keep`, tracing out the other qubit.
    pub fn partial_trace(&self, keep: Qubit) -> Result<Self> {
        if self.dim != 4 {
            return Err(Error::Dimension {
                expected: 4,
                got: self.dim,
            });
        }
        let mut out = Self::zeros(2);
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = ZERO;
                for t in 0..2 {
                    acc += match keep {
                        Qubit::A => self.get(2 * i + t, 2 * j + t),
                        Qubit::B => self.get(2 * t + i, 2 * t + j),
                    };
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
    pub fn hermitian_eig(&self) -> Result<EigenDecomposition> {
        if !self.is_finite() {
            return Err(Error::NonFinite);
        }
        let dev = self.hermiticity_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let n = self.dim;
        let sym = (*self + self.dagger()).scale_real(0.5);
        let mut a = sym.entries().to_vec();
        let (values, vecs) = jacobi_eigh(n, &mut a)?;
        Ok(EigenDecomposition {
            values,
            vectors: ComplexMatrix::new(n, &vecs)?,
        })
    }

    /// Hermitian positive semidefinite square root.
    pub fn matrix_sqrt_psd(&self) -> Result<Self> {
        let eig = self.hermitian_eig()?;
        if let Some(&min) = eig.values.last() {
            if min < -PSD_TOL {
                return Err(Error::NotPositive(min));
            }
        }
        Ok(eig.map_values(|x| x.max(0.0).sqrt()))
    }

    /// Singular values, descending, from the Hermitian dilation
    /// `[[0, M], [M^dagger, 0]]`. Absolute accuracy is at machine precision
    /// even for vanishing singular values.
    pub fn singular_values(&self) -> Result<Vec<f64>> {
        if !self.is_finite() {
            return Err(Error::NonFinite);
        }
        let n = self.dim;
        let m = 2 * n;
        let mut h = vec![ZERO; m * m];
        for i in 0..n {
            for j in 0..n {
                let z = self.get(i, j);
                h[i * m + (n + j)] = z;
                h[(n + j) * m + i] = z.conj();
            }
        }
        let (values, _) = jacobi_eigh(m, &mut h)?;
        Ok(values[..n].iter().map(|v| v.max(0.0)).collect())
    }
}

/// Cyclic complex Jacobi on an `n x n` Hermitian matrix stored row-major in
/// `a`. Returns eigenvalues sorted descending and the eigenvector matrix
/// (columns, row-major) in the same order. `a` is overwritten.
pub(crate) fn jacobi_eigh(n: usize, a: &mut [C64]) -> Result<(Vec<f64>, Vec<C64>)> {
    debug_assert_eq!(a.len(), n * n);
    let mut v = vec![ZERO; n * n];
    for i in 0..n {
        v[i * n + i] = ONE;
    }
    let total: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    let floor = (f64::EPSILON * f64::EPSILON) * total * 1e-4;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].norm_sqr())
            .sum();
        if off <= floor || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                // phase e^{-i phi} makes the (p, q) block real symmetric
                let ph = apq.conj() / r;
                let theta = (aqq - app) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // G = [[c, s], [-s ph, c ph]] acting on (p, q)
                let g00 = C64::new(c, 0.0);
                let g01 = C64::new(s, 0.0);
                let g10 = ph * (-s);
                let g11 = ph * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * g00 + akq * g10;
                    a[k * n + q] = akp * g01 + akq * g11;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = g00.conj() * apk + g10.conj() * aqk;
                    a[q * n + k] = g01.conj() * apk + g11.conj() * aqk;
                }
                a[p * n + q] = ZERO;
                a[q * n + p] = ZERO;
                a[p * n + p] = C64::new(a[p * n + p].re, 0.0);
                a[q * n + q] = C64::new(a[q * n + q].re, 0.0);
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * g00 + vkq * g10;
                    v[k * n + q] = vkp * g01 + vkq * g11;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].re.total_cmp(&a[i * n + i].re));
    let values = order.iter().map(|&i| a[i * n + i].re).collect();
    let mut vecs = vec![ZERO; n * n];
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vecs[row * n + col] = v[row * n + src];
        }
    }
    Ok((values, vecs))
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = self;
        for (o, r) in out.data.iter_mut().zip(rhs.data.iter()) {
            *o += r;
        }
        out
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = self;
        for (o, r) in out.data.iter_mut().zip(rhs.data.iter()) {
            *o -= r;
        }
        out
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> Self {
        self.matmul(&rhs).expect("dimension mismatch")
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        self.matmul(rhs).expect("dimension mismatch")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self.get(i, j);
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn phi_plus() -> ComplexMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::outer(&[c(h), ZERO, ZERO, c(h)]).unwrap()
    }

    #[test]
    fn kron_examples() {
        let i2 = ComplexMatrix::identity(2);
        let i4 = ComplexMatrix::kron(&i2, &i2).unwrap();
        assert_eq!(i4, ComplexMatrix::identity(4));

        let xx = ComplexMatrix::kron(&ComplexMatrix::pauli(1), &ComplexMatrix::pauli(1)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i + j == 3 { ONE } else { ZERO };
                assert_eq!(xx.get(i, j), expect);
            }
        }

        let zi = ComplexMatrix::kron(&ComplexMatrix::pauli(3), &i2).unwrap();
        assert_eq!(zi, ComplexMatrix::from_real_diagonal(&[1.0, 1.0, -1.0, -1.0]).unwrap());
    }

    #[test]
    fn kron_rejects_four_by_four() {
        let err = ComplexMatrix::kron(&ComplexMatrix::identity(4), &ComplexMatrix::identity(2));
        assert!(matches!(err, Err(Error::Dimension { .. })));
    }

    #[test]
    fn new_validates() {
        assert!(matches!(
            ComplexMatrix::new(3, &[ZERO; 9]),
            Err(Error::UnsupportedDimension(3))
        ));
        assert!(ComplexMatrix::new(2, &[ZERO; 3]).is_err());
        assert!(matches!(
            ComplexMatrix::new(2, &[C64::new(f64::NAN, 0.0), ZERO, ZERO, ZERO]),
            Err(Error::NonFinite)
        ));
    }

    #[test]
    fn eig_diagonal_and_projector() {
        let d = ComplexMatrix::from_real_diagonal(&[0.0, 0.165, 0.835, 0.0]).unwrap();
        let e = d.hermitian_eig().unwrap();
        let expect = [0.835, 0.165, 0.0, 0.0];
        for (a, b) in e.values.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
        let e = phi_plus().hermitian_eig().unwrap();
        for (a, b) in e.values.iter().zip([1.0, 0.0, 0.0, 0.0]) {
            assert!((a - b).abs() < 1e-14, "{a} vs {b}");
        }
        assert!((e.reconstruct() - phi_plus()).frobenius_norm() < 1e-12);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_rows([[ONE, ONE], [ZERO, ONE]]).unwrap();
        assert!(matches!(m.hermitian_eig(), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn partial_trace_examples() {
        let r = phi_plus().partial_trace(Qubit::A).unwrap();
        assert!((r - ComplexMatrix::identity(2).scale_real(0.5)).frobenius_norm() < 1e-15);

        let ra = ComplexMatrix::from_rows([[c(0.7), C64::new(0.1, 0.2)], [C64::new(0.1, -0.2), c(0.3)]]).unwrap();
        let rb = ComplexMatrix::from_real_diagonal(&[0.4, 0.6]).unwrap();
        let prod = ComplexMatrix::kron(&ra, &rb).unwrap();
        assert!((prod.partial_trace(Qubit::A).unwrap() - ra).frobenius_norm() < 1e-15);
        assert!((prod.partial_trace(Qubit::B).unwrap() - rb).frobenius_norm() < 1e-15);

        assert!(matches!(Qubit::from_index(2), Err(Error::InvalidQubit(2))));
        assert!(ComplexMatrix::identity(2).partial_trace(Qubit::A).is_err());
    }

    #[test]
    fn sqrt_examples() {
        let i4 = ComplexMatrix::identity(4);
        assert!((i4.matrix_sqrt_psd().unwrap() - i4).frobenius_norm() < 1e-14);
        let d = ComplexMatrix::from_real_diagonal(&[4.0, 1.0, 0.0, 0.0]).unwrap();
        let s = d.matrix_sqrt_psd().unwrap();
        let expect = ComplexMatrix::from_real_diagonal(&[2.0, 1.0, 0.0, 0.0]).unwrap();
        assert!((s - expect).frobenius_norm() < 1e-14);
        let p = phi_plus();
        assert!((p.matrix_sqrt_psd().unwrap() - p).frobenius_norm() < 1e-12);

        let neg = ComplexMatrix::from_real_diagonal(&[1.0, -0.1]).unwrap();
        assert!(matches!(neg.matrix_sqrt_psd(), Err(Error::NotPositive(_))));
        let tiny = ComplexMatrix::from_real_diagonal(&[1.0, -1e-12]).unwrap();
        assert!(tiny.matrix_sqrt_psd().is_ok());
    }

    #[test]
    fn singular_values_of_diagonal_and_unitary() {
        let d = ComplexMatrix::from_rows([[c(-3.0), ZERO], [ZERO, C64::new(0.0, 0.5)]]).unwrap();
        let s = d.singular_values().unwrap();
        assert!((s[0] - 3.0).abs() < 1e-14 && (s[1] - 0.5).abs() < 1e-14);
        let y = ComplexMatrix::pauli(2);
        for v in y.singular_values().unwrap() {
            assert!((v - 1.0).abs() < 1e-14);
        }
        let rank1 = ComplexMatrix::outer(&[c(0.6), ZERO, C64::new(0.0, 0.8), ZERO]).unwrap();
        let s = rank1.singular_values().unwrap();
        assert!((s[0] - 1.0).abs() < 1e-14);
        assert!(s[1..].iter().all(|v| v.abs() < 1e-15));
    }
}
