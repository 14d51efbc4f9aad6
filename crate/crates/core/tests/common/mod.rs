//! Independent oracles shared by the integration tests. Nothing here goes
//! through the eigensolver or the closed forms under test.
#![allow(dead_code)]

use qfilter::qmat::{ComplexMatrix, C64};
use qfilter::{unitary_operator, BellLabel, DensityMatrix, UnitVector};
use rand::Rng;

/// `-x log2 x - (1-x) log2 (1-x)`.
pub fn binary_entropy(x: f64) -> f64 {
    let h = |v: f64| if v <= 0.0 { 0.0 } else { -v * v.log2() };
    h(x) + h(1.0 - x)
}

/// Concurrence of an X-shaped state (non-zero only on the diagonal and
/// anti-diagonal): `2 max(0, |r14| - sqrt(r22 r33), |r23| - sqrt(r11 r44))`.
pub fn x_state_concurrence(m: &ComplexMatrix) -> f64 {
    let d = |i: usize| m.get(i, i).re;
    let a = m.get(0, 3).norm() - (d(1) * d(2)).sqrt();
    let b = m.get(1, 2).norm() - (d(0) * d(3)).sqrt();
    2.0 * a.max(b).max(0.0)
}

/// Largest entry off the diagonal and anti-diagonal.
pub fn x_shape_violation(m: &ComplexMatrix) -> f64 {
    let mut v: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if i != j && i + j != 3 {
                v = v.max(m.get(i, j).norm());
            }
        }
    }
    v
}

/// Characteristic polynomial coefficients `[1, c1, .., cn]` of
/// `det(lambda I - M)` by Faddeev-LeVerrier.
pub fn char_poly(m: &ComplexMatrix) -> Vec<C64> {
    let n = m.dim();
    let mut coeffs = vec![C64::new(1.0, 0.0)];
    let mut mk = ComplexMatrix::zeros(n);
    for k in 1..=n {
        let shifted = mk + ComplexMatrix::identity(n).scale(coeffs[k - 1]);
        mk = m * &shifted;
        let ck = -mk.trace() / k as f64;
        coeffs.push(ck);
    }
    coeffs
}

/// Expands `prod (lambda - r_i)` into `[1, c1, .., cn]`.
pub fn poly_from_roots(roots: &[f64]) -> Vec<f64> {
    let mut c = vec![1.0];
    for &r in roots {
        let mut next = vec![0.0; c.len() + 1];
        for (i, &ci) in c.iter().enumerate() {
            next[i] += ci;
            next[i + 1] -= r * ci;
        }
        c = next;
    }
    c
}

/// Gaussian-spectrum average of the birefringent rotation about `axis`,
/// `int |f(w)|^2 U(w) rho U(w)^dagger dw` with rotation angle `w * dgd`,
/// by the trapezoid rule on `nodes` points over +-8 sigma.
pub fn spectral_average(rho: &DensityMatrix, axis: &UnitVector, dgd: f64, width: f64, nodes: usize) -> ComplexMatrix {
    let half = 8.0 * width;
    let step = 2.0 * half / (nodes - 1) as f64;
    let mut acc = ComplexMatrix::zeros(2);
    let mut wsum = 0.0;
    for i in 0..nodes {
        let w = -half + step * i as f64;
        let mut weight = (-0.5 * (w / width).powi(2)).exp();
        if i == 0 || i == nodes - 1 {
            weight *= 0.5;
        }
        let u = unitary_operator(axis, w * dgd);
        let rotated = u * (rho.matrix() * &u.dagger());
        acc = acc + rotated.scale_real(weight);
        wsum += weight;
    }
    acc.scale_real(1.0 / wsum)
}

/// Rank-2 mixture of two distinct Bell states with weight `w` on the first.
pub fn rank2_bell_diagonal(a: BellLabel, b: BellLabel, w: f64) -> DensityMatrix {
    let m = qfilter::bell_state(a).matrix().scale_real(w) + qfilter::bell_state(b).matrix().scale_real(1.0 - w);
    DensityMatrix::new(m).unwrap()
}

pub fn random_rank2_bell_diagonal<R: Rng>(rng: &mut R) -> DensityMatrix {
    let i = rng.gen_range(0..4);
    let mut j = rng.gen_range(0..3);
    if j >= i {
        j += 1;
    }
    let w = rng.gen_range(0.0..1.0);
    rank2_bell_diagonal(BellLabel::ALL[i], BellLabel::ALL[j], w)
}

/// Bell-diagonal state with Dirichlet(1,1,1,1) weights.
pub fn random_bell_diagonal<R: Rng>(rng: &mut R) -> (DensityMatrix, [f64; 4]) {
    let e: Vec<f64> = (0..4).map(|_| -rng.gen_range(f64::EPSILON..1.0f64).ln()).collect();
    let s: f64 = e.iter().sum();
    let w = [e[0] / s, e[1] / s, e[2] / s, e[3] / s];
    let mut m = ComplexMatrix::zeros(4);
    for (k, b) in BellLabel::ALL.iter().enumerate() {
        m = m + qfilter::bell_state(*b).matrix().scale_real(w[k]);
    }
    (DensityMatrix::new(m).unwrap(), w)
}
