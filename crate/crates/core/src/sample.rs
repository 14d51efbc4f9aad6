//! Random states, unitaries and directions for Monte Carlo checks.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::qmat::{ComplexMatrix, C64};
use crate::qstate::DensityMatrix;
use crate::stokes::UnitVector;

fn gaussian_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Uniform direction on the sphere.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R) -> UnitVector {
    loop {
        let v = [
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
        ];
        if let Ok(u) = UnitVector::normalize(v) {
            return u;
        }
    }
}

/// Induced-measure random state `G G^dagger / Tr` with `G` a `dim x rank`
/// Ginibre matrix.
pub fn density_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> Result<DensityMatrix> {
    let rank = rank.clamp(1, dim);
    let mut m = ComplexMatrix::zeros(dim);
    let g: Vec<C64> = (0..dim * rank).map(|_| gaussian_c64(rng)).collect();
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..rank {
                acc += g[i * rank + k] * g[j * rank + k].conj();
            }
            m.set(i, j, acc);
        }
    }
    let m = (m + m.dagger()).scale_real(0.5);
    DensityMatrix::from_unnormalized(m)
}

/// Haar-random SU(2) element from a uniform unit quaternion.
pub fn unitary_2<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (a0, a) = (q[0] / n, [q[1] / n, q[2] / n, q[3] / n]);
    ComplexMatrix::identity(2).scale_real(a0) + ComplexMatrix::pauli_dot(&a).scale(C64::new(0.0, -1.0))
}
