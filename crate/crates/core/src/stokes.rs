//! Real three-vectors in Stokes space.
//!
//! Filters, birefringence axes and analyzer directions are all unit vectors
//! here. The convention is `|H>` on `+z`, `|D>` on `+x`, `|R>` on `+y`, so the
//! Pauli triple `(sigma_1, sigma_2, sigma_3) = (X, Y, Z)` lines up with the
//! Stokes axes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `|v| = 1`.
pub const UNIT_TOL: f64 = 1e-12;

pub type Vec3 = [f64; 3];

pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm(v: &Vec3) -> f64 {
    dot(v, v).sqrt()
}

/// A unit-norm Stokes vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct UnitVector(Vec3);

impl UnitVector {
    pub const X: UnitVector = UnitVector([1.0, 0.0, 0.0]);
    pub const Y: UnitVector = UnitVector([0.0, 1.0, 0.0]);
    pub const Z: UnitVector = UnitVector([0.0, 0.0, 1.0]);

    /// Accepts `v` only if it is already unit length within [`UNIT_TOL`].
    pub fn new(v: Vec3) -> Result<Self> {
        if !v.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let n = norm(&v);
        if (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnitVector(n));
        }
        Ok(UnitVector(v))
    }

    /// Rescales `v` to unit length. Fails on a zero or non-finite vector.
    pub fn normalize(v: Vec3) -> Result<Self> {
        let n = norm(&v);
        if !n.is_finite() {
            return Err(Error::NonFinite);
        }
        if n == 0.0 {
            return Err(Error::NotUnitVector(0.0));
        }
        Ok(UnitVector([v[0] / n, v[1] / n, v[2] / n]))
    }

    /// Unit vector from polar angle `theta` (from `+z`) and azimuth `phi`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        UnitVector([st * cp, st * sp, ct])
    }

    pub fn as_array(&self) -> &Vec3 {
        &self.0
    }

    pub fn x(&self) -> f64 {
        self.0[0]
    }
    pub fn y(&self) -> f64 {
        self.0[1]
    }
    pub fn z(&self) -> f64 {
        self.0[2]
    }

    pub fn dot(&self, other: &UnitVector) -> f64 {
        dot(&self.0, &other.0)
    }
}

impl std::ops::Neg for UnitVector {
    type Output = UnitVector;
    fn neg(self) -> UnitVector {
        UnitVector([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl TryFrom<Vec3> for UnitVector {
    type Error = Error;
    fn try_from(v: Vec3) -> Result<Self> {
        UnitVector::new(v)
    }
}

impl From<UnitVector> for Vec3 {
    fn from(u: UnitVector) -> Vec3 {
        u.0
    }
}
