//! Integral piecewise-linear functions on a fan.
//!
//! On a simplicial fan a piecewise-linear function is determined by its
//! integer values on the primitive ray generators, and the Courant functions
//! (value one at a single ray) freely generate the group. Per-cone linear
//! representatives are recomputed on demand from that canonical encoding.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::fan::{Cone, Fan, RationalPoint};
use crate::lattice::{self, IntMatrix, IntVector};
use crate::{Error, Result};

/// A piecewise-linear function, encoded by its values on ray generators.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PLFunction {
    ray_values: Vec<BigInt>,
}

impl PLFunction {
    pub fn new(ray_values: Vec<BigInt>) -> Self {
        PLFunction { ray_values }
    }

    pub fn from_i64(values: &[i64]) -> Self {
        PLFunction {
            ray_values: values.iter().map(|&v| BigInt::from(v)).collect(),
        }
    }

    pub fn zero(fan: &Fan) -> Self {
        PLFunction {
            ray_values: vec![BigInt::zero(); fan.num_rays()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.ray_values.iter().all(Zero::is_zero)
    }

    pub fn value(&self, ray: usize) -> &BigInt {
        &self.ray_values[ray]
    }

    pub fn values(&self) -> &[BigInt] {
        &self.ray_values
    }

    pub fn num_rays(&self) -> usize {
        self.ray_values.len()
    }

    pub fn add(&self, other: &PLFunction) -> PLFunction {
        assert_eq!(self.ray_values.len(), other.ray_values.len());
        PLFunction {
            ray_values: self
                .ray_values
                .iter()
                .zip(&other.ray_values)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &PLFunction) -> PLFunction {
        assert_eq!(self.ray_values.len(), other.ray_values.len());
        PLFunction {
            ray_values: self
                .ray_values
                .iter()
                .zip(&other.ray_values)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> PLFunction {
        PLFunction {
            ray_values: self.ray_values.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> PLFunction {
        PLFunction {
            ray_values: self.ray_values.iter().map(|a| a * c).collect(),
        }
    }

    /// Values on the rays of a cone, in the cone's ray order. This is the
    /// canonical coordinate of the restriction to the cone.
    pub fn values_on_cone(&self, sigma: &Cone) -> Vec<BigInt> {
        sigma
            .rays()
            .iter()
            .map(|&r| self.ray_values[r].clone())
            .collect()
    }
}

/// An element m of the dual lattice M.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearFunctional(pub IntVector);

impl LinearFunctional {
    pub fn zero(rank: usize) -> Self {
        LinearFunctional(IntVector::zeros(rank))
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        LinearFunctional(IntVector::from_i64(coeffs))
    }

    pub fn pair(&self, v: &IntVector) -> BigInt {
        self.0.dot(v)
    }
}

/// The Courant function of a ray: one at its generator, zero at all others.
pub fn courant(fan: &Fan, rho: usize) -> Result<PLFunction> {
    if rho >= fan.num_rays() {
        return Err(Error::RayOutOfRange(rho));
    }
    let mut values = vec![BigInt::zero(); fan.num_rays()];
    values[rho] = BigInt::from(1);
    Ok(PLFunction { ray_values: values })
}

/// The piecewise-linear function of a global linear functional.
pub fn linear_to_pl(fan: &Fan, m: &LinearFunctional) -> PLFunction {
    PLFunction {
        ray_values: fan
            .rays()
            .iter()
            .map(|r| m.pair(&r.generator))
            .collect(),
    }
}

/// The linear representative m_sigma of f on a cone, extended by the fixed
/// rule: complete the cone's rays to a lattice basis via the Smith transform
/// and assign zero on the complement. Deterministic, so the descent to star
/// fans is reproducible.
pub fn restrict_linear(fan: &Fan, f: &PLFunction, sigma: &Cone) -> Result<LinearFunctional> {
    if !fan.contains(sigma) {
        return Err(Error::ConeNotInFan(sigma.to_string()));
    }
    let rank = fan.ambient_rank();
    if sigma.is_zero() {
        return Ok(LinearFunctional::zero(rank));
    }
    let g = fan.cone_matrix(sigma);
    let snf = lattice::smith_normal_form(&g);
    // With U*G*V = [I; 0], the functional m = U^T [V^T v; 0] satisfies
    // G^T m = v and vanishes on the completed part of the basis.
    let k = sigma.dim();
    let v = IntVector(f.values_on_cone(sigma));
    let vt_v = snf.v.transpose().mul_vec(&v);
    let mut w = IntVector::zeros(rank);
    for i in 0..k {
        w.0[i] = vt_v.0[i].clone();
    }
    let m = snf.u.transpose().mul_vec(&w);
    for (i, &r) in sigma.rays().iter().enumerate() {
        if m.dot(fan.ray_generator(r)) != v.0[i] {
            return Err(Error::Internal(format!(
                "restriction to cone {} is not integral; cone is not unimodular",
                sigma
            )));
        }
    }
    Ok(LinearFunctional(m))
}

/// The global linear functional agreeing with f on every ray, if one exists.
pub fn is_global_linear(fan: &Fan, f: &PLFunction) -> Option<LinearFunctional> {
    let n = fan.num_rays();
    let mut a = IntMatrix::zeros(n, fan.ambient_rank());
    for (i, ray) in fan.rays().iter().enumerate() {
        for j in 0..fan.ambient_rank() {
            *a.at_mut(i, j) = ray.generator.0[j].clone();
        }
    }
    let b = IntVector(f.ray_values.clone());
    lattice::solve_integer_system(&a, &b).map(LinearFunctional)
}

/// Exact value of f at a rational point of the support.
pub fn evaluate(fan: &Fan, f: &PLFunction, point: &RationalPoint) -> Result<BigRational> {
    let (cone, coords) = fan
        .cone_coordinates(point)
        .ok_or(Error::OutsideSupport)?;
    let mut value = BigRational::zero();
    for (lambda, &r) in coords.iter().zip(cone.rays()) {
        value += lambda * BigRational::from(f.ray_values[r].clone());
    }
    Ok(value)
}

/// The truncation f_sigma: agrees with f on the rays of sigma, zero on all
/// other rays.
pub fn truncate_to_cone(f: &PLFunction, sigma: &Cone) -> PLFunction {
    PLFunction {
        ray_values: (0..f.ray_values.len())
            .map(|r| {
                if sigma.contains_ray(r) {
                    f.ray_values[r].clone()
                } else {
                    BigInt::zero()
                }
            })
            .collect(),
    }
}
