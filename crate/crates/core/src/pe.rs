//! The ring of integral piecewise-exponential functions on a fan, with an
//! exact equality test.
//!
//! Equality is decided per maximal cone: exponentials of distinct linear
//! functionals are linearly independent, so grouping the terms of a formal
//! sum by the restriction of their exponents to each maximal cone yields a
//! canonical form that is empty exactly when the function is zero. No
//! floating point is involved anywhere.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

use crate::fan::{Cone, Fan, RationalPoint, StarContext};
use crate::polyz::IntPolynomial;
use crate::pwl::{self, PLFunction};
use crate::{Error, Result};

/// A formal integer combination of exponentials of piecewise-linear
/// functions. Duplicate exponents are allowed; canonicalization merges them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PEExpression {
    terms: Vec<(BigInt, PLFunction)>,
}

impl PEExpression {
    pub fn zero() -> Self {
        PEExpression { terms: Vec::new() }
    }

    /// The constant function one, i.e. e^0.
    pub fn one(fan: &Fan) -> Self {
        PEExpression {
            terms: vec![(BigInt::one(), PLFunction::zero(fan))],
        }
    }

    pub fn constant(fan: &Fan, c: BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        PEExpression {
            terms: vec![(c, PLFunction::zero(fan))],
        }
    }

    /// The single exponential e^f.
    pub fn exponential(f: PLFunction) -> Self {
        PEExpression {
            terms: vec![(BigInt::one(), f)],
        }
    }

    pub fn terms(&self) -> &[(BigInt, PLFunction)] {
        &self.terms
    }

    pub fn add(&self, other: &PEExpression) -> PEExpression {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        PEExpression { terms }.merged()
    }

    pub fn sub(&self, other: &PEExpression) -> PEExpression {
        self.add(&other.negate())
    }

    pub fn negate(&self) -> PEExpression {
        PEExpression {
            terms: self.terms.iter().map(|(c, f)| (-c, f.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> PEExpression {
        if c.is_zero() {
            return Self::zero();
        }
        PEExpression {
            terms: self.terms.iter().map(|(a, f)| (a * c, f.clone())).collect(),
        }
    }

    /// Distributed product; exponents add as piecewise-linear functions.
    pub fn multiply(&self, other: &PEExpression) -> PEExpression {
        let mut merged: BTreeMap<PLFunction, BigInt> = BTreeMap::new();
        for (a, f) in &self.terms {
            for (b, g) in &other.terms {
                let coeff = a * b;
                let expo = f.add(g);
                *merged.entry(expo).or_insert_with(BigInt::zero) += coeff;
            }
        }
        PEExpression::from_map(merged)
    }

    pub fn pow(&self, k: usize, fan: &Fan) -> PEExpression {
        let mut out = PEExpression::one(fan);
        for _ in 0..k {
            out = out.multiply(self);
        }
        out
    }

    /// Merge equal exponents and drop zero coefficients. This is formal
    /// simplification only; equality of functions is `canonicalize`'s job.
    pub fn merged(&self) -> PEExpression {
        let mut merged: BTreeMap<PLFunction, BigInt> = BTreeMap::new();
        for (c, f) in &self.terms {
            *merged.entry(f.clone()).or_insert_with(BigInt::zero) += c;
        }
        PEExpression::from_map(merged)
    }

    fn from_map(map: BTreeMap<PLFunction, BigInt>) -> PEExpression {
        PEExpression {
            terms: map
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(f, c)| (c, f))
                .collect(),
        }
    }
}

/// Canonical form of a piecewise-exponential function: for each maximal
/// cone, the terms grouped by the restriction of their exponents to the
/// cone. The group key is the exponent's value vector on the cone's rays,
/// which encodes the restricted functional m_sigma faithfully.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    pub cones: Vec<(Cone, BTreeMap<Vec<BigInt>, BigInt>)>,
}

impl CanonicalForm {
    /// Empty on every maximal cone, i.e. the zero function.
    pub fn is_zero(&self) -> bool {
        self.cones.iter().all(|(_, groups)| groups.is_empty())
    }
}

/// Group the terms of E per maximal cone by restricted exponent and sum the
/// coefficients; zero groups are dropped. Two expressions are equal as
/// functions on the support iff their canonical forms are identical.
pub fn canonicalize(fan: &Fan, e: &PEExpression) -> CanonicalForm {
    let mut cones = Vec::new();
    for sigma in fan.maximal_cones() {
        let mut groups: BTreeMap<Vec<BigInt>, BigInt> = BTreeMap::new();
        for (c, f) in &e.terms {
            let key = f.values_on_cone(&sigma);
            *groups.entry(key).or_insert_with(BigInt::zero) += c;
        }
        groups.retain(|_, c| !c.is_zero());
        cones.push((sigma, groups));
    }
    CanonicalForm { cones }
}

/// Equality in PE(Sigma), decided canonically.
pub fn pe_equal(fan: &Fan, a: &PEExpression, b: &PEExpression) -> bool {
    canonicalize(fan, &a.sub(b)).is_zero()
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut out = BigInt::one();
    for i in 0..k {
        out = out * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    out
}

/// The lift of the presentation map on the polynomial side: substitutes
/// x_rho -> 1 - e^{delta_rho} and expands.
pub fn phi_tilde(p: &IntPolynomial, fan: &Fan) -> PEExpression {
    assert_eq!(
        p.num_vars(),
        fan.num_rays(),
        "polynomial variables must be indexed by the rays"
    );
    let mut acc: BTreeMap<PLFunction, BigInt> = BTreeMap::new();
    for (mono, coeff) in p.terms() {
        // Expand prod_rho (1 - e^{delta_rho})^{a_rho} one ray at a time.
        let mut partial: Vec<(BigInt, Vec<BigInt>)> =
            vec![(coeff.clone(), vec![BigInt::zero(); fan.num_rays()])];
        for (rho, &a) in mono.exponents().iter().enumerate() {
            if a == 0 {
                continue;
            }
            let factor: Vec<(BigInt, u32)> = (0..=a)
                .map(|i| {
                    let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                    (sign * binomial(a, i), i)
                })
                .collect();
            let mut next = Vec::with_capacity(partial.len() * factor.len());
            for (c, values) in &partial {
                for (fc, i) in &factor {
                    let mut v = values.clone();
                    v[rho] += BigInt::from(*i);
                    next.push((c * fc, v));
                }
            }
            partial = next;
        }
        for (c, values) in partial {
            *acc.entry(PLFunction::new(values)).or_insert_with(BigInt::zero) += c;
        }
    }
    PEExpression::from_map(acc)
}

/// Pull an expression back along the inclusion of a subfan: exponents keep
/// the values of the surviving rays.
pub fn restrict_to_subfan(
    parent: &Fan,
    e: &PEExpression,
    sub: &Fan,
) -> Result<PEExpression> {
    let map = parent
        .subfan_ray_map(sub)
        .ok_or_else(|| Error::NotASubfan("ray or cone does not embed".into()))?;
    let terms = e
        .terms
        .iter()
        .map(|(c, f)| {
            (
                c.clone(),
                PLFunction::new(map.iter().map(|&p| f.value(p).clone()).collect()),
            )
        })
        .collect();
    Ok(PEExpression { terms }.merged())
}

/// Restrict a piecewise-linear function on the parent fan to the
/// neighborhood subfan of a star context.
pub fn restrict_pl_to_neighborhood(ctx: &StarContext, f: &PLFunction) -> PLFunction {
    PLFunction::new(
        ctx.neighborhood_to_parent
            .iter()
            .map(|&p| f.value(p).clone())
            .collect(),
    )
}

/// Pull back along the quotient map to the star fan: each exponent f is
/// replaced by f composed with the projection, computed by locating the
/// image of each ray generator in the star fan and evaluating there.
pub fn pullback_star(ctx: &StarContext, e: &PEExpression) -> Result<PEExpression> {
    let mut terms = Vec::with_capacity(e.terms.len());
    for (c, f) in &e.terms {
        let mut values = Vec::with_capacity(ctx.neighborhood.num_rays());
        for i in 0..ctx.neighborhood.num_rays() {
            let image = ctx
                .projection
                .mul_vec(&ctx.neighborhood.ray_generator(i).clone());
            if image.is_zero() {
                values.push(BigInt::zero());
                continue;
            }
            let point = RationalPoint::lattice_point(image);
            let value = pwl::evaluate(&ctx.star, f, &point)
                .map_err(|_| Error::Internal("ray image escapes the star support".into()))?;
            if !value.is_integer() {
                return Err(Error::Internal(
                    "pullback of an integral function is not integral".into(),
                ));
            }
            values.push(value.to_integer());
        }
        terms.push((c.clone(), PLFunction::new(values)));
    }
    Ok(PEExpression { terms }.merged())
}

/// Descend an expression on the neighborhood to the star fan: subtract from
/// each exponent its fixed linear representative on sigma, so it vanishes on
/// the span of sigma and factors through the quotient.
pub fn descend_star(ctx: &StarContext, e: &PEExpression) -> Result<PEExpression> {
    let mut terms = Vec::with_capacity(e.terms.len());
    for (c, f) in &e.terms {
        let ell = pwl::restrict_linear(&ctx.neighborhood, f, &ctx.sigma)?;
        let mut star_values = vec![None::<BigInt>; ctx.star.num_rays()];
        for i in 0..ctx.neighborhood.num_rays() {
            let Some(j) = ctx.neighborhood_to_star[i] else {
                continue;
            };
            let value = f.value(i) - ell.pair(ctx.neighborhood.ray_generator(i));
            match &star_values[j] {
                Some(prev) if *prev != value => {
                    return Err(Error::Internal(
                        "descended exponent is not well-defined on the star".into(),
                    ))
                }
                _ => star_values[j] = Some(value),
            }
        }
        let values: Vec<BigInt> = star_values
            .into_iter()
            .map(|v| v.expect("every star ray has a preimage"))
            .collect();
        terms.push((c.clone(), PLFunction::new(values)));
    }
    Ok(PEExpression { terms }.merged())
}

/// The inclusion-exclusion weights mu on the cones of the fan, computed by
/// the explicit top-down recursion mu(sigma) = 1 - sum of mu over proper
/// supersets. They satisfy sum_{sigma' >= tau} mu(sigma') = 1 for every
/// cone tau, which is exactly what makes e^f = sum mu(sigma) e^{f_sigma}
/// hold; the identity itself is machine-checked, not trusted.
pub fn mobius_decomposition(fan: &Fan) -> Vec<(Cone, BigInt)> {
    let mut cones: Vec<Cone> = fan.cones().cloned().collect();
    cones.sort_by(|a, b| b.dim().cmp(&a.dim()).then_with(|| a.cmp(b)));
    let mut mu: BTreeMap<Cone, BigInt> = BTreeMap::new();
    for sigma in &cones {
        let mut value = BigInt::one();
        for (tau, m) in &mu {
            if tau != sigma && tau.contains_cone(sigma) {
                value -= m;
            }
        }
        mu.insert(sigma.clone(), value);
    }
    mu.into_iter().collect()
}

/// e^f - sum_sigma mu(sigma) e^{f_sigma}; canonically zero when the
/// inclusion-exclusion identity holds.
pub fn inclusion_exclusion_defect(fan: &Fan, f: &PLFunction) -> PEExpression {
    let mut e = PEExpression::exponential(f.clone());
    for (sigma, m) in mobius_decomposition(fan) {
        let truncated = pwl::truncate_to_cone(f, &sigma);
        e = e.sub(&PEExpression::exponential(truncated).scale(&m));
    }
    e
}

/// Round trip f -> descend -> pull back on the neighborhood of sigma: the
/// result must differ from e^f exactly by the explicit unit e^{ell_{f,sigma}}.
pub fn verify_star_roundtrip(fan: &Fan, sigma: &Cone, sample_fs: &[PLFunction]) -> Result<bool> {
    let ctx = fan.star_context(sigma)?;
    for f in sample_fs {
        let f_sub = restrict_pl_to_neighborhood(&ctx, f);
        let e = PEExpression::exponential(f_sub.clone());
        let descended = descend_star(&ctx, &e)?;
        let roundtrip = pullback_star(&ctx, &descended)?;
        let ell = pwl::restrict_linear(&ctx.neighborhood, &f_sub, &ctx.sigma)?;
        let ell_pl = pwl::linear_to_pl(&ctx.neighborhood, &ell);
        let twisted = e.multiply(&PEExpression::exponential(ell_pl.neg()));
        if !canonicalize(&ctx.neighborhood, &roundtrip.sub(&twisted)).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact "evaluation" of E at a rational point: the formal sum of
/// characters, grouped by the exponent's value at the point. Two functions
/// agreeing on the support produce identical groupings at every point of it.
pub fn character_sum_at(
    fan: &Fan,
    e: &PEExpression,
    point: &RationalPoint,
) -> Result<BTreeMap<num_rational::BigRational, BigInt>> {
    let mut out = BTreeMap::new();
    for (c, f) in &e.terms {
        let v = pwl::evaluate(fan, f, point)?;
        let entry = out.entry(v).or_insert_with(BigInt::zero);
        *entry += c;
    }
    out.retain(|_, c: &mut BigInt| !c.is_zero());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan;
    use crate::polyz::{IntPolynomial, Monomial};
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};

    fn monomial_poly(nvars: usize, exps: &[(usize, u32)]) -> IntPolynomial {
        let mut e = vec![0u32; nvars];
        for &(i, a) in exps {
            e[i] = a;
        }
        IntPolynomial::from_terms(nvars, vec![(Monomial::new(e), BigInt::one())])
    }

    #[test]
    fn exp_zero_minus_one_is_zero() {
        let p1 = fan::projective_space(1);
        let e = PEExpression::one(&p1).sub(&PEExpression::constant(&p1, BigInt::one()));
        assert!(canonicalize(&p1, &e).is_zero());
    }

    #[test]
    fn courant_vs_linear_on_p1() {
        // delta_+ and the global linear (1,-1) agree on cone(+1) and differ
        // on cone(-1), so the form is supported on cone(-1) only.
        let p1 = fan::projective_space(1);
        let delta = pwl::courant(&p1, 0).unwrap();
        let linear = PLFunction::from_i64(&[1, -1]);
        let e = PEExpression::exponential(delta).sub(&PEExpression::exponential(linear));
        let form = canonicalize(&p1, &e);
        for (cone, groups) in &form.cones {
            if cone.contains_ray(0) {
                assert!(groups.is_empty(), "must cancel on cone(+1)");
            } else {
                assert_eq!(groups.len(), 2, "two distinct characters on cone(-1)");
            }
        }
    }

    #[test]
    fn phi_tilde_of_non_face_is_zero() {
        let p1 = fan::projective_space(1);
        let p = monomial_poly(2, &[(0, 1), (1, 1)]);
        assert!(canonicalize(&p1, &phi_tilde(&p, &p1)).is_zero());
    }

    #[test]
    fn phi_tilde_basics() {
        let p1 = fan::projective_space(1);
        let x0 = monomial_poly(2, &[(0, 1)]);
        let image = phi_tilde(&x0, &p1);
        // 1 - e^{delta_0}
        assert_eq!(image.terms().len(), 2);
        let one = IntPolynomial::constant(2, BigInt::one());
        assert!(pe_equal(&p1, &phi_tilde(&one, &p1), &PEExpression::one(&p1)));
    }

    #[test]
    fn product_of_exponentials_adds_exponents() {
        let p1 = fan::projective_space(1);
        let f = PLFunction::from_i64(&[1, 2]);
        let g = PLFunction::from_i64(&[3, -1]);
        let prod = PEExpression::exponential(f.clone()).multiply(&PEExpression::exponential(g.clone()));
        assert_eq!(prod.terms().len(), 1);
        assert_eq!(prod.terms()[0].1, f.add(&g));
    }

    #[test]
    fn difference_of_squares() {
        let p1 = fan::projective_space(1);
        let f = PLFunction::from_i64(&[1, -2]);
        let one = PEExpression::one(&p1);
        let ef = PEExpression::exponential(f.clone());
        let lhs = one.sub(&ef).multiply(&one.add(&ef));
        let rhs = one.sub(&PEExpression::exponential(f.scale(&BigInt::from(2))));
        assert!(pe_equal(&p1, &lhs, &rhs));
    }

    #[test]
    fn multiplication_matches_pointwise_products() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let p2 = fan::projective_space(2);
        for _ in 0..15 {
            let rand_expr = |rng: &mut rand_chacha::ChaCha8Rng| {
                let mut e = PEExpression::zero();
                for _ in 0..rng.random_range(1..=3) {
                    let f = PLFunction::from_i64(&[
                        rng.random_range(-2..=2),
                        rng.random_range(-2..=2),
                        rng.random_range(-2..=2),
                    ]);
                    e = e.add(&PEExpression::exponential(f).scale(&BigInt::from(rng.random_range(-3..=3i64))));
                }
                e
            };
            let a = rand_expr(&mut rng);
            let b = rand_expr(&mut rng);
            let prod = a.multiply(&b);
            for _ in 0..6 {
                let sigma = fan::projective_space(2)
                    .maximal_cones()
                    .swap_remove(rng.random_range(0..3));
                let mut nums = crate::lattice::IntVector::zeros(2);
                for &r in sigma.rays() {
                    nums = nums.add(&p2.ray_generator(r).scale(&BigInt::from(rng.random_range(0..=4i64))));
                }
                let point = RationalPoint::new(nums, BigInt::from(rng.random_range(1..=3i64)));
                let sa = character_sum_at(&p2, &a, &point).unwrap();
                let sb = character_sum_at(&p2, &b, &point).unwrap();
                let mut conv: BTreeMap<BigRational, BigInt> = BTreeMap::new();
                for (va, ca) in &sa {
                    for (vb, cb) in &sb {
                        *conv.entry(va + vb).or_insert_with(BigInt::zero) += ca * cb;
                    }
                }
                conv.retain(|_, c| !c.is_zero());
                let sp = character_sum_at(&p2, &prod, &point).unwrap();
                assert_eq!(conv, sp);
            }
        }
    }

    #[test]
    fn canonical_zero_iff_vanishes_at_sampled_points() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(33);
        let p2 = fan::projective_space(2);
        for round in 0..20 {
            let mut e = PEExpression::zero();
            for _ in 0..rng.random_range(1..=4) {
                let f = PLFunction::from_i64(&[
                    rng.random_range(-2..=2),
                    rng.random_range(-2..=2),
                    rng.random_range(-2..=2),
                ]);
                e = e.add(&PEExpression::exponential(f).scale(&BigInt::from(rng.random_range(-2..=2i64))));
            }
            if round % 3 == 0 {
                // Force a genuine zero by subtracting the expression from itself.
                e = e.sub(&e.clone());
            }
            let is_zero = canonicalize(&p2, &e).is_zero();
            let mut vanishes_everywhere = true;
            for sigma in p2.maximal_cones() {
                for _ in 0..20 {
                    let mut nums = crate::lattice::IntVector::zeros(2);
                    for &r in sigma.rays() {
                        nums = nums.add(&p2.ray_generator(r).scale(&BigInt::from(rng.random_range(0..=5i64))));
                    }
                    let point = RationalPoint::new(nums, BigInt::from(rng.random_range(1..=4i64)));
                    if !character_sum_at(&p2, &e, &point).unwrap().is_empty() {
                        vanishes_everywhere = false;
                    }
                }
            }
            if is_zero {
                assert!(vanishes_everywhere, "canonical zero must vanish pointwise");
            }
            if vanishes_everywhere && !is_zero {
                // Sampling missed a separation; the canonical form is the
                // authority, so just make sure it is internally consistent.
                assert!(!canonicalize(&p2, &e).is_zero());
            }
        }
    }

    #[test]
    fn restriction_to_whole_fan_is_identity() {
        let p2 = fan::projective_space(2);
        let e = PEExpression::exponential(PLFunction::from_i64(&[1, -2, 3]));
        let r = restrict_to_subfan(&p2, &e, &p2).unwrap();
        assert!(pe_equal(&p2, &e, &r));
    }

    #[test]
    fn restriction_kills_off_support_functions() {
        let p2 = fan::projective_space(2);
        let sub = p2.neighborhood(&fan::Cone::new(vec![0])).unwrap();
        // x1*x2 is a non-face of the neighborhood subfan; the image of the
        // corresponding monomial vanishes on |sub|.
        let p = monomial_poly(3, &[(1, 1), (2, 1)]);
        let image = phi_tilde(&p, &p2);
        assert!(!canonicalize(&p2, &image).is_zero());
        let restricted = restrict_to_subfan(&p2, &image, &sub).unwrap();
        assert!(canonicalize(&sub, &restricted).is_zero());
    }

    #[test]
    fn pullback_of_constant_and_zero_cone() {
        let p2 = fan::projective_space(2);
        let ctx = p2.star_context(&fan::Cone::new(vec![0])).unwrap();
        let one_star = PEExpression::one(&ctx.star);
        let pulled = pullback_star(&ctx, &one_star).unwrap();
        assert!(pe_equal(&ctx.neighborhood, &pulled, &PEExpression::one(&ctx.neighborhood)));

        let ctx0 = p2.star_context(&fan::Cone::zero()).unwrap();
        let e = PEExpression::exponential(PLFunction::from_i64(&[2, -1, 0]));
        let pulled = pullback_star(&ctx0, &e).unwrap();
        assert!(pe_equal(&ctx0.neighborhood, &pulled, &e));
    }

    #[test]
    fn pullback_matches_composition_at_points() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(37);
        let p2 = fan::projective_space(2);
        let sigma = fan::Cone::new(vec![0]);
        let ctx = p2.star_context(&sigma).unwrap();
        for round in 0..10 {
            let f_star = PLFunction::new(
                (0..ctx.star.num_rays())
                    .map(|_| BigInt::from(rng.random_range(-3..=3i64)))
                    .collect(),
            );
            let _ = round;
            let pulled = pullback_star(&ctx, &PEExpression::exponential(f_star.clone())).unwrap();
            assert_eq!(pulled.terms().len(), 1);
            let g = &pulled.terms()[0].1;
            // Agreement on sampled points of the neighborhood support.
            for tau in ctx.neighborhood.maximal_cones() {
                for _ in 0..5 {
                    let mut nums = crate::lattice::IntVector::zeros(2);
                    for &r in tau.rays() {
                        nums = nums.add(
                            &ctx.neighborhood
                                .ray_generator(r)
                                .scale(&BigInt::from(rng.random_range(0..=4i64))),
                        );
                    }
                    let point = RationalPoint::new(nums.clone(), BigInt::one());
                    let lhs = pwl::evaluate(&ctx.neighborhood, g, &point).unwrap();
                    let image = ctx.projection.mul_vec(&nums);
                    let rhs = if image.is_zero() {
                        BigRational::from(BigInt::zero())
                    } else {
                        pwl::evaluate(&ctx.star, &f_star, &RationalPoint::lattice_point(image))
                            .unwrap()
                    };
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn descend_of_global_linear_is_constant() {
        let p2 = fan::projective_space(2);
        let ctx = p2.star_context(&fan::Cone::new(vec![0])).unwrap();
        let m = crate::pwl::LinearFunctional::from_i64(&[2, -1]);
        let ell = pwl::linear_to_pl(&ctx.neighborhood, &m);
        let descended = descend_star(&ctx, &PEExpression::exponential(ell)).unwrap();
        assert!(pe_equal(&ctx.star, &descended, &PEExpression::one(&ctx.star)));
    }

    #[test]
    fn descend_keeps_vanishing_exponents() {
        let p2 = fan::projective_space(2);
        let sigma = fan::Cone::new(vec![0]);
        let ctx = p2.star_context(&sigma).unwrap();
        // Courant of e2 in the neighborhood vanishes on sigma's span, and
        // descends to the star's Courant function at e2's image.
        let idx_e2 = (0..ctx.neighborhood.num_rays())
            .find(|&i| *ctx.neighborhood.ray_generator(i) == crate::lattice::IntVector::from_i64(&[0, 1]))
            .unwrap();
        let f = pwl::courant(&ctx.neighborhood, idx_e2).unwrap();
        let descended = descend_star(&ctx, &PEExpression::exponential(f)).unwrap();
        let star_idx = ctx.neighborhood_to_star[idx_e2].unwrap();
        let expected = PEExpression::exponential(pwl::courant(&ctx.star, star_idx).unwrap());
        assert!(pe_equal(&ctx.star, &descended, &expected));
    }

    #[test]
    fn mobius_on_single_maximal_cone() {
        let a2 = fan::affine_space(2);
        let mu = mobius_decomposition(&a2);
        for (cone, m) in &mu {
            if cone.dim() == 2 {
                assert_eq!(*m, BigInt::one());
            } else {
                assert!(m.is_zero(), "mu({}) = {}", cone, m);
            }
        }
    }

    #[test]
    fn mobius_on_p1() {
        let p1 = fan::projective_space(1);
        let mu: BTreeMap<Cone, BigInt> = mobius_decomposition(&p1).into_iter().collect();
        assert_eq!(mu[&Cone::new(vec![0])], BigInt::one());
        assert_eq!(mu[&Cone::new(vec![1])], BigInt::one());
        assert_eq!(mu[&Cone::zero()], BigInt::from(-1));
        let f = PLFunction::from_i64(&[2, -1]);
        assert!(canonicalize(&p1, &inclusion_exclusion_defect(&p1, &f)).is_zero());
    }

    #[test]
    fn mobius_weights_sum_to_one() {
        // Forced by the identity at f = 0.
        for f in [
            fan::projective_space(2),
            fan::projective_space(3),
            fan::hirzebruch(1),
            fan::affine_space(3),
        ] {
            let total: BigInt = mobius_decomposition(&f).into_iter().map(|(_, m)| m).sum();
            assert_eq!(total, BigInt::one());
        }
    }

    #[test]
    fn inclusion_exclusion_identity_random() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for f in [fan::projective_space(2), fan::hirzebruch(1)] {
            for _ in 0..10 {
                let g = PLFunction::new(
                    (0..f.num_rays())
                        .map(|_| BigInt::from(rng.random_range(-3..=3i64)))
                        .collect(),
                );
                assert!(canonicalize(&f, &inclusion_exclusion_defect(&f, &g)).is_zero());
            }
        }
    }

    #[test]
    fn star_roundtrip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(43);
        let p2 = fan::projective_space(2);
        // f = 0 and a global linear both round-trip trivially.
        let zero = PLFunction::zero(&p2);
        let linear = pwl::linear_to_pl(&p2, &crate::pwl::LinearFunctional::from_i64(&[1, 2]));
        for sigma in p2.cones().filter(|c| c.dim() >= 1).cloned().collect::<Vec<_>>() {
            let mut fs = vec![zero.clone(), linear.clone()];
            for _ in 0..5 {
                fs.push(PLFunction::new(
                    (0..p2.num_rays())
                        .map(|_| BigInt::from(rng.random_range(-3..=3i64)))
                        .collect(),
                ));
            }
            assert!(verify_star_roundtrip(&p2, &sigma, &fs).unwrap());
        }
    }
}
