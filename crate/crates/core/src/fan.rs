//! Unimodular rational polyhedral fans: validation, star fans and
//! neighborhoods, completeness, point location, and the standard toric
//! constructors used as fixtures.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use std::fmt;

use crate::lattice::{self, IntMatrix, IntVector};
use crate::lp;
use crate::{Error, Result};

/// A ray, stored by its primitive integer generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ray {
    pub generator: IntVector,
}

/// A simplicial cone, as a strictly increasing list of ray indices. The
/// empty list is the zero cone.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cone {
    ray_indices: Vec<usize>,
}

impl Cone {
    pub fn new(mut ray_indices: Vec<usize>) -> Self {
        ray_indices.sort_unstable();
        ray_indices.dedup();
        Cone { ray_indices }
    }

    pub fn zero() -> Self {
        Cone {
            ray_indices: Vec::new(),
        }
    }

    pub fn rays(&self) -> &[usize] {
        &self.ray_indices
    }

    pub fn dim(&self) -> usize {
        self.ray_indices.len()
    }

    pub fn is_zero(&self) -> bool {
        self.ray_indices.is_empty()
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other
            .ray_indices
            .iter()
            .all(|r| self.ray_indices.binary_search(r).is_ok())
    }

    pub fn contains_ray(&self, ray: usize) -> bool {
        self.ray_indices.binary_search(&ray).is_ok()
    }

    pub fn common_rays(&self, other: &Cone) -> Vec<usize> {
        self.ray_indices
            .iter()
            .filter(|r| other.contains_ray(**r))
            .copied()
            .collect()
    }

    /// All faces, i.e. all subsets of the ray set.
    pub fn faces(&self) -> Vec<Cone> {
        let k = self.ray_indices.len();
        let mut out = Vec::with_capacity(1 << k);
        for mask in 0u64..(1u64 << k) {
            let subset: Vec<usize> = (0..k)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| self.ray_indices[i])
                .collect();
            out.push(Cone { ray_indices: subset });
        }
        out
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, r) in self.ray_indices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", r)?;
        }
        write!(f, "}}")
    }
}

/// A fan: rays plus a face-closed set of cones in a fixed ambient lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    ambient_rank: usize,
    rays: Vec<Ray>,
    cones: BTreeSet<Cone>,
}

/// A named defect found by [`Fan::validate`]. Violations are data, not
/// errors: an invalid fan is a legitimate input to the validator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    RayWrongLength { ray: usize },
    RayZero { ray: usize },
    RayNotPrimitive { ray: usize },
    ConeRayOutOfRange { cone: Cone },
    ConeRaysDependent { cone: Cone },
    ConeNotUnimodular { cone: Cone, factors: Vec<BigInt> },
    MissingZeroCone,
    MissingFace { cone: Cone, face: Cone },
    IntersectionNotAFace { a: Cone, b: Cone },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RayWrongLength { ray } => {
                write!(f, "ray {} has the wrong number of coordinates", ray)
            }
            Violation::RayZero { ray } => write!(f, "ray {} is zero", ray),
            Violation::RayNotPrimitive { ray } => write!(f, "ray {} not primitive", ray),
            Violation::ConeRayOutOfRange { cone } => {
                write!(f, "cone {} references a ray out of range", cone)
            }
            Violation::ConeRaysDependent { cone } => {
                write!(f, "rays of cone {} not linearly independent", cone)
            }
            Violation::ConeNotUnimodular { cone, factors } => {
                write!(
                    f,
                    "cone {} not unimodular (invariant factors [{}])",
                    cone,
                    factors
                        .iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                )
            }
            Violation::MissingZeroCone => write!(f, "zero cone missing"),
            Violation::MissingFace { cone, face } => {
                write!(f, "face {} of cone {} missing", face, cone)
            }
            Violation::IntersectionNotAFace { a, b } => write!(
                f,
                "cones {} and {} admit no separating functional; their intersection is not a common face",
                a, b
            ),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// An exact rational point: integer numerators over one positive denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoint {
    pub numerators: IntVector,
    pub denominator: BigInt,
}

impl RationalPoint {
    pub fn new(numerators: IntVector, denominator: BigInt) -> Self {
        assert!(denominator.is_positive(), "denominator must be positive");
        RationalPoint {
            numerators,
            denominator,
        }
    }

    pub fn from_i64(numerators: &[i64], denominator: i64) -> Self {
        Self::new(IntVector::from_i64(numerators), BigInt::from(denominator))
    }

    pub fn lattice_point(v: IntVector) -> Self {
        Self::new(v, BigInt::one())
    }

    pub fn coords(&self) -> Vec<BigRational> {
        self.numerators
            .0
            .iter()
            .map(|n| BigRational::new(n.clone(), self.denominator.clone()))
            .collect()
    }

    pub fn is_origin(&self) -> bool {
        self.numerators.is_zero()
    }
}

/// The subfan of all cones containing a fixed cone, together with their
/// faces, the star fan in the quotient lattice, and the bookkeeping needed
/// to move functions between the three fans.
#[derive(Debug, Clone)]
pub struct StarContext {
    /// The neighborhood subfan, re-indexed to its surviving rays.
    pub neighborhood: Fan,
    /// neighborhood ray index -> parent ray index
    pub neighborhood_to_parent: Vec<usize>,
    /// The distinguished cone, in neighborhood indexing.
    pub sigma: Cone,
    /// The star fan in the quotient lattice.
    pub star: Fan,
    /// The quotient projection on lattices.
    pub projection: IntMatrix,
    /// neighborhood ray index -> star ray index (None for rays of sigma).
    pub neighborhood_to_star: Vec<Option<usize>>,
}

impl Fan {
    /// Build a fan from ray generators and a set of cones; the face closure
    /// (including the zero cone) is computed here, so passing only maximal
    /// cones is enough.
    pub fn from_cones(
        ambient_rank: usize,
        rays: Vec<IntVector>,
        cones: &[Vec<usize>],
    ) -> Result<Fan> {
        let n = rays.len();
        let mut set = BTreeSet::new();
        set.insert(Cone::zero());
        for spec in cones {
            for &r in spec {
                if r >= n {
                    return Err(Error::RayOutOfRange(r));
                }
            }
            for face in Cone::new(spec.clone()).faces() {
                set.insert(face);
            }
        }
        Ok(Fan {
            ambient_rank,
            rays: rays.into_iter().map(|generator| Ray { generator }).collect(),
            cones: set,
        })
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn ray_generator(&self, i: usize) -> &IntVector {
        &self.rays[i].generator
    }

    pub fn cones(&self) -> impl Iterator<Item = &Cone> {
        self.cones.iter()
    }

    pub fn num_cones(&self) -> usize {
        self.cones.len()
    }

    pub fn contains(&self, cone: &Cone) -> bool {
        self.cones.contains(cone)
    }

    /// Dimension of the fan: the largest cone dimension.
    pub fn dimension(&self) -> usize {
        self.cones.iter().map(Cone::dim).max().unwrap_or(0)
    }

    /// Cones that are not proper faces of another cone.
    pub fn maximal_cones(&self) -> Vec<Cone> {
        self.cones
            .iter()
            .filter(|c| {
                !self
                    .cones
                    .iter()
                    .any(|d| d.dim() > c.dim() && d.contains_cone(c))
            })
            .cloned()
            .collect()
    }

    /// Generators of a cone's rays, as columns.
    pub fn cone_matrix(&self, cone: &Cone) -> IntMatrix {
        let cols: Vec<IntVector> = cone
            .rays()
            .iter()
            .map(|&r| self.rays[r].generator.clone())
            .collect();
        IntMatrix::from_columns(&cols, self.ambient_rank)
    }

    /// Check every fan invariant; an empty report means the fan is valid.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut rays_ok = vec![true; self.rays.len()];
        for (i, ray) in self.rays.iter().enumerate() {
            if ray.generator.len() != self.ambient_rank {
                violations.push(Violation::RayWrongLength { ray: i });
                rays_ok[i] = false;
            } else if ray.generator.is_zero() {
                violations.push(Violation::RayZero { ray: i });
                rays_ok[i] = false;
            } else if !ray.generator.is_primitive() {
                violations.push(Violation::RayNotPrimitive { ray: i });
            }
        }

        if !self.cones.contains(&Cone::zero()) {
            violations.push(Violation::MissingZeroCone);
        }

        let mut cone_ok = Vec::new();
        for cone in &self.cones {
            let mut ok = true;
            if cone.rays().iter().any(|&r| r >= self.rays.len()) {
                violations.push(Violation::ConeRayOutOfRange { cone: cone.clone() });
                cone_ok.push((cone.clone(), false));
                continue;
            }
            if cone.rays().iter().any(|&r| !rays_ok[r]) {
                cone_ok.push((cone.clone(), false));
                continue;
            }
            for &r in cone.rays() {
                let mut face = cone.rays().to_vec();
                face.retain(|&x| x != r);
                let face = Cone::new(face);
                if !self.cones.contains(&face) {
                    violations.push(Violation::MissingFace {
                        cone: cone.clone(),
                        face,
                    });
                    ok = false;
                }
            }
            if cone.dim() > 0 {
                let snf = lattice::smith_normal_form(&self.cone_matrix(cone));
                if snf.rank() < cone.dim() {
                    violations.push(Violation::ConeRaysDependent { cone: cone.clone() });
                    ok = false;
                } else {
                    let factors = snf.invariant_factors();
                    if factors.iter().take(cone.dim()).any(|f| !f.is_one()) {
                        violations.push(Violation::ConeNotUnimodular {
                            cone: cone.clone(),
                            factors,
                        });
                        ok = false;
                    }
                }
            }
            cone_ok.push((cone.clone(), ok));
        }

        // Pairwise intersection condition, certified by an exact separating
        // functional. Nested pairs are automatic for simplicial cones.
        for (i, (a, a_ok)) in cone_ok.iter().enumerate() {
            if !a_ok {
                continue;
            }
            for (b, b_ok) in cone_ok.iter().skip(i + 1) {
                if !b_ok || a.contains_cone(b) || b.contains_cone(a) {
                    continue;
                }
                let common = a.common_rays(b);
                let ge: Vec<IntVector> = a
                    .rays()
                    .iter()
                    .filter(|r| !common.contains(r))
                    .map(|&r| self.rays[r].generator.clone())
                    .collect();
                let le: Vec<IntVector> = b
                    .rays()
                    .iter()
                    .filter(|r| !common.contains(r))
                    .map(|&r| self.rays[r].generator.clone())
                    .collect();
                let eq: Vec<IntVector> = common
                    .iter()
                    .map(|&r| self.rays[r].generator.clone())
                    .collect();
                if lp::sign_separating_functional(self.ambient_rank, &ge, &le, &eq).is_none() {
                    violations.push(Violation::IntersectionNotAFace {
                        a: a.clone(),
                        b: b.clone(),
                    });
                }
            }
        }

        ValidationReport { violations }
    }

    /// The subfan of cones containing `sigma` together with all their faces,
    /// re-indexed to its surviving rays (kept in the parent's order).
    pub fn neighborhood(&self, sigma: &Cone) -> Result<Fan> {
        Ok(self.neighborhood_with_map(sigma)?.0)
    }

    fn neighborhood_with_map(&self, sigma: &Cone) -> Result<(Fan, Vec<usize>)> {
        if !self.cones.contains(sigma) {
            return Err(Error::ConeNotInFan(sigma.to_string()));
        }
        let mut keep = BTreeSet::new();
        for tau in &self.cones {
            if tau.contains_cone(sigma) {
                for face in tau.faces() {
                    keep.insert(face);
                }
            }
        }
        Ok(self.subfan_reindexed(keep))
    }

    fn subfan_reindexed(&self, cones: BTreeSet<Cone>) -> (Fan, Vec<usize>) {
        let used: BTreeSet<usize> = cones.iter().flat_map(|c| c.rays().iter().copied()).collect();
        let sub_to_parent: Vec<usize> = used.into_iter().collect();
        let mut parent_to_sub = vec![usize::MAX; self.rays.len()];
        for (new, &old) in sub_to_parent.iter().enumerate() {
            parent_to_sub[old] = new;
        }
        let rays = sub_to_parent
            .iter()
            .map(|&old| self.rays[old].clone())
            .collect();
        let cones = cones
            .into_iter()
            .map(|c| Cone::new(c.rays().iter().map(|&r| parent_to_sub[r]).collect()))
            .collect();
        (
            Fan {
                ambient_rank: self.ambient_rank,
                rays,
                cones,
            },
            sub_to_parent,
        )
    }

    /// The star fan of `sigma` in the quotient lattice, together with the
    /// quotient projection.
    pub fn star_fan(&self, sigma: &Cone) -> Result<(Fan, IntMatrix)> {
        let ctx = self.star_context(sigma)?;
        Ok((ctx.star, ctx.projection))
    }

    /// Full star data: neighborhood, star fan, projection and ray maps.
    pub fn star_context(&self, sigma: &Cone) -> Result<StarContext> {
        let (neighborhood, neighborhood_to_parent) = self.neighborhood_with_map(sigma)?;
        let sigma_gens: Vec<IntVector> = sigma
            .rays()
            .iter()
            .map(|&r| self.rays[r].generator.clone())
            .collect();
        let projection = lattice::quotient_projection(&sigma_gens, self.ambient_rank)?;
        let sigma_sub = Cone::new(
            sigma
                .rays()
                .iter()
                .map(|&r| {
                    neighborhood_to_parent
                        .iter()
                        .position(|&p| p == r)
                        .expect("sigma rays survive in the neighborhood")
                })
                .collect(),
        );

        let mut star_rays: Vec<IntVector> = Vec::new();
        let mut neighborhood_to_star = vec![None; neighborhood.num_rays()];
        for (i, ray) in neighborhood.rays.iter().enumerate() {
            if sigma_sub.contains_ray(i) {
                continue;
            }
            let image = projection.mul_vec(&ray.generator);
            if image.is_zero() {
                return Err(Error::Internal(format!(
                    "ray {} of the neighborhood collapses in the quotient",
                    i
                )));
            }
            if let Some(j) = star_rays.iter().position(|g| *g == image) {
                neighborhood_to_star[i] = Some(j);
            } else {
                neighborhood_to_star[i] = Some(star_rays.len());
                star_rays.push(image);
            }
        }

        let star_cones: BTreeSet<Cone> = neighborhood
            .cones
            .iter()
            .map(|tau| {
                Cone::new(
                    tau.rays()
                        .iter()
                        .filter_map(|&r| neighborhood_to_star[r])
                        .collect(),
                )
            })
            .collect();

        let star = Fan {
            ambient_rank: self.ambient_rank - sigma.dim(),
            rays: star_rays.into_iter().map(|generator| Ray { generator }).collect(),
            cones: star_cones,
        };
        Ok(StarContext {
            neighborhood,
            neighborhood_to_parent,
            sigma: sigma_sub,
            star,
            projection,
            neighborhood_to_star,
        })
    }

    /// Completeness via the ridge-degree criterion for pure simplicial fans:
    /// all maximal cones full-dimensional, every ridge in exactly two of
    /// them, and the maximal-cone adjacency graph connected.
    pub fn is_complete(&self) -> bool {
        if self.ambient_rank == 0 {
            return self.cones.contains(&Cone::zero());
        }
        let maximal = self.maximal_cones();
        if maximal.is_empty() || maximal.iter().any(|c| c.dim() != self.ambient_rank) {
            return false;
        }
        for ridge in self.cones.iter().filter(|c| c.dim() + 1 == self.ambient_rank) {
            let degree = maximal.iter().filter(|m| m.contains_cone(ridge)).count();
            if degree != 2 {
                return false;
            }
        }
        // Connectivity across shared ridges.
        let n = maximal.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if !seen[j]
                    && maximal[i].common_rays(&maximal[j]).len() + 1 == self.ambient_rank
                {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// The unique cone containing the point in its relative interior, or
    /// None if the point lies outside the support.
    pub fn find_containing_cone(&self, point: &RationalPoint) -> Option<Cone> {
        if point.is_origin() {
            return if self.cones.contains(&Cone::zero()) {
                Some(Cone::zero())
            } else {
                None
            };
        }
        let target = point.coords();
        for cone in &self.cones {
            if cone.is_zero() {
                continue;
            }
            let rows: Vec<Vec<BigRational>> = (0..self.ambient_rank)
                .map(|i| {
                    cone.rays()
                        .iter()
                        .map(|&r| BigRational::from(self.rays[r].generator.0[i].clone()))
                        .collect()
                })
                .collect();
            if let Some(coords) = lp::solve_rational_system(&rows, &target) {
                // Independent generators make the solution unique; relative
                // interior means strictly positive coordinates.
                let solves = {
                    let mut ok = true;
                    for (i, row) in rows.iter().enumerate() {
                        let lhs: BigRational =
                            row.iter().zip(&coords).map(|(a, b)| a * b).sum();
                        if lhs != target[i] {
                            ok = false;
                            break;
                        }
                    }
                    ok
                };
                if solves && coords.iter().all(|c| c.is_positive()) {
                    return Some(cone.clone());
                }
            }
        }
        None
    }

    /// Barycentric coordinates of a point of the support with respect to the
    /// rays of the cone whose relative interior contains it.
    pub fn cone_coordinates(&self, point: &RationalPoint) -> Option<(Cone, Vec<BigRational>)> {
        let cone = self.find_containing_cone(point)?;
        if cone.is_zero() {
            return Some((cone, Vec::new()));
        }
        let rows: Vec<Vec<BigRational>> = (0..self.ambient_rank)
            .map(|i| {
                cone.rays()
                    .iter()
                    .map(|&r| BigRational::from(self.rays[r].generator.0[i].clone()))
                    .collect()
            })
            .collect();
        let coords = lp::solve_rational_system(&rows, &point.coords())?;
        Some((cone, coords))
    }

    /// For a candidate subfan, the map from its ray indices to this fan's,
    /// matching by generator; None if some ray or cone does not embed.
    pub fn subfan_ray_map(&self, sub: &Fan) -> Option<Vec<usize>> {
        if sub.ambient_rank != self.ambient_rank {
            return None;
        }
        let mut map = Vec::with_capacity(sub.rays.len());
        for ray in &sub.rays {
            let parent = self
                .rays
                .iter()
                .position(|r| r.generator == ray.generator)?;
            map.push(parent);
        }
        for cone in &sub.cones {
            let image = Cone::new(cone.rays().iter().map(|&r| map[r]).collect());
            if !self.cones.contains(&image) {
                return None;
            }
        }
        Some(map)
    }

    /// Reorder rays: new ray `i` is old ray `perm[i]`. Cone data follows.
    pub fn permute_rays(&self, perm: &[usize]) -> Fan {
        assert_eq!(perm.len(), self.rays.len());
        let mut inverse = vec![usize::MAX; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        Fan {
            ambient_rank: self.ambient_rank,
            rays: perm.iter().map(|&old| self.rays[old].clone()).collect(),
            cones: self
                .cones
                .iter()
                .map(|c| Cone::new(c.rays().iter().map(|&r| inverse[r]).collect()))
                .collect(),
        }
    }
}

/// Fans are equivalent up to ray permutation when some reordering of rays
/// matches generators and cone sets exactly.
pub fn ray_permutation_equivalent(a: &Fan, b: &Fan) -> bool {
    if a.ambient_rank != b.ambient_rank
        || a.rays.len() != b.rays.len()
        || a.cones.len() != b.cones.len()
    {
        return false;
    }
    let n = a.rays.len();
    let mut assignment = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn assign(
        a: &Fan,
        b: &Fan,
        i: usize,
        assignment: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if i == a.rays.len() {
            return a.cones.iter().all(|c| {
                let image = Cone::new(c.rays().iter().map(|&r| assignment[r]).collect());
                b.cones.contains(&image)
            });
        }
        for j in 0..b.rays.len() {
            if !used[j] && a.rays[i].generator == b.rays[j].generator {
                assignment[i] = j;
                used[j] = true;
                if assign(a, b, i + 1, assignment, used) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    assign(a, b, 0, &mut assignment, &mut used)
}

fn unit_vector(rank: usize, i: usize) -> IntVector {
    let mut v = IntVector::zeros(rank);
    v.0[i] = BigInt::one();
    v
}

/// Fan of projective n-space: rays e1..en and -(e1+...+en), cones all proper
/// subsets of the rays.
pub fn projective_space(n: usize) -> Fan {
    assert!(n >= 1);
    let mut rays: Vec<IntVector> = (0..n).map(|i| unit_vector(n, i)).collect();
    rays.push(IntVector(vec![BigInt::from(-1); n]));
    let maximal: Vec<Vec<usize>> = (0..=n)
        .map(|skip| (0..=n).filter(|&i| i != skip).collect())
        .collect();
    Fan::from_cones(n, rays, &maximal).expect("projective space fan")
}

/// Fan of affine n-space: the full positive orthant and its faces.
pub fn affine_space(n: usize) -> Fan {
    let rays: Vec<IntVector> = (0..n).map(|i| unit_vector(n, i)).collect();
    let maximal = vec![(0..n).collect::<Vec<usize>>()];
    Fan::from_cones(n, rays, &maximal).expect("affine space fan")
}

/// Product fan in the concatenated coordinates; cones are pairwise joins.
pub fn product(f1: &Fan, f2: &Fan) -> Fan {
    let rank = f1.ambient_rank + f2.ambient_rank;
    let mut rays = Vec::with_capacity(f1.rays.len() + f2.rays.len());
    for ray in &f1.rays {
        let mut v = ray.generator.0.clone();
        v.extend(std::iter::repeat_n(BigInt::zero(), f2.ambient_rank));
        rays.push(IntVector(v));
    }
    for ray in &f2.rays {
        let mut v = vec![BigInt::zero(); f1.ambient_rank];
        v.extend(ray.generator.0.iter().cloned());
        rays.push(IntVector(v));
    }
    let offset = f1.rays.len();
    let mut cones = Vec::new();
    for c1 in &f1.cones {
        for c2 in &f2.cones {
            let mut idx = c1.rays().to_vec();
            idx.extend(c2.rays().iter().map(|&r| r + offset));
            cones.push(idx);
        }
    }
    Fan::from_cones(rank, rays, &cones).expect("product fan")
}

/// Hirzebruch surface fan: rays e1, e2, -e1 + a*e2, -e2.
pub fn hirzebruch(a: i64) -> Fan {
    let rays = vec![
        IntVector::from_i64(&[1, 0]),
        IntVector::from_i64(&[0, 1]),
        IntVector::from_i64(&[-1, a]),
        IntVector::from_i64(&[0, -1]),
    ];
    let maximal = vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]];
    Fan::from_cones(2, rays, &maximal).expect("hirzebruch fan")
}

/// Stellar subdivision at `sigma`: adds the ray sum of sigma's generators
/// and replaces the star of sigma by the standard subdivision.
pub fn star_subdivision(fan: &Fan, sigma: &Cone) -> Result<Fan> {
    if !fan.contains(sigma) {
        return Err(Error::ConeNotInFan(sigma.to_string()));
    }
    if sigma.dim() < 2 {
        return Err(Error::SubdivisionDimension(sigma.dim()));
    }
    let new_ray = sigma
        .rays()
        .iter()
        .map(|&r| fan.rays[r].generator.clone())
        .reduce(|a, b| a.add(&b))
        .expect("sigma has rays");
    let new_idx = fan.rays.len();
    let mut rays: Vec<IntVector> = fan.rays.iter().map(|r| r.generator.clone()).collect();
    rays.push(new_ray);

    let mut cones: BTreeSet<Cone> = BTreeSet::new();
    for tau in &fan.cones {
        if !tau.contains_cone(sigma) {
            cones.insert(tau.clone());
        } else {
            for delta in tau.faces() {
                if !delta.contains_cone(sigma) {
                    let mut idx = delta.rays().to_vec();
                    idx.push(new_idx);
                    cones.insert(Cone::new(idx));
                }
            }
        }
    }
    Ok(Fan {
        ambient_rank: fan.ambient_rank,
        rays: rays.into_iter().map(|generator| Ray { generator }).collect(),
        cones,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p1_is_valid() {
        let p1 = projective_space(1);
        assert!(p1.validate().is_valid());
        assert_eq!(p1.num_rays(), 2);
        assert_eq!(p1.maximal_cones().len(), 2);
    }

    #[test]
    fn non_unimodular_cone_is_flagged() {
        // SNF oracle on [[1,0],[1,2]]^T: invariant factors (1, 2).
        let f = Fan::from_cones(
            2,
            vec![
                IntVector::from_i64(&[1, 0]),
                IntVector::from_i64(&[0, 1]),
                IntVector::from_i64(&[1, 2]),
            ],
            &[vec![0, 2]],
        )
        .unwrap();
        let report = f.validate();
        assert!(report.violations.iter().any(|v| matches!(
            v,
            Violation::ConeNotUnimodular { cone, factors }
                if cone == &Cone::new(vec![0, 2]) && factors[1] == BigInt::from(2)
        )));
    }

    #[test]
    fn dependent_rays_are_flagged() {
        let f = Fan::from_cones(
            1,
            vec![IntVector::from_i64(&[1]), IntVector::from_i64(&[-1])],
            &[vec![0, 1]],
        )
        .unwrap();
        let report = f.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::ConeRaysDependent { .. })));
    }

    #[test]
    fn overlapping_cones_are_flagged() {
        // cone(e1, e1+e2) sits inside cone(e1, e2): no separating functional.
        let f = Fan::from_cones(
            2,
            vec![
                IntVector::from_i64(&[1, 0]),
                IntVector::from_i64(&[0, 1]),
                IntVector::from_i64(&[1, 1]),
            ],
            &[vec![0, 1], vec![0, 2]],
        )
        .unwrap();
        let report = f.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::IntersectionNotAFace { .. })));
    }

    #[test]
    fn neighborhood_of_a_ray_in_p2() {
        let p2 = projective_space(2);
        let sub = p2.neighborhood(&Cone::new(vec![0])).unwrap();
        // Enumerate-and-filter oracle: cones {}, {0}, {1}, {2}, {0,1}, {0,2}.
        assert_eq!(sub.num_cones(), 6);
        assert_eq!(sub.num_rays(), 3);
        assert!(sub.contains(&Cone::new(vec![0, 1])));
        assert!(sub.contains(&Cone::new(vec![0, 2])));
        assert!(!sub.contains(&Cone::new(vec![1, 2])));
    }

    #[test]
    fn neighborhood_of_zero_cone_is_whole_fan() {
        let p2 = projective_space(2);
        assert_eq!(p2.neighborhood(&Cone::zero()).unwrap(), p2);
        let p1 = projective_space(1);
        let sub = p1.neighborhood(&Cone::new(vec![0])).unwrap();
        assert_eq!(sub.num_cones(), 2);
    }

    #[test]
    fn neighborhood_requires_membership() {
        let p1 = projective_space(1);
        assert!(p1.neighborhood(&Cone::new(vec![0, 1])).is_err());
    }

    #[test]
    fn star_of_ray_in_p2_is_p1() {
        let p2 = projective_space(2);
        let (star, q) = p2.star_fan(&Cone::new(vec![0])).unwrap();
        assert_eq!(star.ambient_rank(), 1);
        assert!(star.validate().is_valid());
        assert!(ray_permutation_equivalent(&star, &projective_space(1)));
        assert!(q.mul_vec(&IntVector::from_i64(&[1, 0])).is_zero());
    }

    #[test]
    fn star_of_zero_cone_is_identity() {
        let p2 = projective_space(2);
        let (star, q) = p2.star_fan(&Cone::zero()).unwrap();
        assert_eq!(star, p2);
        assert!(q.is_identity());
    }

    #[test]
    fn star_of_maximal_cone_is_zero_fan() {
        let p1 = projective_space(1);
        let (star, _q) = p1.star_fan(&Cone::new(vec![0])).unwrap();
        assert_eq!(star.ambient_rank(), 0);
        assert_eq!(star.num_rays(), 0);
        assert_eq!(star.num_cones(), 1);
    }

    #[test]
    fn star_fans_of_valid_fans_are_valid() {
        for f in [projective_space(2), projective_space(3), hirzebruch(2)] {
            for sigma in f.cones().cloned().collect::<Vec<_>>() {
                let (star, _) = f.star_fan(&sigma).unwrap();
                assert_eq!(star.ambient_rank(), f.ambient_rank() - sigma.dim());
                assert!(star.validate().is_valid(), "star of {} invalid", sigma);
            }
        }
    }

    #[test]
    fn completeness() {
        assert!(projective_space(2).is_complete());
        assert!(!affine_space(2).is_complete());
        // Ridge-degree oracle: every ray of p1 x p1 lies in two squares.
        let p1 = projective_space(1);
        assert!(product(&p1, &p1).is_complete());
    }

    #[test]
    fn projective_space_constructors_validate() {
        for n in 1..=5 {
            let f = projective_space(n);
            assert!(f.validate().is_valid(), "p{} invalid", n);
            assert_eq!(f.num_rays(), n + 1);
        }
    }

    #[test]
    fn hirzebruch_zero_is_p1_squared() {
        let p1 = projective_space(1);
        assert!(ray_permutation_equivalent(&hirzebruch(0), &product(&p1, &p1)));
        assert!(!ray_permutation_equivalent(&hirzebruch(1), &product(&p1, &p1)));
        for a in 0..=3 {
            assert!(hirzebruch(a).validate().is_valid());
        }
    }

    #[test]
    fn star_subdivision_of_p2() {
        let p2 = projective_space(2);
        let blow = star_subdivision(&p2, &Cone::new(vec![0, 1])).unwrap();
        assert_eq!(blow.num_rays(), 4);
        assert_eq!(blow.maximal_cones().len(), 4);
        assert!(blow.validate().is_valid());
        assert!(blow.is_complete());
        assert!(star_subdivision(&p2, &Cone::new(vec![0])).is_err());
    }

    #[test]
    fn star_subdivision_preserves_validity() {
        let p3 = projective_space(3);
        for sigma in p3.cones().filter(|c| c.dim() >= 2).cloned().collect::<Vec<_>>() {
            let sub = star_subdivision(&p3, &sigma).unwrap();
            assert!(sub.validate().is_valid(), "subdivision at {} invalid", sigma);
            assert!(sub.is_complete());
        }
    }

    #[test]
    fn point_location() {
        let p2 = projective_space(2);
        assert_eq!(
            p2.find_containing_cone(&RationalPoint::from_i64(&[1, 1], 1)),
            Some(Cone::new(vec![0, 1]))
        );
        assert_eq!(
            p2.find_containing_cone(&RationalPoint::from_i64(&[1, 0], 1)),
            Some(Cone::new(vec![0]))
        );
        assert_eq!(
            p2.find_containing_cone(&RationalPoint::from_i64(&[0, 0], 1)),
            Some(Cone::zero())
        );
        let a2 = affine_space(2);
        assert_eq!(
            a2.find_containing_cone(&RationalPoint::from_i64(&[-1, 0], 1)),
            None
        );
    }

    #[test]
    fn sampled_intersection_points_lie_in_common_face() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(51);
        let f = hirzebruch(1);
        let cones: Vec<Cone> = f.cones().cloned().collect();
        for a in &cones {
            for b in &cones {
                let common = Cone::new(a.common_rays(b));
                // Sample a few points of cone(common rays): they must locate
                // inside a face of the common cone.
                for _ in 0..3 {
                    let mut nums = IntVector::zeros(2);
                    for &r in common.rays() {
                        let l = BigInt::from(rng.random_range(0..=3i64));
                        nums = nums.add(&f.ray_generator(r).scale(&l));
                    }
                    let p = RationalPoint::new(nums, BigInt::from(1));
                    let located = f.find_containing_cone(&p).expect("in support");
                    assert!(common.contains_cone(&located));
                }
            }
        }
    }

    #[test]
    fn permuted_fans_are_equivalent() {
        let p2 = projective_space(2);
        let perm = p2.permute_rays(&[2, 0, 1]);
        assert!(perm.validate().is_valid());
        assert!(ray_permutation_equivalent(&p2, &perm));
    }

    #[test]
    fn subfan_ray_map_roundtrip() {
        let p2 = projective_space(2);
        let sub = p2.neighborhood(&Cone::new(vec![1])).unwrap();
        let map = p2.subfan_ray_map(&sub).expect("is a subfan");
        for (i, &p) in map.iter().enumerate() {
            assert_eq!(sub.ray_generator(i), p2.ray_generator(p));
        }
        assert!(sub.subfan_ray_map(&p2).is_none());
    }
}
