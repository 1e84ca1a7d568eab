//! Exact computational algebra for unimodular rational polyhedral fans.
//!
//! The toolkit builds the presentation of the K-ring of a unimodular fan as a
//! quotient of the Stanley-Reisner ring by an exponential-relation ideal,
//! computes the quotient's structure as a finitely generated abelian group via
//! strong Groebner bases over the integers, and mechanically verifies the
//! generator-level identities that make the presentation work, using an exact
//! calculus of piecewise-exponential functions.
//!
//! All arithmetic is exact: arbitrary-precision integers for lattices,
//! polynomials and piecewise-linear data, and exact rationals for the simplex
//! certificates and point location. Nothing in the crate touches floating
//! point.

pub mod fan;
pub mod kring;
pub mod lattice;
pub mod lp;
pub mod pe;
pub mod polyz;
pub mod pwl;

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("cone {0} is not a cone of the fan")]
    ConeNotInFan(String),
    #[error("ray index {0} out of range")]
    RayOutOfRange(usize),
    #[error("generators are not extendable to a lattice basis (invariant factor {0} != 1)")]
    NotPrimitiveExtendable(String),
    #[error("point lies outside the support of the fan")]
    OutsideSupport,
    #[error("fan is not a subfan of the ambient fan: {0}")]
    NotASubfan(String),
    #[error("star subdivision requires a cone of dimension >= 2, got {0}")]
    SubdivisionDimension(usize),
    #[error("quotient is not finitely generated: no unit pure-power leading term for variable {0}")]
    NotFinitelyGenerated(usize),
    #[error("exact division failed")]
    ExactDivision,
    #[error("internal corruption: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
