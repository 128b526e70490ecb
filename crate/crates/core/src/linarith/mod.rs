//! Exact linear arithmetic over rationals and not-necessarily-closed convex
//! polyhedra in constraint form.
//!
//! Every constraint on clocks and parameters in the crate is a [`Polyhedron`].
//! Queries (emptiness, projection, inclusion) reduce to Fourier–Motzkin
//! elimination, so strict inequalities are handled natively and no operation
//! leaves the rationals.

mod elimination;
mod inequality;
mod polyhedron;
pub mod rational;
mod registry;

use thiserror::Error;

pub use inequality::{LinExpr, LinearInequality, Relation};
pub use polyhedron::{ParameterValuation, Polyhedron, PolyhedronDisplay};
pub use rational::Rational;
pub use registry::{Space, VarRef, VariableRegistry};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinError {
    #[error("constraints live in different spaces ({left:?} vs {right:?})")]
    SpaceMismatch { left: Space, right: Space },
    #[error("cannot negate an equality; split it into two inequalities first")]
    NegateEquality,
    #[error("constraint mentions clock column {0}; eliminate clocks first")]
    MentionsClock(usize),
    #[error("valuation has {got} values, expected {expected}")]
    ValuationLength { expected: usize, got: usize },
    #[error("duplicate variable name `{0}`")]
    DuplicateName(String),
}

/// Intersection of two constraints over the same space.
pub fn intersect(a: &Polyhedron, b: &Polyhedron) -> Result<Polyhedron, LinError> {
    a.intersect(b)
}

/// Solution set of `a` is contained in that of `b`.
pub fn includes(a: &Polyhedron, b: &Polyhedron) -> Result<bool, LinError> {
    a.is_subset_of(b)
}

pub fn negate_inequality(j: &LinearInequality) -> Result<LinearInequality, LinError> {
    j.negate()
}
