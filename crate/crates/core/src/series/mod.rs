//! Equations in ρ variables and their order-by-order Taylor solutions.

mod equation;
mod solve;

pub use equation::{
    factor_text, transform, AnsatzDefinition, EulerEquation, EulerTerm, SpacetimeEquation,
    SpacetimeTerm,
};
pub use solve::{
    graded_cmp, index_text, indices_of_degree, seed_roots, solve_series, PowerSeries, SeedRoot,
};
pub(crate) use equation::check_rho_symbols;

use crate::algebra::AlgebraError;

/// Exponents over the ρ variables (or over coordinates for spacetime
/// derivatives).
pub type MultiIndex = Vec<u32>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SeriesError {
    #[error("unsupported ansatz: {0}")]
    UnsupportedAnsatz(String),
    #[error("no candidate constant solves the equation")]
    NoCandidates,
    #[error("no series solution: the equation at index [{}] has a zero linear part but a nonzero remainder", solve::index_text(.0))]
    Obstruction(MultiIndex),
    #[error("index [{}] was declared free but its coefficient is forced", solve::index_text(.0))]
    FreeNotInKernel(MultiIndex),
    #[error("equation terms do not share a common grading shift")]
    NotGraded,
    #[error("multi-index length does not match the number of variables")]
    DimensionMismatch,
    #[error("equation has no terms")]
    EmptyEquation,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
