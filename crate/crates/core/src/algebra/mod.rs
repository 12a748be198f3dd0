//! Exact arithmetic: interned symbols, sparse polynomials over the
//! rationals, rational functions and monomial rewrite systems.

mod display;
mod monomial;
mod poly;
mod ratfun;
mod rewrite;
mod symbol;

pub use display::{PolyDisplay, RatDisplay};
pub use monomial::Monomial;
pub use poly::{EvalRing, Polynomial};
pub use ratfun::{lcm_heuristic, RationalFunction};
pub use rewrite::{RewriteSystem, Rule};
pub use symbol::{Symbol, SymbolKind, SymbolTable};
#[allow(unused_imports)]
pub(crate) use symbol::is_identifier;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("polynomial is not divisible")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("division by zero")]
    DivisionByZero,
    #[error("rewriting did not terminate within its step budget")]
    NonTerminating,
    #[error("invalid rule: {0}")]
    InvalidRule(String),
    #[error("invalid symbol name `{0}`")]
    InvalidName(String),
    #[error("symbol `{0}` redeclared with a different kind")]
    SymbolRedeclared(String),
    #[error("extension `{0}` needs a defining rule")]
    ExtensionWithoutRule(String),
}

/// Integer-valued rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `n/d` as a reduced rational. Panics when `d` is zero.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
