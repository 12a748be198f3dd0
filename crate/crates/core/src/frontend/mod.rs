//! Problem files, the expression grammar and the expand → pade →
//! conditions → verify pipeline behind the command line tool.

mod parse;
mod pipeline;
mod problem;

pub use parse::{
    parse_field, parse_polynomial, parse_rational, parse_symbol, FieldContext, FieldExpr, Located,
};
pub use pipeline::{
    run_pipeline, Command, ConditionsReport, IndexedValue, PadeReport, Report, RunOptions,
    SeriesReport, StabilityEntry, VerdictReport,
};
pub use problem::{AnsatzSource, ProblemFile, RunParams};

use crate::algebra::AlgebraError;
use crate::pade::PadeError;
use crate::residual::ResidualError;
use crate::series::SeriesError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FrontendError {
    #[error("{line}:{col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("{line}:{col}: unknown symbol `{name}`")]
    UnknownSymbol { name: String, line: usize, col: usize },
    #[error("missing section or entry `{0}`")]
    MissingSection(String),
    #[error("unknown constraint `{name}`")]
    UnknownRule { name: String, line: usize },
    #[error("{0}")]
    Problem(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Pade(#[from] PadeError),
    #[error(transparent)]
    Residual(#[from] ResidualError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl FrontendError {
    /// 2 for a mathematical failure, 1 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            FrontendError::Series(_)
            | FrontendError::Pade(_)
            | FrontendError::Residual(_)
            | FrontendError::Algebra(_) => 2,
            _ => 1,
        }
    }
}
