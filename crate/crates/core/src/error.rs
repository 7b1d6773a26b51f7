use thiserror::Error;

use crate::line_fields::AlgebraKind;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    /// Some weight space of the module is infinite-dimensional.
    #[error("module {module} has infinite-dimensional weight spaces")]
    UnboundedWeightSpace { module: String },

    /// The basis index is not part of the acting algebra.
    #[error("index {index} is not a basis index of {kind}")]
    IndexOutOfAlgebra { kind: AlgebraKind, index: i64 },

    /// `e_{-1}` was applied to a module that is only an L0-module.
    #[error("module {module} is not a W1-module (e_-1 does not act)")]
    NotAW1Module { module: String },

    /// Symmetric-group actions need identical tensor factors.
    #[error("symmetric group action requires identical factors in {module}")]
    NonIdenticalFactors { module: String },

    #[error("permutation {0:?} is not a permutation of the tensor positions")]
    InvalidPermutation(Vec<usize>),

    #[error("operation requires algebra {expected}, got {got}")]
    WrongAlgebra { expected: &'static str, got: AlgebraKind },

    #[error("invalid marked point index {index} (valid range {min}..={max})")]
    InvalidMarkedIndex { index: usize, min: usize, max: usize },

    #[error("incompatible cochain targets: {0}")]
    IncompatibleTargets(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    /// A zig-zag step met a nonzero obstruction, so the input was not a cocycle.
    #[error("lift failure at Čech degree {cech_degree}: {message}")]
    LiftFailure { cech_degree: usize, message: String },

    #[error("Shapiro reduction requires a leading density factor with zero pole order: {0}")]
    ShapiroPrecondition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, GfError>;
