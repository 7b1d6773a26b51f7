//! Exact Lie algebra cohomology of vector fields on the line with
//! tensor-density coefficients.

pub mod ce_engine;
pub mod cech_gluing;
pub mod cli_runner;
pub mod cocycle_lab;
pub mod error;
pub mod line_fields;
pub mod tensor_modules;

pub type Rational = num_rational::BigRational;

pub use error::{GfError, Result};
pub use line_fields::{AlgebraKind, ExteriorTuple, LieElement};
pub use tensor_modules::{FactorKind, FactorSpec, ModuleSpec, ModuleVector, Permutation, Symmetry, TensorMonomial};
