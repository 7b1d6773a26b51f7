//! Truncated Chevalley-Eilenberg complexes and their Betti numbers.

pub mod betti;
pub mod complex;
pub mod invariants;
pub mod matrix;
pub mod shapiro;

pub use betti::{betti, differential_ranks, BettiReport, DegreeReport, Ladder, Status};
pub use complex::WeightZeroComplex;
pub use invariants::{invariants_dim, invariants_h0, InvariantsReport};
pub use matrix::SparseRationalMatrix;
pub use shapiro::{shapiro_reduce, ShapiroReduction};
