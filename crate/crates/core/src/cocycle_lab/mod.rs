//! Explicit cocycles, cup products, cocycle checks and nontriviality
//! certificates.

mod certificate;
mod cochain;
mod named;

pub use certificate::{nontriviality_certificate, certify_via_shapiro, Certificate};
pub use cochain::{cup, verify_cocycle, Counterexample, MarkedPolynomial, SymbolicCochain, ValueProduct, VerifyReport};
pub use named::{make_named_cocycle, marked_variable, NamedCocycle};
