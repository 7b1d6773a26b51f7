//! Čech side of the fundamental exact sequence.
//!
//! The covering of `C^n - {0}` is `U_j = {z_j != 0}`. A section on
//! `U_J = ∩_{j∈J} U_j` is a Laurent polynomial whose exponent `a_j` is at
//! least `-λ_j` for every `j ∉ J`. Everything is computed one monomial at a
//! time: a monomial is *bad* in variable `j` when `a_j < -λ_j`, and it lives
//! exactly on the index sets containing its bad variables.

mod audit;
mod cochain;
mod split;
mod zigzag;

pub use audit::{exactness_audit, AuditDegree, AuditReport};
pub use cochain::{cech_delta, sn_cech_act, CechCochain, CechData, CechIndex, CechSection};
pub use split::{cech_h, split_coboundary, split_top, CechClasses, Routing, Split};
pub use zigzag::{connecting_map, ConnectingImage, TruncatedCochain};
