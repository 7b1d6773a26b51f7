use serde::{Deserialize, Serialize};

use crate::ce_engine::complex::WeightZeroComplex;
use crate::ce_engine::matrix::{in_column_span, SparseRationalMatrix};
use crate::ce_engine::shapiro::ShapiroReduction;
use crate::cocycle_lab::cochain::SymbolicCochain;
use crate::error::{GfError, Result};
use crate::line_fields::AlgebraKind;
use crate::tensor_modules::ModuleSpec;

/// Outcome of testing a cocycle against the image of the truncated
/// differential. `certified` is sound: the truncation is a quotient of the
/// full complex, so a class surviving there survives in the full complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub cocycle: String,
    pub algebra: AlgebraKind,
    pub module: String,
    pub degree: usize,
    #[serde(rename = "M")]
    pub m: i64,
    pub dim: usize,
    pub rank_in: usize,
    pub nonzero_coordinates: usize,
    pub is_truncated_cocycle: bool,
    pub certified: bool,
}

/// Tests whether `c` represents a nonzero class of `H^p(kind; spec)` using
/// the complex truncated at key `<= m`.
pub fn nontriviality_certificate(c: &SymbolicCochain, kind: AlgebraKind, spec: &ModuleSpec, m: i64) -> Result<Certificate> {
    let p = c.arity();
    if spec.without_symmetry() != c.target().without_symmetry() {
        return Err(GfError::IncompatibleTargets(format!("cochain valued in {}, complex in {spec}", c.target())));
    }
    let cx = WeightZeroComplex::build(kind, spec, p + 1, m)?;
    let coords = cx.coordinates_of(p, |t| c.eval(t.indices()));
    Ok(certify_coordinates(c.name(), &cx, p, &coords))
}

fn certify_coordinates(name: &str, cx: &WeightZeroComplex, p: usize, coords: &[crate::Rational]) -> Certificate {
    let nonzero = coords.iter().filter(|x| !num_traits::Zero::is_zero(*x)).count();
    let is_cocycle = cx.differential(p).mul_vec(coords).iter().all(num_traits::Zero::is_zero);
    let incoming = if p == 0 {
        SparseRationalMatrix::zeros(cx.dim(0), 0)
    } else {
        cx.differential(p - 1).clone()
    };
    let rank_in = incoming.rank();
    let certified = nonzero > 0 && !in_column_span(&incoming, coords);
    Certificate {
        cocycle: name.to_string(),
        algebra: cx.kind(),
        module: cx.spec().to_string(),
        degree: p,
        m: cx.truncation(),
        dim: cx.dim(p),
        rank_in,
        nonzero_coordinates: nonzero,
        is_truncated_cocycle: is_cocycle,
        certified,
    }
}

impl ShapiroReduction {
    /// The image cochain on `L0` with values in the reduced module.
    pub fn reduce_cochain(&self, c: &SymbolicCochain) -> Result<SymbolicCochain> {
        if c.target() != self.source() {
            return Err(GfError::IncompatibleTargets(format!("cochain valued in {}, reduction from {}", c.target(), self.source())));
        }
        let inner = c.clone();
        let red = self.clone();
        Ok(SymbolicCochain::new(
            format!("ev({})", c.name()),
            c.arity(),
            AlgebraKind::L0,
            self.target().clone(),
            move |x| red.evaluate(&inner.eval(x)),
        ))
    }
}

/// Certificate for a `W1` cocycle computed on the Shapiro-reduced `L0`
/// complex. Sound for the same reason: the reduction is a chain map.
pub fn certify_via_shapiro(c: &SymbolicCochain, m: i64) -> Result<(SymbolicCochain, Certificate)> {
    let red = crate::ce_engine::shapiro::shapiro_reduce(c.target())?;
    let reduced = red.reduce_cochain(c)?;
    let cert = nontriviality_certificate(&reduced, AlgebraKind::L0, red.target(), m)?;
    Ok((reduced, cert))
}
