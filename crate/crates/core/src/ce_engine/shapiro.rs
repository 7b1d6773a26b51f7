//! Shapiro reduction `H*(W1; T(ν1,0) ⊗ N) ≅ H*(L0; 1(ν1) ⊗ N)`.
//!
//! At cochain level: restrict to `L0` (drop tuples containing `e_{-1}`) and
//! evaluate the first factor at the origin, `z^m dz^ν ↦ δ_{m,0} 1_ν`.

use crate::ce_engine::complex::WeightZeroComplex;
use crate::ce_engine::matrix::SparseRationalMatrix;
use crate::error::{GfError, Result};
use crate::line_fields::AlgebraKind;
use crate::tensor_modules::{FactorKind, ModuleSpec, ModuleVector, Symmetry, TensorMonomial};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapiroReduction {
    source: ModuleSpec,
    target: ModuleSpec,
}

pub fn shapiro_reduce(spec: &ModuleSpec) -> Result<ShapiroReduction> {
    if spec.line().is_some() {
        return Err(GfError::ShapiroPrecondition(format!("{spec} has a line factor")));
    }
    if spec.symmetry() != Symmetry::None {
        return Err(GfError::ShapiroPrecondition(format!("{spec} is a symmetrized power")));
    }
    let Some(first) = spec.factors().first() else {
        return Err(GfError::ShapiroPrecondition("module has no tensor factor".into()));
    };
    if first.kind != FactorKind::Density || first.lambda != 0 {
        return Err(GfError::ShapiroPrecondition(format!("first factor {first} is not T(ν,0)")));
    }
    let target = ModuleSpec::tensor(Some(first.nu), spec.factors()[1..].to_vec());
    Ok(ShapiroReduction { source: spec.clone(), target })
}

impl ShapiroReduction {
    pub fn source(&self) -> &ModuleSpec {
        &self.source
    }

    pub fn target(&self) -> &ModuleSpec {
        &self.target
    }

    /// The evaluation map on module vectors.
    pub fn evaluate(&self, v: &ModuleVector) -> ModuleVector {
        let mut out = ModuleVector::zero();
        for (m, c) in v.terms() {
            if m.0[0] == 0 {
                out.add_term(TensorMonomial(m.0[1..].to_vec()), c.clone());
            }
        }
        out
    }

    /// Matrix of the chain map `C^p(W1; source)_{≤M} -> C^p(L0; target)_{≤M}`
    /// between two built complexes.
    pub fn chain_map(&self, src: &WeightZeroComplex, tgt: &WeightZeroComplex, p: usize) -> Result<SparseRationalMatrix> {
        if src.kind() != AlgebraKind::W1 || src.spec() != &self.source {
            return Err(GfError::InvalidArgument("source complex does not match the reduction".into()));
        }
        if tgt.kind() != AlgebraKind::L0 || tgt.spec() != &self.target {
            return Err(GfError::InvalidArgument("target complex does not match the reduction".into()));
        }
        let mut triplets = Vec::new();
        for (col, coord) in src.basis(p).coordinates().iter().enumerate() {
            if coord.tuple.contains(-1) || coord.monomial.0[0] != 0 {
                continue;
            }
            let reduced = TensorMonomial(coord.monomial.0[1..].to_vec());
            if let Some(row) = tgt.index_of(p, &coord.tuple, &reduced) {
                triplets.push((row, col, 1));
            }
        }
        Ok(SparseRationalMatrix::from_int_triplets(tgt.dim(p), src.dim(p), triplets))
    }
}
