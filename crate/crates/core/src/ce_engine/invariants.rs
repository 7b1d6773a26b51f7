//! `H^0(L1; N)` weight by weight.

use serde::{Deserialize, Serialize};

use crate::ce_engine::matrix::{kernel_basis, SparseRationalMatrix};
use crate::error::Result;
use crate::line_fields::AlgebraKind;
use crate::tensor_modules::{ModuleSpec, ModuleVector};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantsReport {
    pub algebra: AlgebraKind,
    pub module: String,
    pub weight: i64,
    pub dim: usize,
    /// Basis vectors in the module's own basis (orbit sums for symmetric specs).
    pub basis: Vec<String>,
    pub acting_indices: Vec<i64>,
}

/// L1-invariant vectors of weight `w`.
///
/// When module weights are bounded above by `wmax`, every `e_k` with
/// `1 <= k <= wmax - w` is imposed (larger `k` leave the module); otherwise
/// the generators `e_1, e_2` of L1 suffice.
pub fn invariants_h0(spec: &ModuleSpec, w: i64) -> Result<(InvariantsReport, Vec<ModuleVector>)> {
    let source = spec.weight_space_basis(w)?;
    let acting: Vec<i64> = match spec.weight_bounds().1 {
        Some(top) => (1..=(top - w)).collect(),
        None => vec![1, 2],
    };
    let mut triplets = Vec::new();
    let mut row_offset = 0;
    for &k in &acting {
        let targets = spec.weight_space_basis(w + k)?;
        let pos: std::collections::HashMap<_, _> = targets.iter().enumerate().map(|(i, m)| (m, i)).collect();
        for (col, m) in source.iter().enumerate() {
            for (t, c) in spec.act_basis(k, m)? {
                let row = pos[&t];
                triplets.push((row_offset + row, col, c));
            }
        }
        row_offset += targets.len();
    }
    let mat = SparseRationalMatrix::from_int_triplets(row_offset, source.len(), triplets);
    let kernel = kernel_basis(&mat);
    let vectors: Vec<ModuleVector> = kernel
        .iter()
        .map(|coeffs| {
            let mut v = ModuleVector::zero();
            for (m, c) in source.iter().zip(coeffs) {
                v.add_term(m.clone(), c.clone());
            }
            v
        })
        .collect();
    let report = InvariantsReport {
        algebra: AlgebraKind::L1,
        module: spec.to_string(),
        weight: w,
        dim: vectors.len(),
        basis: vectors.iter().map(ToString::to_string).collect(),
        acting_indices: acting,
    };
    Ok((report, vectors))
}

/// Dimension only.
pub fn invariants_dim(spec: &ModuleSpec, w: i64) -> Result<usize> {
    invariants_h0(spec, w).map(|(r, _)| r.dim)
}
