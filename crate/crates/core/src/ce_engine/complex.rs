//! The `e_0`-invariant cochain complex.
//!
//! A weight-zero `p`-cochain assigns to each basis tuple `e_{k_1} ∧ ... ∧ e_{k_p}`
//! of weight `μ = Σ k_i` a module vector of the same weight `μ`, so its
//! coordinates are pairs `(tuple, monomial)` with equal weights. The
//! differential is
//!
//! ```text
//! (dc)(x_0, ..., x_p) = Σ_i (-1)^i x_i · c(..., x̂_i, ...)
//!                     + Σ_{i<j} (-1)^{i+j} c([x_i, x_j], ..., x̂_i, ..., x̂_j, ...)
//! ```
//!
//! Coordinates are graded by the truncation key of their tuple (the sum of its
//! non-negative indices). The differential never lowers the key, so the
//! coordinates with key `<= M` form a quotient complex.

use std::collections::HashMap;

use crate::ce_engine::matrix::SparseRationalMatrix;
use crate::error::{GfError, Result};
use crate::line_fields::{bracket_coefficient, enumerate_exterior_by_key, AlgebraKind, ExteriorTuple};
use crate::tensor_modules::{ModuleSpec, ModuleVector, TensorMonomial};
use crate::Rational;

/// One coordinate of a weight-zero cochain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coordinate {
    pub tuple: ExteriorTuple,
    pub monomial: TensorMonomial,
}

/// Indexed coordinates of one cohomological degree.
#[derive(Clone, Debug, Default)]
pub struct DegreeBasis {
    coords: Vec<Coordinate>,
    tuple_offsets: HashMap<ExteriorTuple, usize>,
}

impl DegreeBasis {
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coordinates(&self) -> &[Coordinate] {
        &self.coords
    }

    pub fn tuples(&self) -> impl Iterator<Item = &ExteriorTuple> {
        self.tuple_offsets.keys()
    }
}

/// Weight-zero complex truncated at key `<= M`, for degrees `0..=p_max`.
#[derive(Clone, Debug)]
pub struct WeightZeroComplex {
    kind: AlgebraKind,
    spec: ModuleSpec,
    truncation: i64,
    exact: bool,
    bases: Vec<DegreeBasis>,
    weight_bases: HashMap<i64, Vec<TensorMonomial>>,
    weight_positions: HashMap<i64, HashMap<TensorMonomial, usize>>,
    differentials: Vec<SparseRationalMatrix>,
}

impl WeightZeroComplex {
    /// Builds the complex of `kind` with coefficients in `spec` for degrees
    /// `0..=p_max`, keeping tuples with truncation key `<= m`. Modules with
    /// weights bounded above give a finite complex; then `m` is raised or
    /// lowered to the natural bound and the result is exact.
    pub fn build(kind: AlgebraKind, spec: &ModuleSpec, p_max: usize, m: i64) -> Result<Self> {
        if kind == AlgebraKind::L1 {
            return Err(GfError::WrongAlgebra { expected: "W1 or L0 (e_0 must be present)", got: kind });
        }
        spec.check_finite()?;
        if kind == AlgebraKind::W1 && !spec.is_w1_module() {
            return Err(GfError::NotAW1Module { module: spec.to_string() });
        }
        let (wmin, wmax) = spec.weight_bounds();
        let (truncation, exact) = match wmax {
            // a tuple containing e_{-1} has key = weight + 1
            Some(top) => (if kind == AlgebraKind::W1 { top + 1 } else { top }, true),
            None => (m, false),
        };
        let mut cx = Self {
            kind,
            spec: spec.clone(),
            truncation,
            exact,
            bases: Vec::with_capacity(p_max + 1),
            weight_bases: HashMap::new(),
            weight_positions: HashMap::new(),
            differentials: Vec::with_capacity(p_max),
        };
        for p in 0..=p_max {
            let basis = cx.degree_basis(p, wmin, wmax)?;
            cx.bases.push(basis);
        }
        for p in 0..p_max {
            let d = cx.assemble_differential(p);
            cx.differentials.push(d);
        }
        Ok(cx)
    }

    fn module_basis(&mut self, w: i64) -> Result<&Vec<TensorMonomial>> {
        if !self.weight_bases.contains_key(&w) {
            let b = self.spec.weight_space_basis(w)?;
            let pos = b.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
            self.weight_positions.insert(w, pos);
            self.weight_bases.insert(w, b);
        }
        Ok(&self.weight_bases[&w])
    }

    fn degree_basis(&mut self, p: usize, wmin: Option<i64>, wmax: Option<i64>) -> Result<DegreeBasis> {
        let mut basis = DegreeBasis::default();
        let min_key = match self.kind {
            AlgebraKind::W1 => 0,
            _ => (p * p.saturating_sub(1) / 2) as i64,
        };
        for t in enumerate_exterior_by_key(self.kind, p, min_key, self.truncation) {
            let w = t.weight();
            if wmin.is_some_and(|lo| w < lo) || wmax.is_some_and(|hi| w > hi) {
                continue;
            }
            let mb = self.module_basis(w)?.clone();
            if mb.is_empty() {
                continue;
            }
            basis.tuple_offsets.insert(t.clone(), basis.coords.len());
            basis.coords.extend(mb.into_iter().map(|m| Coordinate { tuple: t.clone(), monomial: m }));
        }
        Ok(basis)
    }

    fn coordinate_index(&self, p: usize, tuple: &ExteriorTuple, m: &TensorMonomial) -> Option<usize> {
        let offset = *self.bases[p].tuple_offsets.get(tuple)?;
        let pos = *self.weight_positions.get(&tuple.weight())?.get(m)?;
        Some(offset + pos)
    }

    fn assemble_differential(&self, p: usize) -> SparseRationalMatrix {
        let src = &self.bases[p];
        let tgt = &self.bases[p + 1];
        let mut triplets: Vec<(usize, usize, i64)> = Vec::new();
        let min = self.kind.min_index();

        // x_i · c(..., x̂_i, ...)
        for (col, coord) in src.coords.iter().enumerate() {
            let key = coord.tuple.truncation_key();
            for k in min..=(self.truncation - key) {
                let Some((sign, t)) = coord.tuple.insert(k) else {
                    continue;
                };
                if !tgt.tuple_offsets.contains_key(&t) {
                    continue;
                }
                for (mono, c) in self.spec.act_basis_unchecked(k, &coord.monomial) {
                    let row = self
                        .coordinate_index(p + 1, &t, &mono)
                        .expect("action stays inside the weight space of the target tuple");
                    triplets.push((row, col, sign as i64 * c));
                }
            }
        }

        // c([x_i, x_j], ...)
        for t in tgt.tuple_offsets.keys() {
            let idx = t.indices();
            let w = t.weight();
            let mb = &self.weight_bases[&w];
            for i in 0..idx.len() {
                for j in i + 1..idx.len() {
                    let c = bracket_coefficient(idx[i], idx[j]);
                    if c == 0 {
                        continue;
                    }
                    let rest = t.without_position(j).without_position(i);
                    let Some((sign, s)) = rest.insert(idx[i] + idx[j]) else {
                        continue;
                    };
                    if !src.tuple_offsets.contains_key(&s) {
                        continue;
                    }
                    let pm = if (i + j) % 2 == 0 { 1 } else { -1 };
                    let coeff = pm * c * sign as i64;
                    for mono in mb {
                        let row = self.coordinate_index(p + 1, t, mono).unwrap();
                        let col = self.coordinate_index(p, &s, mono).unwrap();
                        triplets.push((row, col, coeff));
                    }
                }
            }
        }
        SparseRationalMatrix::from_int_triplets(tgt.len(), src.len(), triplets)
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn spec(&self) -> &ModuleSpec {
        &self.spec
    }

    /// Largest truncation key kept.
    pub fn truncation(&self) -> i64 {
        self.truncation
    }

    /// True when no coordinate was dropped by truncation.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn p_max(&self) -> usize {
        self.bases.len() - 1
    }

    pub fn basis(&self, p: usize) -> &DegreeBasis {
        &self.bases[p]
    }

    pub fn dim(&self, p: usize) -> usize {
        self.bases[p].len()
    }

    /// Matrix of `d^p : C^p -> C^{p+1}` (rows index `C^{p+1}`).
    pub fn differential(&self, p: usize) -> &SparseRationalMatrix {
        &self.differentials[p]
    }

    pub fn differentials(&self) -> &[SparseRationalMatrix] {
        &self.differentials
    }

    pub fn index_of(&self, p: usize, tuple: &ExteriorTuple, m: &TensorMonomial) -> Option<usize> {
        self.coordinate_index(p, tuple, m)
    }

    /// Coordinates of a cochain given as values on basis tuples, expressed in
    /// the module's own basis (orbit coordinates for symmetric specs).
    pub fn coordinates_of(&self, p: usize, values: impl Fn(&ExteriorTuple) -> ModuleVector) -> Vec<Rational> {
        let basis = &self.bases[p];
        let mut out = vec![Rational::from_integer(0.into()); basis.len()];
        for (t, off) in &basis.tuple_offsets {
            let v = self.spec.orbit_coordinates(&values(t));
            let positions = &self.weight_positions[&t.weight()];
            for (m, c) in v.terms() {
                if let Some(pos) = positions.get(m) {
                    out[off + pos] = c.clone();
                }
            }
        }
        out
    }

    /// Checks `d^{p+1} ∘ d^p = 0` for every stored pair.
    pub fn is_complex(&self) -> bool {
        self.differentials.windows(2).all(|w| w[1].mul(&w[0]).is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor_modules::FactorSpec;

    #[test]
    fn line_two_complex() {
        let spec = ModuleSpec::line_only(2);
        let cx = WeightZeroComplex::build(AlgebraKind::L0, &spec, 3, 10).unwrap();
        assert!(cx.is_exact());
        let dims: Vec<usize> = (0..=3).map(|p| cx.dim(p)).collect();
        assert_eq!(dims, vec![0, 1, 1, 0]);
        assert_eq!(cx.basis(1).coordinates()[0].tuple.indices(), &[2]);
        assert_eq!(cx.basis(2).coordinates()[0].tuple.indices(), &[0, 2]);
        assert!(cx.differential(1).is_zero());
        assert!(cx.is_complex());
    }

    #[test]
    fn line_zero_complex() {
        let spec = ModuleSpec::line_only(0);
        let cx = WeightZeroComplex::build(AlgebraKind::L0, &spec, 2, 10).unwrap();
        assert_eq!((0..=2).map(|p| cx.dim(p)).collect::<Vec<_>>(), vec![1, 1, 0]);
        assert!(cx.differential(0).is_zero());
    }

    #[test]
    fn density_dims() {
        let spec = ModuleSpec::power(FactorSpec::density(2, 0), 1);
        let cx = WeightZeroComplex::build(AlgebraKind::L0, &spec, 1, 3).unwrap();
        assert_eq!(cx.dim(0), 0);
        let weights: Vec<i64> = cx.basis(1).coordinates().iter().map(|c| c.tuple.weight()).collect();
        assert_eq!(weights, vec![2, 3]);
    }

    #[test]
    fn rejects_l1_and_non_w1_modules() {
        let spec = ModuleSpec::line_only(2);
        assert!(WeightZeroComplex::build(AlgebraKind::L1, &spec, 1, 4).is_err());
        assert!(matches!(
            WeightZeroComplex::build(AlgebraKind::W1, &spec, 1, 4),
            Err(GfError::NotAW1Module { .. })
        ));
        let two = ModuleSpec::power(FactorSpec::laurent(0), 2);
        assert!(matches!(
            WeightZeroComplex::build(AlgebraKind::L0, &two, 1, 4),
            Err(GfError::UnboundedWeightSpace { .. })
        ));
    }

    #[test]
    fn d_squared_vanishes() {
        let specs = [
            (AlgebraKind::L0, ModuleSpec::tensor(Some(1), vec![FactorSpec::density(2, 0), FactorSpec::density(0, 1)])),
            (AlgebraKind::W1, ModuleSpec::power(FactorSpec::density(0, 0), 2)),
            (AlgebraKind::W1, ModuleSpec::symmetric_power(FactorSpec::density(2, 0), 2, crate::Symmetry::Alt)),
            (AlgebraKind::L0, ModuleSpec::symmetric_power(FactorSpec::quotient(2, 0), 2, crate::Symmetry::Sym)),
        ];
        for (kind, spec) in specs {
            let cx = WeightZeroComplex::build(kind, &spec, 4, 9).unwrap();
            assert!(cx.is_complex(), "{kind} {spec}");
        }
    }
}
