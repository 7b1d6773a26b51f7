//! Long exact sequence bookkeeping checked against a finite model of the
//! total complex.
//!
//! The total complex is replaced by the subcomplex `Tot_R` of Čech monomials
//! with all exponents `>= -R`. For `R` at least every `λ_i` and at least
//! `ν0 + Σν - Σ_{j≠i}(λ_j + 1)` for each `i`, the discarded monomials are
//! either acyclic in the Čech direction or of negative weight, so `Tot_R`
//! computes the same cohomology and is finite in each weight.
//!
//! With `A^j = dim H^j(quotient)`, `B^t = dim H^t(polynomial)` and `r_q` the
//! rank of the connecting map `H^{q-n}(A) -> H^q(P)`:
//!
//! ```text
//! dim H^t(Tot) = B^t - r_t + A^{t-n+1} - r_{t+1}
//! ```

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cech_gluing::cochain::{CechData, CechIndex};
use crate::cech_gluing::split::Routing;
use crate::cech_gluing::zigzag::{connecting_map, side_complexes, TruncatedCochain};
use crate::ce_engine::betti::level_trace;
use crate::ce_engine::complex::WeightZeroComplex;
use crate::ce_engine::matrix::{complement_in_span, in_column_span, kernel_basis, SparseRationalMatrix};
use crate::error::Result;
use crate::line_fields::{enumerate_exterior_by_key, AlgebraKind, ExteriorTuple};
use crate::tensor_modules::{Permutation, Symmetry, TensorMonomial};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditDegree {
    pub t: usize,
    pub dim_tot: usize,
    pub betti_tot: usize,
    pub betti_polynomial: usize,
    pub betti_quotient_shifted: usize,
    pub rank_connecting_in: usize,
    pub rank_connecting_out: usize,
    pub predicted: i64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub module: String,
    pub quotient_module: String,
    pub n: usize,
    #[serde(rename = "M")]
    pub m: i64,
    #[serde(rename = "R")]
    pub r: i64,
    pub invariant: bool,
    pub quotient_complex_zero: bool,
    pub routing_independent: bool,
    pub degrees: Vec<AuditDegree>,
    pub pass: bool,
}

/// Coordinate of the total complex.
type TotCoord = (ExteriorTuple, CechIndex, TensorMonomial);

struct TotModel<'a> {
    data: &'a CechData,
    m: i64,
    r: i64,
    monomials: HashMap<i64, Vec<TensorMonomial>>,
}

impl<'a> TotModel<'a> {
    fn new(data: &'a CechData, m: i64) -> Self {
        let n = data.n();
        let line = data.line().unwrap_or(0);
        let nu_sum: i64 = (0..n).map(|i| data.nu(i)).sum();
        let mut r = (0..n).map(|i| data.lambda(i)).max().unwrap_or(0);
        for i in 0..n {
            let others: i64 = (0..n).filter(|&j| j != i).map(|j| data.lambda(j) + 1).sum();
            r = r.max(line + nu_sum - others);
        }
        Self { data, m, r, monomials: HashMap::new() }
    }

    /// Laurent monomials of weight `w` with all exponents `>= -R`.
    fn monomials(&mut self, w: i64) -> &Vec<TensorMonomial> {
        let n = self.data.n();
        let r = self.r;
        let total = w - self.data.line().unwrap_or(0) - (0..n).map(|i| self.data.nu(i)).sum::<i64>();
        self.monomials.entry(w).or_insert_with(|| {
            let budget = total + r * n as i64;
            let mut out = Vec::new();
            if budget >= 0 {
                let mut cur = Vec::with_capacity(n);
                fn rec(i: usize, n: usize, left: i64, r: i64, cur: &mut Vec<i64>, out: &mut Vec<TensorMonomial>) {
                    if i + 1 == n {
                        cur.push(left - r);
                        out.push(TensorMonomial(cur.clone()));
                        cur.pop();
                        return;
                    }
                    for b in 0..=left {
                        cur.push(b - r);
                        rec(i + 1, n, left - b, r, cur, out);
                        cur.pop();
                    }
                }
                rec(0, n, budget, r, &mut cur, &mut out);
            }
            out
        })
    }

    fn basis(&mut self, t: usize) -> Vec<TotCoord> {
        let n = self.data.n();
        let mut out = Vec::new();
        for s in 0..n.min(t + 1) {
            let p = t - s;
            let sets = CechIndex::all(n, s + 1);
            for tuple in enumerate_exterior_by_key(AlgebraKind::L0, p, (p * p.saturating_sub(1) / 2) as i64, self.m) {
                let monos = self.monomials(tuple.weight()).clone();
                for j in &sets {
                    for a in &monos {
                        if self.data.admissible(&a.0, j) {
                            out.push((tuple.clone(), j.clone(), a.clone()));
                        }
                    }
                }
            }
        }
        out
    }

    /// `D = d + (-1)^p δ` applied to one coordinate.
    fn apply(&self, c: &TotCoord) -> Vec<(TotCoord, i64)> {
        let (tuple, j, a) = c;
        let p = tuple.degree();
        let spec = self.data.laurent_spec();
        let mut out = Vec::new();
        for k in 0..=(self.m - tuple.weight()) {
            let Some((sign, t2)) = tuple.insert(k) else { continue };
            for (b, coeff) in spec.act_monomial(k, a).expect("L0 acts on Laurent sections") {
                out.push(((t2.clone(), j.clone(), b), sign as i64 * coeff));
            }
        }
        let x = tuple.indices();
        for (ps, &s) in x.iter().enumerate() {
            let rest = tuple.without_position(ps);
            for u in 0..=s {
                let v = s - u;
                if u >= v || rest.contains(u) || rest.contains(v) {
                    continue;
                }
                let (_, with_u) = rest.insert(u).expect("u not in rest");
                let (_, t2) = with_u.insert(v).expect("v not in rest");
                let i = t2.indices().iter().position(|&y| y == u).unwrap();
                let jj = t2.indices().iter().position(|&y| y == v).unwrap();
                let parity = if (i + jj + ps) % 2 == 0 { 1 } else { -1 };
                out.push(((t2, j.clone(), a.clone()), parity * (v - u)));
            }
        }
        let sign_p = if p % 2 == 0 { 1 } else { -1 };
        for extra in 1..=self.data.n() {
            if j.contains(extra) {
                continue;
            }
            let mut members = j.members().to_vec();
            let r = members.partition_point(|&mm| mm < extra);
            members.insert(r, extra);
            let s = if r % 2 == 0 { sign_p } else { -sign_p };
            out.push(((tuple.clone(), CechIndex::new(members).unwrap(), a.clone()), s));
        }
        out
    }
}

/// Orbit-sum description of the `S_n`-invariant part of one degree.
struct InvariantBasis {
    /// Orbit sums as sparse vectors over the full basis.
    vectors: Vec<Vec<(usize, i64)>>,
    /// Full coordinate -> (orbit, coefficient of that coordinate in the orbit sum),
    /// only for the chosen representative of each orbit.
    readout: HashMap<usize, (usize, i64)>,
}

fn invariant_basis(data: &CechData, basis: &[TotCoord], index: &HashMap<TotCoord, usize>, group: &[Permutation]) -> InvariantBasis {
    let chi = data.uses_sign_character();
    let mut seen = vec![false; basis.len()];
    let mut vectors = Vec::new();
    let mut readout = HashMap::new();
    for start in 0..basis.len() {
        if seen[start] {
            continue;
        }
        let (tuple, j, a) = &basis[start];
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for sigma in group {
            let image: Vec<usize> = j.members().iter().map(|&mm| sigma.apply(mm - 1) + 1).collect();
            let (reorder, target) = CechIndex::from_unsorted(&image).expect("σ injective");
            let b = TensorMonomial(sigma.permute_exponents(&a.0));
            let sign = reorder * if chi { sigma.sign() } else { 1 };
            let idx = index[&(tuple.clone(), target, b)];
            seen[idx] = true;
            *acc.entry(idx).or_insert(0) += sign;
        }
        acc.retain(|_, c| *c != 0);
        if let Some((&rep, &coef)) = acc.iter().next() {
            readout.insert(rep, (vectors.len(), coef));
            vectors.push(acc.into_iter().collect());
        }
    }
    InvariantBasis { vectors, readout }
}

/// Betti numbers of `Tot_R` truncated at weight `<= m` in degrees `0..=t_max`.
fn tot_betti(data: &CechData, m: i64, t_max: usize, invariant: bool) -> (i64, Vec<usize>, Vec<usize>) {
    let mut model = TotModel::new(data, m);
    let bases: Vec<Vec<TotCoord>> = (0..=t_max + 1).map(|t| model.basis(t)).collect();
    let indices: Vec<HashMap<TotCoord, usize>> = bases
        .iter()
        .map(|b| b.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect())
        .collect();
    let group = if invariant { Permutation::all(data.n()) } else { Vec::new() };
    let inv: Vec<Option<InvariantBasis>> = bases
        .iter()
        .zip(&indices)
        .map(|(b, idx)| invariant.then(|| invariant_basis(data, b, idx, &group)))
        .collect();
    let dims: Vec<usize> = (0..=t_max + 1)
        .map(|t| inv[t].as_ref().map_or(bases[t].len(), |ib| ib.vectors.len()))
        .collect();
    let mut ranks = Vec::with_capacity(t_max + 1);
    for t in 0..=t_max {
        let tgt = &indices[t + 1];
        let mut triplets: Vec<(usize, usize, Rational)> = Vec::new();
        let column = |col_vec: &[(usize, i64)], col: usize, triplets: &mut Vec<(usize, usize, Rational)>| {
            let mut image: BTreeMap<usize, i64> = BTreeMap::new();
            for &(src, w) in col_vec {
                for (coord, c) in model.apply(&bases[t][src]) {
                    let row = *tgt.get(&coord).expect("total differential stays in the model");
                    *image.entry(row).or_insert(0) += w * c;
                }
            }
            for (row, c) in image {
                if c == 0 {
                    continue;
                }
                match &inv[t + 1] {
                    None => triplets.push((row, col, Rational::from_integer(c.into()))),
                    Some(ib) => {
                        if let Some(&(orbit, coef)) = ib.readout.get(&row) {
                            triplets.push((orbit, col, Rational::new(c.into(), coef.into())));
                        }
                    }
                }
            }
        };
        match &inv[t] {
            None => {
                for col in 0..bases[t].len() {
                    column(&[(col, 1)], col, &mut triplets);
                }
            }
            Some(ib) => {
                for (col, v) in ib.vectors.iter().enumerate() {
                    column(v, col, &mut triplets);
                }
            }
        }
        ranks.push(SparseRationalMatrix::from_triplets(dims[t + 1], dims[t], triplets).rank());
    }
    let betti = (0..=t_max)
        .map(|t| dims[t] - ranks[t] - if t == 0 { 0 } else { ranks[t - 1] })
        .collect();
    (model.r, dims, betti)
}

/// Representatives of a basis of `H^q` of a built complex.
fn cohomology_representatives(cx: &WeightZeroComplex, q: usize) -> Vec<Vec<Rational>> {
    if cx.dim(q) == 0 {
        return Vec::new();
    }
    let kernel = kernel_basis(cx.differential(q));
    let incoming = if q == 0 { SparseRationalMatrix::zeros(cx.dim(0), 0) } else { cx.differential(q - 1).clone() };
    complement_in_span(&incoming, &kernel)
}

/// Audits the fundamental exact sequence of `data` in total degrees
/// `0..=t_max` at truncation `m` (raised to the top weight of the quotient
/// module when needed). With a symmetry flag on the polynomial module the
/// `S_n`-invariant parts are used throughout.
pub fn exactness_audit(data: &CechData, t_max: usize, m: i64) -> Result<AuditReport> {
    let n = data.n();
    let invariant = data.symmetry() != Symmetry::None;
    let (a_cx, p_cx, m) = side_complexes(data, t_max + 1, m)?;
    let a_betti = level_trace(&a_cx, t_max + 1).betti;
    let b_betti = level_trace(&p_cx, t_max).betti;
    let quotient_zero = (0..=t_max + 1).all(|q| a_cx.dim(q) == 0);

    // rank of the connecting map into H^q(P), q = 0..=t_max+1
    let mut ranks = vec![0usize; t_max + 2];
    let mut routing_independent = true;
    for (q, slot) in ranks.iter_mut().enumerate() {
        if q < n || q > p_cx.p_max() {
            continue;
        }
        let reps = cohomology_representatives(&a_cx, q - n);
        if reps.is_empty() {
            continue;
        }
        let incoming = if q == 0 { SparseRationalMatrix::zeros(p_cx.dim(0), 0) } else { p_cx.differential(q - 1).clone() };
        let mut images = Vec::with_capacity(reps.len());
        for rep in &reps {
            let input = TruncatedCochain::from_coordinates(&a_cx, q - n, rep);
            let least = connecting_map(data, &input, m, Routing::Least)?.cocycle.coordinates_in(&p_cx);
            let greatest = connecting_map(data, &input, m, Routing::Greatest)?.cocycle.coordinates_in(&p_cx);
            let diff: Vec<Rational> = least.iter().zip(&greatest).map(|(x, y)| x - y).collect();
            if diff.iter().any(|x| !x.is_zero()) && !in_column_span(&incoming, &diff) {
                routing_independent = false;
            }
            images.push(least);
        }
        let base = incoming.rank();
        *slot = incoming.with_columns(&images).rank() - base;
    }

    let (r, dims, tot) = tot_betti(data, m, t_max, invariant);
    let mut degrees = Vec::new();
    for t in 0..=t_max {
        let a_shift = if t + 1 >= n { a_betti[t + 1 - n] } else { 0 };
        let predicted = b_betti[t] as i64 - ranks[t] as i64 + a_shift as i64 - ranks[t + 1] as i64;
        degrees.push(AuditDegree {
            t,
            dim_tot: dims[t],
            betti_tot: tot[t],
            betti_polynomial: b_betti[t],
            betti_quotient_shifted: a_shift,
            rank_connecting_in: ranks[t],
            rank_connecting_out: ranks[t + 1],
            predicted,
            pass: predicted == tot[t] as i64,
        });
    }
    let pass = routing_independent && degrees.iter().all(|d| d.pass);
    Ok(AuditReport {
        module: data.polynomial_spec().to_string(),
        quotient_module: data.quotient_spec().to_string(),
        n,
        m,
        r,
        invariant,
        quotient_complex_zero: quotient_zero,
        routing_independent,
        degrees,
        pass,
    })
}
