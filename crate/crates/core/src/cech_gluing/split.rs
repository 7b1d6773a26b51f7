use serde::{Deserialize, Serialize};

use crate::cech_gluing::cochain::{cech_delta, CechCochain, CechData, CechIndex};
use crate::ce_engine::matrix::{complement_in_span, kernel_basis, SparseRationalMatrix};
use crate::error::{GfError, Result};
use crate::tensor_modules::{ModuleVector, TensorMonomial};
use crate::Rational;

/// Tie-break for monomials admissible on several components.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Routing {
    /// Lexicographically least target index set (cone vertex = largest good variable).
    Least,
    /// Lexicographically greatest target index set (cone vertex = smallest good variable).
    Greatest,
}

impl Routing {
    fn vertex(self, good: &[usize]) -> Option<usize> {
        match self {
            Routing::Least => good.last().copied(),
            Routing::Greatest => good.first().copied(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub preimage: CechCochain,
    /// All-bad monomials of the top component, a representative of the
    /// class in top-degree cohomology.
    pub obstruction: CechCochain,
}

/// Monomial-wise contracting homotopy: for a monomial with good variables,
/// pick a cone vertex `t` among them and set `(hc)_I = c_{(t, I)}`. All-bad
/// monomials have no vertex and are returned separately.
fn homotopy(data: &CechData, c: &CechCochain, routing: Routing) -> Split {
    let q = c.degree();
    assert!(q >= 1, "splitting needs Čech degree >= 1");
    let mut preimage = CechCochain::zero(q - 1);
    let mut obstruction = CechCochain::zero(q);
    for (j, v) in c.components() {
        for (a, x) in v.terms() {
            let bad = data.bad_set(&a.0);
            let good: Vec<usize> = (1..=data.n()).filter(|i| !bad.contains(i)).collect();
            match routing.vertex(&good) {
                None => obstruction.add_monomial(j.clone(), a.clone(), x.clone()),
                Some(t) => {
                    let Some(pos) = j.position(t) else { continue };
                    let mut rest = j.members().to_vec();
                    rest.remove(pos);
                    let s = if pos % 2 == 0 { x.clone() } else { -x.clone() };
                    preimage.add_monomial(CechIndex::new(rest).expect("nonempty for q >= 1"), a.clone(), s);
                }
            }
        }
    }
    Split { preimage, obstruction }
}

/// Splits a Čech cocycle of degree `q >= 1`: `δ(preimage) + obstruction = c`.
/// A nonzero obstruction only occurs in degree `n - 1`.
pub fn split_coboundary(data: &CechData, c: &CechCochain, routing: Routing) -> Result<Split> {
    if c.degree() == 0 {
        return Err(GfError::InvalidArgument("Čech degree 0 has no preimage under δ".into()));
    }
    let split = homotopy(data, c, routing);
    let mut check = cech_delta(data, &split.preimage);
    check.add_cochain(&split.obstruction, &Rational::from_integer(1.into()));
    if &check != c {
        return Err(GfError::LiftFailure {
            cech_degree: c.degree(),
            message: "input is not δ-closed".into(),
        });
    }
    Ok(split)
}

/// Splits a section on the full intersection `U_{1..n}` (`n >= 2`).
pub fn split_top(data: &CechData, s: &ModuleVector, routing: Routing) -> Result<Split> {
    let mut c = CechCochain::zero(data.n() - 1);
    c.add(CechIndex::full(data.n()), s, &Rational::from_integer(1.into()));
    split_coboundary(data, &c, routing)
}

/// Basis of `H^q` of the Čech complex in weight `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CechClasses {
    pub q: usize,
    pub weight: i64,
    pub monomials: Vec<TensorMonomial>,
    pub representatives: Vec<CechCochain>,
}

/// Čech complex of one bad pattern: the index sets containing it.
fn local_cohomology(n: usize, bad: &[usize], q: usize) -> Vec<Vec<(CechIndex, Rational)>> {
    let sets = |s: usize| -> Vec<CechIndex> {
        CechIndex::all(n, s + 1).into_iter().filter(|j| bad.iter().all(|&b| j.contains(b))).collect()
    };
    let delta = |s: usize| -> SparseRationalMatrix {
        let src = sets(s);
        let tgt = sets(s + 1);
        let mut triplets = Vec::new();
        for (col, j) in src.iter().enumerate() {
            for (row, k) in tgt.iter().enumerate() {
                if let Some(extra) = k.members().iter().position(|m| !j.contains(*m)) {
                    if j.members().iter().all(|m| k.contains(*m)) {
                        triplets.push((row, col, if extra % 2 == 0 { 1 } else { -1 }));
                    }
                }
            }
        }
        SparseRationalMatrix::from_int_triplets(tgt.len(), src.len(), triplets)
    };
    let here = sets(q);
    if here.is_empty() {
        return Vec::new();
    }
    let kernel = kernel_basis(&delta(q));
    let incoming = if q == 0 { SparseRationalMatrix::zeros(here.len(), 0) } else { delta(q - 1) };
    complement_in_span(&incoming, &kernel)
        .into_iter()
        .map(|v| {
            here.iter()
                .cloned()
                .zip(v)
                .filter(|(_, c)| !num_traits::Zero::is_zero(c))
                .collect()
        })
        .collect()
}

/// Monomials of weight `w` whose bad set is exactly `bad`; `None` when the
/// set is infinite.
fn monomials_with_pattern(data: &CechData, bad: &[usize], w: i64) -> Option<Vec<TensorMonomial>> {
    let n = data.n();
    if !bad.is_empty() && bad.len() != n {
        return None;
    }
    let total = w - data.line().unwrap_or(0) - (0..n).map(|i| data.nu(i)).sum::<i64>();
    let upper = bad.len() == n;
    // shift to non-negative parts: b_i = a_i + λ_i (good) or -λ_i - 1 - a_i (bad)
    let shift: i64 = (0..n).map(|i| if upper { -data.lambda(i) - 1 } else { -data.lambda(i) }).sum();
    let budget = if upper { shift - total } else { total - shift };
    if budget < 0 {
        return Some(Vec::new());
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(i: usize, n: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i + 1 == n {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for b in 0..=left {
            cur.push(b);
            rec(i + 1, n, left - b, cur, out);
            cur.pop();
        }
    }
    rec(0, n, budget, &mut cur, &mut out);
    let mut monos: Vec<TensorMonomial> = out
        .into_iter()
        .map(|b| {
            TensorMonomial(
                (0..n)
                    .map(|i| if upper { -data.lambda(i) - 1 - b[i] } else { b[i] - data.lambda(i) })
                    .collect(),
            )
        })
        .collect();
    monos.sort();
    Some(monos)
}

/// `H^q` of the Čech complex in weight `w`, by elimination on the local
/// complex of every bad pattern. Only the empty pattern (degree 0) and the
/// full pattern (degree `n - 1`) carry cohomology.
pub fn cech_h(data: &CechData, q: usize, w: i64) -> Result<CechClasses> {
    let n = data.n();
    let mut monomials = Vec::new();
    let mut representatives = Vec::new();
    for mask in 0u32..(1 << n) {
        let bad: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect();
        let local = local_cohomology(n, &bad, q);
        if local.is_empty() {
            continue;
        }
        let monos = monomials_with_pattern(data, &bad, w).ok_or_else(|| GfError::UnboundedWeightSpace {
            module: format!("Čech H^{q} of {} (bad pattern {bad:?})", data.polynomial_spec()),
        })?;
        for a in monos {
            for local_rep in &local {
                let mut c = CechCochain::zero(q);
                for (j, x) in local_rep {
                    c.add_monomial(j.clone(), a.clone(), x.clone());
                }
                monomials.push(a.clone());
                representatives.push(c);
            }
        }
    }
    Ok(CechClasses { q, weight: w, monomials, representatives })
}
