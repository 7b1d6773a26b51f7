use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{GfError, Result};
use crate::line_fields::{bracket_coefficient, sort_with_sign, AlgebraKind};
use crate::tensor_modules::{FactorSpec, ModuleSpec, ModuleVector};
use crate::Rational;

/// Polynomial in the marked points `z_1, ..., z_n`: a vector of the function
/// module `T(0,0)^⊗n`, exponent `i` belonging to `z_{i+1}`.
pub type MarkedPolynomial = ModuleVector;

/// How values of two cochains combine under the cup product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueProduct {
    /// Pointwise product of functions of the same marked points.
    Multiply,
    /// Tensor product of module values.
    Tensor,
}

type Rule = dyn Fn(&[i64]) -> ModuleVector + Send + Sync;

/// Alternating cochain given by its values on strictly increasing tuples.
/// Values live in the full tensor product of the target factors, also when
/// the target carries a symmetry flag.
#[derive(Clone)]
pub struct SymbolicCochain {
    name: String,
    arity: usize,
    domain: AlgebraKind,
    target: ModuleSpec,
    rule: Arc<Rule>,
}

impl fmt::Debug for SymbolicCochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymbolicCochain")
            .field("name", &self.name)
            .field("arity", &self.arity)
            .field("domain", &self.domain)
            .field("target", &self.target.to_string())
            .finish()
    }
}

impl SymbolicCochain {
    pub fn new(
        name: impl Into<String>,
        arity: usize,
        domain: AlgebraKind,
        target: ModuleSpec,
        rule: impl Fn(&[i64]) -> ModuleVector + Send + Sync + 'static,
    ) -> Self {
        Self { name: name.into(), arity, domain, target, rule: Arc::new(rule) }
    }

    pub fn zero(arity: usize, domain: AlgebraKind, target: ModuleSpec) -> Self {
        Self::new("0", arity, domain, target, |_| ModuleVector::zero())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn domain(&self) -> AlgebraKind {
        self.domain
    }

    pub fn target(&self) -> &ModuleSpec {
        &self.target
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Same values, declared target replaced (e.g. tagging an antisymmetric
    /// tensor-valued cochain as `alt^n`).
    pub fn with_target(mut self, target: ModuleSpec) -> Self {
        self.target = target;
        self
    }

    pub fn with_domain(mut self, domain: AlgebraKind) -> Self {
        self.domain = domain;
        self
    }

    /// Value on `e_{k_1} ∧ ... ∧ e_{k_p}` in any order. Repeated indices or
    /// indices outside the domain give zero.
    pub fn eval(&self, indices: &[i64]) -> ModuleVector {
        assert_eq!(indices.len(), self.arity, "cochain {} evaluated on {} inputs", self.name, indices.len());
        if indices.iter().any(|&k| !self.domain.contains_index(k)) {
            return ModuleVector::zero();
        }
        match sort_with_sign(indices) {
            None => ModuleVector::zero(),
            Some((1, sorted)) => (self.rule)(&sorted),
            Some((_, sorted)) => (self.rule)(&sorted).scaled(&-Rational::from_integer(1.into())),
        }
    }

    /// The Chevalley-Eilenberg differential, as a new cochain.
    pub fn differential(&self) -> SymbolicCochain {
        let c = self.clone();
        let acting = self.target.without_symmetry();
        SymbolicCochain::new(format!("d({})", self.name), self.arity + 1, self.domain, self.target.clone(), move |x| {
            ce_differential_at(&c, &acting, x).expect("acting index checked by the domain")
        })
    }
}

fn ce_differential_at(c: &SymbolicCochain, acting: &ModuleSpec, x: &[i64]) -> Result<ModuleVector> {
    let mut out = ModuleVector::zero();
    let one = Rational::from_integer(1.into());
    for i in 0..x.len() {
        let rest: Vec<i64> = x.iter().enumerate().filter(|&(t, _)| t != i).map(|(_, &k)| k).collect();
        let v = c.eval(&rest).act(acting, x[i])?;
        let s = if i % 2 == 0 { one.clone() } else { -one.clone() };
        out.add_scaled(&v, &s);
    }
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let coeff = bracket_coefficient(x[i], x[j]);
            if coeff == 0 {
                continue;
            }
            let mut args = Vec::with_capacity(x.len() - 1);
            args.push(x[i] + x[j]);
            args.extend(x.iter().enumerate().filter(|&(t, _)| t != i && t != j).map(|(_, &k)| k));
            let sign = if (i + j) % 2 == 0 { coeff } else { -coeff };
            out.add_scaled(&c.eval(&args), &Rational::from_integer(sign.into()));
        }
    }
    Ok(out)
}

fn is_function_module(spec: &ModuleSpec) -> bool {
    spec.line().is_none() && spec.factors().iter().all(|f| *f == FactorSpec::density(0, 0))
}

/// Shuffle product. Function-valued cochains on the same marked points are
/// multiplied; all other targets are tensored, with line factors adding.
pub fn cup(c1: &SymbolicCochain, c2: &SymbolicCochain) -> Result<SymbolicCochain> {
    let f1 = is_function_module(c1.target());
    let f2 = is_function_module(c2.target());
    let (product, target) = if f1 && f2 {
        if c1.target().n() != c2.target().n() {
            return Err(GfError::IncompatibleTargets(format!(
                "functions of {} and {} marked points",
                c1.target().n(),
                c2.target().n()
            )));
        }
        (ValueProduct::Multiply, c1.target().without_symmetry())
    } else {
        if f1 != f2 && c1.target().n() > 0 && c2.target().n() > 0 {
            return Err(GfError::IncompatibleTargets(format!("{} and {}", c1.target(), c2.target())));
        }
        let line = match (c1.target().line(), c2.target().line()) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or(0) + b.unwrap_or(0)),
        };
        let mut factors = c1.target().factors().to_vec();
        factors.extend_from_slice(c2.target().factors());
        (ValueProduct::Tensor, ModuleSpec::tensor(line, factors))
    };
    let domain = if c1.domain().is_subalgebra_of(c2.domain()) { c1.domain() } else { c2.domain() };
    let (a, b) = (c1.clone(), c2.clone());
    let (p, q) = (c1.arity(), c2.arity());
    let name = format!("{}*{}", c1.name(), c2.name());
    Ok(SymbolicCochain::new(name, p + q, domain, target, move |x| {
        let mut out = ModuleVector::zero();
        for (sign, left, right) in shuffles(x, p) {
            let u = a.eval(&left);
            if u.is_zero() {
                continue;
            }
            let v = b.eval(&right);
            let w = match product {
                ValueProduct::Multiply => u.multiply(&v),
                ValueProduct::Tensor => u.tensor(&v),
            };
            out.add_scaled(&w, &Rational::from_integer(sign.into()));
        }
        out
    }))
}

/// `(p, q)`-shuffles of `x`: every split into `p` and `len - p` entries
/// keeping relative order, with the sign of the unshuffling permutation.
fn shuffles(x: &[i64], p: usize) -> Vec<(i64, Vec<i64>, Vec<i64>)> {
    let n = x.len();
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(p);
    fn rec(start: usize, n: usize, p: usize, chosen: &mut Vec<usize>, x: &[i64], out: &mut Vec<(i64, Vec<i64>, Vec<i64>)>) {
        if chosen.len() == p {
            // inversions: pairs (left position, right position) with right < left
            let mut inv = 0usize;
            for (rank, &pos) in chosen.iter().enumerate() {
                inv += pos - rank;
            }
            let left = chosen.iter().map(|&i| x[i]).collect();
            let right = (0..n).filter(|i| !chosen.contains(i)).map(|i| x[i]).collect();
            out.push((if inv % 2 == 0 { 1 } else { -1 }, left, right));
            return;
        }
        for i in start..n {
            chosen.push(i);
            rec(i + 1, n, p, chosen, x, out);
            chosen.pop();
        }
    }
    rec(0, n, p, &mut chosen, x, &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub tuple: Vec<i64>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub cocycle: String,
    pub algebra: AlgebraKind,
    pub arity: usize,
    #[serde(rename = "K")]
    pub k: i64,
    pub tuples_checked: usize,
    pub pass: bool,
    pub counterexample: Option<Counterexample>,
}

/// Evaluates `dc` on every strictly increasing tuple of domain indices `<= k`.
pub fn verify_cocycle(c: &SymbolicCochain, k: i64) -> VerifyReport {
    let dc = c.differential();
    let indices: Vec<i64> = (c.domain().min_index()..=k).collect();
    let mut checked = 0;
    let mut counterexample = None;
    for_each_subset(&indices, c.arity() + 1, &mut |t| {
        checked += 1;
        let v = dc.eval(t);
        if v.is_zero() {
            true
        } else {
            counterexample = Some(Counterexample { tuple: t.to_vec(), value: v.to_string() });
            false
        }
    });
    VerifyReport {
        cocycle: c.name().to_string(),
        algebra: c.domain(),
        arity: c.arity(),
        k,
        tuples_checked: checked,
        pass: counterexample.is_none(),
        counterexample,
    }
}

/// Calls `f` on every `size`-subset of `items` in lexicographic order until it
/// returns false.
pub(crate) fn for_each_subset(items: &[i64], size: usize, f: &mut dyn FnMut(&[i64]) -> bool) {
    fn rec(items: &[i64], size: usize, start: usize, cur: &mut Vec<i64>, f: &mut dyn FnMut(&[i64]) -> bool) -> bool {
        if cur.len() == size {
            return f(cur);
        }
        for i in start..items.len() {
            if items.len() - i < size - cur.len() {
                break;
            }
            cur.push(items[i]);
            let go = rec(items, size, i + 1, cur, f);
            cur.pop();
            if !go {
                return false;
            }
        }
        true
    }
    rec(items, size, 0, &mut Vec::with_capacity(size), f);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor_modules::TensorMonomial;

    #[test]
    fn shuffle_signs() {
        let s = shuffles(&[1, 2, 3], 1);
        assert_eq!(s, vec![(1, vec![1], vec![2, 3]), (-1, vec![2], vec![1, 3]), (1, vec![3], vec![1, 2])]);
        assert_eq!(shuffles(&[1, 2], 0), vec![(1, vec![], vec![1, 2])]);
    }

    #[test]
    fn non_cochain_rule_fails() {
        // e_k ↦ z^k dz^2
        let target = ModuleSpec::power(FactorSpec::density(2, 0), 1);
        let c = SymbolicCochain::new("bad", 1, AlgebraKind::W1, target, |x| {
            if x[0] >= 0 {
                ModuleVector::monomial(TensorMonomial(vec![x[0]]))
            } else {
                ModuleVector::zero()
            }
        });
        let r = verify_cocycle(&c, 8);
        assert!(!r.pass);
        assert!(r.counterexample.is_some());
    }

    #[test]
    fn zero_cochain_passes() {
        let c = SymbolicCochain::zero(2, AlgebraKind::W1, ModuleSpec::functions(2));
        assert!(verify_cocycle(&c, 8).pass);
    }

    #[test]
    fn subsets_are_counted() {
        let mut n = 0;
        for_each_subset(&[1, 2, 3, 4, 5], 3, &mut |_| {
            n += 1;
            true
        });
        assert_eq!(n, 10);
    }
}
