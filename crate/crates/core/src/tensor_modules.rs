//! Coefficient modules `1_{ν0} ⊗ F_1 ⊗ ... ⊗ F_n` built from tensor densities.
//!
//! Each factor is spanned by monomials `z^m dz^ν`. A *density* factor keeps
//! `m >= -λ`, a *laurent* factor keeps every `m`, and a *quotient* factor
//! (Laurent modulo density) keeps the classes with `m <= -λ-1`. The field
//! `e_k` acts on one factor by
//!
//! ```text
//! e_k · z^m dz^ν = (m + ν(k+1)) z^{m+k} dz^ν
//! ```
//!
//! and on the tensor product by the Leibniz rule. The optional line factor
//! `1_{ν0}` only sees `e_0`, which acts on it by `ν0`.
//!
//! When all factors coincide the module may carry the symmetric or the
//! alternating `S_n` action, and then its basis is made of orbit sums indexed
//! by their sorted representative.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{GfError, Result};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FactorKind {
    Density,
    Laurent,
    Quotient,
}

/// One tensor factor. `lambda` is the pole bound; it is kept at 0 for the
/// laurent kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FactorSpec {
    pub kind: FactorKind,
    pub nu: i64,
    pub lambda: i64,
}

impl FactorSpec {
    pub fn density(nu: i64, lambda: i64) -> Self {
        Self { kind: FactorKind::Density, nu, lambda }
    }

    pub fn laurent(nu: i64) -> Self {
        Self { kind: FactorKind::Laurent, nu, lambda: 0 }
    }

    pub fn quotient(nu: i64, lambda: i64) -> Self {
        Self { kind: FactorKind::Quotient, nu, lambda }
    }

    /// Admissible exponent range `(min, max)` for `z^m dz^ν`.
    pub fn exponent_bounds(&self) -> (Option<i64>, Option<i64>) {
        match self.kind {
            FactorKind::Density => (Some(-self.lambda), None),
            FactorKind::Laurent => (None, None),
            FactorKind::Quotient => (None, Some(-self.lambda - 1)),
        }
    }

    pub fn admits(&self, m: i64) -> bool {
        let (lo, hi) = self.exponent_bounds();
        lo.map_or(true, |l| m >= l) && hi.map_or(true, |h| m <= h)
    }

    /// `e_{-1}` preserves the exponent range only for pole bound 0.
    pub fn is_w1_module(&self) -> bool {
        self.kind == FactorKind::Laurent || self.lambda == 0
    }

    /// Action coefficient of `e_k` on `z^m dz^ν`; the image is `z^{m+k}`.
    #[inline]
    pub fn action_coefficient(&self, k: i64, m: i64) -> i64 {
        m + self.nu * (k + 1)
    }
}

impl fmt::Display for FactorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FactorKind::Density => write!(f, "T({},{})", self.nu, self.lambda),
            FactorKind::Laurent => write!(f, "Tx({})", self.nu),
            FactorKind::Quotient => write!(f, "Q({},{})q", self.nu, self.lambda),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub enum Symmetry {
    #[default]
    None,
    Sym,
    Alt,
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symmetry::None => "none",
            Symmetry::Sym => "sym",
            Symmetry::Alt => "alt",
        })
    }
}

/// Exponents `m_i` of `z^{m_1} dz^{ν_1} ⊗ ... ⊗ z^{m_n} dz^{ν_n}`; the line
/// factor has a single basis vector and is not stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TensorMonomial(pub Vec<i64>);

impl TensorMonomial {
    pub fn new(exponents: Vec<i64>) -> Self {
        Self(exponents)
    }

    pub fn exponents(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for TensorMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("]")
    }
}

/// Description of a coefficient module.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModuleSpec {
    line: Option<i64>,
    factors: Vec<FactorSpec>,
    symmetry: Symmetry,
}

impl ModuleSpec {
    pub fn new(line: Option<i64>, factors: Vec<FactorSpec>, symmetry: Symmetry) -> Result<Self> {
        let spec = Self { line, factors, symmetry };
        if symmetry != Symmetry::None && !spec.factors_identical() {
            return Err(GfError::NonIdenticalFactors { module: spec.to_string() });
        }
        Ok(spec)
    }

    /// Plain tensor product without symmetry.
    pub fn tensor(line: Option<i64>, factors: Vec<FactorSpec>) -> Self {
        Self { line, factors, symmetry: Symmetry::None }
    }

    /// `1_{ν0}` alone.
    pub fn line_only(nu0: i64) -> Self {
        Self::tensor(Some(nu0), Vec::new())
    }

    /// `factor^{⊗n}`.
    pub fn power(factor: FactorSpec, n: usize) -> Self {
        Self::tensor(None, vec![factor; n])
    }

    /// `S^n` or `Λ^n` of a single factor.
    pub fn symmetric_power(factor: FactorSpec, n: usize, symmetry: Symmetry) -> Self {
        Self { line: None, factors: vec![factor; n], symmetry }
    }

    /// Functions in `n` marked points: `T_0^{⊗n}`.
    pub fn functions(n: usize) -> Self {
        Self::power(FactorSpec::density(0, 0), n)
    }

    pub fn line(&self) -> Option<i64> {
        self.line
    }

    pub fn factors(&self) -> &[FactorSpec] {
        &self.factors
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn n(&self) -> usize {
        self.factors.len()
    }

    pub fn with_line(&self, line: Option<i64>) -> Self {
        Self { line, ..self.clone() }
    }

    pub fn with_symmetry(&self, symmetry: Symmetry) -> Result<Self> {
        Self::new(self.line, self.factors.clone(), symmetry)
    }

    pub fn without_symmetry(&self) -> Self {
        Self { symmetry: Symmetry::None, ..self.clone() }
    }

    pub fn factors_identical(&self) -> bool {
        self.factors.windows(2).all(|w| w[0] == w[1])
    }

    /// Weight (`e_0`-eigenvalue) of a basis monomial.
    pub fn monomial_weight(&self, m: &TensorMonomial) -> i64 {
        self.line.unwrap_or(0)
            + m.0.iter().zip(&self.factors).map(|(e, f)| e + f.nu).sum::<i64>()
    }

    pub fn admits(&self, m: &TensorMonomial) -> bool {
        m.len() == self.n() && m.0.iter().zip(&self.factors).all(|(e, f)| f.admits(*e))
    }

    /// `(min weight, max weight)` over the whole module.
    pub fn weight_bounds(&self) -> (Option<i64>, Option<i64>) {
        let base = self.line.unwrap_or(0);
        let mut lo = Some(base);
        let mut hi = Some(base);
        for f in &self.factors {
            let (l, h) = f.exponent_bounds();
            lo = match (lo, l) {
                (Some(a), Some(b)) => Some(a + b + f.nu),
                _ => None,
            };
            hi = match (hi, h) {
                (Some(a), Some(b)) => Some(a + b + f.nu),
                _ => None,
            };
        }
        if self.symmetry == Symmetry::Alt && self.n() > 1 {
            // distinct exponents raise the minimum / lower the maximum
            let tri = (self.n() * (self.n() - 1) / 2) as i64;
            lo = lo.map(|x| x + tri);
            hi = hi.map(|x| x - tri);
        }
        (lo, hi)
    }

    /// Weight spaces are finite unless one factor is unbounded above and a
    /// different one unbounded below.
    pub fn has_finite_weight_spaces(&self) -> bool {
        let up: Vec<bool> = self.factors.iter().map(|f| f.exponent_bounds().1.is_none()).collect();
        let down: Vec<bool> = self.factors.iter().map(|f| f.exponent_bounds().0.is_none()).collect();
        for i in 0..self.n() {
            for j in 0..self.n() {
                if i != j && up[i] && down[j] {
                    return false;
                }
            }
        }
        true
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.has_finite_weight_spaces() {
            Ok(())
        } else {
            Err(GfError::UnboundedWeightSpace { module: self.to_string() })
        }
    }

    /// Whether `e_{-1}` acts, i.e. whether this is a W1-module.
    pub fn is_w1_module(&self) -> bool {
        self.line.is_none() && self.factors.iter().all(FactorSpec::is_w1_module)
    }

    /// Canonical representative test for the orbit basis.
    pub fn is_canonical(&self, m: &TensorMonomial) -> bool {
        match self.symmetry {
            Symmetry::None => true,
            Symmetry::Sym => m.0.windows(2).all(|w| w[0] <= w[1]),
            Symmetry::Alt => m.0.windows(2).all(|w| w[0] < w[1]),
        }
    }

    fn check_acting_index(&self, k: i64) -> Result<()> {
        if k < -1 {
            return Err(GfError::IndexOutOfAlgebra { kind: crate::AlgebraKind::W1, index: k });
        }
        if k == -1 && !self.is_w1_module() {
            return Err(GfError::NotAW1Module { module: self.to_string() });
        }
        Ok(())
    }

    /// `e_k` applied to a monomial of the full (unsymmetrized) tensor product.
    /// Quotient factors drop terms that leave their exponent range.
    pub fn act_monomial(&self, k: i64, m: &TensorMonomial) -> Result<Vec<(TensorMonomial, i64)>> {
        self.check_acting_index(k)?;
        Ok(self.act_monomial_unchecked(k, m))
    }

    pub(crate) fn act_monomial_unchecked(&self, k: i64, m: &TensorMonomial) -> Vec<(TensorMonomial, i64)> {
        let mut out: Vec<(TensorMonomial, i64)> = Vec::with_capacity(self.n() + 1);
        if k == 0 {
            // e_0 is diagonal with eigenvalue the weight
            let w = self.monomial_weight(m);
            if w != 0 {
                out.push((m.clone(), w));
            }
            return out;
        }
        for (i, f) in self.factors.iter().enumerate() {
            let e = m.0[i];
            let c = f.action_coefficient(k, e);
            if c == 0 || !f.admits(e + k) {
                continue;
            }
            let mut v = m.0.clone();
            v[i] = e + k;
            out.push((TensorMonomial(v), c));
        }
        out
    }

    /// `e_k` applied to a basis vector of this module, expressed in the same
    /// basis. For symmetric specs the basis vector is the orbit sum of the
    /// canonical representative `rep`.
    pub fn act_basis(&self, k: i64, rep: &TensorMonomial) -> Result<Vec<(TensorMonomial, i64)>> {
        self.check_acting_index(k)?;
        Ok(self.act_basis_unchecked(k, rep))
    }

    pub(crate) fn act_basis_unchecked(&self, k: i64, rep: &TensorMonomial) -> Vec<(TensorMonomial, i64)> {
        if self.symmetry == Symmetry::None || k == 0 {
            return self.act_monomial_unchecked(k, rep);
        }
        let mut acc: BTreeMap<TensorMonomial, i64> = BTreeMap::new();
        for (b, s) in self.orbit(rep) {
            for (t, c) in self.act_monomial_unchecked(k, &b) {
                if self.is_canonical(&t) {
                    *acc.entry(t).or_insert(0) += s * c;
                }
            }
        }
        acc.into_iter().filter(|(_, c)| *c != 0).collect()
    }

    /// Distinct arrangements of a canonical representative with their signs
    /// (always +1 for the symmetric action). Empty for vanishing alternating
    /// orbits.
    pub fn orbit(&self, rep: &TensorMonomial) -> Vec<(TensorMonomial, i64)> {
        match self.symmetry {
            Symmetry::None => vec![(rep.clone(), 1)],
            Symmetry::Sym => orbit_arrangements(rep, false),
            Symmetry::Alt => orbit_arrangements(rep, true),
        }
    }

    /// Expanded orbit-sum vector of a canonical representative.
    pub fn orbit_vector(&self, rep: &TensorMonomial) -> ModuleVector {
        let mut v = ModuleVector::zero();
        for (b, s) in self.orbit(rep) {
            v.add_term(b, Rational::from_integer(s.into()));
        }
        v
    }

    /// Coordinates of an invariant vector of the full tensor product in the
    /// orbit basis: the coefficient of each canonical representative.
    pub fn orbit_coordinates(&self, v: &ModuleVector) -> ModuleVector {
        if self.symmetry == Symmetry::None {
            return v.clone();
        }
        let mut out = ModuleVector::zero();
        for (m, c) in v.terms() {
            if self.is_canonical(m) {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// Basis of the weight-`w` subspace in canonical order. For symmetric
    /// specs each entry stands for its orbit sum.
    pub fn weight_space_basis(&self, w: i64) -> Result<Vec<TensorMonomial>> {
        self.check_finite()?;
        let target = w - self.line.unwrap_or(0) - self.factors.iter().map(|f| f.nu).sum::<i64>();
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(self.n());
        self.enumerate_rec(0, target, None, &mut current, &mut out);
        Ok(out)
    }

    fn enumerate_rec(
        &self,
        i: usize,
        remaining: i64,
        prev: Option<i64>,
        current: &mut Vec<i64>,
        out: &mut Vec<TensorMonomial>,
    ) {
        let n = self.n();
        if i == n {
            if remaining == 0 {
                out.push(TensorMonomial(current.clone()));
            }
            return;
        }
        let (mut lo, mut hi) = self.factors[i].exponent_bounds();
        if let Some(p) = prev {
            let floor = match self.symmetry {
                Symmetry::Sym => p,
                Symmetry::Alt => p + 1,
                Symmetry::None => i64::MIN,
            };
            if self.symmetry != Symmetry::None {
                lo = Some(lo.map_or(floor, |l| l.max(floor)));
            }
        }
        // bounds coming from the remaining factors
        let rest = &self.factors[i + 1..];
        let rest_lo: Option<i64> = rest.iter().map(|f| f.exponent_bounds().0).sum();
        let rest_hi: Option<i64> = rest.iter().map(|f| f.exponent_bounds().1).sum();
        if let Some(rl) = rest_lo {
            // later sorted entries are also at least lo
            let extra = if self.symmetry != Symmetry::None { lo } else { None };
            let bound = match (self.symmetry, extra) {
                (Symmetry::Sym, Some(l)) => remaining - (rl.max(l * rest.len() as i64)),
                (Symmetry::Alt, Some(l)) => {
                    let r = rest.len() as i64;
                    remaining - rl.max(r * l + r * (r + 1) / 2)
                }
                _ => remaining - rl,
            };
            hi = Some(hi.map_or(bound, |h| h.min(bound)));
        }
        if let Some(rh) = rest_hi {
            let bound = remaining - rh;
            lo = Some(lo.map_or(bound, |l| l.max(bound)));
        }
        let (lo, hi) = match (lo, hi) {
            (Some(l), Some(h)) => (l, h),
            // only reachable for the last factor, which is then determined
            _ if i + 1 == n => (remaining, remaining),
            _ => unreachable!("finite weight space check admitted an unbounded enumeration"),
        };
        for m in lo..=hi {
            if i + 1 == n && m != remaining {
                continue;
            }
            if !self.factors[i].admits(m) {
                continue;
            }
            current.push(m);
            self.enumerate_rec(i + 1, remaining - m, Some(m), current, out);
            current.pop();
        }
    }
}

impl fmt::Display for ModuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if let Some(nu0) = self.line {
            parts.push(format!("1({nu0})"));
        }
        match self.symmetry {
            Symmetry::None => {
                let mut i = 0;
                while i < self.factors.len() {
                    let mut j = i + 1;
                    while j < self.factors.len() && self.factors[j] == self.factors[i] {
                        j += 1;
                    }
                    if j - i > 1 {
                        parts.push(format!("{}^⊗{}", self.factors[i], j - i));
                    } else {
                        parts.push(self.factors[i].to_string());
                    }
                    i = j;
                }
            }
            s => {
                if let Some(first) = self.factors.first() {
                    parts.push(format!("{}^{} {}", s, self.factors.len(), first));
                }
            }
        }
        if parts.is_empty() {
            f.write_str("C")
        } else {
            f.write_str(&parts.join(" * "))
        }
    }
}

impl FromStr for ModuleSpec {
    type Err = GfError;

    fn from_str(s: &str) -> Result<Self> {
        crate::cli_runner::parse::parse_module(s)
    }
}

/// Finite rational combination of monomials of one module.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModuleVector {
    terms: BTreeMap<TensorMonomial, Rational>,
}

impl ModuleVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: TensorMonomial) -> Self {
        Self::term(m, Rational::one())
    }

    pub fn term(m: TensorMonomial, c: Rational) -> Self {
        let mut v = Self::zero();
        v.add_term(m, c);
        v
    }

    pub fn add_term(&mut self, m: TensorMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &ModuleVector, s: &Rational) {
        if s.is_zero() {
            return;
        }
        for (m, c) in other.terms() {
            self.add_term(m.clone(), c * s);
        }
    }

    pub fn scaled(&self, s: &Rational) -> ModuleVector {
        let mut out = ModuleVector::zero();
        out.add_scaled(self, s);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &TensorMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TensorMonomial, &Rational)> {
        self.terms.iter()
    }

    /// `e_k · v` in the full tensor product of `spec` (no orbit basis).
    pub fn act(&self, spec: &ModuleSpec, k: i64) -> Result<ModuleVector> {
        spec.check_acting_index(k)?;
        let mut out = ModuleVector::zero();
        for (m, c) in self.terms() {
            for (t, a) in spec.act_monomial_unchecked(k, m) {
                out.add_term(t, c * Rational::from_integer(a.into()));
            }
        }
        Ok(out)
    }

    /// `v ⊗ w`, concatenating exponent lists.
    pub fn tensor(&self, other: &ModuleVector) -> ModuleVector {
        let mut out = ModuleVector::zero();
        for (a, x) in self.terms() {
            for (b, y) in other.terms() {
                let mut e = a.0.clone();
                e.extend_from_slice(&b.0);
                out.add_term(TensorMonomial(e), x * y);
            }
        }
        out
    }

    /// Pointwise product of functions in the same variables (exponents add).
    pub fn multiply(&self, other: &ModuleVector) -> ModuleVector {
        let mut out = ModuleVector::zero();
        for (a, x) in self.terms() {
            for (b, y) in other.terms() {
                let e = a.0.iter().zip(&b.0).map(|(p, q)| p + q).collect();
                out.add_term(TensorMonomial(e), x * y);
            }
        }
        out
    }
}

impl std::ops::Add for &ModuleVector {
    type Output = ModuleVector;

    fn add(self, rhs: &ModuleVector) -> ModuleVector {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl std::ops::Sub for &ModuleVector {
    type Output = ModuleVector;

    fn sub(self, rhs: &ModuleVector) -> ModuleVector {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl fmt::Display for ModuleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}·{m}")?;
        }
        Ok(())
    }
}

/// A permutation of `{0, ..., n-1}` given by its images.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(GfError::InvalidPermutation(images));
            }
            seen[i] = true;
        }
        Ok(Self(images))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// Swaps `i` and `j`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut v: Vec<usize> = (0..n).collect();
        v.swap(i, j);
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &s) in self.0.iter().enumerate() {
            inv[s] = i;
        }
        Permutation(inv)
    }

    pub fn sign(&self) -> i64 {
        let mut inversions = 0;
        for i in 0..self.0.len() {
            for j in i + 1..self.0.len() {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// All permutations of `n` letters.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        heap_permutations(n, &mut current, &mut out);
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Exponent vector of `f(z_{σ(1)}, ..., z_{σ(n)})` for `f = z^a`: the new
    /// exponent at position `σ(i)` is `a_i`.
    pub fn permute_exponents(&self, a: &[i64]) -> Vec<i64> {
        let mut b = vec![0; a.len()];
        for (i, &e) in a.iter().enumerate() {
            b[self.0[i]] = e;
        }
        b
    }
}

fn heap_permutations(k: usize, a: &mut Vec<usize>, out: &mut Vec<Permutation>) {
    if k <= 1 {
        out.push(Permutation(a.clone()));
        return;
    }
    for i in 0..k {
        heap_permutations(k - 1, a, out);
        if k % 2 == 0 {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
    }
}

fn orbit_arrangements(rep: &TensorMonomial, signed: bool) -> Vec<(TensorMonomial, i64)> {
    let n = rep.len();
    if signed && rep.0.windows(2).any(|w| w[0] == w[1]) {
        return Vec::new();
    }
    let mut acc: BTreeMap<TensorMonomial, i64> = BTreeMap::new();
    for s in Permutation::all(n) {
        let b = TensorMonomial(s.permute_exponents(&rep.0));
        let sign = if signed { s.sign() } else { 1 };
        acc.insert(b, sign);
    }
    acc.into_iter().collect()
}

/// `σ · v` under the symmetric or alternating action on `1_{ν0} ⊗ F^{⊗n}`.
pub fn sn_act(spec: &ModuleSpec, sigma: &Permutation, v: &ModuleVector, mode: Symmetry) -> Result<ModuleVector> {
    if !spec.factors_identical() {
        return Err(GfError::NonIdenticalFactors { module: spec.to_string() });
    }
    if sigma.len() != spec.n() {
        return Err(GfError::InvalidPermutation(sigma.images().to_vec()));
    }
    let sign = match mode {
        Symmetry::Alt => sigma.sign(),
        _ => 1,
    };
    let mut out = ModuleVector::zero();
    for (m, c) in v.terms() {
        let b = TensorMonomial(sigma.permute_exponents(&m.0));
        out.add_term(b, c * Rational::from_integer(sign.into()));
    }
    Ok(out)
}

/// Orbit-sum basis of the invariants of the weight-`w` subspace under the
/// given action, as vectors of the full tensor product.
pub fn symmetry_projector(spec: &ModuleSpec, w: i64, mode: Symmetry) -> Result<Vec<ModuleVector>> {
    let target = spec.with_symmetry(mode)?;
    Ok(target
        .weight_space_basis(w)?
        .iter()
        .map(|r| target.orbit_vector(r))
        .filter(|v| !v.is_zero())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn mono(v: &[i64]) -> TensorMonomial {
        TensorMonomial(v.to_vec())
    }

    #[test]
    fn action_examples() {
        let d2 = ModuleSpec::power(FactorSpec::density(2, 0), 1);
        let v = ModuleVector::monomial(mono(&[0]));
        assert_eq!(v.act(&d2, 1).unwrap(), ModuleVector::term(mono(&[1]), q(4)));

        let line = ModuleSpec::line_only(5);
        let one = ModuleVector::monomial(mono(&[]));
        assert_eq!(one.act(&line, 0).unwrap(), one.scaled(&q(5)));
        assert!(one.act(&line, 3).unwrap().is_zero());
        assert!(matches!(one.act(&line, -1), Err(GfError::NotAW1Module { .. })));

        let quot = ModuleSpec::power(FactorSpec::quotient(2, 0), 1);
        for p in 0..6 {
            // q_{-p} = z^{-p-2} dz^2
            let qp = ModuleVector::monomial(mono(&[-p - 2]));
            assert_eq!(qp.act(&quot, p + 1).unwrap(), ModuleVector::term(mono(&[-1]), q(p + 2)));
        }
    }

    #[test]
    fn quotient_projects_into_range() {
        let quot = ModuleSpec::power(FactorSpec::quotient(2, 0), 1);
        // e_2 · z^{-1} lands on z^{1}, which lies in the density part
        let v = ModuleVector::monomial(mono(&[-1]));
        assert!(v.act(&quot, 2).unwrap().is_zero());
    }

    #[test]
    fn weight_space_examples() {
        let s = ModuleSpec::tensor(Some(0), vec![FactorSpec::density(2, 0)]);
        assert_eq!(s.weight_space_basis(2).unwrap(), vec![mono(&[0])]);
        let quot = ModuleSpec::power(FactorSpec::quotient(2, 0), 1);
        assert_eq!(quot.weight_space_basis(1).unwrap(), vec![mono(&[-1])]);
        let d = ModuleSpec::power(FactorSpec::density(2, 0), 1);
        assert!(d.weight_space_basis(0).unwrap().is_empty());
        let two_laurent = ModuleSpec::power(FactorSpec::laurent(0), 2);
        assert!(matches!(two_laurent.weight_space_basis(0), Err(GfError::UnboundedWeightSpace { .. })));
        let one_laurent = ModuleSpec::power(FactorSpec::laurent(1), 1);
        assert_eq!(one_laurent.weight_space_basis(3).unwrap(), vec![mono(&[2])]);
    }

    #[test]
    fn mixed_density_quotient_is_unbounded() {
        let s = ModuleSpec::tensor(None, vec![FactorSpec::density(0, 0), FactorSpec::quotient(0, 0)]);
        assert!(!s.has_finite_weight_spaces());
    }

    #[test]
    fn sn_examples() {
        let s = ModuleSpec::power(FactorSpec::density(2, 0), 2);
        let v = ModuleVector::monomial(mono(&[0, 1]));
        let t = Permutation::transposition(2, 0, 1);
        assert_eq!(sn_act(&s, &t, &v, Symmetry::Sym).unwrap(), ModuleVector::monomial(mono(&[1, 0])));
        assert_eq!(sn_act(&s, &t, &v, Symmetry::Alt).unwrap(), ModuleVector::term(mono(&[1, 0]), q(-1)));
        assert_eq!(sn_act(&s, &Permutation::identity(2), &v, Symmetry::Alt).unwrap(), v);
        let mixed = ModuleSpec::tensor(None, vec![FactorSpec::density(2, 0), FactorSpec::density(0, 0)]);
        assert!(sn_act(&mixed, &t, &v, Symmetry::Sym).is_err());
    }

    #[test]
    fn projector_examples() {
        let s = ModuleSpec::power(FactorSpec::density(2, 0), 2);
        let alt5 = symmetry_projector(&s, 5, Symmetry::Alt).unwrap();
        assert_eq!(alt5.len(), 1);
        let expected = &ModuleVector::monomial(mono(&[0, 1])) - &ModuleVector::monomial(mono(&[1, 0]));
        assert_eq!(alt5[0], expected);
        let sym4 = symmetry_projector(&s, 4, Symmetry::Sym).unwrap();
        assert_eq!(sym4, vec![ModuleVector::monomial(mono(&[0, 0]))]);
        assert!(symmetry_projector(&s, 4, Symmetry::Alt).unwrap().is_empty());
    }

    #[test]
    fn permutation_group_laws() {
        let all = Permutation::all(3);
        assert_eq!(all.len(), 6);
        for s in &all {
            assert_eq!(s.compose(&s.inverse()), Permutation::identity(3));
            for t in &all {
                assert_eq!(s.compose(t).sign(), s.sign() * t.sign());
            }
        }
    }

    #[test]
    fn display_round_trip_text() {
        let s = ModuleSpec::tensor(Some(2), vec![FactorSpec::density(2, 0); 4]);
        assert_eq!(s.to_string(), "1(2) * T(2,0)^⊗4");
        let a = ModuleSpec::symmetric_power(FactorSpec::density(2, 1), 2, Symmetry::Alt);
        assert_eq!(a.to_string(), "alt^2 T(2,1)");
    }
}
