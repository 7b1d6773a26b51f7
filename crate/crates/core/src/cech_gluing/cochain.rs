use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{GfError, Result};
use crate::tensor_modules::{FactorKind, FactorSpec, ModuleSpec, ModuleVector, Permutation, Symmetry, TensorMonomial};
use crate::Rational;

/// Nonempty increasing subset of `{1, ..., n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CechIndex(Vec<usize>);

impl CechIndex {
    pub fn new(members: Vec<usize>) -> Result<Self> {
        if members.is_empty() || members.contains(&0) || members.windows(2).any(|w| w[0] >= w[1]) {
            return Err(GfError::InvalidArgument(format!("{members:?} is not an increasing set of 1-based indices")));
        }
        Ok(Self(members))
    }

    /// Sorts `members`, returning the sign of the sorting permutation, or
    /// `None` on a repeated index.
    pub fn from_unsorted(members: &[usize]) -> Option<(i64, Self)> {
        let mut v = members.to_vec();
        let mut sign = 1;
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                v.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if v.is_empty() || v.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((sign, Self(v)))
    }

    pub fn full(n: usize) -> Self {
        Self((1..=n).collect())
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0.binary_search(&j).is_ok()
    }

    pub fn position(&self, j: usize) -> Option<usize> {
        self.0.binary_search(&j).ok()
    }

    /// All index sets of the given size, lexicographically.
    pub fn all(n: usize, size: usize) -> Vec<CechIndex> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(size);
        fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<CechIndex>) {
            if cur.len() == size {
                out.push(CechIndex(cur.clone()));
                return;
            }
            for j in start..=n {
                cur.push(j);
                rec(j + 1, n, size, cur, out);
                cur.pop();
            }
        }
        if size > 0 {
            rec(1, n, size, &mut cur, &mut out);
        }
        out
    }
}

impl fmt::Display for CechIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "U{{{}}}", s.join(","))
    }
}

/// A section on one `U_J`: Laurent monomials in `z_1..z_n`.
pub type CechSection = ModuleVector;

/// Bundle data `1_{ν0} ⊗ ⊗ T(ν_i, λ_i)` of the polynomial module whose
/// Čech resolution is taken.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CechData {
    spec: ModuleSpec,
}

impl CechData {
    /// `spec` must consist of density factors (optionally with a line factor
    /// and a symmetry flag).
    pub fn new(spec: &ModuleSpec) -> Result<Self> {
        if spec.n() == 0 {
            return Err(GfError::InvalidArgument("Čech data needs at least one variable".into()));
        }
        if spec.factors().iter().any(|f| f.kind != FactorKind::Density) {
            return Err(GfError::InvalidArgument(format!("{spec}: Čech data takes density factors T(ν,λ)")));
        }
        Ok(Self { spec: spec.clone() })
    }

    pub fn n(&self) -> usize {
        self.spec.n()
    }

    pub fn line(&self) -> Option<i64> {
        self.spec.line()
    }

    pub fn symmetry(&self) -> Symmetry {
        self.spec.symmetry()
    }

    pub fn nu(&self, i: usize) -> i64 {
        self.spec.factors()[i].nu
    }

    pub fn lambda(&self, i: usize) -> i64 {
        self.spec.factors()[i].lambda
    }

    /// The polynomial module (degree-0 Čech cohomology).
    pub fn polynomial_spec(&self) -> &ModuleSpec {
        &self.spec
    }

    /// `1_{ν0} ⊗ ⊗ (T^×/T^λ)`, the top Čech cohomology. A symmetry flag on
    /// the polynomial side is exchanged (alternating ↔ symmetric).
    pub fn quotient_spec(&self) -> ModuleSpec {
        let factors = self.spec.factors().iter().map(|f| FactorSpec::quotient(f.nu, f.lambda)).collect();
        let sym = match self.spec.symmetry() {
            Symmetry::None => Symmetry::None,
            Symmetry::Sym => Symmetry::Alt,
            Symmetry::Alt => Symmetry::Sym,
        };
        ModuleSpec::new(self.spec.line(), factors, sym).expect("identical factors stay identical")
    }

    /// Laurent version used for the action on sections.
    pub fn laurent_spec(&self) -> ModuleSpec {
        ModuleSpec::tensor(self.spec.line(), self.spec.factors().iter().map(|f| FactorSpec::laurent(f.nu)).collect())
    }

    pub fn is_bad(&self, a: &[i64], i: usize) -> bool {
        a[i] < -self.lambda(i)
    }

    /// Bad variables of a monomial (1-based).
    pub fn bad_set(&self, a: &[i64]) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.is_bad(a, i)).map(|i| i + 1).collect()
    }

    pub fn admissible(&self, a: &[i64], j: &CechIndex) -> bool {
        (0..self.n()).all(|i| !self.is_bad(a, i) || j.contains(i + 1))
    }

    pub fn weight(&self, a: &[i64]) -> i64 {
        self.line().unwrap_or(0) + (0..self.n()).map(|i| a[i] + self.nu(i)).sum::<i64>()
    }

    /// Chosen sign character for the `S_n` action on cochains: the sign when
    /// the polynomial side is alternating, trivial otherwise.
    pub fn uses_sign_character(&self) -> bool {
        self.spec.symmetry() == Symmetry::Alt
    }
}

/// Alternating Čech `q`-cochain: sections on the `(q+1)`-element index sets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CechCochain {
    degree: usize,
    components: BTreeMap<CechIndex, ModuleVector>,
}

impl CechCochain {
    pub fn zero(degree: usize) -> Self {
        Self { degree, components: BTreeMap::new() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component(&self, j: &CechIndex) -> ModuleVector {
        self.components.get(j).cloned().unwrap_or_default()
    }

    pub fn components(&self) -> impl Iterator<Item = (&CechIndex, &ModuleVector)> {
        self.components.iter()
    }

    pub fn add(&mut self, j: CechIndex, v: &ModuleVector, s: &Rational) {
        assert_eq!(j.len(), self.degree + 1, "component {j} in a degree {} cochain", self.degree);
        let entry = self.components.entry(j.clone()).or_default();
        entry.add_scaled(v, s);
        if entry.is_zero() {
            self.components.remove(&j);
        }
    }

    pub fn add_monomial(&mut self, j: CechIndex, a: TensorMonomial, c: Rational) {
        self.add(j, &ModuleVector::monomial(a), &c);
    }

    pub fn add_cochain(&mut self, other: &CechCochain, s: &Rational) {
        assert_eq!(self.degree, other.degree);
        for (j, v) in other.components() {
            self.add(j.clone(), v, s);
        }
    }

    pub fn scaled(&self, s: &Rational) -> CechCochain {
        let mut out = CechCochain::zero(self.degree);
        out.add_cochain(self, s);
        out
    }

    /// Every monomial lives on an index set where it is admissible.
    pub fn is_well_formed(&self, data: &CechData) -> bool {
        self.components.iter().all(|(j, v)| {
            j.members().iter().all(|&m| m <= data.n()) && v.terms().all(|(a, _)| data.admissible(&a.0, j))
        })
    }

    /// Applies `e_k` to every section.
    pub fn act(&self, data: &CechData, k: i64) -> Result<CechCochain> {
        let spec = data.laurent_spec();
        let mut out = CechCochain::zero(self.degree);
        for (j, v) in self.components() {
            let w = v.act(&spec, k)?;
            out.add(j.clone(), &w, &Rational::from_integer(1.into()));
        }
        Ok(out)
    }
}

impl fmt::Display for CechCochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.components.iter().map(|(j, v)| format!("{j}: {v}")).collect();
        f.write_str(&parts.join("; "))
    }
}

/// `(δc)_{k_0..k_{q+1}} = Σ_r (-1)^r c_{k_0..k̂_r..k_{q+1}}`; restriction is
/// the inclusion of monomials.
pub fn cech_delta(data: &CechData, c: &CechCochain) -> CechCochain {
    let mut out = CechCochain::zero(c.degree + 1);
    for (j, v) in c.components() {
        for extra in 1..=data.n() {
            if j.contains(extra) {
                continue;
            }
            let mut members = j.members().to_vec();
            let r = members.partition_point(|&m| m < extra);
            members.insert(r, extra);
            let s = if r % 2 == 0 { 1 } else { -1 };
            out.add(CechIndex(members), v, &Rational::from_integer(s.into()));
        }
    }
    out
}

/// `(σc)_{i_0..i_q} = χ(σ) c_{σ^{-1}(i_0)..σ^{-1}(i_q)}(z_{σ(1)}, ..., z_{σ(n)})`
/// with `χ = sign` when `sign_character` is set.
pub fn sn_cech_act(data: &CechData, sigma: &Permutation, c: &CechCochain, sign_character: bool) -> Result<CechCochain> {
    if !data.polynomial_spec().factors_identical() {
        return Err(GfError::NonIdenticalFactors { module: data.polynomial_spec().to_string() });
    }
    if sigma.len() != data.n() {
        return Err(GfError::InvalidPermutation(sigma.images().to_vec()));
    }
    let chi = if sign_character { sigma.sign() } else { 1 };
    let mut out = CechCochain::zero(c.degree);
    for (j, v) in c.components() {
        // the component c_J lands on I = σ(J); reading it in the order
        // σ^{-1}(i_0), ... requires sorting σ(J)
        let image: Vec<usize> = j.members().iter().map(|&m| sigma.apply(m - 1) + 1).collect();
        let (_, target) = CechIndex::from_unsorted(&image).expect("σ is injective");
        let preimage: Vec<usize> = target.members().iter().map(|&i| sigma.inverse().apply(i - 1) + 1).collect();
        let (reorder, _) = CechIndex::from_unsorted(&preimage).expect("σ is injective");
        let mut w = ModuleVector::zero();
        for (a, x) in v.terms() {
            w.add_term(TensorMonomial(sigma.permute_exponents(&a.0)), x.clone());
        }
        out.add(target, &w, &Rational::from_integer((chi * reorder).into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn data(n: usize, nu: i64, lambda: i64) -> CechData {
        CechData::new(&ModuleSpec::power(FactorSpec::density(nu, lambda), n)).unwrap()
    }

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn idx(v: &[usize]) -> CechIndex {
        CechIndex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn delta_in_degree_zero() {
        let d = data(2, 0, 0);
        let mut c = CechCochain::zero(0);
        c.add_monomial(idx(&[1]), TensorMonomial(vec![-1, 0]), q(3));
        c.add_monomial(idx(&[2]), TensorMonomial(vec![0, -1]), q(5));
        let dc = cech_delta(&d, &c);
        let v = dc.component(&idx(&[1, 2]));
        assert_eq!(v.coefficient(&TensorMonomial(vec![0, -1])), q(5));
        assert_eq!(v.coefficient(&TensorMonomial(vec![-1, 0])), q(-3));
    }

    #[test]
    fn single_cover_has_no_delta() {
        let d = data(1, 0, 0);
        let mut c = CechCochain::zero(0);
        c.add_monomial(idx(&[1]), TensorMonomial(vec![-4]), q(1));
        assert!(cech_delta(&d, &c).is_zero());
    }

    #[test]
    fn delta_squared_vanishes() {
        let d = data(3, 2, 0);
        let mut c = CechCochain::zero(0);
        c.add_monomial(idx(&[1]), TensorMonomial(vec![-2, 1, 0]), q(1));
        c.add_monomial(idx(&[2]), TensorMonomial(vec![0, -3, 4]), q(2));
        c.add_monomial(idx(&[3]), TensorMonomial(vec![1, 1, -1]), q(-7));
        assert!(cech_delta(&d, &cech_delta(&d, &c)).is_zero());
    }

    #[test]
    fn transposition_on_top_class() {
        let d = data(2, 0, 0);
        let mut c = CechCochain::zero(1);
        c.add_monomial(idx(&[1, 2]), TensorMonomial(vec![-1, -2]), q(1));
        let s = Permutation::transposition(2, 0, 1);
        let out = sn_cech_act(&d, &s, &c, true).unwrap();
        // sign σ times the reordering sign of the alternating index: +1
        assert_eq!(out.component(&idx(&[1, 2])), ModuleVector::monomial(TensorMonomial(vec![-2, -1])));
        let back = sn_cech_act(&d, &s.inverse(), &out, true).unwrap();
        assert_eq!(back, c);
        assert_eq!(sn_cech_act(&d, &Permutation::identity(2), &c, true).unwrap(), c);
    }

    #[test]
    fn index_sets() {
        assert_eq!(CechIndex::all(3, 2).len(), 3);
        assert_eq!(CechIndex::from_unsorted(&[3, 1]).unwrap(), (-1, idx(&[1, 3])));
        assert!(CechIndex::new(vec![2, 1]).is_err());
        assert!(CechIndex::new(vec![]).is_err());
    }
}
