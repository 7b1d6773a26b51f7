//! Graded Lie algebras of polynomial vector fields on the line.
//!
//! The basis field `e_k = z^{k+1} d/dz` has weight `k` (its eigenvalue under
//! `e_0 = z d/dz`) and `[e_j, e_k] = (k - j) e_{j+k}`. The three algebras
//! differ only in the smallest admissible index: `W1` starts at `-1`, `L0`
//! at `0` and `L1` at `1`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{GfError, Result};
use crate::Rational;

/// Which algebra of vector fields is acting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AlgebraKind {
    W1,
    L0,
    L1,
}

impl AlgebraKind {
    pub fn min_index(self) -> i64 {
        match self {
            AlgebraKind::W1 => -1,
            AlgebraKind::L0 => 0,
            AlgebraKind::L1 => 1,
        }
    }

    pub fn contains_index(self, k: i64) -> bool {
        k >= self.min_index()
    }

    /// `self ⊆ other` as index sets.
    pub fn is_subalgebra_of(self, other: AlgebraKind) -> bool {
        self.min_index() >= other.min_index()
    }

    pub fn check_index(self, k: i64) -> Result<()> {
        if self.contains_index(k) {
            Ok(())
        } else {
            Err(GfError::IndexOutOfAlgebra { kind: self, index: k })
        }
    }
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AlgebraKind::W1 => "W1",
            AlgebraKind::L0 => "L0",
            AlgebraKind::L1 => "L1",
        };
        f.write_str(s)
    }
}

impl FromStr for AlgebraKind {
    type Err = GfError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "W1" | "w1" => Ok(AlgebraKind::W1),
            "L0" | "l0" => Ok(AlgebraKind::L0),
            "L1" | "l1" => Ok(AlgebraKind::L1),
            other => Err(GfError::InvalidArgument(format!("unknown algebra `{other}`"))),
        }
    }
}

/// Structure constant: `[e_j, e_k] = bracket_coefficient(j, k) · e_{j+k}`.
#[inline]
pub fn bracket_coefficient(j: i64, k: i64) -> i64 {
    k - j
}

/// A finite rational combination of basis fields.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LieElement {
    terms: BTreeMap<i64, Rational>,
}

impl LieElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The basis field `e_k`.
    pub fn basis(k: i64) -> Self {
        Self::term(k, Rational::from_integer(1.into()))
    }

    pub fn term(k: i64, coeff: Rational) -> Self {
        let mut x = Self::zero();
        x.add_term(k, coeff);
        x
    }

    pub fn add_term(&mut self, k: i64, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, k: i64) -> Rational {
        self.terms.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    /// The weight if the element is a nonzero multiple of a single basis field.
    pub fn homogeneous_weight(&self) -> Option<i64> {
        if self.terms.len() == 1 {
            self.terms.keys().next().copied()
        } else {
            None
        }
    }

    pub fn min_index(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Smallest algebra containing every index of `self`.
    pub fn belongs_to(&self, kind: AlgebraKind) -> bool {
        self.min_index().map_or(true, |k| kind.contains_index(k))
    }
}

impl std::ops::Add for &LieElement {
    type Output = LieElement;

    fn add(self, rhs: &LieElement) -> LieElement {
        let mut out = self.clone();
        for (k, c) in rhs.terms() {
            out.add_term(k, c.clone());
        }
        out
    }
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.terms().enumerate() {
            if i > 0 {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            write!(f, "{}·e_{}", c.abs(), k)?;
        }
        Ok(())
    }
}

/// Bilinear bracket extended from `[e_j, e_k] = (k - j) e_{j+k}`.
pub fn bracket(x: &LieElement, y: &LieElement) -> LieElement {
    let mut out = LieElement::zero();
    for (j, a) in x.terms() {
        for (k, b) in y.terms() {
            let c = bracket_coefficient(j, k);
            if c != 0 {
                out.add_term(j + k, a * b * Rational::from_integer(c.into()));
            }
        }
    }
    out
}

/// A basis element `e_{k_1} ∧ ... ∧ e_{k_p}` of the exterior power, stored with
/// strictly increasing indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExteriorTuple(Vec<i64>);

impl ExteriorTuple {
    /// Accepts only strictly increasing index lists.
    pub fn new(indices: Vec<i64>) -> Option<Self> {
        if indices.windows(2).all(|w| w[0] < w[1]) {
            Some(Self(indices))
        } else {
            None
        }
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Sorts an arbitrary index list, returning the permutation sign, or `None`
    /// when an index repeats (the wedge product vanishes).
    pub fn from_unsorted(indices: &[i64]) -> Option<(i32, Self)> {
        let (sign, sorted) = sort_with_sign(indices)?;
        Some((sign, Self(sorted)))
    }

    pub fn indices(&self) -> &[i64] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Sum of the non-negative indices. This is the grading used to truncate
    /// complexes: the differential never decreases it, also for `W1`.
    pub fn truncation_key(&self) -> i64 {
        self.0.iter().filter(|&&k| k >= 0).sum()
    }

    pub fn contains(&self, k: i64) -> bool {
        self.0.binary_search(&k).is_ok()
    }

    pub fn belongs_to(&self, kind: AlgebraKind) -> bool {
        self.0.first().map_or(true, |&k| kind.contains_index(k))
    }

    pub fn without_position(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v.remove(i);
        Self(v)
    }

    /// Inserts `k`, returning `(-1)^position` and the new tuple, or `None` if
    /// `k` is already present.
    pub fn insert(&self, k: i64) -> Option<(i32, Self)> {
        match self.0.binary_search(&k) {
            Ok(_) => None,
            Err(pos) => {
                let mut v = self.0.clone();
                v.insert(pos, k);
                Some((if pos % 2 == 0 { 1 } else { -1 }, Self(v)))
            }
        }
    }
}

impl fmt::Display for ExteriorTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}")?;
        }
        f.write_str(")")
    }
}

/// Sorts `indices`, returning the sign of the sorting permutation, or `None`
/// when two entries coincide.
pub fn sort_with_sign(indices: &[i64]) -> Option<(i32, Vec<i64>)> {
    let mut v = indices.to_vec();
    let mut sign = 1;
    // insertion sort; tuples are short
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((sign, v))
    }
}

/// All strictly increasing `p`-tuples over the index set of `kind` with index
/// sum `weight`, in lexicographic order.
pub fn enumerate_exterior_basis(kind: AlgebraKind, p: usize, weight: i64) -> Vec<ExteriorTuple> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(p);
    enumerate_rec(kind.min_index(), p, weight, &mut current, &mut out);
    out
}

fn enumerate_rec(lo: i64, remaining: usize, target: i64, current: &mut Vec<i64>, out: &mut Vec<ExteriorTuple>) {
    if remaining == 0 {
        if target == 0 {
            out.push(ExteriorTuple(current.clone()));
        }
        return;
    }
    let r = remaining as i64;
    // choose the first entry a; the rest are at least a+1, ..., a+r-1
    let mut a = lo;
    while r * a + r * (r - 1) / 2 <= target {
        if remaining == 1 {
            if a == target {
                current.push(a);
                out.push(ExteriorTuple(current.clone()));
                current.pop();
            }
        } else {
            current.push(a);
            enumerate_rec(a + 1, remaining - 1, target - a, current, out);
            current.pop();
        }
        a += 1;
    }
}

/// All strictly increasing `p`-tuples over `kind` whose truncation key lies in
/// `key_min..=key_max`.
pub fn enumerate_exterior_by_key(kind: AlgebraKind, p: usize, key_min: i64, key_max: i64) -> Vec<ExteriorTuple> {
    let mut out = Vec::new();
    for key in key_min.max(0)..=key_max {
        // tuples without e_{-1} have weight == key
        for t in enumerate_exterior_basis(kind.max_with_l0(), p, key) {
            out.push(t);
        }
        if kind == AlgebraKind::W1 && p >= 1 {
            for t in enumerate_exterior_basis(AlgebraKind::L0, p - 1, key) {
                let mut v = Vec::with_capacity(p);
                v.push(-1);
                v.extend_from_slice(t.indices());
                out.push(ExteriorTuple(v));
            }
        }
    }
    out
}

impl AlgebraKind {
    fn max_with_l0(self) -> AlgebraKind {
        if self == AlgebraKind::W1 {
            AlgebraKind::L0
        } else {
            self
        }
    }
}

/// Removes positions `i < j` from `tuple`. The sign is that of the permutation
/// moving the two entries to the front, `(-1)^{i+j+1}` with 0-based positions.
pub fn insertion_sign(tuple: &ExteriorTuple, i: usize, j: usize) -> Result<(i32, ExteriorTuple)> {
    let p = tuple.degree();
    if !(i < j && j < p) {
        return Err(GfError::InvalidArgument(format!(
            "positions ({i},{j}) invalid for tuple of length {p}"
        )));
    }
    let mut v = tuple.0.clone();
    v.remove(j);
    v.remove(i);
    let sign = if (i + j + 1) % 2 == 0 { 1 } else { -1 };
    Ok((sign, ExteriorTuple(v)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn bracket_examples() {
        let e = LieElement::basis;
        assert_eq!(bracket(&e(0), &e(1)), e(1));
        assert!(bracket(&e(1), &e(1)).is_zero());
        assert_eq!(bracket(&e(-1), &e(1)), LieElement::term(0, r(2)));
    }

    #[test]
    fn bracket_is_bilinear() {
        let x = &LieElement::basis(2) + &LieElement::term(3, r(-1));
        let y = LieElement::basis(-1);
        let lhs = bracket(&x, &y);
        let rhs = &bracket(&LieElement::basis(2), &y) + &bracket(&LieElement::term(3, r(-1)), &y);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn exterior_examples() {
        let ts = |v: Vec<Vec<i64>>| v.into_iter().map(|t| ExteriorTuple::new(t).unwrap()).collect::<Vec<_>>();
        assert_eq!(enumerate_exterior_basis(AlgebraKind::L0, 2, 3), ts(vec![vec![0, 3], vec![1, 2]]));
        assert!(enumerate_exterior_basis(AlgebraKind::L0, 3, 2).is_empty());
        assert_eq!(enumerate_exterior_basis(AlgebraKind::W1, 2, 0), ts(vec![vec![-1, 1]]));
        assert_eq!(enumerate_exterior_basis(AlgebraKind::L0, 0, 0), ts(vec![vec![]]));
        assert!(enumerate_exterior_basis(AlgebraKind::L0, 0, 1).is_empty());
    }

    #[test]
    fn insertion_sign_examples() {
        let t = ExteriorTuple::new(vec![0, 1, 2]).unwrap();
        let one = |v: i64| ExteriorTuple::new(vec![v]).unwrap();
        assert_eq!(insertion_sign(&t, 0, 1).unwrap(), (1, one(2)));
        assert_eq!(insertion_sign(&t, 0, 2).unwrap(), (-1, one(1)));
        assert_eq!(insertion_sign(&t, 1, 2).unwrap(), (1, one(0)));
        assert!(insertion_sign(&t, 2, 1).is_err());
    }

    #[test]
    fn key_enumeration_matches_filter() {
        for p in 0..4 {
            let by_key = enumerate_exterior_by_key(AlgebraKind::W1, p, 0, 9);
            let mut direct: Vec<_> = (-1..=9)
                .flat_map(|w| enumerate_exterior_basis(AlgebraKind::W1, p, w))
                .filter(|t| t.truncation_key() <= 9)
                .collect();
            let mut a = by_key.clone();
            a.sort();
            direct.sort();
            assert_eq!(a, direct, "p = {p}");
        }
    }

    #[test]
    fn sort_sign() {
        assert_eq!(sort_with_sign(&[2, 0, 1]), Some((1, vec![0, 1, 2])));
        assert_eq!(sort_with_sign(&[1, 0]), Some((-1, vec![0, 1])));
        assert_eq!(sort_with_sign(&[1, 1]), None);
    }
}
