//! Sparse matrices over the rationals and exact rank.
//!
//! Rank is computed by fraction-free elimination on integer rows: every row is
//! cleared of denominators, two rows are combined as `a·r - b·p` with the
//! leading entries divided by their gcd, and the result is divided by its
//! content. Pivots follow a Markowitz-style rule (sparsest column, unit or
//! smallest entry, shortest row) to limit fill-in and coefficient growth.
//! Arithmetic runs in checked `i128` and restarts in `BigInt` on overflow.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Rational;

/// Row-major sparse matrix with exact rational entries and no stored zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseRationalMatrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<Vec<(usize, Rational)>>,
}

impl fmt::Debug for SparseRationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseRationalMatrix({}x{}, nnz={})", self.nrows, self.ncols, self.nnz())
    }
}

impl SparseRationalMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, rows: vec![Vec::new(); nrows] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, n, (0..n).map(|i| (i, i, Rational::one())))
    }

    /// Duplicate positions are summed; zeros are dropped.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: impl IntoIterator<Item = (usize, usize, Rational)>) -> Self {
        let mut acc: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); nrows];
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "entry ({r},{c}) outside {nrows}x{ncols}");
            *acc[r].entry(c).or_insert_with(Rational::zero) += v;
        }
        let rows = acc
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        Self { nrows, ncols, rows }
    }

    pub fn from_int_triplets(nrows: usize, ncols: usize, triplets: impl IntoIterator<Item = (usize, usize, i64)>) -> Self {
        Self::from_triplets(nrows, ncols, triplets.into_iter().map(|(r, c, v)| (r, c, Rational::from_integer(v.into()))))
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        Self::from_triplets(
            nrows,
            ncols,
            rows.iter()
                .enumerate()
                .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, v)| (i, j, v.clone()))),
        )
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        let row = &self.rows[r];
        match row.binary_search_by_key(&c, |(j, _)| *j) {
            Ok(i) => row[i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn row(&self, r: usize) -> &[(usize, Rational)] {
        &self.rows[r]
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(self.ncols, self.nrows, self.triplets().map(|(i, j, v)| (j, i, v.clone())))
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &SparseRationalMatrix) -> SparseRationalMatrix {
        assert_eq!(self.ncols, rhs.nrows, "dimension mismatch in product");
        let mut rows = Vec::with_capacity(self.nrows);
        for row in &self.rows {
            let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
            for (k, a) in row {
                for (j, b) in &rhs.rows[*k] {
                    *acc.entry(*j).or_insert_with(Rational::zero) += a * b;
                }
            }
            rows.push(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        }
        Self { nrows: self.nrows, ncols: rhs.ncols, rows }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.ncols);
        self.rows
            .iter()
            .map(|row| row.iter().fold(Rational::zero(), |acc, (j, a)| acc + a * &v[*j]))
            .collect()
    }

    /// Appends columns given as dense vectors of length `nrows`.
    pub fn with_columns(&self, cols: &[Vec<Rational>]) -> SparseRationalMatrix {
        let extra = cols.len();
        let mut out = self.clone();
        out.ncols += extra;
        for (c, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), self.nrows);
            for (r, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    out.rows[r].push((self.ncols + c, v.clone()));
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::zero(); self.ncols]; self.nrows];
        for (i, j, v) in self.triplets() {
            out[i][j] = v.clone();
        }
        out
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        rank(self)
    }
}

/// Exact rank over the rationals.
pub fn rank(m: &SparseRationalMatrix) -> usize {
    if m.nnz() == 0 {
        return 0;
    }
    let rows = integer_rows(&m.rows);
    let small: Option<Vec<IntRow<i128>>> = rows
        .iter()
        .map(|r| r.iter().map(|(c, x)| x.to_i64().map(|v| (*c, v as i128))).collect())
        .collect();
    if let Some(small) = small {
        if let Some(r) = eliminate(small, m.ncols) {
            return r;
        }
    }
    eliminate(rows, m.ncols).expect("BigInt elimination cannot overflow")
}

fn integer_rows(rows: &[Vec<(usize, Rational)>]) -> Vec<Vec<(usize, BigInt)>> {
    rows.iter()
        .filter(|r| !r.is_empty())
        .map(|r| {
            let lcm = r.iter().fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
            let ints: Vec<(usize, BigInt)> = r.iter().map(|(c, v)| (*c, v.numer() * (&lcm / v.denom()))).collect();
            let g = ints.iter().fold(<BigInt as Zero>::zero(), |acc, (_, v)| Integer::gcd(&acc, v));
            ints.into_iter().map(|(c, v)| (c, v / &g)).collect()
        })
        .collect()
}

trait ExactInt: Clone + PartialEq {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn gcd(&self, other: &Self) -> Self;
    fn abs_is_one(&self) -> bool;
    fn div_exact(&self, d: &Self) -> Self;
    /// `a·x - b·y`, or `None` on overflow.
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self>;
    fn mul(a: &Self, x: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
}

impl ExactInt for i128 {
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn abs_is_one(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        a.checked_mul(*x)?.checked_sub(b.checked_mul(*y)?)
    }
    fn mul(a: &Self, x: &Self) -> Option<Self> {
        a.checked_mul(*x)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
}

impl ExactInt for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn abs_is_one(&self) -> bool {
        self.abs().is_one()
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        Some(a * x - b * y)
    }
    fn mul(a: &Self, x: &Self) -> Option<Self> {
        Some(a * x)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
}

type IntRow<T> = Vec<(usize, T)>;

/// Sparse elimination with Markowitz-style pivoting: the pivot column is a
/// column with fewest nonzeros, the pivot row the shortest row there with a
/// unit entry if one exists, else the shortest row with the smallest entry.
/// Returns `None` if the integer type overflowed.
fn eliminate<T: ExactInt + Magnitude>(rows: Vec<IntRow<T>>, ncols: usize) -> Option<usize> {
    let mut rows: Vec<Option<IntRow<T>>> = rows.into_iter().map(Some).collect();
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ncols];
    for (i, r) in rows.iter().enumerate() {
        for (c, _) in r.as_ref().unwrap() {
            col_rows[*c].insert(i);
        }
    }
    let mut rank = 0;
    loop {
        let Some(col) = (0..ncols).filter(|&c| !col_rows[c].is_empty()).min_by_key(|&c| col_rows[c].len()) else {
            break;
        };
        let pivot_row = *col_rows[col]
            .iter()
            .min_by_key(|&&i| {
                let r = rows[i].as_ref().unwrap();
                let v = &r.iter().find(|(c, _)| *c == col).unwrap().1;
                (!v.abs_is_one(), v.magnitude(), r.len())
            })
            .unwrap();
        let pivot = rows[pivot_row].take().unwrap();
        for (c, _) in &pivot {
            col_rows[*c].remove(&pivot_row);
        }
        let pv = pivot.iter().find(|(c, _)| *c == col).unwrap().1.clone();
        let targets: Vec<usize> = col_rows[col].iter().copied().collect();
        for i in targets {
            let row = rows[i].take().unwrap();
            for (c, _) in &row {
                col_rows[*c].remove(&i);
            }
            let rv = row.iter().find(|(c, _)| *c == col).unwrap().1.clone();
            let new = combine(&row, &rv, &pivot, &pv, col)?;
            for (c, _) in &new {
                col_rows[*c].insert(i);
            }
            if !new.is_empty() {
                rows[i] = Some(new);
            }
        }
        rank += 1;
    }
    Some(rank)
}

/// Size used to prefer small pivots.
trait Magnitude {
    fn magnitude(&self) -> u64;
}

impl Magnitude for i128 {
    fn magnitude(&self) -> u64 {
        self.unsigned_abs().min(u64::MAX as u128) as u64
    }
}

impl Magnitude for BigInt {
    fn magnitude(&self) -> u64 {
        self.bits()
    }
}

/// `a·row - b·pivot` with `a = pv/g`, `b = rv/g`, which clears column `col`;
/// the result is divided by its content.
fn combine<T: ExactInt>(row: &IntRow<T>, rv: &T, pivot: &IntRow<T>, pv: &T, col: usize) -> Option<IntRow<T>> {
    let g = rv.gcd(pv);
    let a = pv.div_exact(&g);
    let b = rv.div_exact(&g);
    let mut out: IntRow<T> = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map(|(c, _)| *c).unwrap_or(usize::MAX);
        let cj = pivot.get(j).map(|(c, _)| *c).unwrap_or(usize::MAX);
        if ci < cj {
            out.push((ci, T::mul(&a, &row[i].1)?));
            i += 1;
        } else if cj < ci {
            out.push((cj, T::mul(&b, &pivot[j].1)?.neg()?));
            j += 1;
        } else {
            if ci != col {
                let v = T::mul_sub(&a, &row[i].1, &b, &pivot[j].1)?;
                if !v.is_zero() {
                    out.push((ci, v));
                }
            }
            i += 1;
            j += 1;
        }
    }
    let mut content = T::zero();
    for (_, v) in &out {
        content = content.gcd(v);
        if content.abs_is_one() {
            return Some(out);
        }
    }
    if !content.is_zero() {
        for (_, v) in out.iter_mut() {
            *v = v.div_exact(&content);
        }
    }
    Some(out)
}

/// Dense reduced row echelon form over the rationals; returns the pivot columns.
pub fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..nrows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..ncols {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right kernel `{x : m x = 0}`.
pub fn kernel_basis(m: &SparseRationalMatrix) -> Vec<Vec<Rational>> {
    let ncols = m.ncols();
    let mut dense = m.to_dense();
    let pivots = rref(&mut dense);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -dense[i][f].clone();
            }
            v
        })
        .collect()
}

/// Whether the column vector `v` lies in the column span of `m`.
pub fn in_column_span(m: &SparseRationalMatrix, v: &[Rational]) -> bool {
    let base = m.rank();
    m.with_columns(&[v.to_vec()]).rank() == base
}

/// Vectors from `candidates` that extend the column span of `m`, chosen
/// greedily; they represent a basis of `span(m, candidates) / span(m)`.
pub fn complement_in_span(m: &SparseRationalMatrix, candidates: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut current = m.clone();
    let mut r = current.rank();
    let mut chosen = Vec::new();
    for v in candidates {
        let next = current.with_columns(&[v.clone()]);
        let nr = next.rank();
        if nr > r {
            chosen.push(v.clone());
            current = next;
            r = nr;
        }
    }
    chosen
}
