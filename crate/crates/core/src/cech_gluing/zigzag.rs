//! Connecting map of the fundamental exact sequence by a zig-zag through
//! the double complex `C^p(L0; C^s(U))` with total differential
//! `D = d + (-1)^p δ`.
//!
//! A cocycle `a` of degree `r` with quotient coefficients is lifted to
//! `x_0` in Čech degree `n-1`. Each step solves `δ x_{i+1} = (-1)^{r+i} d x_i`
//! with the splitting homotopy; the image is `d x_{n-1}`, a Čech 0-cocycle,
//! hence a polynomial-valued cochain of degree `r + n`. Only tuples of
//! weight `<= M` are kept, which is a quotient of the double complex.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cech_gluing::cochain::{sn_cech_act, CechCochain, CechData, CechIndex};
use crate::cech_gluing::split::{split_coboundary, Routing};
use crate::ce_engine::complex::WeightZeroComplex;
use crate::error::{GfError, Result};
use crate::line_fields::{bracket_coefficient, enumerate_exterior_by_key, sort_with_sign, AlgebraKind, ExteriorTuple};
use crate::tensor_modules::{ModuleSpec, ModuleVector, Permutation, Symmetry};
use crate::Rational;

/// L0-cochain known on the tuples of weight `<= m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedCochain {
    pub degree: usize,
    pub m: i64,
    /// Values in the full tensor product (orbit sums expanded).
    pub values: BTreeMap<ExteriorTuple, ModuleVector>,
}

impl TruncatedCochain {
    pub fn zero(degree: usize, m: i64) -> Self {
        Self { degree, m, values: BTreeMap::new() }
    }

    /// Expands a coordinate vector of `cx` in degree `p`.
    pub fn from_coordinates(cx: &WeightZeroComplex, p: usize, coords: &[Rational]) -> Self {
        let spec = cx.spec();
        let mut values: BTreeMap<ExteriorTuple, ModuleVector> = BTreeMap::new();
        for (coord, c) in cx.basis(p).coordinates().iter().zip(coords) {
            if c.is_zero() {
                continue;
            }
            values.entry(coord.tuple.clone()).or_default().add_scaled(&spec.orbit_vector(&coord.monomial), c);
        }
        values.retain(|_, v| !v.is_zero());
        Self { degree: p, m: cx.truncation(), values }
    }

    pub fn coordinates_in(&self, cx: &WeightZeroComplex) -> Vec<Rational> {
        cx.coordinates_of(self.degree, |t| self.values.get(t).cloned().unwrap_or_default())
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZigzagStep {
    pub ce_degree: usize,
    pub cech_degree: usize,
    pub support: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectingImage {
    pub cocycle: TruncatedCochain,
    pub steps: Vec<ZigzagStep>,
}

/// `p`-cochain of L0 with values in Čech `s`-cochains.
#[derive(Clone, Debug, Default)]
struct DoubleCochain {
    ce_degree: usize,
    cech_degree: usize,
    values: BTreeMap<ExteriorTuple, CechCochain>,
}

impl DoubleCochain {
    fn value(&self, t: &ExteriorTuple) -> Option<&CechCochain> {
        self.values.get(t)
    }

    /// CE differential on tuples of weight `<= m`.
    fn ce_differential(&self, data: &CechData, m: i64) -> Result<DoubleCochain> {
        let p = self.ce_degree;
        let s = self.cech_degree;
        let min_key = ((p + 1) * p / 2) as i64;
        let mut out = BTreeMap::new();
        let one = Rational::one();
        for t in enumerate_exterior_by_key(AlgebraKind::L0, p + 1, min_key, m) {
            let x = t.indices();
            let mut acc = CechCochain::zero(s);
            for i in 0..x.len() {
                if let Some(v) = self.value(&t.without_position(i)) {
                    let sign = if i % 2 == 0 { one.clone() } else { -one.clone() };
                    acc.add_cochain(&v.act(data, x[i])?, &sign);
                }
            }
            for i in 0..x.len() {
                for j in i + 1..x.len() {
                    let coeff = bracket_coefficient(x[i], x[j]);
                    let mut args = vec![x[i] + x[j]];
                    args.extend(x.iter().enumerate().filter(|&(r, _)| r != i && r != j).map(|(_, &k)| k));
                    let Some((sign, sorted)) = sort_with_sign(&args) else { continue };
                    let Some(v) = self.value(&ExteriorTuple::new(sorted).expect("sorted")) else { continue };
                    let parity = if (i + j) % 2 == 0 { 1 } else { -1 };
                    acc.add_cochain(v, &Rational::from_integer((parity * coeff * sign as i64).into()));
                }
            }
            if !acc.is_zero() {
                out.insert(t, acc);
            }
        }
        Ok(DoubleCochain { ce_degree: p + 1, cech_degree: s, values: out })
    }

    fn support(&self) -> usize {
        self.values.len()
    }
}

fn reynolds(data: &CechData, c: &CechCochain, group: &[Permutation]) -> Result<CechCochain> {
    let mut out = CechCochain::zero(c.degree());
    let chi = data.uses_sign_character();
    for sigma in group {
        out.add_cochain(&sn_cech_act(data, sigma, c, chi)?, &Rational::one());
    }
    Ok(out.scaled(&Rational::new(1.into(), (group.len() as i64).into())))
}

/// Image under the connecting map of a cocycle `a` with coefficients in
/// `data.quotient_spec()`. The result has degree `a.degree + n` and is known
/// on tuples of weight `<= m`. For symmetric data every split is averaged
/// over `S_n` so the image stays invariant.
pub fn connecting_map(data: &CechData, a: &TruncatedCochain, m: i64, routing: Routing) -> Result<ConnectingImage> {
    let n = data.n();
    let r = a.degree;
    let group = if data.symmetry() != Symmetry::None { Permutation::all(n) } else { Vec::new() };
    let top = CechIndex::full(n);
    let mut x = DoubleCochain { ce_degree: r, cech_degree: n - 1, values: BTreeMap::new() };
    for (t, v) in &a.values {
        if t.weight() > m {
            continue;
        }
        let mut c = CechCochain::zero(n - 1);
        c.add(top.clone(), v, &Rational::one());
        x.values.insert(t.clone(), c);
    }
    let mut steps = vec![ZigzagStep { ce_degree: r, cech_degree: n - 1, support: x.support() }];
    for i in 0..n - 1 {
        let y = x.ce_differential(data, m)?;
        let sign = if (r + i) % 2 == 0 { Rational::one() } else { -Rational::one() };
        let mut next = DoubleCochain { ce_degree: r + i + 1, cech_degree: n - 2 - i, values: BTreeMap::new() };
        for (t, c) in &y.values {
            let split = split_coboundary(data, c, routing).map_err(|e| match e {
                GfError::LiftFailure { cech_degree, message } => GfError::LiftFailure {
                    cech_degree,
                    message: format!("{message} at tuple {t}"),
                },
                other => other,
            })?;
            if !split.obstruction.is_zero() {
                return Err(GfError::LiftFailure {
                    cech_degree: c.degree(),
                    message: format!("nonzero quotient-coefficient obstruction at tuple {t}: the input is not a cocycle"),
                });
            }
            let mut pre = split.preimage.scaled(&sign);
            if !group.is_empty() {
                pre = reynolds(data, &pre, &group)?;
            }
            if !pre.is_zero() {
                next.values.insert(t.clone(), pre);
            }
        }
        steps.push(ZigzagStep { ce_degree: next.ce_degree, cech_degree: next.cech_degree, support: next.support() });
        x = next;
    }
    let last = x.ce_differential(data, m)?;
    let mut values = BTreeMap::new();
    for (t, c) in &last.values {
        let mut comps = c.components();
        let (_, first) = comps.next().expect("nonzero Čech 0-cochain");
        let agree = c.components().count() == n && c.components().all(|(_, v)| v == first);
        let polynomial = first.terms().all(|(mono, _)| data.bad_set(&mono.0).is_empty());
        if !agree || !polynomial {
            return Err(GfError::LiftFailure {
                cech_degree: 0,
                message: format!("image at tuple {t} is not a global polynomial section"),
            });
        }
        values.insert(t.clone(), first.clone());
    }
    steps.push(ZigzagStep { ce_degree: r + n, cech_degree: 0, support: values.len() });
    Ok(ConnectingImage { cocycle: TruncatedCochain { degree: r + n, m, values }, steps })
}

/// The quotient module complex and polynomial module complex used around
/// the connecting map, both truncated compatibly at `m`.
pub(crate) fn side_complexes(data: &CechData, q_max: usize, m: i64) -> Result<(WeightZeroComplex, WeightZeroComplex, i64)> {
    let quotient: ModuleSpec = data.quotient_spec();
    let m = match quotient.weight_bounds().1 {
        Some(top) => m.max(top),
        None => m,
    };
    let a = WeightZeroComplex::build(AlgebraKind::L0, &quotient, q_max + 1, m)?;
    let p = WeightZeroComplex::build(AlgebraKind::L0, data.polynomial_spec(), q_max + 1, m)?;
    Ok((a, p, m))
}
