//! The named cocycles, with `e_k` evaluated as `ξ = z^{k+1}`.
//!
//! ```text
//! nabla2      e_k ↦ ξ'''(z) dz^2            = (k+1)k(k-1) z^{k-2} dz^2
//! nabla0[j]   e_k ↦ ξ'(z_j)                 = (k+1) z_j^k
//! v[i]        (e_a, e_b) ↦ ∫_{z_{i-1}}^{z_i} det(ξ_a' ξ_b'; ξ_a'' ξ_b'') dz
//! u[{..}]     (e_a, e_b) ↦ Σ_{i in block} ∫_0^{z_i} det(...) dz
//! ```
//!
//! with `det = (a+1)(b+1)(b-a) z^{a+b-1}`.

use crate::cocycle_lab::cochain::{cup, SymbolicCochain};
use crate::error::{GfError, Result};
use crate::line_fields::AlgebraKind;
use crate::tensor_modules::{FactorSpec, ModuleSpec, ModuleVector, Symmetry, TensorMonomial};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NamedCocycle {
    Nabla2,
    Nabla0(usize),
    V(usize),
    U(Vec<usize>),
}

impl NamedCocycle {
    /// Largest marked point referenced.
    pub fn marked_points(&self) -> usize {
        match self {
            NamedCocycle::Nabla2 => 0,
            NamedCocycle::Nabla0(j) | NamedCocycle::V(j) => *j,
            NamedCocycle::U(block) => block.iter().copied().max().unwrap_or(0),
        }
    }

    pub fn is_function_valued(&self) -> bool {
        !matches!(self, NamedCocycle::Nabla2)
    }

    fn parse_one(s: &str, offset: usize) -> Result<Self> {
        let err = |message: String| GfError::Parse { position: offset, message };
        let t = s.trim();
        let index = |inner: &str| -> Result<usize> {
            inner.trim().parse::<usize>().map_err(|_| err(format!("expected a marked point index, found `{inner}`")))
        };
        if t == "nabla2" {
            return Ok(NamedCocycle::Nabla2);
        }
        let (head, rest) = t.split_once('[').ok_or_else(|| err(format!("unknown cocycle `{t}`")))?;
        let inner = rest.strip_suffix(']').ok_or_else(|| err(format!("missing `]` in `{t}`")))?;
        match head.trim() {
            "nabla0" => Ok(NamedCocycle::Nabla0(index(inner)?)),
            "v" => Ok(NamedCocycle::V(index(inner)?)),
            "u" => {
                let body = inner
                    .trim()
                    .strip_prefix('{')
                    .and_then(|b| b.strip_suffix('}'))
                    .ok_or_else(|| err(format!("u expects a block `{{i1,..}}`, found `{inner}`")))?;
                let mut block = body.split(',').map(index).collect::<Result<Vec<_>>>()?;
                block.sort_unstable();
                block.dedup();
                Ok(NamedCocycle::U(block))
            }
            other => Err(err(format!("unknown cocycle `{other}`"))),
        }
    }

    /// Builds the cochain; function-valued ones take values in `T(0,0)^⊗n`.
    pub fn build(&self, n: usize) -> Result<SymbolicCochain> {
        let check = |j: usize, min: usize| {
            if j < min || j > n {
                Err(GfError::InvalidMarkedIndex { index: j, min, max: n })
            } else {
                Ok(())
            }
        };
        match self {
            NamedCocycle::Nabla2 => Ok(nabla2()),
            NamedCocycle::Nabla0(j) => {
                check(*j, 1)?;
                Ok(nabla0(*j, n))
            }
            NamedCocycle::V(i) => {
                check(*i, 2)?;
                Ok(v_cocycle(*i, n))
            }
            NamedCocycle::U(block) => {
                if block.is_empty() {
                    return Err(GfError::InvalidArgument("u needs a nonempty block".into()));
                }
                for &i in block {
                    check(i, 1)?;
                }
                Ok(u_cocycle(block, n))
            }
        }
    }
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `z_j^e` among `n` marked points.
pub fn marked_variable(n: usize, j: usize, e: i64) -> ModuleVector {
    let mut exps = vec![0; n];
    exps[j - 1] = e;
    ModuleVector::monomial(TensorMonomial(exps))
}

fn nabla2() -> SymbolicCochain {
    let q = ModuleSpec::power(FactorSpec::density(2, 0), 1);
    SymbolicCochain::new("nabla2", 1, AlgebraKind::W1, q, |x| {
        let k = x[0];
        let c = (k + 1) * k * (k - 1);
        if c == 0 {
            ModuleVector::zero()
        } else {
            ModuleVector::term(TensorMonomial(vec![k - 2]), int(c))
        }
    })
}

fn nabla0(j: usize, n: usize) -> SymbolicCochain {
    SymbolicCochain::new(format!("nabla0[{j}]"), 1, AlgebraKind::W1, ModuleSpec::functions(n), move |x| {
        let k = x[0];
        marked_variable(n, j, k).scaled(&int(k + 1))
    })
}

/// `∫ det` for the pair `(a, b)`: coefficient of `z^{a+b}` in the antiderivative.
fn det_integral(a: i64, b: i64) -> Rational {
    let c = (a + 1) * (b + 1) * (b - a);
    if c == 0 {
        Rational::from_integer(0.into())
    } else {
        Rational::new(c.into(), (a + b).into())
    }
}

fn v_cocycle(i: usize, n: usize) -> SymbolicCochain {
    SymbolicCochain::new(format!("v[{i}]"), 2, AlgebraKind::W1, ModuleSpec::functions(n), move |x| {
        let (a, b) = (x[0], x[1]);
        let c = det_integral(a, b);
        let diff = &marked_variable(n, i, a + b) - &marked_variable(n, i - 1, a + b);
        diff.scaled(&c)
    })
}

fn u_cocycle(block: &[usize], n: usize) -> SymbolicCochain {
    let block = block.to_vec();
    let name = format!("u[{{{}}}]", block.iter().map(ToString::to_string).collect::<Vec<_>>().join(","));
    SymbolicCochain::new(name, 2, AlgebraKind::L0, ModuleSpec::functions(n), move |x| {
        let (a, b) = (x[0], x[1]);
        let c = det_integral(a, b);
        let mut out = ModuleVector::zero();
        for &i in &block {
            out.add_scaled(&marked_variable(n, i, a + b), &c);
        }
        out
    })
}

/// Parses `"nabla2"`, `"nabla0[j]"`, `"v[i]"`, `"u[{i1,..}]"` and products
/// joined by `*`. Function-valued factors use `n` marked points, defaulting
/// to the largest index mentioned. A product of `nabla2` factors only is
/// tagged with the alternating power `alt^m T(2,0)` as target.
pub fn make_named_cocycle(text: &str, n: Option<usize>) -> Result<SymbolicCochain> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '[' | '{' => depth += 1,
            ']' | '}' => depth -= 1,
            '*' if depth == 0 => {
                parts.push((start, &text[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push((start, &text[start..]));
    let named = parts
        .iter()
        .map(|&(pos, s)| NamedCocycle::parse_one(s, pos))
        .collect::<Result<Vec<_>>>()?;
    let needed = named.iter().map(NamedCocycle::marked_points).max().unwrap_or(0);
    let n = n.unwrap_or(needed);
    let mut iter = named.iter();
    let first = iter.next().expect("split yields at least one part");
    let mut acc = first.build(n)?;
    for c in iter {
        acc = cup(&acc, &c.build(n)?)?;
    }
    if named.len() > 1 && named.iter().all(|c| *c == NamedCocycle::Nabla2) {
        let alt = ModuleSpec::symmetric_power(FactorSpec::density(2, 0), named.len(), Symmetry::Alt);
        acc = acc.with_target(alt);
    }
    Ok(acc.renamed(text.trim()))
}
