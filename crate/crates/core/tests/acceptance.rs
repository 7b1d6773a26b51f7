//! Acceptance harness: one PASS/FAIL line per criterion.
//!
//! Every engine number is checked against an oracle computed here from
//! scratch (brute-force enumeration, hand-assembled matrices, series
//! expansion) or against a value quoted from the paper.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::mpsc;
use std::time::{Duration, Instant};

use gf_core::ce_engine::betti::{level_trace, LevelTrace};
use gf_core::ce_engine::{betti, invariants_dim, shapiro_reduce, Ladder, Status, WeightZeroComplex};
use gf_core::cech_gluing::{cech_delta, cech_h, split_top, CechCochain, CechData, CechIndex, Routing};
use gf_core::cocycle_lab::{certify_via_shapiro, cup, make_named_cocycle, nontriviality_certificate, verify_cocycle, SymbolicCochain};
use gf_core::{AlgebraKind, FactorSpec, ModuleSpec, ModuleVector, Rational, Symmetry, TensorMonomial};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

// ---------------------------------------------------------------------------
// oracle helpers

/// Rank over Q of a small dense integer matrix, by fraction-free Bareiss
/// elimination in i128.
fn oracle_rank(mut m: Vec<Vec<i128>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev = 1i128;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, p);
        for r in rank + 1..rows {
            for k in c + 1..cols {
                m[r][k] = (m[rank][c] * m[r][k] - m[r][c] * m[rank][k]) / prev;
            }
            m[r][c] = 0;
        }
        prev = m[rank][c];
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Strictly increasing tuples of length `p` from `lo..` with sum `w`.
fn tuples_with_sum(lo: i64, p: usize, w: i64) -> Vec<Vec<i64>> {
    fn rec(start: i64, p: usize, w: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if p == 0 {
            if w == 0 {
                out.push(cur.clone());
            }
            return;
        }
        // remaining p entries are at least start, start+1, ...
        let mut k = start;
        while k * p as i64 + (p as i64 * (p as i64 - 1)) / 2 <= w {
            cur.push(k);
            rec(k + 1, p - 1, w - k, cur, out);
            cur.pop();
            k += 1;
        }
    }
    let mut out = Vec::new();
    rec(lo, p, w, &mut Vec::new(), &mut out);
    out
}

/// Sort with the sign of the sorting permutation; `None` on a repeat.
fn sorted_sign(v: &[i64]) -> Option<(i128, Vec<i64>)> {
    let mut s = v.to_vec();
    let mut sign = 1;
    for i in 0..s.len() {
        for j in 0..s.len() - 1 - i {
            if s[j] > s[j + 1] {
                s.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if s.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((sign, s))
    }
}

/// Chevalley–Eilenberg differential of `L0` with coefficients in the line
/// `1(ν)`, assembled by hand: `e_0` acts by `ν`, every other `e_k` by 0,
/// `[e_i, e_j] = (j - i) e_{i+j}`.
fn oracle_line_cohomology(nu: i64, q_max: usize) -> Vec<usize> {
    let basis: Vec<Vec<Vec<i64>>> = (0..=q_max + 1).map(|p| tuples_with_sum(0, p, nu)).collect();
    let matrix = |p: usize| -> Vec<Vec<i128>> {
        let src = &basis[p];
        let tgt = &basis[p + 1];
        let mut m = vec![vec![0i128; src.len()]; tgt.len()];
        for (r, x) in tgt.iter().enumerate() {
            for i in 0..x.len() {
                let act = if x[i] == 0 { nu as i128 } else { 0 };
                if act != 0 {
                    let rest: Vec<i64> = x.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, v)| *v).collect();
                    if let Some(c) = src.iter().position(|s| *s == rest) {
                        m[r][c] += if i % 2 == 0 { act } else { -act };
                    }
                }
                for j in i + 1..x.len() {
                    let coeff = (x[j] - x[i]) as i128;
                    if coeff == 0 {
                        continue;
                    }
                    let mut args = vec![x[i] + x[j]];
                    args.extend(x.iter().enumerate().filter(|(k, _)| *k != i && *k != j).map(|(_, v)| *v));
                    let Some((sign, s)) = sorted_sign(&args) else { continue };
                    if let Some(c) = src.iter().position(|t| *t == s) {
                        let e = if (i + j) % 2 == 0 { 1 } else { -1 };
                        m[r][c] += e * sign * coeff;
                    }
                }
            }
        }
        m
    };
    let ranks: Vec<usize> = (0..=q_max).map(|p| oracle_rank(matrix(p))).collect();
    (0..=q_max)
        .map(|q| basis[q].len() - ranks[q] - if q == 0 { 0 } else { ranks[q - 1] })
        .collect()
}

/// `(dc)(x_0, ..., x_p)` assembled directly from the cochain's values.
fn oracle_differential(c: &SymbolicCochain, x: &[i64]) -> ModuleVector {
    let spec = c.target().without_symmetry();
    let mut out = ModuleVector::zero();
    for i in 0..x.len() {
        let rest: Vec<i64> = x.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, v)| *v).collect();
        let v = c.eval(&rest).act(&spec, x[i]).expect("action");
        out.add_scaled(&v, &int(if i % 2 == 0 { 1 } else { -1 }));
    }
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let coeff = x[j] - x[i];
            if coeff == 0 || !c.domain().contains_index(x[i] + x[j]) {
                continue;
            }
            let mut args = vec![x[i] + x[j]];
            args.extend(x.iter().enumerate().filter(|(k, _)| *k != i && *k != j).map(|(_, v)| *v));
            let e = if (i + j) % 2 == 0 { 1 } else { -1 };
            out.add_scaled(&c.eval(&args), &int(e * coeff));
        }
    }
    out
}

fn subsets(lo: i64, hi: i64, size: usize) -> Vec<Vec<i64>> {
    if size == 0 {
        return vec![Vec::new()];
    }
    (lo..=hi)
        .flat_map(|a| {
            subsets(a + 1, hi, size - 1).into_iter().map(move |mut r| {
                r.insert(0, a);
                r
            })
        })
        .collect()
}

/// Truncated power series product.
fn series_mul(a: &[i64], b: &[i64], len: usize) -> Vec<i64> {
    let mut out = vec![0; len];
    for (i, x) in a.iter().enumerate().take(len) {
        for (j, y) in b.iter().enumerate() {
            if i + j < len {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Poincaré series of `H*(P_n) ⊗ C[v_2..v_n] ⊗ Λ(∇_0^1..∇_0^n)` with
/// `P(P_n) = Π_{k<n} (1 + k t)`, `deg v = 2`, `deg ∇_0 = 1`.
fn oracle_series(n: usize, len: usize) -> Vec<i64> {
    let mut s = vec![1i64];
    s.resize(len, 0);
    for k in 1..n as i64 {
        s = series_mul(&s, &[1, k], len);
    }
    let polynomial_generator: Vec<i64> = (0..len).map(|i| if i % 2 == 0 { 1 } else { 0 }).collect();
    for _ in 2..=n {
        s = series_mul(&s, &polynomial_generator, len);
    }
    for _ in 0..n {
        s = series_mul(&s, &[1, 1], len);
    }
    s
}

/// Monomials of weight `w` in the box `[-r, r]^n` with every exponent good
/// (`top = false`) or every exponent bad (`top = true`).
fn oracle_monomials(data: &CechData, w: i64, r: i64, top: bool) -> Vec<TensorMonomial> {
    let n = data.n();
    let mut out = Vec::new();
    let mut cur = vec![-r; n];
    loop {
        let all = (0..n).all(|i| data.is_bad(&cur, i) == top);
        let weight: i64 = data.line().unwrap_or(0) + (0..n).map(|i| cur[i] + data.nu(i)).sum::<i64>();
        if all && weight == w {
            out.push(TensorMonomial::new(cur.clone()));
        }
        let mut i = 0;
        while i < n {
            cur[i] += 1;
            if cur[i] <= r {
                break;
            }
            cur[i] = -r;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    out.sort();
    out
}

// ---------------------------------------------------------------------------
// criteria

fn criterion_1() -> Outcome {
    let spec = ModuleSpec::line_only(2);
    let report = betti(AlgebraKind::L0, &spec, 3, &Ladder::default()).unwrap();
    let engine = report.betti();
    let oracle = oracle_line_cohomology(2, 3);
    let exact = report.q.iter().all(|d| d.status == Status::Exact);
    // the same comparison for neighbouring lines
    let others = (0..=6).all(|nu| {
        let r = betti(AlgebraKind::L0, &ModuleSpec::line_only(nu), 3, &Ladder::default()).unwrap();
        r.betti() == oracle_line_cohomology(nu, 3)
    });
    outcome(
        engine == vec![0, 1, 1, 0] && oracle == engine && exact && others,
        format!("H^q(L0; 1(2)) = {engine:?}, brute-force oracle {oracle:?}, exact = {exact}, lines 1(0..6) agree = {others}"),
    )
}

fn criterion_2() -> Outcome {
    let source = ModuleSpec::power(FactorSpec::density(2, 0), 1);
    let red = shapiro_reduce(&source).unwrap();
    let w1 = betti(AlgebraKind::W1, &source, 3, &Ladder::default()).unwrap();
    let l0 = betti(AlgebraKind::L0, red.target(), 3, &Ladder::default()).unwrap();
    let settled = w1.all_settled();

    // chain map commutes with d at a fixed truncation
    let m = 8;
    let src = WeightZeroComplex::build(AlgebraKind::W1, &source, 3, m).unwrap();
    let tgt = WeightZeroComplex::build(AlgebraKind::L0, red.target(), 3, m).unwrap();
    let commutes = (0..3).all(|p| {
        let f_p = red.chain_map(&src, &tgt, p).unwrap();
        let f_p1 = red.chain_map(&src, &tgt, p + 1).unwrap();
        f_p1.mul(src.differential(p)).to_dense() == tgt.differential(p).mul(&f_p).to_dense()
    });

    let nabla2 = make_named_cocycle("nabla2", None).unwrap();
    let (reduced, cert) = certify_via_shapiro(&nabla2, 8).unwrap();
    // (k+1)k(k-1) z^{k-2} at k = 2 evaluates to 6 at the origin
    let value = reduced.eval(&[2]);
    let expected = ModuleVector::term(TensorMonomial::new(vec![]), int(6));
    outcome(
        w1.betti() == l0.betti() && l0.betti() == vec![0, 1, 1, 0] && settled && commutes && cert.certified && value == expected,
        format!(
            "W1;T(2,0) = {:?} ({}), L0;1(2) = {:?}, chain map commutes = {commutes}, ev(nabla2)(e2) = {value}, certified = {}",
            w1.betti(),
            if settled { "stabilized" } else { "not stabilized" },
            l0.betti(),
            cert.certified
        ),
    )
}

fn criterion_3() -> Outcome {
    let mut names: Vec<String> = vec!["nabla2".into()];
    names.extend((1..=3).map(|j| format!("nabla0[{j}]")));
    names.extend((2..=3).map(|i| format!("v[{i}]")));
    for block in [vec![1], vec![2], vec![3], vec![1, 2], vec![1, 3], vec![2, 3], vec![1, 2, 3]] {
        let inner: Vec<String> = block.iter().map(|b| b.to_string()).collect();
        names.push(format!("u[{{{}}}]", inner.join(",")));
    }
    let k = 8;
    let mut failures = Vec::new();
    let mut oracle_checked = 0;
    for name in &names {
        let c = make_named_cocycle(name, Some(3)).unwrap();
        if !verify_cocycle(&c, k).pass {
            failures.push(format!("{name} (engine)"));
        }
        let lo = c.domain().min_index();
        for t in subsets(lo, k, c.arity() + 1) {
            oracle_checked += 1;
            if !oracle_differential(&c, &t).is_zero() {
                failures.push(format!("{name} (oracle) at {t:?}"));
                break;
            }
        }
    }

    // Leibniz on non-cocycles: d(a ∪ b) = da ∪ b + (-1)^{|a|} a ∪ db
    let a = SymbolicCochain::new("a", 1, AlgebraKind::W1, ModuleSpec::functions(2), |x| {
        ModuleVector::term(TensorMonomial::new(vec![x[0] + 2, 1]), int(x[0] + 3))
    });
    let b = SymbolicCochain::new("b", 1, AlgebraKind::W1, ModuleSpec::functions(2), |x| {
        ModuleVector::term(TensorMonomial::new(vec![0, x[0] + 1]), int(x[0] * x[0] - 2))
    });
    let lhs = cup(&a, &b).unwrap();
    let da_b = cup(&a.differential(), &b).unwrap();
    let a_db = cup(&a, &b.differential()).unwrap();
    let tuples = subsets(-1, 10, 3);
    let mut leibniz_ok = tuples.len() >= 200;
    let mut nonzero = 0;
    for t in &tuples {
        let l = oracle_differential(&lhs, t);
        let mut r = da_b.eval(t);
        r.add_scaled(&a_db.eval(t), &int(-1));
        if !l.is_zero() {
            nonzero += 1;
        }
        let mut diff = l;
        diff.add_scaled(&r, &int(-1));
        if !diff.is_zero() {
            leibniz_ok = false;
        }
    }
    outcome(
        failures.is_empty() && leibniz_ok && nonzero > 0,
        format!(
            "{} cocycles at K = {k} ({oracle_checked} oracle tuples), failures {:?}; Leibniz on {} tuples ({nonzero} nonzero) = {leibniz_ok}",
            names.len(),
            failures,
            tuples.len()
        ),
    )
}

/// Kernel of `e_1, e_2` on weight-`w` polynomials of degree `m` in the
/// commuting variables `q_a = z^a dz^2`, `a <= -1`, with
/// `e_k q_a = (a + 2(k+1)) q_{a+k}` and `q_b = 0` for `b >= 0`.
fn oracle_invariants(m: usize, w: i64) -> usize {
    // multisets a_1 <= ... <= a_m of exponents <= -1 with Σ(a_i + 2) = w
    fn multisets(m: usize, max: i64, sum: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if m == 0 {
            if sum == 0 {
                out.push(cur.clone());
            }
            return;
        }
        // remaining entries are all <= a and each contributes a + 2 <= 1
        let mut a = max;
        while (a + 2) * m as i64 >= sum {
            cur.push(a);
            multisets(m - 1, a, sum - (a + 2), cur, out);
            cur.pop();
            a -= 1;
        }
    }
    let basis_at = |w: i64| {
        let mut out = Vec::new();
        multisets(m, -1, w, &mut Vec::new(), &mut out);
        out.iter_mut().for_each(|v| v.sort());
        out
    };
    let src = basis_at(w);
    if src.is_empty() {
        return 0;
    }
    let mut rows: Vec<Vec<i128>> = Vec::new();
    for k in [1i64, 2] {
        let tgt = basis_at(w + k);
        let mut block = vec![vec![0i128; src.len()]; tgt.len()];
        for (c, mono) in src.iter().enumerate() {
            for i in 0..mono.len() {
                let a = mono[i];
                if a + k >= 0 {
                    continue;
                }
                let coeff = (a + 2 * (k + 1)) as i128;
                let mut img = mono.clone();
                img[i] = a + k;
                img.sort();
                let r = tgt.iter().position(|t| *t == img).expect("image has weight w + k");
                block[r][c] += coeff;
            }
        }
        rows.extend(block);
    }
    src.len() - oracle_rank(rows)
}

fn criterion_4() -> Outcome {
    let mut bad = Vec::new();
    for m in 1..=4usize {
        let spec = ModuleSpec::symmetric_power(FactorSpec::quotient(2, 0), m, Symmetry::Sym);
        for w in -8..=m as i64 {
            let engine = invariants_dim(&spec, w).unwrap();
            let oracle = oracle_invariants(m, w);
            let expected = usize::from(w == m as i64);
            if engine != expected || oracle != expected {
                bad.push((m, w, engine, oracle));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("dim H^0(L1; S^m Q^×/Q)_w for m ≤ 4, -8 ≤ w ≤ m: 1 exactly at w = m; mismatches (m, w, engine, oracle) {bad:?}"),
    )
}

fn criterion_5() -> Outcome {
    let spec = ModuleSpec::tensor(Some(0), vec![FactorSpec::quotient(0, 0), FactorSpec::quotient(0, 0)]);
    // oracle: the top module weight is ν0 + Σ(ν_i - λ_i - 1) = -2, below every L0 tuple weight
    let top = 0 + 2 * (0 - 0 - 1);
    let cx = WeightZeroComplex::build(AlgebraKind::L0, &spec, 6, 12).unwrap();
    let dims: Vec<usize> = (0..=6).map(|q| cx.dim(q)).collect();
    outcome(
        dims.iter().all(|&d| d == 0) && spec.weight_bounds().1 == Some(top) && top < 0,
        format!("dim C^q(L0; 1(0) ⊗ (Q(0,0)q)^2) for q ≤ 6 = {dims:?}, top weight {top}"),
    )
}

fn criterion_6() -> Outcome {
    let ladder = Ladder::new(8, 2, 3);
    let mut lines = Vec::new();
    let mut pass = true;
    for (n, expected) in [(1usize, vec![1usize, 1, 0]), (2, vec![1, 3, 4])] {
        let spec = ModuleSpec::power(FactorSpec::density(0, 0), n);
        let report = betti(AlgebraKind::W1, &spec, 2, &ladder).unwrap();
        let series: Vec<usize> = oracle_series(n, 3).into_iter().map(|x| x as usize).collect();
        let ok = report.all_settled() && report.betti() == series && series == expected;
        pass &= ok;
        let levels: Vec<i64> = report.trace.iter().map(|t| t.m).collect();
        lines.push(format!("n = {n}: {:?} (series {series:?}, levels {levels:?})", report.betti()));
    }
    outcome(pass, lines.join("; "))
}

fn criterion_7() -> Outcome {
    let spec = ModuleSpec::symmetric_power(FactorSpec::density(2, 0), 2, Symmetry::Alt);
    let report = betti(AlgebraKind::W1, &spec, 2, &Ladder::new(8, 2, 3)).unwrap();
    let low = report.q[..2].iter().all(|d| d.betti == 0 && d.status == Status::Stabilized);
    let square = make_named_cocycle("nabla2*nabla2", None).unwrap();
    let is_cocycle = verify_cocycle(&square, 8).pass;
    let cert = nontriviality_certificate(&square, AlgebraKind::W1, &spec, 8).unwrap();
    outcome(
        low && is_cocycle && cert.certified,
        format!(
            "H^q(W1; Λ^2 Q) = {:?} ({:?}); (∇2)^2 cocycle = {is_cocycle}, nonzero in H^2 certified at M = {} = {}",
            report.betti(),
            report.q.iter().map(|d| d.status).collect::<Vec<_>>(),
            cert.m,
            cert.certified
        ),
    )
}

fn criterion_8() -> Outcome {
    let spec = ModuleSpec::power(FactorSpec::density(2, 1), 1);
    // oracle: exponents a >= -1 give weights a + 2 >= 1, so no weight-0 vector
    let lowest = -1 + 2;
    let dims: Vec<usize> = [4, 8, 12].iter().map(|&m| WeightZeroComplex::build(AlgebraKind::L0, &spec, 1, m).unwrap().dim(0)).collect();
    let report = betti(AlgebraKind::L0, &spec, 0, &Ladder::new(4, 2, 2)).unwrap();
    outcome(
        dims.iter().all(|&d| d == 0) && report.betti() == vec![0] && lowest > 0,
        format!("dim C^0(L0; T(2,1)) at M = 4, 8, 12: {dims:?}; H^0 = {:?}", report.betti()),
    )
}

fn criterion_9() -> Outcome {
    let mut problems = Vec::new();
    let mut checked = 0;
    for n in [2usize, 3] {
        for (nu, lambda) in [(0, 0), (2, 0), (1, 1)] {
            let data = CechData::new(&ModuleSpec::power(FactorSpec::density(nu, lambda), n)).unwrap();
            for w in -10..=10 {
                let h0 = cech_h(&data, 0, w).unwrap();
                let mut got = h0.monomials.clone();
                got.sort();
                if got != oracle_monomials(&data, w, 14, false) {
                    problems.push(format!("n={n} T({nu},{lambda}) H^0 w={w}"));
                }
                let top = cech_h(&data, n - 1, w).unwrap();
                let mut got = top.monomials.clone();
                got.sort();
                if got != oracle_monomials(&data, w, 14, true) {
                    problems.push(format!("n={n} T({nu},{lambda}) H^{} w={w}", n - 1));
                }
                for q in 1..n - 1 {
                    if !cech_h(&data, q, w).unwrap().monomials.is_empty() {
                        problems.push(format!("n={n} H^{q} w={w} nonzero"));
                    }
                }
            }
            // reconstruction on every window monomial with |w| <= 10
            let r = if n == 2 { 6 } else { 4 };
            let window: Vec<TensorMonomial> = (-10..=10)
                .flat_map(|w| {
                    let mut v = Vec::new();
                    let mut cur = vec![-r; n];
                    loop {
                        if data.weight(&cur) == w {
                            v.push(TensorMonomial::new(cur.clone()));
                        }
                        let mut i = 0;
                        while i < n {
                            cur[i] += 1;
                            if cur[i] <= r {
                                break;
                            }
                            cur[i] = -r;
                            i += 1;
                        }
                        if i == n {
                            break;
                        }
                    }
                    v
                })
                .collect();
            for a in window {
                let s = ModuleVector::monomial(a.clone());
                let mut c = CechCochain::zero(n - 1);
                c.add(CechIndex::full(n), &s, &int(1));
                for routing in [Routing::Least, Routing::Greatest] {
                    checked += 1;
                    let sp = split_top(&data, &s, routing).unwrap();
                    let mut back = cech_delta(&data, &sp.preimage);
                    back.add_cochain(&sp.obstruction, &int(1));
                    let all_bad = data.bad_set(a.exponents()).len() == n;
                    if back != c || sp.obstruction.is_zero() == all_bad {
                        problems.push(format!("split of {a} ({routing:?})"));
                    }
                }
            }
        }
    }
    outcome(
        problems.is_empty(),
        format!("n = 2, 3, |w| ≤ 10: H^0, H^(n-1) match brute-force weight spaces, middle degrees empty; {checked} reconstructions; problems {problems:?}"),
    )
}

fn criterion_10(budget: Duration) -> Outcome {
    let source = ModuleSpec::power(FactorSpec::density(2, 0), 5);
    let red = shapiro_reduce(&source).unwrap();
    let target = red.target().clone();
    let ladder = Ladder::new(10, 2, 3);
    let (tx, rx) = mpsc::channel::<(LevelTrace, f64)>();
    std::thread::spawn(move || {
        for i in 0..ladder.max_levels {
            let t0 = Instant::now();
            let Ok(cx) = WeightZeroComplex::build(AlgebraKind::L0, &target, 5, ladder.level(i)) else { return };
            let trace = level_trace(&cx, 4);
            if tx.send((trace, t0.elapsed().as_secs_f64())).is_err() {
                return;
            }
        }
    });
    let deadline = Instant::now() + budget;
    let mut traces: Vec<LevelTrace> = Vec::new();
    let mut lines = Vec::new();
    let mut stable = None;
    while let Some(left) = deadline.checked_duration_since(Instant::now()) {
        match rx.recv_timeout(left) {
            Ok((t, secs)) => {
                lines.push(format!("M={} dims {:?} betti {:?} ({secs:.1}s)", t.m, t.dims, t.betti));
                traces.push(t);
                if traces.len() >= ladder.window {
                    let tail = &traces[traces.len() - ladder.window..];
                    if tail.iter().all(|t| t.betti[4] == tail[0].betti[4]) {
                        stable = Some(tail[0].betti[4]);
                        break;
                    }
                }
            }
            Err(mpsc::RecvTimeoutError::Timeout) => break,
            Err(mpsc::RecvTimeoutError::Disconnected) => break,
        }
    }
    let status = match stable {
        Some(b) => format!("stabilized H^4 = {b}"),
        None => format!("not stabilized within {}s", budget.as_secs()),
    };
    outcome(
        stable == Some(3),
        format!("H^4(W1; Q^⊗5) via L0; {}: paper value 3, {status}; trace: {}", red.target(), lines.join(" | ")),
    )
}

fn main() {
    let stretch_budget = std::env::var("GF_STRETCH_BUDGET_SECS").ok().and_then(|s| s.parse().ok()).unwrap_or(120);
    let criteria: Vec<(usize, &str, f64, Box<dyn Fn() -> Outcome>)> = vec![
        (1, "exact finite complex H^q(L0; 1(2))", 1.0, Box::new(criterion_1)),
        (2, "Shapiro consistency and the class of nabla2", 5.0, Box::new(criterion_2)),
        (3, "cocycle suite and Leibniz rule", 30.0, Box::new(criterion_3)),
        (4, "L1-invariants of S^m of the quotient", 30.0, Box::new(criterion_4)),
        (5, "degenerate quotient complex vanishes", 1.0, Box::new(criterion_5)),
        (6, "stabilized Betti numbers against the series", 300.0, Box::new(criterion_6)),
        (7, "alternating square and (nabla2)^2", 600.0, Box::new(criterion_7)),
        (8, "H^0(L0; T(2,1)) = 0", 1.0, Box::new(criterion_8)),
        (9, "Čech identifications and reconstruction", 60.0, Box::new(criterion_9)),
        (10, "stretch: dim H^4(W1; Q^⊗5) = 3", stretch_budget as f64 + 5.0, Box::new(move || criterion_10(Duration::from_secs(stretch_budget)))),
    ];
    let mut gating_failed = false;
    for (id, title, limit, run) in criteria {
        let t0 = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run));
        let secs = t0.elapsed().as_secs_f64();
        let (pass, detail) = match result {
            Ok(o) => (o.pass && secs < limit, o.detail),
            Err(e) => {
                let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
                (false, format!("panicked: {}", msg.unwrap_or_default()))
            }
        };
        let gating = id != 10;
        let tag = if pass { "PASS" } else { "FAIL" };
        let note = if gating { "" } else { " (stretch, not gating)" };
        println!("{tag} criterion {id}{note}: {title} [{secs:.2}s < {limit:.0}s] {detail}");
        if gating && !pass {
            gating_failed = true;
        }
    }
    if gating_failed {
        std::process::exit(1);
    }
}
