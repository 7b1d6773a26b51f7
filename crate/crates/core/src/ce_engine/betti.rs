//! Betti numbers along a truncation ladder.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ce_engine::complex::WeightZeroComplex;
use crate::error::{GfError, Result};
use crate::line_fields::AlgebraKind;
use crate::tensor_modules::ModuleSpec;

/// Truncation schedule `start, start+step, ...`; a degree counts as
/// stabilized once its Betti number is unchanged over `window` consecutive
/// levels. At most `max_levels` levels are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ladder {
    pub start: i64,
    pub step: i64,
    pub window: usize,
    pub max_levels: usize,
}

impl Ladder {
    pub fn new(start: i64, step: i64, window: usize) -> Self {
        Self { start, step, window, max_levels: window + 3 }
    }

    pub fn level(&self, i: usize) -> i64 {
        self.start + self.step * i as i64
    }

    pub fn validate(&self) -> Result<()> {
        if self.step <= 0 {
            return Err(GfError::InvalidArgument("ladder step must be positive".into()));
        }
        if self.window == 0 || self.max_levels < self.window {
            return Err(GfError::InvalidArgument("ladder window must be in 1..=max_levels".into()));
        }
        Ok(())
    }
}

impl Default for Ladder {
    fn default() -> Self {
        Self::new(8, 2, 3)
    }
}

impl fmt::Display for Ladder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}:{}", self.start, self.step, self.window, self.max_levels)
    }
}

/// `start:step[:window[:max_levels]]`.
impl FromStr for Ladder {
    type Err = GfError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || GfError::InvalidArgument(format!("invalid ladder `{s}` (expected start:step[:window[:max]])"));
        if !(2..=4).contains(&parts.len()) {
            return Err(bad());
        }
        let start: i64 = parts[0].trim().parse().map_err(|_| bad())?;
        let step: i64 = parts[1].trim().parse().map_err(|_| bad())?;
        let window: usize = match parts.get(2) {
            Some(w) => w.trim().parse().map_err(|_| bad())?,
            None => 3,
        };
        let mut ladder = Ladder::new(start, step, window);
        if let Some(m) = parts.get(3) {
            ladder.max_levels = m.trim().parse().map_err(|_| bad())?;
        }
        ladder.validate()?;
        Ok(ladder)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Exact,
    Stabilized,
    Nonstabilized,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub q: usize,
    pub dim: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    pub betti: usize,
    #[serde(rename = "M")]
    pub m: i64,
    pub status: Status,
}

/// Betti numbers of one truncation level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelTrace {
    #[serde(rename = "M")]
    pub m: i64,
    pub dims: Vec<usize>,
    pub ranks: Vec<usize>,
    pub betti: Vec<usize>,
    pub nnz: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_seconds: f64,
    pub per_level_seconds: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BettiReport {
    pub algebra: AlgebraKind,
    pub module: String,
    pub q: Vec<DegreeReport>,
    pub ladder: Option<Ladder>,
    pub trace: Vec<LevelTrace>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing: Option<Timing>,
}

impl BettiReport {
    pub fn betti(&self) -> Vec<usize> {
        self.q.iter().map(|d| d.betti).collect()
    }

    pub fn all_settled(&self) -> bool {
        self.q.iter().all(|d| d.status != Status::Nonstabilized)
    }

    /// JSON without the wall-clock section; identical inputs give identical bytes.
    pub fn to_canonical_json(&self) -> String {
        let mut copy = self.clone();
        copy.timing = None;
        serde_json::to_string_pretty(&copy).expect("report serializes")
    }

    /// CSV rows `algebra,module,q,dim,rank_in,rank_out,betti,M,status`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("algebra,module,q,dim,rank_in,rank_out,betti,M,status\n");
        for d in &self.q {
            let status = serde_json::to_value(d.status).unwrap();
            out.push_str(&format!(
                "{},\"{}\",{},{},{},{},{},{},{}\n",
                self.algebra,
                self.module,
                d.q,
                d.dim,
                d.rank_in,
                d.rank_out,
                d.betti,
                d.m,
                status.as_str().unwrap()
            ));
        }
        out
    }
}

/// Ranks of every differential of `cx`, computed in parallel.
pub fn differential_ranks(cx: &WeightZeroComplex) -> Vec<usize> {
    cx.differentials().par_iter().map(|d| d.rank()).collect()
}

/// Betti numbers of degrees `0..=q_max` of a single complex built with
/// `p_max >= q_max + 1`.
pub fn level_trace(cx: &WeightZeroComplex, q_max: usize) -> LevelTrace {
    assert!(cx.p_max() > q_max, "complex must contain degree q_max + 1");
    let ranks = differential_ranks(cx);
    let dims: Vec<usize> = (0..=q_max + 1).map(|p| cx.dim(p)).collect();
    let betti = (0..=q_max)
        .map(|q| {
            let rin = if q == 0 { 0 } else { ranks[q - 1] };
            dims[q] - ranks[q] - rin
        })
        .collect();
    LevelTrace {
        m: cx.truncation(),
        dims,
        ranks,
        betti,
        nnz: cx.differentials().iter().map(|d| d.nnz()).collect(),
    }
}

fn degree_reports(trace: &LevelTrace, q_max: usize, status: impl Fn(usize) -> Status) -> Vec<DegreeReport> {
    (0..=q_max)
        .map(|q| DegreeReport {
            q,
            dim: trace.dims[q],
            rank_in: if q == 0 { 0 } else { trace.ranks[q - 1] },
            rank_out: trace.ranks[q],
            betti: trace.betti[q],
            m: trace.m,
            status: status(q),
        })
        .collect()
}

/// Betti numbers of `H^q(kind; spec)` for `q <= q_max`. Modules with weights
/// bounded above are computed exactly in one pass; otherwise the ladder is
/// climbed until every degree is stable over the window. A report whose
/// degrees did not all stabilize is still returned, with the flag down.
pub fn betti(kind: AlgebraKind, spec: &ModuleSpec, q_max: usize, ladder: &Ladder) -> Result<BettiReport> {
    ladder.validate()?;
    let clock = Instant::now();
    let mut per_level = Vec::new();
    let first = WeightZeroComplex::build(kind, spec, q_max + 1, ladder.start)?;
    if first.is_exact() {
        let trace = level_trace(&first, q_max);
        per_level.push(clock.elapsed().as_secs_f64());
        return Ok(BettiReport {
            algebra: kind,
            module: spec.to_string(),
            q: degree_reports(&trace, q_max, |_| Status::Exact),
            ladder: None,
            trace: vec![trace],
            timing: Some(Timing { wall_seconds: clock.elapsed().as_secs_f64(), per_level_seconds: per_level }),
        });
    }

    let mut traces: Vec<LevelTrace> = Vec::new();
    let mut cx = Some(first);
    for level in 0..ladder.max_levels {
        let t0 = Instant::now();
        let complex = match cx.take() {
            Some(c) => c,
            None => WeightZeroComplex::build(kind, spec, q_max + 1, ladder.level(level))?,
        };
        traces.push(level_trace(&complex, q_max));
        per_level.push(t0.elapsed().as_secs_f64());
        if (0..=q_max).all(|q| stable(&traces, q, ladder.window)) {
            break;
        }
    }
    let last = traces.last().expect("at least one level");
    let q = degree_reports(last, q_max, |q| {
        if stable(&traces, q, ladder.window) {
            Status::Stabilized
        } else {
            Status::Nonstabilized
        }
    });
    Ok(BettiReport {
        algebra: kind,
        module: spec.to_string(),
        q,
        ladder: Some(*ladder),
        trace: traces,
        timing: Some(Timing { wall_seconds: clock.elapsed().as_secs_f64(), per_level_seconds: per_level }),
    })
}

fn stable(traces: &[LevelTrace], q: usize, window: usize) -> bool {
    if traces.len() < window {
        return false;
    }
    let tail = &traces[traces.len() - window..];
    tail.iter().all(|t| t.betti[q] == tail[0].betti[q])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor_modules::FactorSpec;

    #[test]
    fn ladder_parsing() {
        let l: Ladder = "8:2:3".parse().unwrap();
        assert_eq!((l.start, l.step, l.window), (8, 2, 3));
        let l: Ladder = "4:1".parse().unwrap();
        assert_eq!(l.window, 3);
        assert!("4".parse::<Ladder>().is_err());
        assert!("4:0:3".parse::<Ladder>().is_err());
        let l: Ladder = "4:1:2:9".parse().unwrap();
        assert_eq!(l.max_levels, 9);
    }

    #[test]
    fn exact_line_two() {
        let r = betti(AlgebraKind::L0, &ModuleSpec::line_only(2), 3, &Ladder::default()).unwrap();
        assert_eq!(r.betti(), vec![0, 1, 1, 0]);
        assert!(r.q.iter().all(|d| d.status == Status::Exact));
    }

    #[test]
    fn euler_characteristic_identity() {
        let spec = ModuleSpec::tensor(Some(1), vec![FactorSpec::density(0, 0)]);
        let cx = WeightZeroComplex::build(AlgebraKind::L0, &spec, 4, 8).unwrap();
        let ranks = differential_ranks(&cx);
        let mut chi_c = 0i64;
        let mut chi_h = 0i64;
        for q in 0..=4usize {
            let rin = if q == 0 { 0 } else { ranks[q - 1] };
            let rout = if q < 4 { ranks[q] } else { 0 };
            let b = (cx.dim(q) - rin - rout) as i64;
            let s = if q % 2 == 0 { 1 } else { -1 };
            chi_c += s * cx.dim(q) as i64;
            chi_h += s * b;
        }
        assert_eq!(chi_c, chi_h);
    }

    #[test]
    fn nonstabilized_flag_is_reported() {
        // with a single level the window of 2 can never be met
        let ladder = Ladder { start: 4, step: 1, window: 2, max_levels: 2 };
        let mut one = ladder;
        one.max_levels = 1;
        assert!(one.validate().is_err());
        let r = betti(AlgebraKind::L0, &ModuleSpec::power(FactorSpec::density(0, 0), 1), 1, &ladder).unwrap();
        assert_eq!(r.trace.len(), 2);
    }
}
