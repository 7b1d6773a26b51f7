use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use crate::ce_engine::{betti, invariants_h0, shapiro_reduce, BettiReport, InvariantsReport};
use crate::cech_gluing::{cech_h, exactness_audit, AuditReport, CechData};
use crate::cli_runner::cache::ResultCache;
use crate::cli_runner::job::{Command, JobSpec, OutputFormat};
use crate::cocycle_lab::{certify_via_shapiro, make_named_cocycle, nontriviality_certificate, verify_cocycle, Certificate, VerifyReport};
use crate::error::{GfError, Result};
use crate::line_fields::AlgebraKind;
use crate::tensor_modules::{FactorSpec, ModuleSpec, Symmetry};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Ok = 0,
    NonStabilized = 1,
    InvalidJob = 2,
    Unsupported = 3,
    /// The job ran but the check it performs failed.
    CheckFailed = 4,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }

    fn from_code(code: i32) -> Option<Self> {
        [Self::Ok, Self::NonStabilized, Self::InvalidJob, Self::Unsupported, Self::CheckFailed]
            .into_iter()
            .find(|s| s.code() == code)
    }
}

pub fn exit_code_for(err: &GfError) -> ExitStatus {
    match err {
        GfError::UnboundedWeightSpace { .. } => ExitStatus::Unsupported,
        _ => ExitStatus::InvalidJob,
    }
}

/// Report bytes and exit status of one job. `timing` holds the wall-clock
/// figures, kept out of `json` so reports are reproducible.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub json: String,
    pub csv: Option<String>,
    pub timing: Option<String>,
    pub exit: ExitStatus,
    pub cached: bool,
}

impl Outcome {
    fn failure(err: &GfError) -> Self {
        let json = serde_json::to_string_pretty(&json!({ "error": err.to_string() })).unwrap();
        Self { json, csv: None, timing: None, exit: exit_code_for(err), cached: false }
    }

    /// Writes the report to `job.out` in the requested format, plus a
    /// `.timing.json` sidecar when timing is available. Returns the paths written.
    pub fn write(&self, job: &JobSpec) -> std::io::Result<Vec<PathBuf>> {
        let Some(out) = &job.out else { return Ok(Vec::new()) };
        let body = match (job.format, &self.csv) {
            (OutputFormat::Csv, Some(csv)) => csv,
            _ => &self.json,
        };
        let mut written = vec![out.clone()];
        write_file(out, body)?;
        if let Some(t) = &self.timing {
            let side = sidecar_path(out);
            write_file(&side, t)?;
            written.push(side);
        }
        Ok(written)
    }
}

fn write_file(path: &Path, body: &str) -> std::io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, body)
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".timing.json");
    PathBuf::from(s)
}

struct Computed {
    json: String,
    csv: String,
    timing: Option<String>,
    exit: ExitStatus,
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes")
}

/// Runs one job, consulting `cache` first when given. Errors become an
/// outcome with a JSON error body and the matching exit status.
pub fn run(job: &JobSpec, cache: Option<&ResultCache>) -> Outcome {
    match run_inner(job, cache) {
        Ok(o) => o,
        Err(e) => Outcome::failure(&e),
    }
}

fn run_inner(job: &JobSpec, cache: Option<&ResultCache>) -> Result<Outcome> {
    let command = job.command()?;
    let key = match cache {
        Some(_) => Some(ResultCache::key(job)?),
        None => None,
    };
    if let (Some(c), Some(k)) = (cache, &key) {
        if let Some(stored) = c.get(k) {
            if let Some((head, json)) = stored.split_once('\n') {
                let exit = head.strip_prefix("exit=").and_then(|s| s.parse().ok()).and_then(ExitStatus::from_code);
                if let Some(exit) = exit {
                    let csv = csv_from_json(command, json)?;
                    return Ok(Outcome { json: json.to_string(), csv: Some(csv), timing: None, exit, cached: true });
                }
            }
        }
    }
    let computed = compute(command, job)?;
    if let (Some(c), Some(k)) = (cache, &key) {
        c.put(k, &format!("exit={}\n{}", computed.exit.code(), computed.json))?;
    }
    Ok(Outcome {
        json: computed.json,
        csv: Some(computed.csv),
        timing: computed.timing,
        exit: computed.exit,
        cached: false,
    })
}

fn require<T>(v: Option<T>, what: &str) -> Result<T> {
    v.ok_or_else(|| GfError::InvalidArgument(format!("job needs `{what}`")))
}

fn compute(command: Command, job: &JobSpec) -> Result<Computed> {
    match command {
        Command::Betti => {
            let spec = job.require_module()?;
            let ladder = job.ladder()?;
            let q_max = job.qmax.unwrap_or(3);
            let (kind, spec) = if job.shapiro {
                (AlgebraKind::L0, shapiro_reduce(&spec)?.target().clone())
            } else {
                (require(job.algebra, "algebra")?, spec)
            };
            let report = betti(kind, &spec, q_max, &ladder)?;
            let exit = if report.all_settled() { ExitStatus::Ok } else { ExitStatus::NonStabilized };
            Ok(Computed {
                json: report.to_canonical_json(),
                csv: report.to_csv(),
                timing: report.timing.as_ref().map(pretty),
                exit,
            })
        }
        Command::Verify => {
            let c = make_named_cocycle(&require(job.cocycle.clone(), "cocycle")?, job.marked_points)?;
            let report = verify_cocycle(&c, job.k.unwrap_or(8));
            let exit = if report.pass { ExitStatus::Ok } else { ExitStatus::CheckFailed };
            Ok(Computed { json: pretty(&report), csv: verify_csv(&report), timing: None, exit })
        }
        Command::Invariants => {
            let spec = match job.module_spec()? {
                Some(s) => s,
                None => {
                    let m = job.power.unwrap_or(1);
                    if m == 0 {
                        return Err(GfError::InvalidArgument("power must be positive".into()));
                    }
                    ModuleSpec::symmetric_power(FactorSpec::quotient(2, 0), m, Symmetry::Sym)
                }
            };
            let wmin = job.wmin.unwrap_or(-8);
            let wmax = match job.wmax {
                Some(w) => w,
                None => job.power.map(|p| p as i64).or(spec.weight_bounds().1).unwrap_or(8),
            };
            if wmax < wmin {
                return Err(GfError::InvalidArgument(format!("empty weight range {wmin}..={wmax}")));
            }
            let reports = (wmin..=wmax)
                .map(|w| invariants_h0(&spec, w).map(|(r, _)| r))
                .collect::<Result<Vec<_>>>()?;
            Ok(Computed { json: pretty(&reports), csv: invariants_csv(&reports), timing: None, exit: ExitStatus::Ok })
        }
        Command::Cech => {
            let spec = job.require_module()?;
            let data = CechData::new(&spec)?;
            let q = job.q.unwrap_or(0);
            let w = require(job.weight, "weight")?;
            let classes = cech_h(&data, q, w)?;
            let body = json!({
                "module": spec.to_string(),
                "q": q,
                "weight": w,
                "dim": classes.monomials.len(),
                "monomials": classes.monomials.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                "representatives": classes.representatives.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            });
            let csv = format!("module,q,weight,dim\n\"{}\",{},{},{}\n", spec, q, w, classes.monomials.len());
            Ok(Computed { json: pretty(&body), csv, timing: None, exit: ExitStatus::Ok })
        }
        Command::Audit => {
            let mut spec = job.require_module()?;
            if let Some(n) = job.n {
                spec = raise_power(&spec, n)?;
            }
            let data = CechData::new(&spec)?;
            let report = exactness_audit(&data, job.qmax.unwrap_or(3), job.m.unwrap_or(6))?;
            let exit = if report.pass { ExitStatus::Ok } else { ExitStatus::CheckFailed };
            Ok(Computed { json: pretty(&report), csv: audit_csv(&report), timing: None, exit })
        }
        Command::Certify => {
            let c = make_named_cocycle(&require(job.cocycle.clone(), "cocycle")?, job.marked_points)?;
            let m = job.m.unwrap_or(8);
            let cert = if job.shapiro {
                certify_via_shapiro(&c, m)?.1
            } else {
                let spec = job.module_spec()?.unwrap_or_else(|| c.target().clone());
                nontriviality_certificate(&c, job.algebra.unwrap_or(c.domain()), &spec, m)?
            };
            let exit = if cert.certified { ExitStatus::Ok } else { ExitStatus::CheckFailed };
            Ok(Computed { json: pretty(&cert), csv: certificate_csv(&cert), timing: None, exit })
        }
    }
}

/// `1(ν0) * F` raised to `1(ν0) * F^⊗n`; a module that already has `n`
/// factors is returned unchanged.
fn raise_power(spec: &ModuleSpec, n: usize) -> Result<ModuleSpec> {
    if spec.n() == n {
        return Ok(spec.clone());
    }
    match spec.factors() {
        [f] if n > 0 => ModuleSpec::new(spec.line(), vec![*f; n], spec.symmetry()),
        _ => Err(GfError::InvalidArgument(format!("cannot raise {spec} to {n} factors"))),
    }
}

fn verify_csv(r: &VerifyReport) -> String {
    format!(
        "cocycle,algebra,arity,K,tuples_checked,pass\n\"{}\",{},{},{},{},{}\n",
        r.cocycle, r.algebra, r.arity, r.k, r.tuples_checked, r.pass
    )
}

fn invariants_csv(rs: &[InvariantsReport]) -> String {
    let mut out = String::from("algebra,module,weight,dim\n");
    for r in rs {
        out.push_str(&format!("{},\"{}\",{},{}\n", r.algebra, r.module, r.weight, r.dim));
    }
    out
}

fn audit_csv(r: &AuditReport) -> String {
    let mut out = String::from("t,dim_tot,betti_tot,betti_polynomial,betti_quotient_shifted,rank_connecting_in,rank_connecting_out,predicted,pass\n");
    for d in &r.degrees {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            d.t, d.dim_tot, d.betti_tot, d.betti_polynomial, d.betti_quotient_shifted, d.rank_connecting_in, d.rank_connecting_out, d.predicted, d.pass
        ));
    }
    out
}

fn certificate_csv(c: &Certificate) -> String {
    format!(
        "cocycle,algebra,module,degree,M,dim,rank_in,certified\n\"{}\",{},\"{}\",{},{},{},{},{}\n",
        c.cocycle, c.algebra, c.module, c.degree, c.m, c.dim, c.rank_in, c.certified
    )
}

fn csv_from_json(command: Command, json: &str) -> Result<String> {
    let bad = |e: serde_json::Error| GfError::InvalidArgument(format!("corrupt cache entry: {e}"));
    Ok(match command {
        Command::Betti => serde_json::from_str::<BettiReport>(json).map_err(bad)?.to_csv(),
        Command::Verify => verify_csv(&serde_json::from_str(json).map_err(bad)?),
        Command::Invariants => invariants_csv(&serde_json::from_str::<Vec<InvariantsReport>>(json).map_err(bad)?),
        Command::Audit => audit_csv(&serde_json::from_str(json).map_err(bad)?),
        Command::Certify => certificate_csv(&serde_json::from_str(json).map_err(bad)?),
        Command::Cech => {
            let v: serde_json::Value = serde_json::from_str(json).map_err(bad)?;
            format!("module,q,weight,dim\n{},{},{},{}\n", v["module"], v["q"], v["weight"], v["dim"])
        }
    })
}
