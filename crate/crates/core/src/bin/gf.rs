use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gf_core::cli_runner::{run, Command, JobSpec, OutputFormat, ResultCache};
use gf_core::AlgebraKind;

#[derive(Parser)]
#[command(name = "gf", version, about = "Exact cohomology of W1, L0, L1 with tensor-density coefficients")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Betti numbers of the weight-zero complex along a truncation ladder.
    Betti {
        #[arg(long)]
        algebra: Option<AlgebraKind>,
        #[arg(long)]
        module: String,
        #[arg(long, default_value_t = 3)]
        qmax: usize,
        #[arg(long)]
        ladder: Option<String>,
        /// Compute on the Shapiro-reduced L0 module instead.
        #[arg(long)]
        shapiro: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Check a named cocycle on all tuples with indices up to K.
    Verify {
        #[arg(long)]
        cocycle: String,
        #[arg(long = "K", default_value_t = 8)]
        k: i64,
        #[arg(long = "marked-points")]
        marked_points: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// L1-invariants per weight; defaults to sym^power Q(2,0)q.
    Invariants {
        #[arg(long, default_value_t = 1)]
        power: usize,
        #[arg(long)]
        module: Option<String>,
        #[arg(long, default_value_t = -8, allow_hyphen_values = true)]
        wmin: i64,
        #[arg(long, allow_hyphen_values = true)]
        wmax: Option<i64>,
        #[command(flatten)]
        out: Output,
    },
    /// Čech cohomology of the punctured-space covering in one weight.
    Cech {
        #[arg(long)]
        module: String,
        #[arg(long, default_value_t = 0)]
        q: usize,
        #[arg(long, allow_hyphen_values = true)]
        weight: i64,
        #[command(flatten)]
        out: Output,
    },
    /// Exactness audit of the long exact sequence.
    Audit {
        #[arg(long)]
        module: String,
        /// Raise a single-factor module to n factors.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 3)]
        qmax: usize,
        #[arg(long = "M", default_value_t = 6)]
        m: i64,
        #[command(flatten)]
        out: Output,
    },
    /// Nonvanishing certificate for a named cocycle.
    Certify {
        #[arg(long)]
        cocycle: String,
        #[arg(long)]
        algebra: Option<AlgebraKind>,
        #[arg(long)]
        module: Option<String>,
        #[arg(long = "marked-points")]
        marked_points: Option<usize>,
        #[arg(long = "M", default_value_t = 8)]
        m: i64,
        #[arg(long)]
        shapiro: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Run a JSON job file.
    Run {
        #[arg(long)]
        job: PathBuf,
        /// Overrides the job's output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Output {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn with_output(mut job: JobSpec, o: Output) -> JobSpec {
    job.out = o.out;
    job.format = match o.format {
        Format::Json => OutputFormat::Json,
        Format::Csv => OutputFormat::Csv,
    };
    job
}

fn to_job(cmd: Cmd) -> Result<JobSpec, String> {
    let base = |c| JobSpec { command: Some(c), ..JobSpec::default() };
    Ok(match cmd {
        Cmd::Betti { algebra, module, qmax, ladder, shapiro, out } => with_output(
            JobSpec { algebra, module: Some(module), qmax: Some(qmax), ladder, shapiro, ..base(Command::Betti) },
            out,
        ),
        Cmd::Verify { cocycle, k, marked_points, out } => with_output(
            JobSpec { cocycle: Some(cocycle), k: Some(k), marked_points, ..base(Command::Verify) },
            out,
        ),
        Cmd::Invariants { power, module, wmin, wmax, out } => with_output(
            JobSpec { power: Some(power), module, wmin: Some(wmin), wmax, ..base(Command::Invariants) },
            out,
        ),
        Cmd::Cech { module, q, weight, out } => with_output(
            JobSpec { module: Some(module), q: Some(q), weight: Some(weight), ..base(Command::Cech) },
            out,
        ),
        Cmd::Audit { module, n, qmax, m, out } => with_output(
            JobSpec { module: Some(module), n, qmax: Some(qmax), m: Some(m), ..base(Command::Audit) },
            out,
        ),
        Cmd::Certify { cocycle, algebra, module, marked_points, m, shapiro, out } => with_output(
            JobSpec { cocycle: Some(cocycle), algebra, module, marked_points, m: Some(m), shapiro, ..base(Command::Certify) },
            out,
        ),
        Cmd::Run { job, out } => {
            let text = std::fs::read_to_string(&job).map_err(|e| format!("{}: {e}", job.display()))?;
            let mut spec = JobSpec::from_json(&text).map_err(|e| e.to_string())?;
            if out.is_some() {
                spec.out = out;
            }
            spec
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let job = match to_job(cli.command) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("gf: {e}");
            return ExitCode::from(2);
        }
    };
    let cache = ResultCache::from_env();
    let outcome = run(&job, cache.as_ref());
    if job.out.is_some() {
        if let Err(e) = outcome.write(&job) {
            eprintln!("gf: cannot write report: {e}");
            return ExitCode::from(2);
        }
    } else {
        match (job.format, &outcome.csv) {
            (OutputFormat::Csv, Some(csv)) => print!("{csv}"),
            _ => println!("{}", outcome.json),
        }
    }
    ExitCode::from(outcome.exit.code() as u8)
}
