//! Batch front end: jobs, dispatch, caching and report files.

mod cache;
mod job;
pub mod parse;
mod run;

pub use cache::{ResultCache, ENGINE_VERSION};
pub use job::{Command, JobSpec, OutputFormat};
pub use run::{exit_code_for, run, ExitStatus, Outcome};
