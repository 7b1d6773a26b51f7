use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::ce_engine::Ladder;
use crate::error::{GfError, Result};
use crate::line_fields::AlgebraKind;
use crate::tensor_modules::ModuleSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Betti,
    Verify,
    Invariants,
    Cech,
    Audit,
    Certify,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// One unit of work. Fields not used by the command are ignored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Option<Command>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qmax: Option<usize>,
    /// `start:step[:window[:max_levels]]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ladder: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<String>,
    #[serde(default, rename = "K", skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marked_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wmin: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wmax: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, rename = "M", skip_serializing_if = "Option::is_none")]
    pub m: Option<i64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub shapiro: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
}

impl JobSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| GfError::InvalidArgument(format!("job file: {e}")))
    }

    pub fn command(&self) -> Result<Command> {
        self.command.ok_or_else(|| GfError::InvalidArgument("job has no command".into()))
    }

    pub fn module_spec(&self) -> Result<Option<ModuleSpec>> {
        self.module.as_deref().map(str::parse).transpose()
    }

    pub fn require_module(&self) -> Result<ModuleSpec> {
        self.module_spec()?.ok_or_else(|| GfError::InvalidArgument("job needs a module".into()))
    }

    pub fn ladder(&self) -> Result<Ladder> {
        match &self.ladder {
            Some(s) => s.parse(),
            None => Ok(Ladder::default()),
        }
    }

    /// The job with module and ladder in canonical text and the output
    /// fields removed; two jobs computing the same report normalize equally.
    pub fn normalized(&self) -> Result<JobSpec> {
        let mut job = self.clone();
        job.module = self.module_spec()?.map(|m| m.to_string());
        job.ladder = match self.ladder {
            Some(_) => Some(self.ladder()?.to_string()),
            None => None,
        };
        job.out = None;
        job.format = OutputFormat::Json;
        Ok(job)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_job_file() {
        let job = JobSpec::from_json(r#"{"command":"betti","algebra":"L0","module":"1(2)","qmax":3,"ladder":"8:2:3"}"#).unwrap();
        assert_eq!(job.command().unwrap(), Command::Betti);
        assert_eq!(job.require_module().unwrap().to_string(), "1(2)");
        assert!(JobSpec::from_json(r#"{"command":"betti","bogus":1}"#).is_err());
    }

    #[test]
    fn normalization_ignores_spelling() {
        let a = JobSpec::from_json(r#"{"command":"betti","module":"1(2)*T(2,0)^4","ladder":"8:2"}"#).unwrap();
        let b = JobSpec::from_json(r#"{"command":"betti","module":"1(2) * T(2,0)^⊗4","ladder":"8:2:3:6","out":"x.json"}"#).unwrap();
        assert_eq!(a.normalized().unwrap(), b.normalized().unwrap());
    }
}
