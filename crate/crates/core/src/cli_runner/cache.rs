use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::cli_runner::job::JobSpec;
use crate::error::{GfError, Result};

/// Changes whenever a convention affecting report contents changes.
pub const ENGINE_VERSION: &str = concat!("gf-core-", env!("CARGO_PKG_VERSION"), "-r1");

/// Content-addressed report store.
#[derive(Clone, Debug)]
pub struct ResultCache {
    dir: PathBuf,
}

impl ResultCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// Cache rooted at `$GF_CACHE_DIR`, if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os("GF_CACHE_DIR").filter(|v| !v.is_empty()).map(Self::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(job: &JobSpec) -> Result<String> {
        let canonical = serde_json::to_string(&job.normalized()?).expect("job serializes");
        let mut h = Sha256::new();
        h.update(ENGINE_VERSION.as_bytes());
        h.update([0u8]);
        h.update(canonical.as_bytes());
        Ok(hex::encode(h.finalize()))
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str) -> Option<String> {
        fs::read_to_string(self.path(key)).ok()
    }

    /// Writes through a temporary file and renames, so readers never see a
    /// partial report.
    pub fn put(&self, key: &str, report: &str) -> Result<()> {
        let io = |e: std::io::Error| GfError::InvalidArgument(format!("cache {}: {e}", self.dir.display()));
        fs::create_dir_all(&self.dir).map_err(io)?;
        let tmp = self.dir.join(format!(".{key}.{}.tmp", std::process::id()));
        let mut f = fs::File::create(&tmp).map_err(io)?;
        f.write_all(report.as_bytes()).map_err(io)?;
        f.sync_all().map_err(io)?;
        fs::rename(&tmp, self.path(key)).map_err(io)?;
        Ok(())
    }
}
