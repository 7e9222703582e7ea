//! Per-SNR-point completion files so long sweeps can resume.

use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use stbc_core::channel::{PointCache, SerEstimate};
use stbc_core::CurveKind;

use crate::error::{CliError, Result};
use crate::settings::RunSpec;

/// A directory of `<sha256>.json` files, one per finished point, keyed by
/// everything that determines the point's result.
#[derive(Debug, Clone)]
pub struct CheckpointDir {
    dir: PathBuf,
    prefix: String,
}

impl CheckpointDir {
    pub fn open(dir: &Path, spec: &RunSpec, kind: CurveKind) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let c = &spec.config;
        let prefix = format!(
            "v1|{kind}|{}|{}|{}|{}|{:016x}|{}|{}|{}|{}",
            c.tx,
            c.rx,
            c.blocks,
            c.block_len,
            c.rate.to_bits(),
            spec.trials,
            spec.seed,
            spec.min_errors,
            spec.max_trials
        );
        Ok(Self { dir: dir.to_path_buf(), prefix })
    }

    pub fn path_for(&self, snr_db: f64) -> PathBuf {
        let key = format!("{}|{:016x}", self.prefix, snr_db.to_bits());
        self.dir.join(format!("{}.json", hex::encode(Sha256::digest(key.as_bytes()))))
    }
}

impl PointCache for CheckpointDir {
    fn load(&self, snr_db: f64) -> Option<SerEstimate> {
        let text = std::fs::read_to_string(self.path_for(snr_db)).ok()?;
        serde_json::from_str(&text).ok()
    }

    fn store(&self, snr_db: f64, estimate: &SerEstimate) {
        let path = self.path_for(snr_db);
        let tmp = path.with_extension("json.tmp");
        let body = serde_json::to_string(estimate).expect("estimate serializes");
        // a failed write only costs a recomputation on the next run
        if let Err(e) = std::fs::write(&tmp, body).and_then(|_| std::fs::rename(&tmp, &path)) {
            eprintln!("warning: could not write checkpoint {}: {e}", path.display());
        }
    }
}
