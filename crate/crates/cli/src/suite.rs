//! Suite configuration and the parallel runner.

use crate::CliError;
use qrr_core::report::Params;
use qrr_core::{verify, IdentityInstance, VerificationReport};
use rayon::prelude::*;
use serde::Deserialize;
use std::path::{Path, PathBuf};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryConfig {
    pub id: String,
    #[serde(default)]
    pub params: Params,
    pub order: i64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub schema: u32,
    pub entries: Vec<EntryConfig>,
    #[serde(default)]
    pub parallelism: Option<usize>,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub fail_on_conjecture: bool,
}

impl SuiteConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let config: SuiteConfig =
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        if config.schema != SCHEMA_VERSION {
            return Err(CliError::Usage(format!(
                "unsupported schema {} (expected {SCHEMA_VERSION})",
                config.schema
            )));
        }
        if config.parallelism == Some(0) {
            return Err(CliError::Usage("parallelism must be positive".into()));
        }
        Ok(config)
    }

    /// Validates every entry up front so that nothing runs on a bad config.
    pub fn instances(&self) -> Result<Vec<(IdentityInstance, i64)>, CliError> {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, e)| {
                if e.order < 0 {
                    return Err(CliError::Usage(format!("entry {i} ({}): negative order", e.id)));
                }
                IdentityInstance::new(&e.id, e.params.clone())
                    .map(|inst| (inst, e.order))
                    .map_err(|err| CliError::Usage(format!("entry {i}: {err}")))
            })
            .collect()
    }
}

/// `QRR_THREADS` beats the config, which beats the core count.
pub fn worker_count(configured: Option<usize>) -> Result<usize, CliError> {
    if let Ok(v) = std::env::var("QRR_THREADS") {
        return match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(CliError::Usage(format!("QRR_THREADS must be a positive integer, got {v:?}"))),
        };
    }
    Ok(configured.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())))
}

/// Runs every entry on a pool of `workers` threads; reports come back in
/// entry order.
pub fn run(instances: &[(IdentityInstance, i64)], workers: usize) -> Result<Vec<VerificationReport>, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(|| {
        instances
            .par_iter()
            .map(|(inst, order)| {
                let r = verify(inst, *order);
                eprintln!("{:<26} {:<7} {:>7} ms  {}", r.id, status_word(&r), r.wall_time_ms, r.summary);
                r
            })
            .collect()
    }))
}

pub fn status_word(r: &VerificationReport) -> &'static str {
    match r.status {
        qrr_core::Status::Pass => "pass",
        qrr_core::Status::Fail => "FAIL",
        qrr_core::Status::Error => "ERROR",
    }
}
