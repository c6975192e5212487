//! Run manifests: enough to re-run a command and check its output bytes.

use std::path::Path;
use std::time::Instant;

use ktour_core::sampler::PRNG_ID;
use ktour_core::SamplerConfig;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{run_args, CliError, Outcome};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Arguments after the program name, as given.
    pub argv: Vec<String>,
    /// One sampler configuration per exponent run.
    pub configs: Vec<SamplerConfig>,
    pub prng: String,
    pub wall_seconds: f64,
    pub output_sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

impl Manifest {
    pub fn new(
        command: &str,
        argv: &[String],
        configs: Vec<SamplerConfig>,
        output: &str,
        started: Instant,
    ) -> Self {
        Manifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            argv: argv.to_vec(),
            configs,
            prng: PRNG_ID.to_string(),
            wall_seconds: started.elapsed().as_secs_f64(),
            output_sha256: sha256_hex(output.as_bytes()),
        }
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, crate::output::json(self))?;
        Ok(())
    }
}

/// Strips flags that only affect where output goes or how fast it comes.
fn replay_argv(argv: &[String], threads: usize) -> Vec<String> {
    let mut out = Vec::new();
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        let flag = a.split('=').next().unwrap_or(a);
        if matches!(flag, "--out" | "--manifest" | "--threads") {
            if !a.contains('=') {
                it.next();
            }
            continue;
        }
        out.push(a.clone());
    }
    out.push("--threads".into());
    out.push(threads.to_string());
    out
}

pub fn replay(path: &Path, threads: usize) -> Result<Outcome, CliError> {
    let manifest = Manifest::read(path)?;
    let rerun = run_args(replay_argv(&manifest.argv, threads))?;
    let actual = sha256_hex(rerun.stdout.as_bytes());
    if actual != manifest.output_sha256 {
        return Err(CliError::ReplayMismatch {
            expected: manifest.output_sha256,
            actual,
        });
    }
    Ok(Outcome {
        stdout: format!("ok {actual}\n"),
        warnings: rerun.warnings,
        manifest: None,
    })
}
