//! Run configuration and its hash.

use bgg_core::exec::Mode;
use bgg_core::report::Format;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::PathBuf;

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub cache_dir: Option<PathBuf>,
    pub max_irrep_span: i64,
    pub tolerances: BTreeMap<String, f64>,
    pub output_format: Format,
    pub threads: usize,
}

pub const TOL_EXACT: &str = "exact";
pub const TOL_DOUBLE: &str = "double";
pub const TOL_RANK: &str = "rank";

#[derive(Serialize)]
struct Hashed<'a, C: Serialize> {
    max_irrep_span: i64,
    tolerances: &'a BTreeMap<String, f64>,
    output_format: Format,
    command: &'a C,
}

impl RunConfig {
    pub fn new(cache_dir: Option<PathBuf>, span: i64, tol_double: f64, format: Format, threads: Option<usize>) -> Result<Self, String> {
        if span < 0 {
            return Err(format!("--span must be non-negative, got {span}"));
        }
        if !(tol_double.is_finite() && tol_double > 0.0) {
            return Err(format!("--tol-double must be positive, got {tol_double}"));
        }
        let threads = match threads {
            Some(0) => return Err("--threads must be at least 1".into()),
            Some(t) => t,
            None => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        };
        let tolerances = BTreeMap::from([
            (TOL_EXACT.to_string(), 0.0),
            (TOL_DOUBLE.to_string(), tol_double),
            (TOL_RANK.to_string(), bgg_core::tensor::RANK_CUTOFF),
        ]);
        Ok(RunConfig { cache_dir, max_irrep_span: span, tolerances, output_format: format, threads })
    }

    pub fn tol(&self, name: &str) -> f64 {
        self.tolerances[name]
    }

    pub fn mode(&self) -> Mode {
        if self.threads > 1 {
            Mode::Parallel
        } else {
            Mode::Sequential
        }
    }

    /// SHA-256 over the result-determining fields and the command. Thread
    /// count and cache location do not change results and are left out.
    pub fn hash<C: Serialize>(&self, command: &C) -> String {
        let h = Hashed {
            max_irrep_span: self.max_irrep_span,
            tolerances: &self.tolerances,
            output_format: self.output_format,
            command,
        };
        let bytes = serde_json::to_vec(&h).expect("config serializes");
        hex::encode(Sha256::digest(&bytes))
    }
}
