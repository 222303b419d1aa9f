//! Run reports: a record of what was run on which inputs, and what came out.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: Vec<String>,
    /// SHA-256 of the arguments and of every catalog file read.
    pub inputs_digest: String,
    pub seed: u64,
    pub results: Value,
    /// Wall-clock milliseconds per phase; only present when asked for, so
    /// that reports are otherwise byte-identical across runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Value>,
}

pub fn inputs_digest(args: &[String], catalog_digest: &str) -> String {
    let mut h = Sha256::new();
    for a in args {
        h.update(a.as_bytes());
        h.update([0]);
    }
    h.update(catalog_digest.as_bytes());
    hex::encode(h.finalize())
}

impl RunReport {
    pub fn new(command: Vec<String>, catalog_digest: &str, seed: u64, results: Value) -> Self {
        let inputs_digest = inputs_digest(&command, catalog_digest);
        RunReport {
            command,
            inputs_digest,
            seed,
            results,
            timings: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_depends_on_arguments_and_catalog() {
        let args = vec!["enumerate".to_string(), "terms".to_string()];
        let d = inputs_digest(&args, "abc");
        assert_eq!(d, inputs_digest(&args, "abc"));
        assert_ne!(d, inputs_digest(&args, "abd"));
        assert_ne!(d, inputs_digest(&["enumerateterms".to_string()], "abc"));
    }
}
