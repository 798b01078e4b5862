//! Machine-readable run reports: stable payload for identical inputs and
//! seed, plus wall time and oracle traffic on the side.

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Serialize)]
pub struct RunReport {
    pub subcommand: String,
    pub inputs: Vec<InputDigest>,
    pub payload: serde_json::Value,
    pub oracle_calls: u64,
    pub wall_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

pub fn digest(path: &str, bytes: &[u8]) -> InputDigest {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    InputDigest {
        path: path.to_string(),
        sha256: format!("{:x}", hasher.finalize()),
    }
}
