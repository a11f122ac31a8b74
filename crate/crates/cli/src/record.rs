//! Self-describing run records. The `outputs` map is deterministic given
//! the same inputs and seed, so replays compare byte-for-byte; wall-clock
//! data lives beside it.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, Serialize)]
pub struct RunRecord {
    pub command: String,
    pub instance_digest: String,
    pub seed: u64,
    pub timestamp: u64,
    pub runtime_ms: u128,
    pub outputs: Value,
}

impl RunRecord {
    pub fn new(
        command: &str,
        instance_digest: String,
        seed: u64,
        runtime_ms: u128,
        outputs: Value,
    ) -> Self {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            command: command.to_string(),
            instance_digest,
            seed,
            timestamp,
            runtime_ms,
            outputs,
        }
    }
}

/// Combines instance and optional pattern digests into one run digest.
pub fn combined_digest(instance: &str, pattern: Option<&str>) -> String {
    match pattern {
        None => instance.to_string(),
        Some(p) => format!("{instance}:{p}"),
    }
}
