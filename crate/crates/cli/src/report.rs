//! Reports: canonical, diffable JSON records of one command run.

use serde::Serialize;

/// Outcome of one command. Serialization order is fixed so identical runs
/// are byte-identical apart from the timing field.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub input_hash: String,
    pub verdict: bool,
    pub exit_code: i32,
    pub details: serde_json::Value,
    pub timing_ms: u128,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        format!(
            "{}: {}\n{}",
            self.command,
            if self.verdict { "ok" } else { "FAIL" },
            serde_json::to_string_pretty(&self.details).expect("details serialize")
        )
    }
}

/// FNV-1a 64-bit content hash of the input file.
pub fn content_hash(bytes: &[u8]) -> String {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    format!("fnv1a64:{hash:016x}")
}
