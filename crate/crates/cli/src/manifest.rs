//! Run manifest schema: what was run, with which config digest, and the
//! content hash of every emitted file.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub format_version: u32,
    pub artifact_version: String,
    pub subcommand: String,
    pub config_sha256: String,
    pub started: String,
    pub finished: String,
    pub outputs: Vec<OutputDigest>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutputDigest {
    pub file: String,
    pub sha256: String,
    pub bytes: u64,
}
