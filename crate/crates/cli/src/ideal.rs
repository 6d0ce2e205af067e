//! JSON ideal files.
//!
//! ```json
//! {
//!   "n": 2,
//!   "q": "symbolic",
//!   "generators": ["z[1,1]", "z[2,2]"],
//!   "ordering": "paper-lex",
//!   "limits": { "max_degree": 32, "max_pairs": 5000 }
//! }
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

/// `q` as written in a file: `"symbolic"`, a rational string such as
/// `"3/2"`, or a JSON integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QSpec {
    Text(String),
    Int(i64),
}

impl QSpec {
    pub fn as_text(&self) -> String {
        match self {
            QSpec::Text(s) => s.clone(),
            QSpec::Int(v) => v.to_string(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileLimits {
    pub max_degree: Option<u32>,
    pub max_pairs: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealFile {
    pub n: usize,
    #[serde(default)]
    pub q: Option<QSpec>,
    pub generators: Vec<String>,
    #[serde(default)]
    pub ordering: Option<String>,
    #[serde(default)]
    pub limits: Option<FileLimits>,
}

#[derive(Debug, thiserror::Error)]
pub enum IdealFileError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid ideal file {path}: {source}")]
    Json { path: String, source: serde_json::Error },
}

impl IdealFile {
    pub fn load(path: &Path) -> Result<Self, IdealFileError> {
        let shown = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| IdealFileError::Io { path: shown.clone(), source })?;
        serde_json::from_str(&text).map_err(|source| IdealFileError::Json { path: shown, source })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }
}
