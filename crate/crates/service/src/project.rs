//! The single-file project document and its persistence.
//!
//! A project file is pretty-printed JSON carrying a `format_version`.
//! Saves go through a temporary file and a rename, so a reader sees either
//! the old or the new file. Loads validate everything before returning.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use storyscope::analytics::{Aggregate, SortOrder, DEFAULT_MIN_EDGE_COUNT, DEFAULT_TOP_N_PAIRS};
use storyscope::registry::Registry;

pub const FORMAT_VERSION: u32 = 1;
pub const DEFAULT_WORD_ZONE_K: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    #[serde(default)]
    pub aggregate_mode: Aggregate,
    #[serde(default)]
    pub sort_order: SortOrder,
    #[serde(default = "default_min_edge_count")]
    pub min_edge_count: usize,
    #[serde(default = "default_top_n_pairs")]
    pub top_n_pairs: usize,
    #[serde(default = "default_word_zone_k")]
    pub word_zone_k: usize,
}

fn default_min_edge_count() -> usize {
    DEFAULT_MIN_EDGE_COUNT
}

fn default_top_n_pairs() -> usize {
    DEFAULT_TOP_N_PAIRS
}

fn default_word_zone_k() -> usize {
    DEFAULT_WORD_ZONE_K
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            aggregate_mode: Aggregate::Auto,
            sort_order: SortOrder::Desc,
            min_edge_count: DEFAULT_MIN_EDGE_COUNT,
            top_n_pairs: DEFAULT_TOP_N_PAIRS,
            word_zone_k: DEFAULT_WORD_ZONE_K,
        }
    }
}

impl Settings {
    /// Rejects values the analytics would refuse. Returns the offending field.
    pub fn validate(&self) -> Result<(), (&'static str, String)> {
        for (field, value) in [
            ("settings.min_edge_count", self.min_edge_count),
            ("settings.top_n_pairs", self.top_n_pairs),
            ("settings.word_zone_k", self.word_zone_k),
        ] {
            if value == 0 {
                return Err((field, format!("{field} must be at least 1")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Project {
    pub format_version: u32,
    pub id: String,
    pub title: String,
    pub document: String,
    pub registry: Registry,
    #[serde(default)]
    pub settings: Settings,
}

#[derive(Debug, thiserror::Error)]
pub enum ProjectError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("corrupt project file at `{field}`: {message}")]
    CorruptFile { field: String, message: String },
    #[error("unsupported project format version {found} (this build reads up to {FORMAT_VERSION})")]
    UnsupportedVersion { found: u64 },
}

impl Project {
    pub fn new(id: impl Into<String>, title: impl Into<String>, document: impl Into<String>) -> Project {
        Project {
            format_version: FORMAT_VERSION,
            id: id.into(),
            title: title.into(),
            document: document.into(),
            registry: Registry::default(),
            settings: Settings::default(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("project serializes") + "\n"
    }

    /// Parses a project document. The version is checked before the body,
    /// so files from a newer build fail with `UnsupportedVersion`.
    pub fn from_json(text: &str) -> Result<Project, ProjectError> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| ProjectError::CorruptFile {
            field: "$".into(),
            message: e.to_string(),
        })?;
        let version = value
            .get("format_version")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| ProjectError::CorruptFile {
                field: "format_version".into(),
                message: "missing or not a non-negative integer".into(),
            })?;
        if version == 0 || version > u64::from(FORMAT_VERSION) {
            return Err(ProjectError::UnsupportedVersion { found: version });
        }
        serde_path_to_error::deserialize(value).map_err(|e| ProjectError::CorruptFile {
            field: e.path().to_string(),
            message: e.inner().to_string(),
        })
    }

    pub fn save(&self, path: &Path) -> Result<(), ProjectError> {
        let io = |source| ProjectError::Io {
            path: path.to_path_buf(),
            source,
        };
        let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
        tmp.write_all(self.to_json().as_bytes()).map_err(io)?;
        tmp.as_file().sync_all().map_err(io)?;
        tmp.persist(path).map_err(|e| io(e.error))?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Project, ProjectError> {
        let text = std::fs::read_to_string(path).map_err(|source| ProjectError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Project::from_json(&text)
    }
}
