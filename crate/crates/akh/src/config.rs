//! Run settings from flags, an optional TOML file, and defaults, in that
//! order of precedence.

use std::path::{Path, PathBuf};

use akh_core::cube::DEFAULT_STATE_CAP;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FieldChoice {
    Gf2,
    Rat,
}

impl FieldChoice {
    pub fn name(self) -> &'static str {
        match self {
            FieldChoice::Gf2 => "gf2",
            FieldChoice::Rat => "rat",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Tsv,
    Json,
}

/// Keys accepted in a config file. All optional.
#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub field: Option<FieldChoice>,
    pub format: Option<Format>,
    pub cap: Option<usize>,
    pub workers: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub weights: Option<String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
    }

    /// Fill unset values from `other`.
    pub fn or(self, other: FileConfig) -> FileConfig {
        FileConfig {
            field: self.field.or(other.field),
            format: self.format.or(other.format),
            cap: self.cap.or(other.cap),
            workers: self.workers.or(other.workers),
            cache_dir: self.cache_dir.or(other.cache_dir),
            weights: self.weights.or(other.weights),
        }
    }
}

/// Fully resolved settings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Settings {
    /// `None` lets each command pick its natural field.
    pub field: Option<FieldChoice>,
    pub format: Format,
    pub cap: usize,
    pub workers: usize,
    pub cache_dir: Option<PathBuf>,
    pub weights: Option<String>,
}

impl Settings {
    pub fn resolve(flags: FileConfig, file: Option<FileConfig>) -> Settings {
        let c = flags.or(file.unwrap_or_default());
        Settings {
            field: c.field,
            format: c.format.unwrap_or(Format::Tsv),
            cap: c.cap.unwrap_or(DEFAULT_STATE_CAP),
            workers: c
                .workers
                .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
                .max(1),
            cache_dir: c.cache_dir,
            weights: c.weights,
        }
    }

    pub fn field_or(&self, default: FieldChoice) -> FieldChoice {
        self.field.unwrap_or(default)
    }
}

impl Default for Settings {
    fn default() -> Self {
        Settings::resolve(FileConfig::default(), None)
    }
}
