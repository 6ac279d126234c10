//! Run configuration: a plain `key = value` file with CLI flags layered on
//! top. `#` starts a comment; unknown keys are rejected.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::analysis::AnalysisConfig;
use crate::gender::GenderConfig;
use crate::meme::{CarrierSource, FrequencyMode};
use crate::propagation::UniverseMode;
use crate::stats::SelfCitationMode;

/// Environment variable overriding the output directory.
pub const OUTPUT_DIR_ENV: &str = "MEMETRACE_OUTPUT_DIR";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("config line {line}: {message}")]
    Invalid { line: usize, message: String },
    #[error("invalid config: {0}")]
    Value(String),
}

/// Pipeline configuration assembled from defaults, a config file, the
/// environment, and CLI flags (in increasing precedence).
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub abstracts: Option<PathBuf>,
    pub edges: Option<PathBuf>,
    pub snapshot: Option<PathBuf>,
    pub name_table: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub output_dir: PathBuf,
    pub gender_threshold: f64,
    pub gender_min_count: u64,
    pub meme_threshold: f64,
    pub carrier_include_titles: bool,
    pub frequency_mode: FrequencyMode,
    pub self_citation_any_author: bool,
    pub restrict_universe_to_citing: bool,
    /// Worker threads; zero picks the number of cores.
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            abstracts: None,
            edges: None,
            snapshot: None,
            name_table: None,
            stopwords: None,
            lexicon: None,
            output_dir: PathBuf::from("memetrace-out"),
            gender_threshold: 0.95,
            gender_min_count: 5,
            meme_threshold: 0.08,
            carrier_include_titles: false,
            frequency_mode: FrequencyMode::Papers,
            self_citation_any_author: false,
            restrict_universe_to_citing: false,
            threads: 0,
        }
    }
}

impl RunConfig {
    /// Loads a `key = value` file over the defaults.
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.display().to_string(), source: e })?;
        let mut config = RunConfig::default();
        config.apply_text(&text)?;
        Ok(config)
    }

    /// Applies `key = value` lines to this config.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw_line) in text.lines().enumerate() {
            let line = raw_line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::Invalid {
                    line: i + 1,
                    message: format!("expected key = value, got {line:?}"),
                });
            };
            self.set(key.trim(), value.trim())
                .map_err(|message| ConfigError::Invalid { line: i + 1, message })?;
        }
        Ok(())
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
            value.parse().map_err(|_| format!("invalid value {value:?} for {key}"))
        }
        fn parse_bool(key: &str, value: &str) -> Result<bool, String> {
            match value {
                "true" | "yes" | "1" => Ok(true),
                "false" | "no" | "0" => Ok(false),
                _ => Err(format!("invalid boolean {value:?} for {key}")),
            }
        }
        match key {
            "abstracts" => self.abstracts = Some(PathBuf::from(value)),
            "edges" => self.edges = Some(PathBuf::from(value)),
            "snapshot" => self.snapshot = Some(PathBuf::from(value)),
            "name_table" => self.name_table = Some(PathBuf::from(value)),
            "stopwords" => self.stopwords = Some(PathBuf::from(value)),
            "lexicon" => self.lexicon = Some(PathBuf::from(value)),
            "output_dir" => self.output_dir = PathBuf::from(value),
            "gender_threshold" => self.gender_threshold = parse(key, value)?,
            "gender_min_count" => self.gender_min_count = parse(key, value)?,
            "meme_threshold" => self.meme_threshold = parse(key, value)?,
            "carrier_include_titles" => self.carrier_include_titles = parse_bool(key, value)?,
            "frequency_mode" => {
                self.frequency_mode = match value {
                    "papers" => FrequencyMode::Papers,
                    "occurrences" => FrequencyMode::Occurrences,
                    _ => return Err(format!("frequency_mode must be papers|occurrences, got {value:?}")),
                }
            }
            "self_citation_any_author" => {
                self.self_citation_any_author = parse_bool(key, value)?
            }
            "restrict_universe_to_citing" => {
                self.restrict_universe_to_citing = parse_bool(key, value)?
            }
            "threads" => self.threads = parse(key, value)?,
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }

    /// Applies the output-dir environment override, if set.
    pub fn apply_env(&mut self) {
        if let Ok(dir) = std::env::var(OUTPUT_DIR_ENV) {
            if !dir.is_empty() {
                self.output_dir = PathBuf::from(dir);
            }
        }
    }

    /// Value-level validation (path existence is checked where paths are
    /// opened).
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.gender_config()
            .validate()
            .map_err(|e| ConfigError::Value(e.to_string()))?;
        if !(0.0..=1.0).contains(&self.meme_threshold) {
            return Err(ConfigError::Value(format!(
                "meme_threshold must be in [0, 1], got {}",
                self.meme_threshold
            )));
        }
        Ok(())
    }

    pub fn gender_config(&self) -> GenderConfig {
        GenderConfig { threshold: self.gender_threshold, min_count: self.gender_min_count }
    }

    pub fn analysis_config(&self) -> AnalysisConfig {
        AnalysisConfig {
            gender: self.gender_config(),
            meme_threshold: self.meme_threshold,
            carrier_source: if self.carrier_include_titles {
                CarrierSource::AbstractAndTitle
            } else {
                CarrierSource::Abstract
            },
            self_citation_mode: if self.self_citation_any_author {
                SelfCitationMode::AnyAuthor
            } else {
                SelfCitationMode::FirstAuthor
            },
            universe_mode: if self.restrict_universe_to_citing {
                UniverseMode::RestrictToCiting
            } else {
                UniverseMode::SharedDenominator
            },
        }
    }

    /// Renders the effective configuration back as `key = value` text.
    pub fn render(&self) -> String {
        let mut pairs: BTreeMap<&str, String> = BTreeMap::new();
        let path = |p: &Option<PathBuf>| {
            p.as_ref().map(|p| p.display().to_string()).unwrap_or_default()
        };
        pairs.insert("abstracts", path(&self.abstracts));
        pairs.insert("edges", path(&self.edges));
        pairs.insert("snapshot", path(&self.snapshot));
        pairs.insert("name_table", path(&self.name_table));
        pairs.insert("stopwords", path(&self.stopwords));
        pairs.insert("lexicon", path(&self.lexicon));
        pairs.insert("output_dir", self.output_dir.display().to_string());
        pairs.insert("gender_threshold", self.gender_threshold.to_string());
        pairs.insert("gender_min_count", self.gender_min_count.to_string());
        pairs.insert("meme_threshold", self.meme_threshold.to_string());
        pairs.insert("carrier_include_titles", self.carrier_include_titles.to_string());
        pairs.insert(
            "frequency_mode",
            match self.frequency_mode {
                FrequencyMode::Papers => "papers".to_string(),
                FrequencyMode::Occurrences => "occurrences".to_string(),
            },
        );
        pairs.insert("self_citation_any_author", self.self_citation_any_author.to_string());
        pairs.insert(
            "restrict_universe_to_citing",
            self.restrict_universe_to_citing.to_string(),
        );
        pairs.insert("threads", self.threads.to_string());
        let mut out = String::new();
        for (key, value) in pairs {
            if !value.is_empty() {
                out.push_str(&format!("{key} = {value}\n"));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_key_value_text() {
        let mut config = RunConfig::default();
        config
            .apply_text(
                "# comment\nabstracts = /data/abs\ngender_threshold = 0.9\nthreads = 4\nfrequency_mode = occurrences\n",
            )
            .unwrap();
        assert_eq!(config.abstracts.as_deref(), Some(Path::new("/data/abs")));
        assert_eq!(config.gender_threshold, 0.9);
        assert_eq!(config.threads, 4);
        assert_eq!(config.frequency_mode, FrequencyMode::Occurrences);
    }

    #[test]
    fn unknown_key_is_rejected_with_line_number() {
        let mut config = RunConfig::default();
        let err = config.apply_text("\nnope = 1\n").unwrap_err();
        match err {
            ConfigError::Invalid { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn validation_bounds() {
        let mut config = RunConfig { gender_threshold: 0.4, ..RunConfig::default() };
        assert!(config.validate().is_err());
        config.gender_threshold = 0.95;
        config.meme_threshold = 1.5;
        assert!(config.validate().is_err());
        config.meme_threshold = 0.08;
        assert!(config.validate().is_ok());
    }

    #[test]
    fn render_round_trips() {
        let config = RunConfig {
            abstracts: Some(PathBuf::from("/data/abs")),
            gender_threshold: 0.9,
            ..RunConfig::default()
        };
        let text = config.render();
        let mut reparsed = RunConfig::default();
        reparsed.apply_text(&text).unwrap();
        assert_eq!(reparsed, config);
    }
}
