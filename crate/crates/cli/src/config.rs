//! Run configuration: a JSON document plus command-line overrides.

use beadgap::{ModelKind, ModelParams};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Invalid or unreadable configuration (exit status 1).
#[derive(Error, Debug, Clone, PartialEq)]
#[error("config error{}: {message}", field.as_ref().map(|f| format!(" in `{f}`")).unwrap_or_default())]
pub struct ConfigError {
    pub field: Option<String>,
    pub message: String,
}

impl ConfigError {
    fn field(field: &str, message: impl Into<String>) -> Self {
        Self {
            field: Some(field.to_string()),
            message: message.into(),
        }
    }

    fn general(message: impl Into<String>) -> Self {
        Self {
            field: None,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    #[default]
    Json,
}

/// Partially specified configuration as read from a file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub model: Option<String>,
    pub a: Option<f64>,
    pub d: Option<f64>,
    pub alpha: Option<f64>,
    pub k_min: Option<f64>,
    pub k_max: Option<f64>,
    pub resolution: Option<usize>,
    pub epsilon: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub both_regimes: Option<bool>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| {
            ConfigError::general(format!("line {}, column {}: {e}", e.line(), e.column()))
        })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::general(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| ConfigError {
            field: e.field,
            message: format!("{}: {}", path.display(), e.message),
        })
    }

    /// Fields set in `over` replace those in `self`.
    pub fn overridden_by(self, over: ConfigFile) -> Self {
        Self {
            model: over.model.or(self.model),
            a: over.a.or(self.a),
            d: over.d.or(self.d),
            alpha: over.alpha.or(self.alpha),
            k_min: over.k_min.or(self.k_min),
            k_max: over.k_max.or(self.k_max),
            resolution: over.resolution.or(self.resolution),
            epsilon: over.epsilon.or(self.epsilon),
            out: over.out.or(self.out),
            format: over.format.or(self.format),
            both_regimes: over.both_regimes.or(self.both_regimes),
        }
    }
}

/// Fully resolved and validated configuration; echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelKind,
    pub a: f64,
    /// Segment length; absent for tight variants.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    pub alpha: f64,
    pub k_min: f64,
    pub k_max: f64,
    pub resolution: usize,
    pub epsilon: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    pub format: Format,
    #[serde(default)]
    pub both_regimes: bool,
}

pub const DEFAULT_K_MIN: f64 = 0.1;
pub const DEFAULT_K_MAX_CHAIN: f64 = 60.0;
pub const DEFAULT_K_MAX_CARPET: f64 = 40.0;
pub const DEFAULT_RESOLUTION: usize = 64;

fn positive(field: &str, v: f64) -> Result<f64, ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(ConfigError::field(
            field,
            format!("must be positive and finite, got {v}"),
        ))
    }
}

impl RunConfig {
    pub fn resolve(file: ConfigFile) -> Result<Self, ConfigError> {
        let model: ModelKind = file
            .model
            .as_deref()
            .ok_or_else(|| ConfigError::field("model", "missing"))?
            .parse()
            .map_err(|e: beadgap::Error| ConfigError::field("model", e.to_string()))?;
        let a = positive("a", file.a.unwrap_or(1.0))?;
        let d = if model.has_segments() {
            Some(positive("d", file.d.unwrap_or(1.0))?)
        } else if file.d.is_some() {
            return Err(ConfigError::field(
                "d",
                format!("not used by the tight model {model}"),
            ));
        } else {
            None
        };
        let alpha = positive("alpha", file.alpha.unwrap_or(1.0))?;
        let k_min = positive("k_min", file.k_min.unwrap_or(DEFAULT_K_MIN))?;
        let default_max = if model.is_carpet() {
            DEFAULT_K_MAX_CARPET
        } else {
            DEFAULT_K_MAX_CHAIN
        };
        let k_max = positive("k_max", file.k_max.unwrap_or(default_max))?;
        if k_max <= k_min {
            return Err(ConfigError::field(
                "k_max",
                format!("must exceed k_min = {k_min}"),
            ));
        }
        let resolution = file.resolution.unwrap_or(DEFAULT_RESOLUTION);
        if resolution < 16 {
            return Err(ConfigError::field(
                "resolution",
                format!("must be at least 16, got {resolution}"),
            ));
        }
        let epsilon = file.epsilon.unwrap_or(model.default_epsilon());
        model
            .check_epsilon(epsilon)
            .map_err(|e| ConfigError::field("epsilon", e.to_string()))?;
        Ok(Self {
            model,
            a,
            d,
            alpha,
            k_min,
            k_max,
            resolution,
            epsilon,
            out: file.out,
            format: file.format.unwrap_or_default(),
            both_regimes: file.both_regimes.unwrap_or(false),
        })
    }

    pub fn params(&self) -> ModelParams {
        // validated in `resolve`; tight variants carry a placeholder length
        ModelParams::new(self.model, self.a, self.d.unwrap_or(1.0), self.alpha)
            .expect("validated configuration")
    }

    /// The echoed form as a `ConfigFile`, for feeding a report header back in.
    pub fn to_file(&self) -> ConfigFile {
        ConfigFile {
            model: Some(self.model.name().to_string()),
            a: Some(self.a),
            d: self.d,
            alpha: Some(self.alpha),
            k_min: Some(self.k_min),
            k_max: Some(self.k_max),
            resolution: Some(self.resolution),
            epsilon: Some(self.epsilon),
            out: self.out.clone(),
            format: Some(self.format),
            both_regimes: Some(self.both_regimes),
        }
    }
}
