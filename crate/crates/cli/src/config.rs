//! Flat JSON run configuration shared by every subcommand. Command-line
//! flags override file values; the merged result is validated before any
//! work starts.

use std::path::PathBuf;

use serde::Deserialize;
use splitgiou_core::evalmetrics::DEFAULT_IOU_THRESHOLD;
use splitgiou_core::{BoxLossConfig, Reduction, SplitMode};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("config field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("config: {0}")]
    Syntax(String),
}

fn field(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Field { field: field.into(), message: message.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SplitModeArg {
    Full,
    Rect3,
    Rrect3,
}

impl From<SplitModeArg> for SplitMode {
    fn from(m: SplitModeArg) -> Self {
        match m {
            SplitModeArg::Full => SplitMode::FullRect,
            SplitModeArg::Rect3 => SplitMode::SplitRect3,
            SplitModeArg::Rrect3 => SplitMode::SplitRotatedRect3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReductionArg {
    Sum,
    Mean,
}

/// The config file as written; every field optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub lambda1: Option<f64>,
    pub lambda2: Option<f64>,
    pub split_mode: Option<SplitModeArg>,
    pub reduction: Option<ReductionArg>,
    pub class_weight: Option<f64>,
    pub iou_threshold: Option<f64>,
    pub n_v: Option<usize>,
    pub output_path: Option<PathBuf>,
}

impl ConfigFile {
    pub fn parse(bytes: &[u8]) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_slice(bytes);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            let message = inner.to_string();
            if inner.is_syntax() || inner.is_eof() {
                ConfigError::Syntax(message)
            } else if path == "." {
                // Unknown fields are reported at the root with the name in the message.
                match message.strip_prefix("unknown field `").and_then(|m| m.split('`').next()) {
                    Some(name) => field(name, "unknown field"),
                    None => ConfigError::Syntax(message),
                }
            } else {
                field(&path, message)
            }
        })
    }

    /// Flag values take precedence over file values.
    pub fn overlay(self, flags: ConfigFile) -> ConfigFile {
        ConfigFile {
            lambda1: flags.lambda1.or(self.lambda1),
            lambda2: flags.lambda2.or(self.lambda2),
            split_mode: flags.split_mode.or(self.split_mode),
            reduction: flags.reduction.or(self.reduction),
            class_weight: flags.class_weight.or(self.class_weight),
            iou_threshold: flags.iou_threshold.or(self.iou_threshold),
            n_v: flags.n_v.or(self.n_v),
            output_path: flags.output_path.or(self.output_path),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub loss: BoxLossConfig,
    pub class_weight: f64,
    pub iou_threshold: f64,
    /// Samples per side when a Bezier pair is turned into a polygon.
    pub n_v: usize,
    /// Where the primary output goes; standard output when absent.
    pub output_path: Option<PathBuf>,
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig { loss: BoxLossConfig::default(), class_weight: 1.0, iou_threshold: DEFAULT_IOU_THRESHOLD, n_v: 10, output_path: None }
    }
}

impl TryFrom<ConfigFile> for CliConfig {
    type Error = ConfigError;

    fn try_from(f: ConfigFile) -> Result<Self, ConfigError> {
        let d = CliConfig::default();
        let weight = |name: &str, v: Option<f64>, default: f64| match v {
            Some(v) if !v.is_finite() || v < 0.0 => Err(field(name, format!("must be a finite number >= 0, got {v}"))),
            Some(v) => Ok(v),
            None => Ok(default),
        };
        let lambda1 = weight("lambda1", f.lambda1, d.loss.lambda1)?;
        let lambda2 = weight("lambda2", f.lambda2, d.loss.lambda2)?;
        let class_weight = weight("class_weight", f.class_weight, d.class_weight)?;
        let iou_threshold = f.iou_threshold.unwrap_or(d.iou_threshold);
        if !(iou_threshold > 0.0 && iou_threshold < 1.0) {
            return Err(field("iou_threshold", format!("must lie strictly between 0 and 1, got {iou_threshold}")));
        }
        let n_v = f.n_v.unwrap_or(d.n_v);
        if n_v < 2 {
            return Err(field("n_v", format!("needs at least 2 samples per side, got {n_v}")));
        }
        if f.output_path.as_ref().is_some_and(|p| p.as_os_str().is_empty()) {
            return Err(field("output_path", "must not be empty"));
        }
        Ok(CliConfig {
            loss: BoxLossConfig {
                lambda1,
                lambda2,
                split_mode: f.split_mode.map_or(d.loss.split_mode, SplitMode::from),
                reduction: match f.reduction {
                    Some(ReductionArg::Mean) => Reduction::Mean,
                    Some(ReductionArg::Sum) => Reduction::Sum,
                    None => d.loss.reduction,
                },
            },
            class_weight,
            iou_threshold,
            n_v,
            output_path: f.output_path,
        })
    }
}
