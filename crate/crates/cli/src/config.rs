use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use mmqi::chsh::ChshSettings;
use mmqi::montecarlo::SettingSchedule;
use mmqi::noise::{self, ChannelParams, DecayKind};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            "svg" => Ok(Self::Svg),
            other => Err(format!("unknown format `{other}` (expected csv, json or svg)")),
        }
    }
}

/// Either a preset name or a full inline parameter set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChannelSpec {
    Preset(String),
    Inline(ChannelParams),
}

impl ChannelSpec {
    pub fn resolve(&self) -> Result<(String, ChannelParams), CliError> {
        let (name, params) = match self {
            Self::Preset(name) => {
                let params = noise::preset(name)
                    .ok_or_else(|| CliError::user(format!("unknown channel preset `{name}` (expected CH1 or CH2)")))?;
                (name.to_ascii_uppercase(), params)
            }
            Self::Inline(params) => ("custom".to_string(), *params),
        };
        params.validate().map_err(CliError::from)?;
        Ok((name, params))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimOverrides {
    pub m: Option<u32>,
    pub n_trials: Option<u64>,
    pub seed: Option<u64>,
    /// Used to size `n_trials` when it is not given.
    pub target_sigma: Option<f64>,
    pub settings: Option<ChshSettings>,
    pub setting_schedule: Option<SettingSchedule>,
    pub event_budget: Option<u64>,
    pub event_log: Option<bool>,
}

/// Storage-time decay law. Without `tau` the lifetime is fitted to the data
/// or the published anchors.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecayConfig {
    pub kind: DecayKind,
    #[serde(default)]
    pub tau: Option<f64>,
}

/// Run configuration file (JSON). Unknown keys are rejected.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub channel: Option<ChannelSpec>,
    pub m_range: Option<Vec<u32>>,
    pub sim: Option<SimOverrides>,
    pub decay: Option<DecayConfig>,
    pub output_dir: Option<PathBuf>,
    pub formats: Option<BTreeSet<Format>>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::user(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::user(format!("config {}: {e}", path.display())))
    }

    /// Channels to evaluate: the configured one, or both presets.
    pub fn channels(&self) -> Result<Vec<(String, ChannelParams)>, CliError> {
        match &self.channel {
            Some(spec) => Ok(vec![spec.resolve()?]),
            None => Ok(vec![("CH1".into(), noise::CH1), ("CH2".into(), noise::CH2)]),
        }
    }

    pub fn channel_or_ch1(&self) -> Result<(String, ChannelParams), CliError> {
        match &self.channel {
            Some(spec) => spec.resolve(),
            None => Ok(("CH1".into(), noise::CH1)),
        }
    }

    pub fn m_range(&self, default: std::ops::RangeInclusive<u32>) -> Result<Vec<u32>, CliError> {
        let ms = self.m_range.clone().unwrap_or_else(|| default.collect());
        if ms.is_empty() || ms.contains(&0) {
            return Err(CliError::user("m_range must be a non-empty list of positive integers"));
        }
        Ok(ms)
    }
}
