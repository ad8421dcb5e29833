//! Analysis parameters as stored in `config.json`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StdMode {
    #[default]
    Population,
    Sample,
}

impl FromStr for StdMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "population" => Ok(StdMode::Population),
            "sample" => Ok(StdMode::Sample),
            other => Err(format!("expected \"population\" or \"sample\", got {other:?}")),
        }
    }
}

impl fmt::Display for StdMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StdMode::Population => "population",
            StdMode::Sample => "sample",
        })
    }
}

/// Either a fixed count or `auto` (mean of per-country counts).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StandoutThreshold {
    #[default]
    Auto,
    Fixed(u32),
}

impl FromStr for StandoutThreshold {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(StandoutThreshold::Auto);
        }
        s.parse::<u32>()
            .map(StandoutThreshold::Fixed)
            .map_err(|_| format!("expected a non-negative integer or \"auto\", got {s:?}"))
    }
}

impl fmt::Display for StandoutThreshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StandoutThreshold::Auto => f.write_str("auto"),
            StandoutThreshold::Fixed(n) => write!(f, "{n}"),
        }
    }
}

impl Serialize for StandoutThreshold {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            StandoutThreshold::Auto => serializer.serialize_str("auto"),
            StandoutThreshold::Fixed(n) => serializer.serialize_u32(*n),
        }
    }
}

impl<'de> Deserialize<'de> for StandoutThreshold {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Count(u32),
            Word(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Count(n) => Ok(StandoutThreshold::Fixed(n)),
            Raw::Word(w) => w.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnalysisConfig {
    pub partial_weight: f64,
    pub std_mode: StdMode,
    pub standout_threshold: StandoutThreshold,
    pub min_axis_coverage: u32,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            partial_weight: 1.0,
            std_mode: StdMode::Population,
            standout_threshold: StandoutThreshold::Auto,
            min_axis_coverage: 3,
        }
    }
}

pub const CONFIG_KEYS: [&str; 4] = [
    "partial_weight",
    "std_mode",
    "standout_threshold",
    "min_axis_coverage",
];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("partial_weight must be within [0, 1], got {0}")]
    PartialWeight(f64),
    #[error("min_axis_coverage must be at least 1, got {0}")]
    MinAxisCoverage(u32),
}

impl AnalysisConfig {
    pub fn check(&self) -> Result<(), ConfigError> {
        if !(0.0..=1.0).contains(&self.partial_weight) {
            return Err(ConfigError::PartialWeight(self.partial_weight));
        }
        if self.min_axis_coverage < 1 {
            return Err(ConfigError::MinAxisCoverage(self.min_axis_coverage));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_threshold_forms() {
        let c: AnalysisConfig =
            serde_json::from_str(r#"{"standout_threshold": 5, "std_mode": "sample"}"#).unwrap();
        assert_eq!(c.standout_threshold, StandoutThreshold::Fixed(5));
        assert_eq!(c.std_mode, StdMode::Sample);
        assert_eq!(c.partial_weight, 1.0);
        let c: AnalysisConfig = serde_json::from_str(r#"{"standout_threshold": "auto"}"#).unwrap();
        assert_eq!(c.standout_threshold, StandoutThreshold::Auto);
        assert!(serde_json::from_str::<AnalysisConfig>(r#"{"standout_threshold": "x"}"#).is_err());
    }

    #[test]
    fn rejects_out_of_range_values() {
        let mut c = AnalysisConfig::default();
        assert!(c.check().is_ok());
        c.partial_weight = 1.5;
        assert_eq!(c.check(), Err(ConfigError::PartialWeight(1.5)));
        c.partial_weight = 0.0;
        c.min_axis_coverage = 0;
        assert_eq!(c.check(), Err(ConfigError::MinAxisCoverage(0)));
    }

    #[test]
    fn serializes_round_trip() {
        let c = AnalysisConfig {
            partial_weight: 0.5,
            std_mode: StdMode::Sample,
            standout_threshold: StandoutThreshold::Fixed(4),
            min_axis_coverage: 2,
        };
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<AnalysisConfig>(&s).unwrap(), c);
    }
}
