//! Indicator frequencies across national strategies, the three-way
//! prevalence classification, standout detection and country strata.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::config::{StandoutThreshold, StdMode};
use crate::model::{
    CountryRecord, FrequencyRecord, Indicator, IndicatorCode, IndicatorStatus, MatchQuality,
    MatchRecord, PrevalenceStats,
};

/// Relative tolerance for boundary ties between a frequency and a threshold.
/// Scaled by `mean + std_dev`, so classification is invariant under
/// rescaling the series.
const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PrevalenceError {
    #[error("frequency series is empty")]
    EmptySeries,
    #[error("sample standard deviation needs at least two frequencies")]
    SampleTooSmall,
    #[error("auto standout threshold needs at least one country with a strategy document")]
    NoDocumentCountries,
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub enum Prevalence {
    Irrelevant,
    Prevalent,
    HighlyPrevalent,
}

impl Prevalence {
    pub fn label(self) -> &'static str {
        match self {
            Prevalence::Irrelevant => "Irrelevant",
            Prevalence::Prevalent => "Prevalent",
            Prevalence::HighlyPrevalent => "Highly Prevalent",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrevalenceLabel {
    pub indicator: IndicatorCode,
    pub label: Prevalence,
    pub frequency: f64,
}

/// Indicators whose prevalence is measured: everything not introduced as a
/// new proposal.
pub fn measured_indicators(indicators: &[Indicator]) -> Vec<IndicatorCode> {
    let mut codes: Vec<_> = indicators
        .iter()
        .filter(|i| i.status != IndicatorStatus::Proposed)
        .map(|i| i.code)
        .collect();
    codes.sort();
    codes.dedup();
    codes
}

/// Weighted count of document-holding countries matching each indicator.
/// A full match counts 1, a partial match counts `partial_weight`. Every
/// indicator in `indicators` gets a record, sorted by code.
pub fn compute_frequencies(
    indicators: &[IndicatorCode],
    matches: &[MatchRecord],
    countries: &[CountryRecord],
    partial_weight: f64,
) -> Vec<FrequencyRecord> {
    let with_document: HashSet<&str> = countries
        .iter()
        .filter(|c| c.has_document)
        .map(|c| c.id.as_str())
        .collect();
    let mut weights: HashMap<IndicatorCode, f64> = HashMap::new();
    for m in matches {
        if !with_document.contains(m.country.as_str()) {
            continue;
        }
        let w = match m.quality {
            MatchQuality::Full => 1.0,
            MatchQuality::Partial => partial_weight,
        };
        *weights.entry(m.indicator).or_default() += w;
    }
    let codes: BTreeSet<IndicatorCode> = indicators.iter().copied().collect();
    codes
        .into_iter()
        .map(|indicator| FrequencyRecord {
            indicator,
            frequency: weights.get(&indicator).copied().unwrap_or(0.0),
        })
        .collect()
}

/// Mean, standard deviation and the two classification thresholds.
/// The lower threshold is truncated at zero.
pub fn compute_stats(series: &[f64], mode: StdMode) -> Result<PrevalenceStats, PrevalenceError> {
    let n = series.len();
    if n == 0 {
        return Err(PrevalenceError::EmptySeries);
    }
    if mode == StdMode::Sample && n < 2 {
        return Err(PrevalenceError::SampleTooSmall);
    }
    let first = series[0];
    let (mean, std_dev) = if series.iter().all(|&f| f == first) {
        (first, 0.0)
    } else {
        let mean = series.iter().sum::<f64>() / n as f64;
        let ss: f64 = series.iter().map(|f| (f - mean) * (f - mean)).sum();
        let denom = match mode {
            StdMode::Population => n as f64,
            StdMode::Sample => (n - 1) as f64,
        };
        (mean, (ss / denom).sqrt())
    };
    let tol = TIE_TOLERANCE * (mean.abs() + std_dev);
    let lower = mean - std_dev;
    Ok(PrevalenceStats {
        mean,
        std_dev,
        hp_threshold: mean + std_dev,
        irrelevant_threshold: if lower <= tol { 0.0 } else { lower },
    })
}

/// Label for one frequency. Precedence on ties: Highly Prevalent, then
/// Irrelevant, then Prevalent.
pub fn classify_one(frequency: f64, stats: &PrevalenceStats) -> Prevalence {
    let tol = TIE_TOLERANCE * (stats.mean.abs() + stats.std_dev);
    if frequency >= stats.hp_threshold - tol {
        Prevalence::HighlyPrevalent
    } else if stats.irrelevant_threshold == 0.0 {
        if frequency <= 0.0 {
            Prevalence::Irrelevant
        } else {
            Prevalence::Prevalent
        }
    } else if frequency <= stats.irrelevant_threshold + tol {
        Prevalence::Irrelevant
    } else {
        Prevalence::Prevalent
    }
}

pub fn classify(frequencies: &[FrequencyRecord], stats: &PrevalenceStats) -> Vec<PrevalenceLabel> {
    frequencies
        .iter()
        .map(|r| PrevalenceLabel {
            indicator: r.indicator,
            label: classify_one(r.frequency, stats),
            frequency: r.frequency,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandoutResult {
    /// Matched-indicator count per document-holding country.
    pub counts: BTreeMap<String, u32>,
    pub threshold: f64,
    pub standouts: BTreeSet<String>,
}

/// Countries whose matched-indicator count is strictly above the threshold.
pub fn detect_standouts(
    matches: &[MatchRecord],
    countries: &[CountryRecord],
    threshold: StandoutThreshold,
) -> Result<StandoutResult, PrevalenceError> {
    let mut counts: BTreeMap<String, u32> = countries
        .iter()
        .filter(|c| c.has_document)
        .map(|c| (c.id.clone(), 0))
        .collect();
    for m in matches {
        if let Some(n) = counts.get_mut(&m.country) {
            *n += 1;
        }
    }
    let threshold = match threshold {
        StandoutThreshold::Fixed(t) => f64::from(t),
        StandoutThreshold::Auto => {
            if counts.is_empty() {
                return Err(PrevalenceError::NoDocumentCountries);
            }
            counts.values().map(|&n| f64::from(n)).sum::<f64>() / counts.len() as f64
        }
    };
    let standouts = counts
        .iter()
        .filter(|(_, &n)| f64::from(n) > threshold)
        .map(|(id, _)| id.clone())
        .collect();
    Ok(StandoutResult {
        counts,
        threshold,
        standouts,
    })
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum Stratum {
    Systematic,
    Planned,
    Neither,
    NoNais,
}

impl Stratum {
    pub fn description(self) -> &'static str {
        match self {
            Stratum::Systematic => "systematically relies on indicators",
            Stratum::Planned => "plans to rely on indicators",
            Stratum::Neither => "neither relies on nor plans indicators",
            Stratum::NoNais => "no national strategy",
        }
    }
}

/// Mutually exclusive strata, tested in order: no document, systematic
/// (uses indicators or is a standout), planned, neither.
pub fn stratify_countries(
    countries: &[CountryRecord],
    standouts: &BTreeSet<String>,
) -> BTreeMap<String, Stratum> {
    countries
        .iter()
        .map(|c| {
            let stratum = if !c.has_document {
                Stratum::NoNais
            } else if c.uses_indicators || standouts.contains(&c.id) {
                Stratum::Systematic
            } else if c.plans_indicators {
                Stratum::Planned
            } else {
                Stratum::Neither
            };
            (c.id.clone(), stratum)
        })
        .collect()
}
