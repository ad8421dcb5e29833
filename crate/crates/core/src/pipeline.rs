//! Runs every stage in order over a loaded bundle.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::alignment::{
    build_matrix, coverage_per_axis, frequency_table, AlignmentError, AxisCoverage, FrequencyTable,
};
use crate::config::{AnalysisConfig, ConfigError};
use crate::consolidate::{
    assign_codes, consolidate_set, merge_aliases, ConsolidateError, ProposedIndicator, Taxonomy,
};
use crate::ingest::DatasetBundle;
use crate::model::{
    Dimension, ExtendedMatrix, FrequencyRecord, Indicator, IndicatorCode, IndicatorStatus,
    PrevalenceStats,
};
use crate::patterns::{
    detect_blind_spot, flag_coverage, overflow_ratios, PatternError, PatternReport,
};
use crate::prevalence::{
    classify, compute_frequencies, compute_stats, detect_standouts, measured_indicators,
    stratify_countries, Prevalence, PrevalenceError, PrevalenceLabel, StandoutResult, Stratum,
};
use crate::reference::{check_reference, ReferenceCheck};

#[derive(Debug, thiserror::Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Prevalence(#[from] PrevalenceError),
    #[error(transparent)]
    Consolidate(#[from] ConsolidateError),
    #[error(transparent)]
    Alignment(#[from] AlignmentError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
}

/// A proposal after alias merging, with the code it received.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodedProposal {
    pub code: IndicatorCode,
    pub name: String,
    pub dimension: char,
    pub source_countries: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Consolidation {
    pub highly_prevalent: Vec<IndicatorCode>,
    pub new_dimensions: Vec<Dimension>,
    /// Empty when the bundle carries no proposals and the already-coded
    /// `proposed` indicators are taken as accepted.
    pub coded_proposals: Vec<CodedProposal>,
    pub indicators: Vec<Indicator>,
    /// Differences between derived codes and the coded indicators in the
    /// dataset.
    pub discrepancies: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub config: AnalysisConfig,
    pub frequencies: Vec<FrequencyRecord>,
    pub stats: PrevalenceStats,
    pub labels: Vec<PrevalenceLabel>,
    pub standouts: StandoutResult,
    pub strata: BTreeMap<String, Stratum>,
    pub consolidation: Consolidation,
    pub matrix: ExtendedMatrix,
    pub table: FrequencyTable,
    pub coverage: Vec<AxisCoverage>,
    pub patterns: PatternReport,
    pub reference_checks: Vec<ReferenceCheck>,
}

pub fn analyze(bundle: &DatasetBundle, config: &AnalysisConfig) -> Result<Analysis, AnalysisError> {
    config.check()?;
    let measured = measured_indicators(&bundle.indicators);
    let frequencies = compute_frequencies(
        &measured,
        &bundle.matches,
        &bundle.countries,
        config.partial_weight,
    );
    let series: Vec<f64> = frequencies.iter().map(|f| f.frequency).collect();
    let stats = compute_stats(&series, config.std_mode)?;
    let labels = classify(&frequencies, &stats);
    let standouts = detect_standouts(&bundle.matches, &bundle.countries, config.standout_threshold)?;
    let strata = stratify_countries(&bundle.countries, &standouts.standouts);
    let consolidation = consolidate(bundle, &labels)?;

    let consolidated: BTreeSet<IndicatorCode> =
        consolidation.indicators.iter().map(|i| i.code).collect();
    let matrix = build_matrix(&bundle.correspondences, &bundle.axis_scheme, &consolidated)?;
    let table = frequency_table(&matrix);
    let coverage = coverage_per_axis(&matrix);
    let patterns = PatternReport::new(
        detect_blind_spot(&matrix, consolidated.len())?,
        overflow_ratios(&matrix),
        flag_coverage(&coverage, config.min_axis_coverage)?,
    );

    let mut analysis = Analysis {
        config: *config,
        frequencies,
        stats,
        labels,
        standouts,
        strata,
        consolidation,
        matrix,
        table,
        coverage,
        patterns,
        reference_checks: Vec::new(),
    };
    if let Some(reference) = &bundle.reference {
        analysis.reference_checks = check_reference(reference, &analysis);
    }
    Ok(analysis)
}

fn consolidate(
    bundle: &DatasetBundle,
    labels: &[PrevalenceLabel],
) -> Result<Consolidation, ConsolidateError> {
    let highly_prevalent: Vec<IndicatorCode> = labels
        .iter()
        .filter(|l| l.label == Prevalence::HighlyPrevalent)
        .map(|l| l.indicator)
        .collect();
    let listed: Vec<Indicator> = bundle
        .indicators
        .iter()
        .filter(|i| i.status == IndicatorStatus::Proposed)
        .cloned()
        .collect();

    let (accepted, new_dimensions, coded_proposals, discrepancies) = if bundle.proposals.is_empty() {
        (listed, Vec::new(), Vec::new(), Vec::new())
    } else {
        let merged: Vec<ProposedIndicator> = merge_aliases(&bundle.proposals)?
            .into_iter()
            .filter(|p| p.accepted)
            .collect();
        let taxonomy = Taxonomy::baseline(&bundle.dimensions, &bundle.indicators);
        let assignment = assign_codes(&merged, &taxonomy)?;
        let coded = merged
            .iter()
            .zip(&assignment.indicators)
            .map(|(p, i)| CodedProposal {
                code: i.code,
                name: i.name.clone(),
                dimension: i.dimension,
                source_countries: p.source_countries.clone(),
            })
            .collect();
        let discrepancies = compare_codes(&assignment.indicators, &listed, bundle);
        // Keep dataset metadata (area, notes) where a listed indicator matches.
        let accepted = assignment
            .indicators
            .into_iter()
            .map(|derived| {
                listed
                    .iter()
                    .find(|l| l.code == derived.code && l.name == derived.name)
                    .cloned()
                    .unwrap_or(derived)
            })
            .collect();
        (accepted, assignment.new_dimensions, coded, discrepancies)
    };

    let preliminary: Vec<Indicator> = bundle
        .indicators
        .iter()
        .filter(|i| i.status != IndicatorStatus::Proposed)
        .cloned()
        .collect();
    let indicators = consolidate_set(labels, &preliminary, &accepted)?;
    Ok(Consolidation {
        highly_prevalent,
        new_dimensions,
        coded_proposals,
        indicators,
        discrepancies,
    })
}

fn compare_codes(derived: &[Indicator], listed: &[Indicator], bundle: &DatasetBundle) -> Vec<String> {
    let mut out = Vec::new();
    for d in derived {
        match listed.iter().find(|l| l.code == d.code) {
            None => out.push(format!("{} ({}) is not listed in the dataset", d.code, d.name)),
            Some(l) if l.name != d.name => out.push(format!(
                "{} is {:?} in the dataset but {:?} after assignment",
                d.code, l.name, d.name
            )),
            Some(_) => {}
        }
    }
    for l in listed {
        if !derived.iter().any(|d| d.code == l.code) {
            out.push(format!("{} ({}) has no matching accepted proposal", l.code, l.name));
        }
    }
    for d in derived {
        let listed_dim = bundle.dimensions.iter().find(|x| x.code == d.dimension);
        if listed_dim.is_none() {
            out.push(format!("dimension {} of {} is not listed in the dataset", d.dimension, d.code));
        }
    }
    out.dedup();
    out
}
