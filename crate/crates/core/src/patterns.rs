//! Gap patterns in the extended matrix: the blind-spot corner, inside versus
//! outside entry ratios, and axes with thin coverage.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::alignment::AxisCoverage;
use crate::model::{ExtendedMatrix, IndicatorCode};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PatternError {
    #[error("blind-spot share is undefined for an empty consolidated set")]
    EmptyConsolidatedSet,
    #[error("min_axis_coverage must be at least 1, got {0}")]
    InvalidMinimum(u32),
}

/// An `outside:inside` entry count. Kept as raw integers, never reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OverflowPair {
    pub outside: usize,
    pub inside: usize,
}

impl std::fmt::Display for OverflowPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.outside, self.inside)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisOverflow {
    pub axis: String,
    #[serde(flatten)]
    pub pair: OverflowPair,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Overflow {
    /// Overflow-row entries (corner excluded) against interior entries.
    pub transversal: OverflowPair,
    /// Overflow-column entries against every other entry.
    pub vertical: OverflowPair,
    /// Per vertical axis: overflow-row entries against interior entries.
    pub per_axis: Vec<AxisOverflow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlindSpot {
    pub codes: BTreeSet<IndicatorCode>,
    pub share: f64,
}

/// Indicators in the corner cell (outside both axis families) and their share
/// of the consolidated set.
pub fn detect_blind_spot(
    matrix: &ExtendedMatrix,
    consolidated_count: usize,
) -> Result<BlindSpot, PatternError> {
    if consolidated_count == 0 {
        return Err(PatternError::EmptyConsolidatedSet);
    }
    let codes = matrix
        .cell_at(matrix.ota_row(), matrix.ova_column())
        .clone();
    let share = codes.len() as f64 / consolidated_count as f64;
    Ok(BlindSpot { codes, share })
}

pub fn overflow_ratios(matrix: &ExtendedMatrix) -> Overflow {
    let ota = matrix.ota_row();
    let ova = matrix.ova_column();
    let per_axis: Vec<AxisOverflow> = (0..ova)
        .map(|c| {
            let outside = matrix.cell_at(ota, c).len();
            AxisOverflow {
                axis: matrix.columns()[c].clone(),
                pair: OverflowPair {
                    outside,
                    inside: matrix.column_entries(c) - outside,
                },
            }
        })
        .collect();
    let transversal = per_axis.iter().fold(OverflowPair::default(), |acc, a| OverflowPair {
        outside: acc.outside + a.pair.outside,
        inside: acc.inside + a.pair.inside,
    });
    let ova_entries = matrix.column_entries(ova);
    Overflow {
        transversal,
        vertical: OverflowPair {
            outside: ova_entries,
            inside: matrix.total_entries() - ova_entries,
        },
        per_axis,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageFlags {
    pub min_axis_coverage: u32,
    pub low_coverage: Vec<AxisCoverage>,
    pub uncovered: Vec<AxisCoverage>,
}

/// Axes below the coverage minimum, and axes with no indicator at all.
pub fn flag_coverage(coverage: &[AxisCoverage], min: u32) -> Result<CoverageFlags, PatternError> {
    if min < 1 {
        return Err(PatternError::InvalidMinimum(min));
    }
    let pick = |pred: &dyn Fn(usize) -> bool| -> Vec<AxisCoverage> {
        coverage.iter().filter(|c| pred(c.count)).cloned().collect()
    };
    Ok(CoverageFlags {
        min_axis_coverage: min,
        low_coverage: pick(&|n| n < min as usize),
        uncovered: pick(&|n| n == 0),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternReport {
    pub blind_spot: BTreeSet<IndicatorCode>,
    pub blind_spot_share: f64,
    pub vertical_overflow: OverflowPair,
    pub transversal_overflow: OverflowPair,
    pub per_axis_overflow: Vec<AxisOverflow>,
    pub low_coverage_axes: Vec<AxisCoverage>,
    pub uncovered_axes: Vec<AxisCoverage>,
}

impl PatternReport {
    pub fn new(blind: BlindSpot, overflow: Overflow, flags: CoverageFlags) -> Self {
        Self {
            blind_spot: blind.codes,
            blind_spot_share: blind.share,
            vertical_overflow: overflow.vertical,
            transversal_overflow: overflow.transversal,
            per_axis_overflow: overflow.per_axis,
            low_coverage_axes: flags.low_coverage,
            uncovered_axes: flags.uncovered,
        }
    }
}
