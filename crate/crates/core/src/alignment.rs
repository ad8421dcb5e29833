//! Binary correspondence between consolidated indicators and a strategy's
//! axes: the extended matrix and its frequency analysis.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::model::{
    AxisKind, AxisScheme, CorrespondenceEntry, ExtendedMatrix, IndicatorCode, OTA, OVA,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlignmentError {
    #[error("correspondence for {0} references an indicator outside the consolidated set")]
    NotConsolidated(IndicatorCode),
    #[error("correspondence for {indicator} references unknown {kind:?} axis {axis}")]
    UnknownAxis {
        indicator: IndicatorCode,
        axis: String,
        kind: AxisKind,
    },
}

/// Places every correspondence into its cell. Repeated (indicator, cell)
/// entries collapse into one membership.
pub fn build_matrix(
    correspondences: &[CorrespondenceEntry],
    scheme: &AxisScheme,
    consolidated: &BTreeSet<IndicatorCode>,
) -> Result<ExtendedMatrix, AlignmentError> {
    let mut matrix = ExtendedMatrix::empty(scheme);
    for c in correspondences {
        if !consolidated.contains(&c.indicator) {
            return Err(AlignmentError::NotConsolidated(c.indicator));
        }
        let row = matrix
            .row_index(&c.transversal)
            .ok_or_else(|| AlignmentError::UnknownAxis {
                indicator: c.indicator,
                axis: c.transversal.clone(),
                kind: AxisKind::Transversal,
            })?;
        let column = matrix
            .column_index(&c.vertical)
            .ok_or_else(|| AlignmentError::UnknownAxis {
                indicator: c.indicator,
                axis: c.vertical.clone(),
                kind: AxisKind::Vertical,
            })?;
        matrix.insert(row, column, c.indicator);
    }
    Ok(matrix)
}

/// Correspondence rows that repeat an earlier (indicator, cell) triple.
pub fn duplicate_entries(correspondences: &[CorrespondenceEntry]) -> Vec<&CorrespondenceEntry> {
    let mut seen = HashSet::new();
    correspondences.iter().filter(|c| !seen.insert(*c)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyTable {
    pub rows: Vec<String>,
    pub columns: Vec<String>,
    /// `cell_counts[row][column]`.
    pub cell_counts: Vec<Vec<usize>>,
    /// Distinct indicators per column, aligned with `columns`.
    pub column_totals: Vec<usize>,
    /// Distinct indicators per row, aligned with `rows`.
    pub row_totals_distinct: Vec<usize>,
    /// Entries per row, counting an indicator once per cell.
    pub row_entries: Vec<usize>,
    pub total_entries: usize,
}

impl FrequencyTable {
    pub fn cell(&self, row: &str, column: &str) -> Option<usize> {
        let r = self.rows.iter().position(|x| x == row)?;
        let c = self.columns.iter().position(|x| x == column)?;
        Some(self.cell_counts[r][c])
    }

    pub fn column_total(&self, column: &str) -> Option<usize> {
        let c = self.columns.iter().position(|x| x == column)?;
        Some(self.column_totals[c])
    }

    pub fn row_total(&self, row: &str) -> Option<usize> {
        let r = self.rows.iter().position(|x| x == row)?;
        Some(self.row_totals_distinct[r])
    }

    pub fn max_cell(&self) -> usize {
        self.cell_counts.iter().flatten().copied().max().unwrap_or(0)
    }
}

pub fn frequency_table(matrix: &ExtendedMatrix) -> FrequencyTable {
    let rows = matrix.rows().to_vec();
    let columns = matrix.columns().to_vec();
    let cell_counts: Vec<Vec<usize>> = (0..rows.len())
        .map(|r| (0..columns.len()).map(|c| matrix.cell_at(r, c).len()).collect())
        .collect();
    FrequencyTable {
        column_totals: (0..columns.len())
            .map(|c| matrix.distinct_in_column(c).len())
            .collect(),
        row_totals_distinct: (0..rows.len()).map(|r| matrix.distinct_in_row(r).len()).collect(),
        row_entries: (0..rows.len()).map(|r| matrix.row_entries(r)).collect(),
        total_entries: matrix.total_entries(),
        rows,
        columns,
        cell_counts,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisCoverage {
    pub axis: String,
    pub kind: AxisKind,
    pub count: usize,
}

/// Distinct indicators touching each declared axis: a vertical axis counts
/// its whole column (overflow row included), a transversal axis its whole
/// row. Sentinels are not axes and are skipped.
pub fn coverage_per_axis(matrix: &ExtendedMatrix) -> Vec<AxisCoverage> {
    let vertical = matrix
        .columns()
        .iter()
        .enumerate()
        .filter(|(_, id)| id.as_str() != OVA)
        .map(|(c, id)| AxisCoverage {
            axis: id.clone(),
            kind: AxisKind::Vertical,
            count: matrix.distinct_in_column(c).len(),
        });
    let transversal = matrix
        .rows()
        .iter()
        .enumerate()
        .filter(|(_, id)| id.as_str() != OTA)
        .map(|(r, id)| AxisCoverage {
            axis: id.clone(),
            kind: AxisKind::Transversal,
            count: matrix.distinct_in_row(r).len(),
        });
    vertical.chain(transversal).collect()
}

/// Matrix export shape: `{rows, columns, cells: {"row|col": [codes]}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixExport {
    pub rows: Vec<String>,
    pub columns: Vec<String>,
    pub cells: BTreeMap<String, Vec<IndicatorCode>>,
}

impl From<&ExtendedMatrix> for MatrixExport {
    fn from(m: &ExtendedMatrix) -> Self {
        Self {
            rows: m.rows().to_vec(),
            columns: m.columns().to_vec(),
            cells: m.to_cell_map(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{normalize_code, Axis};

    fn axis(id: &str) -> Axis {
        Axis {
            id: id.into(),
            name: id.into(),
            abbrev: id.into(),
        }
    }

    fn scheme() -> AxisScheme {
        AxisScheme {
            vertical_axes: vec![axis("EDU"), axis("PS")],
            transversal_axes: vec![axis("GOV")],
            actions: vec![],
        }
    }

    fn entry(code: &str, v: &str, t: &str) -> CorrespondenceEntry {
        CorrespondenceEntry {
            indicator: normalize_code(code).unwrap(),
            vertical: v.into(),
            transversal: t.into(),
        }
    }

    fn set(codes: &[&str]) -> BTreeSet<IndicatorCode> {
        codes.iter().map(|c| normalize_code(c).unwrap()).collect()
    }

    #[test]
    fn no_correspondences_means_empty_cells() {
        let m = build_matrix(&[], &scheme(), &set(&[])).unwrap();
        assert_eq!(m.total_entries(), 0);
        assert_eq!(m.rows(), ["GOV", "OTA"]);
        assert_eq!(m.columns(), ["EDU", "PS", "OVA"]);
        let t = frequency_table(&m);
        assert!(t.column_totals.iter().all(|&n| n == 0));
        assert!(coverage_per_axis(&m).iter().all(|c| c.count == 0));
    }

    #[test]
    fn corner_only_entry() {
        let m = build_matrix(&[entry("X1", OVA, OTA)], &scheme(), &set(&["X1"])).unwrap();
        assert_eq!(m.total_entries(), 1);
        assert_eq!(m.cell(OTA, OVA).unwrap().len(), 1);
    }

    #[test]
    fn rejects_non_consolidated_and_unknown_axes() {
        assert_eq!(
            build_matrix(&[entry("A1", "EDU", "GOV")], &scheme(), &set(&[])),
            Err(AlignmentError::NotConsolidated(normalize_code("A1").unwrap()))
        );
        assert!(matches!(
            build_matrix(&[entry("A1", "GOV", "GOV")], &scheme(), &set(&["A1"])),
            Err(AlignmentError::UnknownAxis { kind: AxisKind::Vertical, .. })
        ));
    }

    #[test]
    fn duplicates_collapse() {
        let entries = [entry("A1", "EDU", "GOV"), entry("A1", "EDU", "GOV")];
        let m = build_matrix(&entries, &scheme(), &set(&["A1"])).unwrap();
        assert_eq!(m.total_entries(), 1);
        assert_eq!(duplicate_entries(&entries).len(), 1);
    }

    #[test]
    fn row_distinct_total_can_be_below_row_sum() {
        let entries = [
            entry("A1", "EDU", OTA),
            entry("A1", "PS", OTA),
            entry("B1", "PS", OTA),
        ];
        let m = build_matrix(&entries, &scheme(), &set(&["A1", "B1"])).unwrap();
        let t = frequency_table(&m);
        assert_eq!(t.row_total(OTA), Some(2));
        assert_eq!(t.row_entries[1], 3);
        assert_eq!(t.column_total("PS"), Some(2));
        assert_eq!(t.total_entries, 3);
    }
}
