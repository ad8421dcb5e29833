//! Optional published values to check derived results against. Any
//! disagreement becomes an erratum-check callout in the report.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::model::IndicatorCode;
use crate::pipeline::Analysis;
use crate::report::fmt4;

/// Values as printed in a publication. Every field is optional; only the
/// present ones are checked.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PublishedReference {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// Keyed `"row|column"`.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub cell_counts: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub column_totals: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub row_totals_distinct: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertical_overflow: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transversal_overflow: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blind_spot: Option<BTreeSet<IndicatorCode>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blind_spot_share: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub consolidated_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub highly_prevalent: Option<BTreeSet<IndicatorCode>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub standouts: Option<BTreeSet<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceCheck {
    pub quantity: String,
    pub published: String,
    pub derived: String,
    pub agrees: bool,
}

impl ReferenceCheck {
    fn new(quantity: String, published: String, derived: String) -> Self {
        Self {
            agrees: published == derived,
            quantity,
            published,
            derived,
        }
    }
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn opt(n: Option<usize>) -> String {
    n.map_or_else(|| "n/a".into(), |n| n.to_string())
}

/// Compares each published value with its derived counterpart, in a fixed
/// order: cells, column totals, row totals, ratios, blind spot, sets.
pub fn check_reference(reference: &PublishedReference, analysis: &Analysis) -> Vec<ReferenceCheck> {
    let table = &analysis.table;
    let patterns = &analysis.patterns;
    let mut out = Vec::new();
    for (key, &published) in &reference.cell_counts {
        let derived = key
            .split_once('|')
            .and_then(|(row, column)| table.cell(row, column));
        out.push(ReferenceCheck::new(
            format!("cell ({})", key.replace('|', ", ")),
            published.to_string(),
            opt(derived),
        ));
    }
    for (column, &published) in &reference.column_totals {
        out.push(ReferenceCheck::new(
            format!("{column} column distinct total"),
            published.to_string(),
            opt(table.column_total(column)),
        ));
    }
    for (row, &published) in &reference.row_totals_distinct {
        out.push(ReferenceCheck::new(
            format!("{row} row distinct total"),
            published.to_string(),
            opt(table.row_total(row)),
        ));
    }
    if let Some([a, b]) = reference.vertical_overflow {
        out.push(ReferenceCheck::new(
            "vertical overflow".into(),
            format!("{a}:{b}"),
            patterns.vertical_overflow.to_string(),
        ));
    }
    if let Some([a, b]) = reference.transversal_overflow {
        out.push(ReferenceCheck::new(
            "transversal overflow".into(),
            format!("{a}:{b}"),
            patterns.transversal_overflow.to_string(),
        ));
    }
    if let Some(codes) = &reference.blind_spot {
        out.push(ReferenceCheck::new(
            "blind spot".into(),
            join(codes),
            join(&patterns.blind_spot),
        ));
    }
    if let Some(share) = reference.blind_spot_share {
        out.push(ReferenceCheck::new(
            "blind-spot share".into(),
            fmt4(share),
            fmt4(patterns.blind_spot_share),
        ));
    }
    if let Some(n) = reference.consolidated_count {
        out.push(ReferenceCheck::new(
            "consolidated set size".into(),
            n.to_string(),
            analysis.consolidation.indicators.len().to_string(),
        ));
    }
    if let Some(codes) = &reference.highly_prevalent {
        out.push(ReferenceCheck::new(
            "highly prevalent indicators".into(),
            join(codes),
            join(&analysis.consolidation.highly_prevalent),
        ));
    }
    if let Some(ids) = &reference.standouts {
        out.push(ReferenceCheck::new(
            "standout strategies".into(),
            join(ids),
            join(&analysis.standouts.standouts),
        ));
    }
    out
}
