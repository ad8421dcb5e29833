use std::fmt::Write;

use crate::alignment::{FrequencyTable, MatrixExport};
use crate::ingest::DatasetBundle;
use crate::model::AxisKind;
use crate::prevalence::Stratum;

use super::{
    fmt4, AlignmentSection, ConsolidationSection, PatternSection, PrevalenceSection, ReportData,
    StandoutSection, StratumRow,
};

fn escape(cell: &str) -> String {
    cell.replace('|', "\\|").replace('\n', " ")
}

fn table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = String::new();
    let line = |cells: Vec<String>| format!("| {} |\n", cells.join(" | "));
    out += &line(header.iter().map(|h| escape(h)).collect());
    out += &line(header.iter().map(|_| "---".to_string()).collect());
    for row in rows {
        out += &line(row.iter().map(|c| escape(c)).collect());
    }
    out
}

fn list_or_none<T: ToString>(items: &[T]) -> String {
    if items.is_empty() {
        "none".into()
    } else {
        items
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    }
}

pub fn render_prevalence(s: &PrevalenceSection) -> String {
    let mut out = String::from("### Indicator prevalence\n\n");
    let _ = writeln!(
        out,
        "Standard deviation: {}. Partial-match weight: {}.\n",
        s.std_mode,
        fmt4(s.partial_weight)
    );
    out += &table(
        &["Statistic", "Value"],
        [
            vec!["Mean frequency".into(), fmt4(s.stats.mean)],
            vec!["Standard deviation".into(), fmt4(s.stats.std_dev)],
            vec!["Highly prevalent at or above".into(), fmt4(s.stats.hp_threshold)],
            vec!["Irrelevant at or below".into(), fmt4(s.stats.irrelevant_threshold)],
        ],
    );
    out.push('\n');
    out += &table(
        &["Code", "Indicator", "Frequency", "Class"],
        s.rows.iter().map(|r| {
            vec![
                r.indicator.to_string(),
                r.name.clone(),
                fmt4(r.frequency),
                r.label.label().into(),
            ]
        }),
    );
    out
}

pub fn render_standouts(s: &StandoutSection) -> String {
    let mut out = String::from("### Standout strategies\n\n");
    let _ = writeln!(
        out,
        "A strategy stands out when its matched-indicator count is above {}.\n",
        fmt4(s.threshold)
    );
    out += &table(
        &["Country", "Name", "Indicators", "Standout"],
        s.counts.iter().map(|c| {
            vec![
                c.country.clone(),
                c.name.clone(),
                c.count.to_string(),
                if c.standout { "yes" } else { "" }.into(),
            ]
        }),
    );
    let _ = writeln!(out, "\nStandouts: {}.", list_or_none(&s.standouts));
    out
}

pub fn render_strata(rows: &[StratumRow]) -> String {
    let mut out = String::from("### Country strata\n\n");
    for stratum in [Stratum::Systematic, Stratum::Planned, Stratum::Neither, Stratum::NoNais] {
        let members: Vec<String> = rows
            .iter()
            .filter(|r| r.stratum == stratum)
            .map(|r| format!("{} ({})", r.name, r.country))
            .collect();
        let mut heading = stratum.description().to_string();
        heading[..1].make_ascii_uppercase();
        let _ = writeln!(out, "- {heading}: {}", list_or_none(&members));
    }
    out
}

pub fn render_consolidation(s: &ConsolidationSection) -> String {
    let mut out = String::from("### Consolidated indicator set\n\n");
    let _ = writeln!(
        out,
        "Highly prevalent preliminary indicators: {}.\n",
        list_or_none(&s.highly_prevalent)
    );
    let dims: Vec<String> = s
        .new_dimensions
        .iter()
        .map(|d| format!("{} ({})", d.code, d.name))
        .collect();
    let _ = writeln!(out, "New dimensions: {}.\n", list_or_none(&dims));
    if !s.coded_proposals.is_empty() {
        out += &table(
            &["Code", "Accepted proposal", "Source strategies"],
            s.coded_proposals.iter().map(|p| {
                vec![
                    p.code.to_string(),
                    p.name.clone(),
                    p.source_countries.join(", "),
                ]
            }),
        );
        out.push('\n');
    }
    let _ = writeln!(out, "Consolidated set size: {}.\n", s.consolidated_count);
    out += &table(
        &["Code", "Dimension", "Indicator"],
        s.indicators
            .iter()
            .map(|i| vec![i.code.to_string(), i.dimension.to_string(), i.name.clone()]),
    );
    if !s.discrepancies.is_empty() {
        out += "\nCode assignment differs from the dataset:\n\n";
        for d in &s.discrepancies {
            let _ = writeln!(out, "- {}", escape(d));
        }
    }
    out
}

/// The extended matrix as a markdown grid with distinct-count margins.
pub fn render_matrix_markdown(matrix: &MatrixExport, table_: &FrequencyTable) -> String {
    let mut header = vec![""];
    header.extend(matrix.columns.iter().map(String::as_str));
    header.push("Distinct");
    let mut rows: Vec<Vec<String>> = matrix
        .rows
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let mut cells = vec![row.clone()];
            for column in &matrix.columns {
                let codes = matrix
                    .cells
                    .get(&format!("{row}|{column}"))
                    .map(|c| c.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
                    .unwrap_or_default();
                cells.push(codes);
            }
            cells.push(table_.row_totals_distinct[r].to_string());
            cells
        })
        .collect();
    let mut footer = vec!["Distinct".to_string()];
    footer.extend(table_.column_totals.iter().map(ToString::to_string));
    footer.push(String::new());
    rows.push(footer);
    table(&header, rows)
}

fn render_counts(t: &FrequencyTable) -> String {
    let mut header = vec![""];
    header.extend(t.columns.iter().map(String::as_str));
    header.extend(["Entries", "Distinct"]);
    let mut rows: Vec<Vec<String>> = t
        .rows
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let mut cells = vec![row.clone()];
            cells.extend(t.cell_counts[r].iter().map(ToString::to_string));
            cells.push(t.row_entries[r].to_string());
            cells.push(t.row_totals_distinct[r].to_string());
            cells
        })
        .collect();
    let mut footer = vec!["Distinct".to_string()];
    footer.extend(t.column_totals.iter().map(ToString::to_string));
    footer.push(t.total_entries.to_string());
    footer.push(String::new());
    rows.push(footer);
    table(&header, rows)
}

pub fn render_alignment(s: &AlignmentSection) -> String {
    let mut out = String::from("### Correspondence matrix\n\n");
    out += &render_matrix_markdown(&s.matrix, &s.frequency_table);
    out += "\n### Frequency table\n\n";
    out += &render_counts(&s.frequency_table);
    let _ = writeln!(out, "\nTotal entries: {}.", s.frequency_table.total_entries);
    out += "\n### Axis coverage\n\n";
    out += &table(
        &["Axis", "Kind", "Distinct indicators"],
        s.coverage.iter().map(|c| {
            vec![
                c.axis.clone(),
                match c.kind {
                    AxisKind::Vertical => "vertical",
                    AxisKind::Transversal => "transversal",
                }
                .into(),
                c.count.to_string(),
            ]
        }),
    );
    out
}

pub fn render_patterns(s: &PatternSection) -> String {
    let mut out = String::from("### Patterns\n\n");
    let _ = writeln!(
        out,
        "- Blind spot (outside both axis families): {} (share {})",
        list_or_none(&s.blind_spot),
        fmt4(s.blind_spot_share)
    );
    let _ = writeln!(
        out,
        "- Vertical overflow (outside:inside): {}",
        s.vertical_overflow
    );
    let _ = writeln!(
        out,
        "- Transversal overflow (outside:inside): {}",
        s.transversal_overflow
    );
    let axes = |v: &[crate::alignment::AxisCoverage]| -> String {
        let items: Vec<String> = v.iter().map(|c| format!("{} ({})", c.axis, c.count)).collect();
        list_or_none(&items)
    };
    let _ = writeln!(
        out,
        "- Axes below {} indicators: {}",
        s.min_axis_coverage,
        axes(&s.low_coverage_axes)
    );
    let _ = writeln!(out, "- Axes without indicators: {}", axes(&s.uncovered_axes));
    out.push('\n');
    out += &table(
        &["Vertical axis", "Outside transversal axes", "Inside"],
        s.per_axis_overflow.iter().map(|a| {
            vec![
                a.axis.clone(),
                a.pair.outside.to_string(),
                a.pair.inside.to_string(),
            ]
        }),
    );
    out += "\n### Divergence notes\n\n";
    if s.reference_checks.is_empty() {
        out += "No published reference values supplied.\n";
        return out;
    }
    for c in s.reference_checks.iter().filter(|c| !c.agrees) {
        let _ = writeln!(
            out,
            "> **Erratum check:** {}: published {}, derived {}.\n",
            c.quantity, c.published, c.derived
        );
    }
    out += &table(
        &["Quantity", "Published", "Derived", "Agrees"],
        s.reference_checks.iter().map(|c| {
            vec![
                c.quantity.clone(),
                c.published.clone(),
                c.derived.clone(),
                if c.agrees { "yes" } else { "no" }.into(),
            ]
        }),
    );
    out
}

fn render_axes(bundle: &DatasetBundle) -> String {
    let scheme = &bundle.axis_scheme;
    let rows = scheme
        .vertical_axes
        .iter()
        .map(|a| (a, "vertical"))
        .chain(scheme.transversal_axes.iter().map(|a| (a, "transversal")))
        .map(|(a, kind)| vec![a.id.clone(), kind.into(), a.name.clone()]);
    table(&["Axis", "Kind", "Name"], rows)
}

pub fn render_full_report(data: &ReportData, bundle: &DatasetBundle) -> String {
    let mut out = String::from("# Strategy indicator monitoring report\n\n");
    out += "## Stage 1: Prevalence and consolidation\n\n";
    out += &render_prevalence(&data.prevalence);
    out.push('\n');
    out += &render_standouts(&data.standouts);
    out.push('\n');
    out += &render_strata(&data.strata);
    out.push('\n');
    out += &render_consolidation(&data.consolidation);
    out += "\n## Stage 2: Alignment with the strategy axes\n\n";
    out += &render_axes(bundle);
    out.push('\n');
    out += &render_alignment(&data.alignment);
    out += "\n## Stage 3: Gaps and blind spots\n\n";
    out += &render_patterns(&data.patterns);
    out
}
