//! Matrix, frequency-table and pattern invariants over random placements.

use std::collections::BTreeSet;

use proptest::prelude::*;
use stratscope::alignment::{build_matrix, coverage_per_axis, frequency_table};
use stratscope::model::{
    Axis, AxisScheme, CorrespondenceEntry, ExtendedMatrix, IndicatorCode, OTA, OVA,
};
use stratscope::patterns::{detect_blind_spot, flag_coverage, overflow_ratios};

fn scheme(v: usize, t: usize) -> AxisScheme {
    let axis = |id: String| Axis {
        name: id.clone(),
        abbrev: id.clone(),
        id,
    };
    AxisScheme {
        vertical_axes: (0..v).map(|i| axis(format!("V{i}"))).collect(),
        transversal_axes: (0..t).map(|i| axis(format!("T{i}"))).collect(),
        actions: vec![],
    }
}

/// Scheme size plus entries; axis index equal to the count picks the sentinel.
fn placements() -> impl Strategy<Value = (usize, usize, Vec<(u8, usize, usize)>)> {
    (1usize..=6, 1usize..=4).prop_flat_map(|(v, t)| {
        (
            Just(v),
            Just(t),
            prop::collection::vec((1u8..=20, 0..=v, 0..=t), 0..60),
        )
    })
}

fn entries(v: usize, t: usize, raw: &[(u8, usize, usize)]) -> Vec<CorrespondenceEntry> {
    raw.iter()
        .map(|&(n, c, r)| CorrespondenceEntry {
            indicator: IndicatorCode::new('A', n).unwrap(),
            vertical: if c == v { OVA.into() } else { format!("V{c}") },
            transversal: if r == t { OTA.into() } else { format!("T{r}") },
        })
        .collect()
}

fn build(v: usize, t: usize, e: &[CorrespondenceEntry]) -> ExtendedMatrix {
    let all: BTreeSet<IndicatorCode> = (1..=20).map(|n| IndicatorCode::new('A', n).unwrap()).collect();
    build_matrix(e, &scheme(v, t), &all).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn table_counts_are_consistent((v, t, raw) in placements()) {
        let e = entries(v, t, &raw);
        let m = build(v, t, &e);
        let table = frequency_table(&m);
        let distinct_entries: BTreeSet<_> = e.iter().collect();
        prop_assert_eq!(table.total_entries, distinct_entries.len());
        let col_sum: usize = (0..m.columns().len()).map(|c| m.column_entries(c)).sum();
        let row_sum: usize = table.row_entries.iter().sum();
        prop_assert_eq!(col_sum, table.total_entries);
        prop_assert_eq!(row_sum, table.total_entries);
        for r in 0..m.rows().len() {
            let cells: usize = table.cell_counts[r].iter().sum();
            prop_assert_eq!(cells, table.row_entries[r]);
            prop_assert!(table.row_totals_distinct[r] <= cells);
        }
        for c in 0..m.columns().len() {
            prop_assert!(table.column_totals[c] <= m.column_entries(c));
        }
        for entry in &e {
            let cell = m.cell(&entry.transversal, &entry.vertical).unwrap();
            prop_assert!(cell.contains(&entry.indicator));
        }
    }

    #[test]
    fn row_order_does_not_matter((v, t, raw) in placements()) {
        let e = entries(v, t, &raw);
        let mut reversed = e.clone();
        reversed.reverse();
        prop_assert_eq!(build(v, t, &e), build(v, t, &reversed));
    }

    #[test]
    fn overflow_pairs_partition_entries((v, t, raw) in placements()) {
        let m = build(v, t, &entries(v, t, &raw));
        let total = m.total_entries();
        let o = overflow_ratios(&m);
        prop_assert_eq!(o.vertical.outside + o.vertical.inside, total);
        let ova = m.column_entries(m.ova_column());
        prop_assert_eq!(o.transversal.outside + o.transversal.inside + ova, total);
        let outside: usize = o.per_axis.iter().map(|a| a.pair.outside).sum();
        let inside: usize = o.per_axis.iter().map(|a| a.pair.inside).sum();
        prop_assert_eq!((outside, inside), (o.transversal.outside, o.transversal.inside));
    }

    #[test]
    fn blind_spot_is_the_corner_cell((v, t, raw) in placements(), extra in 0usize..5) {
        let m = build(v, t, &entries(v, t, &raw));
        let corner = m.cell(OTA, OVA).unwrap().clone();
        let consolidated = 20 + extra;
        let b = detect_blind_spot(&m, consolidated).unwrap();
        prop_assert_eq!(&b.codes, &corner);
        prop_assert_eq!(b.share, corner.len() as f64 / consolidated as f64);
        prop_assert!((0.0..=1.0).contains(&b.share));
    }

    #[test]
    fn uncovered_axes_are_low((v, t, raw) in placements(), min in 1u32..6) {
        let m = build(v, t, &entries(v, t, &raw));
        let cov = coverage_per_axis(&m);
        prop_assert_eq!(cov.len(), v + t);
        let flags = flag_coverage(&cov, min).unwrap();
        for u in &flags.uncovered {
            prop_assert!(flags.low_coverage.contains(u));
        }
        for c in &cov {
            prop_assert_eq!(flags.low_coverage.contains(c), c.count < min as usize);
        }
    }
}
