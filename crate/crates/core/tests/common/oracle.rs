//! Prevalence labels from exact integer arithmetic.
//!
//! With integer frequencies, S = sum, Q = sum of squares and D = nQ - S^2,
//! every threshold comparison reduces to comparing squares of integers, so
//! the oracle needs no floating point at all.

use stratscope::config::StdMode;
use stratscope::model::{FrequencyRecord, IndicatorCode};
use stratscope::prevalence::{classify, compute_stats, Prevalence};

pub fn records(series: &[f64]) -> Vec<FrequencyRecord> {
    series
        .iter()
        .enumerate()
        .map(|(i, &frequency)| FrequencyRecord {
            indicator: IndicatorCode::new((b'A' + (i / 99) as u8) as char, (i % 99 + 1) as u8).unwrap(),
            frequency,
        })
        .collect()
}

/// Labels from the library under test.
pub fn labels(series: &[f64], mode: StdMode) -> Vec<Prevalence> {
    let stats = compute_stats(series, mode).unwrap();
    classify(&records(series), &stats)
        .into_iter()
        .map(|l| l.label)
        .collect()
}

pub fn as_f64(series: &[u32]) -> Vec<f64> {
    series.iter().map(|&v| v as f64).collect()
}

pub fn oracle(series: &[u32], mode: StdMode) -> Vec<Prevalence> {
    let n = series.len() as i128;
    let s: i128 = series.iter().map(|&v| v as i128).sum();
    let q: i128 = series.iter().map(|&v| (v as i128).pow(2)).sum();
    let d = n * q - s * s;
    // Population: sigma = sqrt(D) / n. Sample: sigma = sqrt(nD / (n - 1)) / n.
    // Compare k * (x)^2 against r, with (k, r) chosen per mode.
    let (k, r) = match mode {
        StdMode::Population => (1, d),
        StdMode::Sample => (n - 1, n * d),
    };
    let truncated = k * s * s <= r;
    series
        .iter()
        .map(|&f| {
            let nf = n * f as i128;
            let irrelevant = if truncated {
                f == 0
            } else {
                s - nf >= 0 && k * (s - nf).pow(2) >= r
            };
            if nf - s >= 0 && k * (nf - s).pow(2) >= r {
                Prevalence::HighlyPrevalent
            } else if irrelevant {
                Prevalence::Irrelevant
            } else {
                Prevalence::Prevalent
            }
        })
        .collect()
}
