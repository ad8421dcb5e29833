//! Command-line behaviour: exit codes, stage composition, precedence.

mod common;

use std::fs;
use std::path::Path;
use std::process::Command;

use stratscope::cli::run;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn stratscope(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("stratscope").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn all_writes_seven_files() {
    let data = common::fixture_dir();
    let out = tempfile::tempdir().unwrap();
    let r = stratscope(&["all", "--data-dir", path(&data), "--out-dir", path(out.path())]);
    assert_eq!(r.code, 0, "{}", r.err);
    let names: Vec<String> = common::snapshot(out.path()).into_iter().map(|(n, _)| n).collect();
    assert_eq!(
        names,
        [
            "countries.svg",
            "heatmap.svg",
            "indicators.svg",
            "manifest.json",
            "matrix.csv",
            "report.json",
            "report.md"
        ]
    );
}

#[test]
fn all_equals_stages_in_order() {
    let data = common::fixture_dir();
    let d = path(&data);
    for json in [false, true] {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let flag = |mut v: Vec<&'static str>| {
            if json {
                v.push("--json");
            }
            v
        };
        let mut composed = String::new();
        for stage in ["validate", "prevalence", "standout", "stratify", "consolidate", "align", "patterns"] {
            let mut args = flag(vec![stage]);
            args.extend(["--data-dir", d]);
            let r = stratscope(&args);
            assert_eq!(r.code, 0, "{stage}: {}", r.err);
            composed += &r.out;
        }
        let mut args = flag(vec!["report"]);
        args.extend(["--data-dir", d, "--out-dir", path(a.path())]);
        composed += &stratscope(&args).out;

        let mut args = flag(vec!["all"]);
        args.extend(["--data-dir", d, "--out-dir", path(b.path())]);
        let all = stratscope(&args);
        assert_eq!(all.code, 0);
        assert_eq!(all.out, composed);
        assert_eq!(common::snapshot(a.path()), common::snapshot(b.path()));
    }
}

#[test]
fn input_directory_is_untouched() {
    let data = common::fixture_copy();
    let before = common::snapshot(data.path());
    let out = tempfile::tempdir().unwrap();
    let r = stratscope(&["all", "--data-dir", path(data.path()), "--out-dir", path(out.path())]);
    assert_eq!(r.code, 0);
    assert_eq!(common::snapshot(data.path()), before);
    let same = stratscope(&["report", "--data-dir", path(data.path()), "--out-dir", path(data.path())]);
    assert_eq!(same.code, 2);
    assert_eq!(common::snapshot(data.path()), before);
}

#[test]
fn dangling_match_fails_validation_with_line() {
    let data = common::fixture_copy();
    common::append(&data.path().join("matches.csv"), "D01,XX,full\n");
    let r = stratscope(&["validate", "--data-dir", path(data.path())]);
    assert_eq!(r.code, 1);
    assert!(r.out.is_empty());
    assert!(r.err.contains("matches.csv:71"), "{}", r.err);
    assert!(r.err.contains("XX"));
}

#[test]
fn malformed_rows_are_all_reported() {
    let data = common::fixture_copy();
    common::append(&data.path().join("matches.csv"), "A123,DE,full\nA01,DE,maybe\n");
    let r = stratscope(&["prevalence", "--data-dir", path(data.path())]);
    assert_eq!(r.code, 1);
    assert!(r.err.contains("matches.csv:71 [indicator]"), "{}", r.err);
    assert!(r.err.contains("matches.csv:72 [quality]"), "{}", r.err);
}

#[test]
fn patterns_json_lists_blind_spot() {
    let data = common::fixture_dir();
    let r = stratscope(&["patterns", "--json", "--data-dir", path(&data)]);
    assert_eq!(r.code, 0);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["blind_spot"], serde_json::json!(["A16", "B31", "H01"]));
    assert_eq!(v["vertical_overflow"], serde_json::json!({"outside": 5, "inside": 32}));
}

#[test]
fn flags_override_config_file() {
    let data = common::fixture_copy();
    let low = |args: &[&str]| -> Vec<String> {
        let mut all = vec!["patterns", "--json", "--data-dir", path(data.path())];
        all.extend_from_slice(args);
        let r = stratscope(&all);
        assert_eq!(r.code, 0, "{}", r.err);
        let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
        v["low_coverage_axes"]
            .as_array()
            .unwrap()
            .iter()
            .map(|a| a["axis"].as_str().unwrap().to_string())
            .collect()
    };
    assert_eq!(low(&[]), ["PS"]);
    assert!(low(&["--min-axis-coverage", "1"]).is_empty());
    fs::write(data.path().join("config.json"), "{\"min_axis_coverage\": 1}").unwrap();
    assert!(low(&[]).is_empty());
    assert_eq!(low(&["--min-axis-coverage", "3"]), ["PS"]);
    assert_eq!(low(&["--min-axis-coverage", "4"]), ["App.PA", "PS", "INT"]);
}

#[test]
fn standout_threshold_flag() {
    let data = common::fixture_dir();
    let r = stratscope(&["standout", "--json", "--standout-threshold", "10", "--data-dir", path(&data)]);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["standouts"], serde_json::json!(["AR", "CA", "KR"]));
    let r = stratscope(&["standout", "--standout-threshold", "lots", "--data-dir", path(&data)]);
    assert_eq!(r.code, 2);
}

#[test]
fn usage_errors_exit_two() {
    let data = common::fixture_dir();
    let d = path(&data);
    for args in [
        vec!["frobnicate", "--data-dir", d],
        vec!["patterns", "--no-such-flag", "--data-dir", d],
        vec!["patterns", "--partial-weight", "2", "--data-dir", d],
        vec!["patterns", "--min-axis-coverage", "0", "--data-dir", d],
        vec!["patterns", "--std-mode", "median", "--data-dir", d],
        vec!["patterns", "--data-dir", "/nonexistent/dataset"],
        vec![],
    ] {
        let r = stratscope(&args);
        assert_eq!(r.code, 2, "{args:?}");
        assert!(r.out.is_empty());
        assert!(!r.err.is_empty());
    }
    let help = stratscope(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.out.contains("Usage"));
}

#[test]
fn bad_config_file_exits_two() {
    let data = common::fixture_copy();
    fs::write(data.path().join("config.json"), "{\"std_mode\": \"median\"}").unwrap();
    let r = stratscope(&["prevalence", "--data-dir", path(data.path())]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains("config.json"));
}

#[test]
fn stage_cache_matches_json_output() {
    let data = common::fixture_dir();
    let out = tempfile::tempdir().unwrap();
    let r = stratscope(&["align", "--data-dir", path(&data), "--out-dir", path(out.path())]);
    assert_eq!(r.code, 0);
    assert!(r.out.contains("### Correspondence matrix"));
    let cached = fs::read_to_string(out.path().join("align.json")).unwrap();
    let json = stratscope(&["align", "--json", "--data-dir", path(&data)]);
    assert_eq!(cached, json.out);
}

#[test]
fn binary_reads_data_dir_from_environment() {
    let out = tempfile::tempdir().unwrap();
    let output = Command::new(env!("CARGO_BIN_EXE_stratscope"))
        .args(["stratify", "--json"])
        .env("STRATSCOPE_DATA_DIR", common::fixture_dir())
        .current_dir(out.path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 13);

    let output = Command::new(env!("CARGO_BIN_EXE_stratscope"))
        .arg("validate")
        .env_remove("STRATSCOPE_DATA_DIR")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}
