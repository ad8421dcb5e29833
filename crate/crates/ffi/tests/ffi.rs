use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use stratscope_ffi::*;

fn fixture() -> CString {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/ebia");
    CString::new(dir.to_str().unwrap()).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(stratscope_last_error()) }
        .to_string_lossy()
        .into_owned()
}

struct Handles {
    bundle: *mut StratscopeBundle,
    analysis: *mut StratscopeAnalysis,
}

impl Handles {
    fn load() -> Self {
        let mut bundle = ptr::null_mut();
        let mut analysis = ptr::null_mut();
        unsafe {
            assert_eq!(stratscope_bundle_load(fixture().as_ptr(), &mut bundle), StratscopeStatus::Ok);
            assert_eq!(stratscope_analyze(bundle, &mut analysis), StratscopeStatus::Ok);
        }
        Self { bundle, analysis }
    }
}

impl Drop for Handles {
    fn drop(&mut self) {
        unsafe {
            stratscope_analysis_free(self.analysis);
            stratscope_bundle_free(self.bundle);
        }
    }
}

#[test]
fn overflow_and_blind_spot_through_the_abi() {
    let h = Handles::load();
    let (mut outside, mut inside) = (0usize, 0usize);
    unsafe {
        assert_eq!(
            stratscope_vertical_overflow(h.analysis, &mut outside, &mut inside),
            StratscopeStatus::Ok
        );
        assert_eq!((outside, inside), (5, 32));
        stratscope_transversal_overflow(h.analysis, &mut outside, &mut inside);
        assert_eq!((outside, inside), (21, 11));

        let mut codes: *mut c_char = ptr::null_mut();
        let mut share = 0.0;
        assert_eq!(stratscope_blind_spot(h.analysis, &mut codes, &mut share), StratscopeStatus::Ok);
        assert_eq!(CStr::from_ptr(codes).to_str().unwrap(), "A16,B31,H01");
        assert_eq!(share, 0.1);
        stratscope_string_free(codes);
    }
}

#[test]
fn json_document_parses() {
    let h = Handles::load();
    let mut json: *mut c_char = ptr::null_mut();
    unsafe {
        assert_eq!(stratscope_analysis_json(h.analysis, &mut json), StratscopeStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        stratscope_string_free(json);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["consolidation"]["consolidated_count"], 30);
    }
}

#[test]
fn errors_are_reported_with_status_and_message() {
    let mut bundle = ptr::null_mut();
    let missing = CString::new("/nonexistent/stratscope").unwrap();
    unsafe {
        assert_eq!(
            stratscope_bundle_load(missing.as_ptr(), &mut bundle),
            StratscopeStatus::MissingFile
        );
        assert!(bundle.is_null());
        assert!(last_error().contains("missing"));
        assert_eq!(
            stratscope_bundle_load(ptr::null(), &mut bundle),
            StratscopeStatus::NullArgument
        );
        let mut analysis = ptr::null_mut();
        assert_eq!(stratscope_analyze(ptr::null(), &mut analysis), StratscopeStatus::NullArgument);

        let mut problems = 99usize;
        assert_eq!(stratscope_validate(fixture().as_ptr(), &mut problems), StratscopeStatus::Ok);
        assert_eq!(problems, 0);
        assert_eq!(last_error(), "");

        // Null handles are accepted by the free functions.
        stratscope_bundle_free(ptr::null_mut());
        stratscope_analysis_free(ptr::null_mut());
        stratscope_string_free(ptr::null_mut());
    }
}

#[test]
fn invalid_dataset_counts_problems() {
    let dir = tempfile::tempdir().unwrap();
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/ebia");
    for entry in std::fs::read_dir(&src).unwrap() {
        let entry = entry.unwrap();
        std::fs::copy(entry.path(), dir.path().join(entry.file_name())).unwrap();
    }
    let matches = dir.path().join("matches.csv");
    let mut text = std::fs::read_to_string(&matches).unwrap();
    text.push_str("D01,XX,full\nZ99,DE,full\n");
    std::fs::write(&matches, text).unwrap();
    let path = CString::new(dir.path().to_str().unwrap()).unwrap();
    let mut problems = 0usize;
    unsafe {
        assert_eq!(stratscope_validate(path.as_ptr(), &mut problems), StratscopeStatus::Ok);
        let mut bundle = ptr::null_mut();
        assert_eq!(
            stratscope_bundle_load(path.as_ptr(), &mut bundle),
            StratscopeStatus::InvalidData
        );
        assert!(last_error().contains("matches.csv"));
    }
    assert_eq!(problems, 2);
}

#[test]
fn normalize_code_writes_terminated_buffer() {
    let mut buf = [0 as c_char; 4];
    let raw = CString::new("b7").unwrap();
    let bad = CString::new("7b").unwrap();
    unsafe {
        assert_eq!(stratscope_normalize_code(raw.as_ptr(), buf.as_mut_ptr()), StratscopeStatus::Ok);
        assert_eq!(CStr::from_ptr(buf.as_ptr()).to_str().unwrap(), "B07");
        assert_eq!(
            stratscope_normalize_code(bad.as_ptr(), buf.as_mut_ptr()),
            StratscopeStatus::MalformedCode
        );
        assert!(last_error().contains("position 0"));
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/stratscope.h")).unwrap();
    for name in [
        "stratscope_bundle_load",
        "stratscope_bundle_free",
        "stratscope_validate",
        "stratscope_analyze",
        "stratscope_analysis_free",
        "stratscope_analysis_json",
        "stratscope_vertical_overflow",
        "stratscope_transversal_overflow",
        "stratscope_blind_spot",
        "stratscope_report_write",
        "stratscope_normalize_code",
        "stratscope_string_free",
        "stratscope_last_error",
        "typedef struct StratscopeBundle StratscopeBundle",
        "STRATSCOPE_STATUS_PANIC = 9",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    std::env::current_exe()
        .unwrap()
        .parent()
        .and_then(Path::parent)
        .unwrap()
        .to_path_buf()
}

#[test]
fn c_program_links_against_static_library() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("libstratscope_ffi.a");
    assert!(lib.exists(), "static library not built at {}", lib.display());
    let work = tempfile::tempdir().unwrap();
    let exe = work.path().join("smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("cc available");
    assert!(status.success());
    let out_dir = work.path().join("report");
    let output = Command::new(&exe)
        .arg(manifest.join("../../fixtures/ebia"))
        .arg(&out_dir)
        .output()
        .unwrap();
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    assert_eq!(
        stdout,
        "vertical 5:32\ntransversal 21:11\nblind A16,B31,H01 0.1000\ncode A01\n"
    );
    assert!(out_dir.join("manifest.json").exists());
}
