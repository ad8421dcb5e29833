#![allow(dead_code)]

pub mod oracle;

use std::fs;
use std::path::{Path, PathBuf};

use stratscope::{analyze, load_bundle, Analysis, DatasetBundle};

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/ebia")
}

pub fn fixture() -> DatasetBundle {
    load_bundle(&fixture_dir()).expect("fixture loads")
}

pub fn fixture_analysis() -> (DatasetBundle, Analysis) {
    let bundle = fixture();
    let analysis = analyze(&bundle, &bundle.config).expect("fixture analyzes");
    (bundle, analysis)
}

/// Copies the fixture into a fresh temporary directory.
pub fn fixture_copy() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for entry in fs::read_dir(fixture_dir()).unwrap() {
        let entry = entry.unwrap();
        fs::copy(entry.path(), dir.path().join(entry.file_name())).unwrap();
    }
    dir
}

pub fn append(path: &Path, rows: &str) {
    let mut text = fs::read_to_string(path).unwrap();
    text.push_str(rows);
    fs::write(path, text).unwrap();
}

/// All files in a directory with their contents, sorted by name.
pub fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().into_string().unwrap(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}
