//! Reading and writing the on-disk dataset: six CSV files, an optional
//! `config.json`, plus optional `proposals.csv` and `reference.json`.
//!
//! Every problem found while loading carries its file and, where one
//! exists, its line number. Row errors are collected rather than returned
//! one at a time, so a file with k bad rows yields k diagnostics.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::{AnalysisConfig, CONFIG_KEYS};
use crate::consolidate::ProposedIndicator;
use crate::model::{
    normalize_code, validate_dataset, Axis, AxisKind, AxisScheme, CorrespondenceEntry,
    CountryRecord, DataFile, DatasetView, Dimension, DimensionOrigin, Indicator, IndicatorStatus,
    MatchQuality, MatchRecord, ValidationReport, ViolationKind,
};
use crate::reference::PublishedReference;

pub const CONFIG_FILE: &str = "config.json";
pub const PROPOSALS_FILE: &str = "proposals.csv";
pub const REFERENCE_FILE: &str = "reference.json";

const REQUIRED: [DataFile; 6] = [
    DataFile::Dimensions,
    DataFile::Indicators,
    DataFile::Countries,
    DataFile::Matches,
    DataFile::Axes,
    DataFile::Correspondences,
];

const DIMENSION_COLUMNS: [&str; 3] = ["code", "name", "origin"];
const INDICATOR_COLUMNS: [&str; 6] = ["code", "dimension", "area", "name", "status", "feasibility_notes"];
const COUNTRY_COLUMNS: [&str; 6] = [
    "id",
    "name",
    "has_document",
    "uses_indicators",
    "plans_indicators",
    "notes",
];
const MATCH_COLUMNS: [&str; 3] = ["indicator", "country", "quality"];
const AXIS_COLUMNS: [&str; 4] = ["id", "kind", "name", "abbrev"];
const CORRESPONDENCE_COLUMNS: [&str; 3] = ["indicator", "vertical", "transversal"];
const PROPOSAL_COLUMNS: [&str; 5] = [
    "name",
    "target_dimension",
    "source_countries",
    "alias_group",
    "accepted",
];

/// Everything an analysis run needs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DatasetBundle {
    pub dimensions: Vec<Dimension>,
    pub indicators: Vec<Indicator>,
    pub countries: Vec<CountryRecord>,
    pub matches: Vec<MatchRecord>,
    pub axis_scheme: AxisScheme,
    pub correspondences: Vec<CorrespondenceEntry>,
    pub config: AnalysisConfig,
    pub proposals: Vec<ProposedIndicator>,
    pub reference: Option<PublishedReference>,
}

impl DatasetBundle {
    pub fn view(&self) -> DatasetView<'_> {
        DatasetView {
            indicators: &self.indicators,
            dimensions: &self.dimensions,
            countries: &self.countries,
            matches: &self.matches,
            axis_scheme: &self.axis_scheme,
            correspondences: &self.correspondences,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        validate_dataset(self.view())
    }

    pub fn country_name<'a>(&'a self, id: &'a str) -> &'a str {
        self.countries
            .iter()
            .find(|c| c.id == id)
            .map_or(id, |c| c.name.as_str())
    }

    /// Sorts every order-free collection into canonical order. Axis order and
    /// proposal order carry meaning and are kept.
    pub fn canonicalize(&mut self) {
        self.dimensions.sort_by_key(|d| d.code);
        self.indicators.sort_by_key(|i| i.code);
        self.countries.sort_by(|a, b| a.id.cmp(&b.id));
        self.matches
            .sort_by(|a, b| (a.indicator, &a.country).cmp(&(b.indicator, &b.country)));
        self.correspondences.sort();
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub file: String,
    pub line: Option<u64>,
    pub column: Option<String>,
    pub message: String,
}

impl Diagnostic {
    fn file(file: &str, message: impl Into<String>) -> Self {
        Self {
            file: file.to_string(),
            line: None,
            column: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.file)?;
        if let Some(line) = self.line {
            write!(f, ":{line}")?;
        }
        if let Some(col) = &self.column {
            write!(f, " [{col}]")?;
        }
        write!(f, ": {}", self.message)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("required file {} is missing", .0.display())]
    MissingFile(PathBuf),
    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("invalid {}: {message}", path.display())]
    Config { path: PathBuf, message: String },
    #[error("dataset has {} problem(s)", .0.len())]
    Invalid(Vec<Diagnostic>),
}

#[derive(Debug, thiserror::Error)]
#[error("cannot write {}: {source}", path.display())]
pub struct ExportError {
    pub path: PathBuf,
    pub source: io::Error,
}

/// A loaded bundle plus the warnings raised while reading it.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub bundle: DatasetBundle,
    pub warnings: Vec<Diagnostic>,
}

pub fn load_bundle(data_dir: &Path) -> Result<DatasetBundle, LoadError> {
    load_bundle_with_warnings(data_dir).map(|l| l.bundle)
}

pub fn load_bundle_with_warnings(data_dir: &Path) -> Result<Loaded, LoadError> {
    for file in REQUIRED {
        let path = data_dir.join(file.file_name());
        if !path.is_file() {
            return Err(LoadError::MissingFile(path));
        }
    }
    let mut reader = Reader::default();

    let dimensions = reader.table(data_dir, DataFile::Dimensions.file_name(), &DIMENSION_COLUMNS, &[], |r| {
        Ok(Dimension {
            code: r.letter("code")?,
            name: r.text("name")?,
            origin: match r.get("origin") {
                "preliminary" => DimensionOrigin::Preliminary,
                "extension" => DimensionOrigin::Extension,
                other => return Err(r.bad("origin", format!("expected preliminary or extension, got {other:?}"))),
            },
        })
    })?;
    let indicators = reader.table(
        data_dir,
        DataFile::Indicators.file_name(),
        &INDICATOR_COLUMNS,
        &["area", "feasibility_notes"],
        |r| {
            Ok(Indicator {
                code: r.code("code")?,
                dimension: r.letter("dimension")?,
                area: r.optional("area"),
                name: r.text("name")?,
                status: match r.get("status") {
                    "preliminary" => IndicatorStatus::Preliminary,
                    "proposed" => IndicatorStatus::Proposed,
                    "consolidated" => IndicatorStatus::Consolidated,
                    other => {
                        return Err(r.bad(
                            "status",
                            format!("expected preliminary, proposed or consolidated, got {other:?}"),
                        ))
                    }
                },
                feasibility_notes: r.optional("feasibility_notes"),
            })
        },
    )?;
    let countries = reader.table(data_dir, DataFile::Countries.file_name(), &COUNTRY_COLUMNS, &["notes"], |r| {
        Ok(CountryRecord {
            id: r.text("id")?,
            name: r.text("name")?,
            has_document: r.flag("has_document")?,
            uses_indicators: r.flag("uses_indicators")?,
            plans_indicators: r.flag("plans_indicators")?,
            notes: r.optional("notes"),
        })
    })?;
    let matches = reader.table(data_dir, DataFile::Matches.file_name(), &MATCH_COLUMNS, &[], |r| {
        Ok(MatchRecord {
            indicator: r.code("indicator")?,
            country: r.text("country")?,
            quality: match r.get("quality") {
                "full" => MatchQuality::Full,
                "partial" => MatchQuality::Partial,
                other => return Err(r.bad("quality", format!("expected full or partial, got {other:?}"))),
            },
        })
    })?;
    let axes = reader.table(data_dir, DataFile::Axes.file_name(), &AXIS_COLUMNS, &[], |r| {
        let kind = match r.get("kind") {
            "vertical" => AxisKind::Vertical,
            "transversal" => AxisKind::Transversal,
            other => return Err(r.bad("kind", format!("expected vertical or transversal, got {other:?}"))),
        };
        let id = r.text("id")?;
        if id.contains('|') {
            return Err(r.bad("id", "axis ids may not contain '|'"));
        }
        Ok((
            kind,
            Axis {
                id,
                name: r.text("name")?,
                abbrev: r.text("abbrev")?,
            },
        ))
    })?;
    let correspondences = reader.table(
        data_dir,
        DataFile::Correspondences.file_name(),
        &CORRESPONDENCE_COLUMNS,
        &[],
        |r| {
            Ok(CorrespondenceEntry {
                indicator: r.code("indicator")?,
                vertical: r.text("vertical")?,
                transversal: r.text("transversal")?,
            })
        },
    )?;
    let proposals_path = data_dir.join(PROPOSALS_FILE);
    let proposals = if proposals_path.is_file() {
        reader.table(data_dir, PROPOSALS_FILE, &PROPOSAL_COLUMNS, &["alias_group"], |r| {
            let source_countries: Vec<String> = r
                .get("source_countries")
                .split(';')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(String::from)
                .collect();
            Ok(ProposedIndicator {
                name: r.text("name")?,
                target_dimension: r.text("target_dimension")?,
                source_countries,
                alias_group: r.optional("alias_group"),
                accepted: r.flag("accepted")?,
            })
        })?
    } else {
        Rows::default()
    };

    if !reader.errors.is_empty() {
        return Err(LoadError::Invalid(reader.errors));
    }
    let mut warnings = reader.warnings;

    let (config, mut config_warnings) = read_config(&data_dir.join(CONFIG_FILE))?;
    warnings.append(&mut config_warnings);
    let reference = read_reference(&data_dir.join(REFERENCE_FILE))?;

    let mut vertical = Vec::new();
    let mut transversal = Vec::new();
    let mut vertical_lines = Vec::new();
    let mut transversal_lines = Vec::new();
    for ((kind, axis), line) in axes.values.into_iter().zip(axes.lines) {
        match kind {
            AxisKind::Vertical => {
                vertical.push(axis);
                vertical_lines.push(line);
            }
            AxisKind::Transversal => {
                transversal.push(axis);
                transversal_lines.push(line);
            }
        }
    }
    vertical_lines.extend(transversal_lines);

    // Collapse repeated correspondence rows; cells are sets.
    let mut seen = HashSet::new();
    let mut corr = Vec::new();
    let mut corr_lines = Vec::new();
    for (entry, line) in correspondences.values.into_iter().zip(correspondences.lines) {
        if seen.insert(entry.clone()) {
            corr.push(entry);
            corr_lines.push(line);
        } else {
            warnings.push(Diagnostic {
                file: DataFile::Correspondences.file_name().into(),
                line: Some(line),
                column: None,
                message: format!(
                    "duplicate correspondence {} / {} / {} ignored",
                    entry.indicator, entry.vertical, entry.transversal
                ),
            });
        }
    }

    let bundle = DatasetBundle {
        dimensions: dimensions.values,
        indicators: indicators.values,
        countries: countries.values,
        matches: matches.values,
        axis_scheme: AxisScheme {
            vertical_axes: vertical,
            transversal_axes: transversal,
            actions: Vec::new(),
        },
        correspondences: corr,
        config,
        proposals: proposals.values,
        reference,
    };

    let lines: HashMap<DataFile, Vec<u64>> = HashMap::from([
        (DataFile::Dimensions, dimensions.lines),
        (DataFile::Indicators, indicators.lines),
        (DataFile::Countries, countries.lines),
        (DataFile::Matches, matches.lines),
        (DataFile::Axes, vertical_lines),
        (DataFile::Correspondences, corr_lines),
    ]);
    let mut problems: Vec<Diagnostic> = bundle
        .validate()
        .violations
        .into_iter()
        .map(|v| {
            let line = match v.kind {
                ViolationKind::EmptyAxisList { .. } | ViolationKind::UnknownActionAxis { .. } => None,
                _ => lines.get(&v.file).and_then(|l| l.get(v.index)).copied(),
            };
            Diagnostic {
                file: v.file.file_name().into(),
                line,
                column: None,
                message: v.kind.to_string(),
            }
        })
        .collect();

    let known: HashSet<&str> = bundle.countries.iter().map(|c| c.id.as_str()).collect();
    for (p, line) in bundle.proposals.iter().zip(&proposals.lines) {
        for c in &p.source_countries {
            if !known.contains(c.as_str()) {
                problems.push(Diagnostic {
                    file: PROPOSALS_FILE.into(),
                    line: Some(*line),
                    column: Some("source_countries".into()),
                    message: format!("unknown country id {c}"),
                });
            }
        }
        if p.source_countries.is_empty() {
            problems.push(Diagnostic {
                file: PROPOSALS_FILE.into(),
                line: Some(*line),
                column: Some("source_countries".into()),
                message: "at least one source country is required".into(),
            });
        }
    }

    if !problems.is_empty() {
        return Err(LoadError::Invalid(problems));
    }
    Ok(Loaded { bundle, warnings })
}

fn read_config(path: &Path) -> Result<(AnalysisConfig, Vec<Diagnostic>), LoadError> {
    if !path.is_file() {
        return Ok((AnalysisConfig::default(), Vec::new()));
    }
    let text = fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let bad = |message: String| LoadError::Config {
        path: path.to_path_buf(),
        message,
    };
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    let object = value
        .as_object()
        .ok_or_else(|| bad("expected a JSON object".into()))?;
    let warnings = object
        .keys()
        .filter(|k| !CONFIG_KEYS.contains(&k.as_str()))
        .map(|k| Diagnostic::file(CONFIG_FILE, format!("unknown key {k:?} ignored")))
        .collect();
    let config: AnalysisConfig = serde_json::from_value(value).map_err(|e| bad(e.to_string()))?;
    config.check().map_err(|e| bad(e.to_string()))?;
    Ok((config, warnings))
}

fn read_reference(path: &Path) -> Result<Option<PublishedReference>, LoadError> {
    if !path.is_file() {
        return Ok(None);
    }
    let text = fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text)
        .map(Some)
        .map_err(|e| LoadError::Config {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
}

struct Rows<T> {
    values: Vec<T>,
    lines: Vec<u64>,
}

impl<T> Default for Rows<T> {
    fn default() -> Self {
        Self {
            values: Vec::new(),
            lines: Vec::new(),
        }
    }
}

#[derive(Default)]
struct Reader {
    errors: Vec<Diagnostic>,
    warnings: Vec<Diagnostic>,
}

impl Reader {
    /// Parses one CSV file. Header problems abort the file with a single
    /// diagnostic; each bad data row adds exactly one diagnostic.
    fn table<T>(
        &mut self,
        dir: &Path,
        file: &str,
        columns: &[&str],
        optional: &[&str],
        parse: impl Fn(&Row<'_>) -> Result<T, Diagnostic>,
    ) -> Result<Rows<T>, LoadError> {
        let path = dir.join(file);
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .flexible(false)
            .from_path(&path)
            .map_err(|e| csv_io_error(&path, e))?;
        let headers = match rdr.headers() {
            Ok(h) => h.clone(),
            Err(e) => {
                self.errors.push(csv_diagnostic(file, &e));
                return Ok(Rows::default());
            }
        };
        let mut index = HashMap::new();
        for (i, h) in headers.iter().enumerate() {
            if columns.contains(&h) {
                index.insert(h.to_string(), i);
            } else {
                self.warnings.push(Diagnostic {
                    file: file.into(),
                    line: Some(1),
                    column: Some(h.to_string()),
                    message: "unknown column ignored".into(),
                });
            }
        }
        let missing: Vec<&str> = columns
            .iter()
            .filter(|c| !optional.contains(c) && !index.contains_key(**c))
            .copied()
            .collect();
        if !missing.is_empty() {
            self.errors.push(Diagnostic {
                file: file.into(),
                line: Some(1),
                column: None,
                message: format!("missing column(s): {}", missing.join(", ")),
            });
            return Ok(Rows::default());
        }

        let mut out = Rows::default();
        for record in rdr.records() {
            let record = match record {
                Ok(r) => r,
                Err(e) => {
                    if let csv::ErrorKind::Io(_) = e.kind() {
                        return Err(csv_io_error(&path, e));
                    }
                    self.errors.push(csv_diagnostic(file, &e));
                    continue;
                }
            };
            let line = record.position().map_or(0, |p| p.line());
            let row = Row {
                file,
                line,
                record: &record,
                index: &index,
            };
            match parse(&row) {
                Ok(v) => {
                    out.values.push(v);
                    out.lines.push(line);
                }
                Err(d) => self.errors.push(d),
            }
        }
        Ok(out)
    }
}

fn csv_io_error(path: &Path, e: csv::Error) -> LoadError {
    let source = match e.into_kind() {
        csv::ErrorKind::Io(io) => io,
        other => io::Error::other(format!("{other:?}")),
    };
    LoadError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_diagnostic(file: &str, e: &csv::Error) -> Diagnostic {
    Diagnostic {
        file: file.into(),
        line: e.position().map(|p| p.line()),
        column: None,
        message: match e.kind() {
            csv::ErrorKind::UnequalLengths { expected_len, len, .. } => {
                format!("expected {expected_len} fields, found {len}")
            }
            csv::ErrorKind::Utf8 { .. } => "invalid UTF-8".into(),
            _ => e.to_string(),
        },
    }
}

struct Row<'a> {
    file: &'a str,
    line: u64,
    record: &'a csv::StringRecord,
    index: &'a HashMap<String, usize>,
}

impl Row<'_> {
    fn get(&self, column: &str) -> &str {
        self.index
            .get(column)
            .and_then(|&i| self.record.get(i))
            .unwrap_or("")
    }

    fn bad(&self, column: &str, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            file: self.file.into(),
            line: Some(self.line),
            column: Some(column.into()),
            message: message.into(),
        }
    }

    fn text(&self, column: &str) -> Result<String, Diagnostic> {
        match self.get(column) {
            "" => Err(self.bad(column, "value is required")),
            v => Ok(v.to_string()),
        }
    }

    fn optional(&self, column: &str) -> Option<String> {
        Some(self.get(column)).filter(|v| !v.is_empty()).map(String::from)
    }

    fn code(&self, column: &str) -> Result<crate::model::IndicatorCode, Diagnostic> {
        normalize_code(self.get(column)).map_err(|e| self.bad(column, e.to_string()))
    }

    fn letter(&self, column: &str) -> Result<char, Diagnostic> {
        let v = self.get(column);
        let mut chars = v.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) if c.is_ascii_alphabetic() => Ok(c.to_ascii_uppercase()),
            _ => Err(self.bad(column, format!("expected a single letter, got {v:?}"))),
        }
    }

    fn flag(&self, column: &str) -> Result<bool, Diagnostic> {
        match self.get(column).to_ascii_lowercase().as_str() {
            "true" => Ok(true),
            "false" => Ok(false),
            other => Err(self.bad(column, format!("expected true or false, got {other:?}"))),
        }
    }
}

/// Writes the bundle in canonical form. Re-loading the output and exporting
/// again reproduces the same bytes.
pub fn export_bundle(bundle: &DatasetBundle, out_dir: &Path) -> Result<(), ExportError> {
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| ExportError { path, source }
    };
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let mut b = bundle.clone();
    b.canonicalize();

    let opt = |v: &Option<String>| v.clone().unwrap_or_default();
    let flag = |v: bool| if v { "true" } else { "false" }.to_string();

    write_csv(
        &out_dir.join(DataFile::Dimensions.file_name()),
        &DIMENSION_COLUMNS,
        b.dimensions.iter().map(|d| {
            vec![
                d.code.to_string(),
                d.name.clone(),
                match d.origin {
                    DimensionOrigin::Preliminary => "preliminary",
                    DimensionOrigin::Extension => "extension",
                }
                .into(),
            ]
        }),
    )?;
    write_csv(
        &out_dir.join(DataFile::Indicators.file_name()),
        &INDICATOR_COLUMNS,
        b.indicators.iter().map(|i| {
            vec![
                i.code.to_string(),
                i.dimension.to_string(),
                opt(&i.area),
                i.name.clone(),
                match i.status {
                    IndicatorStatus::Preliminary => "preliminary",
                    IndicatorStatus::Proposed => "proposed",
                    IndicatorStatus::Consolidated => "consolidated",
                }
                .into(),
                opt(&i.feasibility_notes),
            ]
        }),
    )?;
    write_csv(
        &out_dir.join(DataFile::Countries.file_name()),
        &COUNTRY_COLUMNS,
        b.countries.iter().map(|c| {
            vec![
                c.id.clone(),
                c.name.clone(),
                flag(c.has_document),
                flag(c.uses_indicators),
                flag(c.plans_indicators),
                opt(&c.notes),
            ]
        }),
    )?;
    write_csv(
        &out_dir.join(DataFile::Matches.file_name()),
        &MATCH_COLUMNS,
        b.matches.iter().map(|m| {
            vec![
                m.indicator.to_string(),
                m.country.clone(),
                match m.quality {
                    MatchQuality::Full => "full",
                    MatchQuality::Partial => "partial",
                }
                .into(),
            ]
        }),
    )?;
    let axes = b
        .axis_scheme
        .vertical_axes
        .iter()
        .map(|a| (a, "vertical"))
        .chain(b.axis_scheme.transversal_axes.iter().map(|a| (a, "transversal")));
    write_csv(
        &out_dir.join(DataFile::Axes.file_name()),
        &AXIS_COLUMNS,
        axes.map(|(a, kind)| vec![a.id.clone(), kind.into(), a.name.clone(), a.abbrev.clone()]),
    )?;
    write_csv(
        &out_dir.join(DataFile::Correspondences.file_name()),
        &CORRESPONDENCE_COLUMNS,
        b.correspondences
            .iter()
            .map(|c| vec![c.indicator.to_string(), c.vertical.clone(), c.transversal.clone()]),
    )?;
    if !b.proposals.is_empty() {
        write_csv(
            &out_dir.join(PROPOSALS_FILE),
            &PROPOSAL_COLUMNS,
            b.proposals.iter().map(|p| {
                vec![
                    p.name.clone(),
                    p.target_dimension.clone(),
                    p.source_countries.join(";"),
                    opt(&p.alias_group),
                    flag(p.accepted),
                ]
            }),
        )?;
    }
    let path = out_dir.join(CONFIG_FILE);
    write_json(&path, &b.config).map_err(io_err(&path))?;
    if let Some(reference) = &b.reference {
        let path = out_dir.join(REFERENCE_FILE);
        write_json(&path, reference).map_err(io_err(&path))?;
    }
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(io::Error::other)?;
    text.push('\n');
    fs::write(path, text)
}

fn write_csv(
    path: &Path,
    header: &[&str],
    rows: impl Iterator<Item = Vec<String>>,
) -> Result<(), ExportError> {
    let wrap = |source: io::Error| ExportError {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(|e| wrap(io::Error::other(e)))?;
    w.write_record(header).map_err(|e| wrap(io::Error::other(e)))?;
    for row in rows {
        w.write_record(&row).map_err(|e| wrap(io::Error::other(e)))?;
    }
    w.flush().map_err(wrap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, body: &str) {
        fs::write(dir.join(name), body).unwrap();
    }

    fn minimal(dir: &Path) {
        write(dir, "dimensions.csv", "code,name,origin\nA,Adoption,preliminary\n");
        write(
            dir,
            "indicators.csv",
            "code,dimension,area,name,status,feasibility_notes\na1,A,,Use of AI,preliminary,\n",
        );
        write(
            dir,
            "countries.csv",
            "id,name,has_document,uses_indicators,plans_indicators,notes\nDE,Germany,true,true,false,\n",
        );
        write(dir, "matches.csv", "indicator,country,quality\nA1,DE,full\n");
        write(dir, "axes.csv", "id,kind,name,abbrev\nEDU,vertical,Education,ED\nGOV,transversal,Governance,G\n");
        write(dir, "correspondences.csv", "indicator,vertical,transversal\nA01,EDU,GOV\n");
    }

    #[test]
    fn loads_and_normalizes_codes() {
        let dir = tempfile::tempdir().unwrap();
        minimal(dir.path());
        let b = load_bundle(dir.path()).unwrap();
        assert_eq!(b.indicators[0].code.to_string(), "A01");
        assert_eq!(b.matches[0].indicator.to_string(), "A01");
        assert_eq!(b.config, AnalysisConfig::default());
        assert!(b.reference.is_none());
    }

    #[test]
    fn missing_file_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        minimal(dir.path());
        fs::remove_file(dir.path().join("axes.csv")).unwrap();
        assert!(matches!(load_bundle(dir.path()), Err(LoadError::MissingFile(p)) if p.ends_with("axes.csv")));
    }

    #[test]
    fn header_only_files_give_empty_collections() {
        let dir = tempfile::tempdir().unwrap();
        minimal(dir.path());
        write(dir.path(), "matches.csv", "indicator,country,quality\n");
        let b = load_bundle(dir.path()).unwrap();
        assert!(b.matches.is_empty());
    }

    #[test]
    fn each_bad_row_gives_one_diagnostic() {
        let dir = tempfile::tempdir().unwrap();
        minimal(dir.path());
        write(
            dir.path(),
            "matches.csv",
            "indicator,country,quality\nA123,DE,full\nA1,DE,sorta\nA1,DE,full\n,DE,\n",
        );
        let Err(LoadError::Invalid(diags)) = load_bundle(dir.path()) else {
            panic!("expected row errors");
        };
        assert_eq!(diags.len(), 3);
        let lines: Vec<_> = diags.iter().map(|d| d.line).collect();
        assert_eq!(lines, [Some(2), Some(3), Some(5)]);
        assert_eq!(diags[0].column.as_deref(), Some("indicator"));
        assert_eq!(diags[1].column.as_deref(), Some("quality"));
    }

    #[test]
    fn dangling_country_names_its_line() {
        let dir = tempfile::tempdir().unwrap();
        minimal(dir.path());
        write(dir.path(), "matches.csv", "indicator,country,quality\nA1,DE,full\nA1,XX,full\n");
        let Err(LoadError::Invalid(diags)) = load_bundle(dir.path()) else {
            panic!("expected validation error");
        };
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].file, "matches.csv");
        assert_eq!(diags[0].line, Some(3));
        assert!(diags[0].message.contains("XX"));
    }

    #[test]
    fn extra_columns_warn_and_duplicates_collapse() {
        let dir = tempfile::tempdir().unwrap();
        minimal(dir.path());
        write(
            dir.path(),
            "correspondences.csv",
            "indicator,vertical,transversal,comment\nA01,EDU,GOV,x\nA1,EDU,GOV,y\n",
        );
        let loaded = load_bundle_with_warnings(dir.path()).unwrap();
        assert_eq!(loaded.bundle.correspondences.len(), 1);
        assert_eq!(loaded.warnings.len(), 2);
        assert_eq!(loaded.warnings[0].column.as_deref(), Some("comment"));
        assert_eq!(loaded.warnings[1].line, Some(3));
    }

    #[test]
    fn config_is_checked() {
        let dir = tempfile::tempdir().unwrap();
        minimal(dir.path());
        write(dir.path(), "config.json", r#"{"partial_weight": 2}"#);
        assert!(matches!(load_bundle(dir.path()), Err(LoadError::Config { .. })));
        write(dir.path(), "config.json", r#"{"partial_weight": 0.5, "extra": 1}"#);
        let loaded = load_bundle_with_warnings(dir.path()).unwrap();
        assert_eq!(loaded.bundle.config.partial_weight, 0.5);
        assert_eq!(loaded.warnings.len(), 1);
    }

    #[test]
    fn unknown_proposal_country_is_invalid() {
        let dir = tempfile::tempdir().unwrap();
        minimal(dir.path());
        write(
            dir.path(),
            "proposals.csv",
            "name,target_dimension,source_countries,alias_group,accepted\nX,A,DE;QQ,,true\n",
        );
        let Err(LoadError::Invalid(diags)) = load_bundle(dir.path()) else {
            panic!("expected error");
        };
        assert_eq!(diags[0].line, Some(2));
    }

    #[test]
    fn empty_bundle_exports_header_only_files() {
        let dir = tempfile::tempdir().unwrap();
        export_bundle(&DatasetBundle::default(), dir.path()).unwrap();
        let mut names: Vec<_> = fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        names.sort();
        assert_eq!(
            names,
            [
                "axes.csv",
                "config.json",
                "correspondences.csv",
                "countries.csv",
                "dimensions.csv",
                "indicators.csv",
                "matches.csv"
            ]
        );
        let matches = fs::read_to_string(dir.path().join("matches.csv")).unwrap();
        assert_eq!(matches, "indicator,country,quality\n");
        let reloaded = load_bundle(dir.path()).unwrap();
        assert_eq!(reloaded, DatasetBundle::default());
    }
}
