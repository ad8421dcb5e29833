//! Domain types shared by every analysis stage, plus whole-dataset validation.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Reserved column id for indicators that fit no vertical axis.
pub const OVA: &str = "OVA";
/// Reserved row id for indicators that fit no transversal axis.
pub const OTA: &str = "OTA";

/// Canonical indicator code: one uppercase letter followed by a two-digit
/// number in `01..=99`, e.g. `A07`.
///
/// Ordering follows the canonical string, so sorting codes sorts them
/// lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndicatorCode {
    letter: u8,
    number: u8,
}

impl IndicatorCode {
    pub fn new(letter: char, number: u8) -> Result<Self, CodeError> {
        if !letter.is_ascii_alphabetic() {
            return Err(CodeError::new(letter.to_string(), 0, "expected a letter"));
        }
        if number == 0 || number > 99 {
            return Err(CodeError::new(
                format!("{letter}{number}"),
                1,
                "number must be between 1 and 99",
            ));
        }
        Ok(Self {
            letter: letter.to_ascii_uppercase() as u8,
            number,
        })
    }

    pub fn letter(self) -> char {
        self.letter as char
    }

    pub fn number(self) -> u8 {
        self.number
    }
}

impl fmt::Display for IndicatorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:02}", self.letter as char, self.number)
    }
}

impl FromStr for IndicatorCode {
    type Err = CodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        normalize_code(s)
    }
}

impl Serialize for IndicatorCode {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for IndicatorCode {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        normalize_code(&raw).map_err(serde::de::Error::custom)
    }
}

/// A rejected indicator code, with the character offset where parsing failed.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed indicator code {input:?} at position {position}: {reason}")]
pub struct CodeError {
    pub input: String,
    pub position: usize,
    pub reason: &'static str,
}

impl CodeError {
    fn new(input: String, position: usize, reason: &'static str) -> Self {
        Self {
            input,
            position,
            reason,
        }
    }
}

/// Parses a letter followed by one or two digits (case-insensitive) into the
/// canonical zero-padded form: `"a1"` becomes `A01`.
pub fn normalize_code(raw: &str) -> Result<IndicatorCode, CodeError> {
    let err = |position, reason| CodeError::new(raw.to_string(), position, reason);
    let mut chars = raw.chars();
    let letter = match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => c,
        Some(_) => return Err(err(0, "expected a letter")),
        None => return Err(err(0, "empty code")),
    };
    let digits: Vec<char> = chars.collect();
    if digits.is_empty() {
        return Err(err(1, "expected one or two digits"));
    }
    if let Some(pos) = digits.iter().position(|c| !c.is_ascii_digit()) {
        return Err(err(1 + pos, "expected a digit"));
    }
    if digits.len() > 2 {
        return Err(err(3, "more than two digits"));
    }
    let number: u8 = digits
        .iter()
        .fold(0u8, |acc, d| acc * 10 + d.to_digit(10).unwrap_or(0) as u8);
    if number == 0 {
        return Err(err(1, "number must be at least 1"));
    }
    Ok(IndicatorCode {
        letter: letter.to_ascii_uppercase() as u8,
        number,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DimensionOrigin {
    Preliminary,
    Extension,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dimension {
    pub code: char,
    pub name: String,
    pub origin: DimensionOrigin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndicatorStatus {
    Preliminary,
    Proposed,
    Consolidated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Indicator {
    pub code: IndicatorCode,
    pub dimension: char,
    pub area: Option<String>,
    pub name: String,
    pub status: IndicatorStatus,
    pub feasibility_notes: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountryRecord {
    pub id: String,
    pub name: String,
    pub has_document: bool,
    pub uses_indicators: bool,
    pub plans_indicators: bool,
    pub notes: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchQuality {
    Full,
    Partial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchRecord {
    pub indicator: IndicatorCode,
    pub country: String,
    pub quality: MatchQuality,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyRecord {
    pub indicator: IndicatorCode,
    pub frequency: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrevalenceStats {
    pub mean: f64,
    pub std_dev: f64,
    pub hp_threshold: f64,
    pub irrelevant_threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisKind {
    Vertical,
    Transversal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Axis {
    pub id: String,
    pub name: String,
    pub abbrev: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategicAction {
    pub action_id: String,
    pub axis_id: String,
    pub text: String,
}

/// A strategy's thematic structure: vertical axes form the matrix columns,
/// transversal axes its rows.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisScheme {
    pub vertical_axes: Vec<Axis>,
    pub transversal_axes: Vec<Axis>,
    #[serde(default)]
    pub actions: Vec<StrategicAction>,
}

impl AxisScheme {
    pub fn is_empty(&self) -> bool {
        self.vertical_axes.is_empty() && self.transversal_axes.is_empty()
    }

    pub fn kind_of(&self, id: &str) -> Option<AxisKind> {
        if self.vertical_axes.iter().any(|a| a.id == id) {
            Some(AxisKind::Vertical)
        } else if self.transversal_axes.iter().any(|a| a.id == id) {
            Some(AxisKind::Transversal)
        } else {
            None
        }
    }
}

/// Placement of one indicator into one cell of the extended matrix.
/// `vertical` may be [`OVA`]; `transversal` may be [`OTA`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CorrespondenceEntry {
    pub indicator: IndicatorCode,
    pub vertical: String,
    pub transversal: String,
}

/// The dataset files a record can come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum DataFile {
    Dimensions,
    Indicators,
    Countries,
    Matches,
    Axes,
    Correspondences,
}

impl DataFile {
    pub fn file_name(self) -> &'static str {
        match self {
            DataFile::Dimensions => "dimensions.csv",
            DataFile::Indicators => "indicators.csv",
            DataFile::Countries => "countries.csv",
            DataFile::Matches => "matches.csv",
            DataFile::Axes => "axes.csv",
            DataFile::Correspondences => "correspondences.csv",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum ViolationKind {
    InvalidDimensionCode { code: char },
    DuplicateDimension { code: char },
    DuplicateIndicator { code: IndicatorCode },
    UnknownDimension { indicator: IndicatorCode, dimension: char },
    DimensionMismatch { indicator: IndicatorCode, dimension: char },
    DuplicateCountry { id: String },
    DocumentlessCountryFlags { id: String },
    DuplicateMatch { indicator: IndicatorCode, country: String },
    UnknownIndicator { indicator: IndicatorCode },
    UnknownCountry { country: String },
    DuplicateAxis { id: String },
    ReservedAxisId { id: String },
    EmptyAxisList { kind: AxisKind },
    UnknownActionAxis { action_id: String, axis_id: String },
    DuplicateCorrespondence { indicator: IndicatorCode, vertical: String, transversal: String },
    UnknownAxis { axis_id: String, expected: AxisKind },
    SentinelMisuse { sentinel: String, expected: AxisKind },
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ViolationKind::*;
        match self {
            InvalidDimensionCode { code } => {
                write!(f, "dimension code {code:?} is not a single uppercase letter")
            }
            DuplicateDimension { code } => write!(f, "duplicate dimension code {code}"),
            DuplicateIndicator { code } => write!(f, "duplicate indicator code {code}"),
            UnknownDimension { indicator, dimension } => {
                write!(f, "indicator {indicator} references unknown dimension {dimension}")
            }
            DimensionMismatch { indicator, dimension } => write!(
                f,
                "indicator {indicator} declares dimension {dimension} but its code starts with {}",
                indicator.letter()
            ),
            DuplicateCountry { id } => write!(f, "duplicate country id {id}"),
            DocumentlessCountryFlags { id } => write!(
                f,
                "country {id} has no strategy document but is flagged as using or planning indicators"
            ),
            DuplicateMatch { indicator, country } => {
                write!(f, "duplicate match {indicator} / {country}")
            }
            UnknownIndicator { indicator } => write!(f, "unknown indicator code {indicator}"),
            UnknownCountry { country } => write!(f, "unknown country id {country}"),
            DuplicateAxis { id } => write!(f, "duplicate axis id {id}"),
            ReservedAxisId { id } => write!(f, "axis id {id} is reserved"),
            EmptyAxisList { kind } => write!(f, "no {} axes declared", kind_name(*kind)),
            UnknownActionAxis { action_id, axis_id } => {
                write!(f, "action {action_id} references unknown axis {axis_id}")
            }
            DuplicateCorrespondence {
                indicator,
                vertical,
                transversal,
            } => write!(
                f,
                "duplicate correspondence {indicator} / {vertical} / {transversal}"
            ),
            UnknownAxis { axis_id, expected } => {
                write!(f, "unknown {} axis {axis_id}", kind_name(*expected))
            }
            SentinelMisuse { sentinel, expected } => write!(
                f,
                "sentinel {sentinel} used where a {} axis is expected",
                kind_name(*expected)
            ),
        }
    }
}

fn kind_name(kind: AxisKind) -> &'static str {
    match kind {
        AxisKind::Vertical => "vertical",
        AxisKind::Transversal => "transversal",
    }
}

/// One consistency problem, located by source file and zero-based record index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub file: DataFile,
    pub index: usize,
    #[serde(flatten)]
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} record {}: {}", self.file.file_name(), self.index + 1, self.kind)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Borrowed view over the six record collections checked by [`validate_dataset`].
#[derive(Debug, Clone, Copy)]
pub struct DatasetView<'a> {
    pub indicators: &'a [Indicator],
    pub dimensions: &'a [Dimension],
    pub countries: &'a [CountryRecord],
    pub matches: &'a [MatchRecord],
    pub axis_scheme: &'a AxisScheme,
    pub correspondences: &'a [CorrespondenceEntry],
}

/// Checks referential integrity and uniqueness across a whole dataset.
///
/// Violations are data: an empty report means the dataset is valid. An empty
/// dataset is valid, and an axis scheme is only required to have both axis
/// kinds once any axis is declared.
pub fn validate_dataset(data: DatasetView<'_>) -> ValidationReport {
    let mut out = Vec::new();
    let mut push = |file, index, kind| out.push(Violation { file, index, kind });

    let mut dims = HashSet::new();
    for (i, d) in data.dimensions.iter().enumerate() {
        if !d.code.is_ascii_uppercase() {
            push(DataFile::Dimensions, i, ViolationKind::InvalidDimensionCode { code: d.code });
        } else if !dims.insert(d.code) {
            push(DataFile::Dimensions, i, ViolationKind::DuplicateDimension { code: d.code });
        }
    }

    let mut codes = HashSet::new();
    for (i, ind) in data.indicators.iter().enumerate() {
        if !codes.insert(ind.code) {
            push(DataFile::Indicators, i, ViolationKind::DuplicateIndicator { code: ind.code });
        }
        if ind.dimension != ind.code.letter() {
            push(
                DataFile::Indicators,
                i,
                ViolationKind::DimensionMismatch {
                    indicator: ind.code,
                    dimension: ind.dimension,
                },
            );
        } else if !dims.contains(&ind.dimension) {
            push(
                DataFile::Indicators,
                i,
                ViolationKind::UnknownDimension {
                    indicator: ind.code,
                    dimension: ind.dimension,
                },
            );
        }
    }

    let mut countries = HashSet::new();
    for (i, c) in data.countries.iter().enumerate() {
        if !countries.insert(c.id.as_str()) {
            push(DataFile::Countries, i, ViolationKind::DuplicateCountry { id: c.id.clone() });
        }
        if !c.has_document && (c.uses_indicators || c.plans_indicators) {
            push(
                DataFile::Countries,
                i,
                ViolationKind::DocumentlessCountryFlags { id: c.id.clone() },
            );
        }
    }

    let mut pairs = HashSet::new();
    for (i, m) in data.matches.iter().enumerate() {
        if !codes.contains(&m.indicator) {
            push(DataFile::Matches, i, ViolationKind::UnknownIndicator { indicator: m.indicator });
        }
        if !countries.contains(m.country.as_str()) {
            push(
                DataFile::Matches,
                i,
                ViolationKind::UnknownCountry {
                    country: m.country.clone(),
                },
            );
        }
        if !pairs.insert((m.indicator, m.country.as_str())) {
            push(
                DataFile::Matches,
                i,
                ViolationKind::DuplicateMatch {
                    indicator: m.indicator,
                    country: m.country.clone(),
                },
            );
        }
    }

    let scheme = data.axis_scheme;
    let mut axis_ids: HashMap<&str, AxisKind> = HashMap::new();
    let all_axes = scheme
        .vertical_axes
        .iter()
        .map(|a| (a, AxisKind::Vertical))
        .chain(scheme.transversal_axes.iter().map(|a| (a, AxisKind::Transversal)));
    for (i, (axis, kind)) in all_axes.enumerate() {
        if axis.id == OVA || axis.id == OTA {
            push(DataFile::Axes, i, ViolationKind::ReservedAxisId { id: axis.id.clone() });
        } else if axis_ids.insert(axis.id.as_str(), kind).is_some() {
            push(DataFile::Axes, i, ViolationKind::DuplicateAxis { id: axis.id.clone() });
        }
    }
    if !scheme.is_empty() {
        for (axes, kind) in [
            (&scheme.vertical_axes, AxisKind::Vertical),
            (&scheme.transversal_axes, AxisKind::Transversal),
        ] {
            if axes.is_empty() {
                push(DataFile::Axes, 0, ViolationKind::EmptyAxisList { kind });
            }
        }
    }
    for (i, action) in scheme.actions.iter().enumerate() {
        if !axis_ids.contains_key(action.axis_id.as_str()) {
            push(
                DataFile::Axes,
                i,
                ViolationKind::UnknownActionAxis {
                    action_id: action.action_id.clone(),
                    axis_id: action.axis_id.clone(),
                },
            );
        }
    }

    let mut triples = HashSet::new();
    for (i, c) in data.correspondences.iter().enumerate() {
        if !codes.contains(&c.indicator) {
            push(
                DataFile::Correspondences,
                i,
                ViolationKind::UnknownIndicator { indicator: c.indicator },
            );
        }
        for (id, expected, own, foreign) in [
            (&c.vertical, AxisKind::Vertical, OVA, OTA),
            (&c.transversal, AxisKind::Transversal, OTA, OVA),
        ] {
            if id == own {
                continue;
            }
            if id == foreign {
                push(
                    DataFile::Correspondences,
                    i,
                    ViolationKind::SentinelMisuse {
                        sentinel: id.clone(),
                        expected,
                    },
                );
            } else if axis_ids.get(id.as_str()) != Some(&expected) {
                push(
                    DataFile::Correspondences,
                    i,
                    ViolationKind::UnknownAxis {
                        axis_id: id.clone(),
                        expected,
                    },
                );
            }
        }
        if !triples.insert(c) {
            push(
                DataFile::Correspondences,
                i,
                ViolationKind::DuplicateCorrespondence {
                    indicator: c.indicator,
                    vertical: c.vertical.clone(),
                    transversal: c.transversal.clone(),
                },
            );
        }
    }

    ValidationReport { violations: out }
}

/// The extended strategy matrix: transversal axes plus [`OTA`] as rows,
/// vertical axes plus [`OVA`] as columns, and a sorted set of indicator
/// codes in every cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedMatrix {
    rows: Vec<String>,
    columns: Vec<String>,
    cells: Vec<Vec<BTreeSet<IndicatorCode>>>,
}

impl ExtendedMatrix {
    /// An empty matrix over the given interior axes; the overflow row and
    /// column are appended.
    pub fn empty(scheme: &AxisScheme) -> Self {
        let rows: Vec<String> = scheme
            .transversal_axes
            .iter()
            .map(|a| a.id.clone())
            .chain(std::iter::once(OTA.to_string()))
            .collect();
        let columns: Vec<String> = scheme
            .vertical_axes
            .iter()
            .map(|a| a.id.clone())
            .chain(std::iter::once(OVA.to_string()))
            .collect();
        let cells = vec![vec![BTreeSet::new(); columns.len()]; rows.len()];
        Self {
            rows,
            columns,
            cells,
        }
    }

    pub fn rows(&self) -> &[String] {
        &self.rows
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn row_index(&self, id: &str) -> Option<usize> {
        self.rows.iter().position(|r| r == id)
    }

    pub fn column_index(&self, id: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == id)
    }

    /// Index of the overflow row; always the last row.
    pub fn ota_row(&self) -> usize {
        self.rows.len() - 1
    }

    /// Index of the overflow column; always the last column.
    pub fn ova_column(&self) -> usize {
        self.columns.len() - 1
    }

    pub fn cell_at(&self, row: usize, column: usize) -> &BTreeSet<IndicatorCode> {
        &self.cells[row][column]
    }

    /// Cell lookup by axis ids (sentinels included).
    pub fn cell(&self, row: &str, column: &str) -> Option<&BTreeSet<IndicatorCode>> {
        Some(&self.cells[self.row_index(row)?][self.column_index(column)?])
    }

    /// Inserts a code, returning `false` if it was already in the cell.
    pub(crate) fn insert(&mut self, row: usize, column: usize, code: IndicatorCode) -> bool {
        self.cells[row][column].insert(code)
    }

    /// Entries (with multiplicity across cells) in one column.
    pub fn column_entries(&self, column: usize) -> usize {
        self.cells.iter().map(|r| r[column].len()).sum()
    }

    pub fn row_entries(&self, row: usize) -> usize {
        self.cells[row].iter().map(BTreeSet::len).sum()
    }

    pub fn total_entries(&self) -> usize {
        self.cells.iter().flatten().map(BTreeSet::len).sum()
    }

    pub fn distinct_in_column(&self, column: usize) -> BTreeSet<IndicatorCode> {
        self.cells
            .iter()
            .flat_map(|r| r[column].iter().copied())
            .collect()
    }

    pub fn distinct_in_row(&self, row: usize) -> BTreeSet<IndicatorCode> {
        self.cells[row].iter().flatten().copied().collect()
    }

    /// Cells keyed `"row|column"`, empty cells omitted.
    pub fn to_cell_map(&self) -> BTreeMap<String, Vec<IndicatorCode>> {
        let mut map = BTreeMap::new();
        for (r, row) in self.rows.iter().enumerate() {
            for (c, column) in self.columns.iter().enumerate() {
                let cell = &self.cells[r][c];
                if !cell.is_empty() {
                    map.insert(format!("{row}|{column}"), cell.iter().copied().collect());
                }
            }
        }
        map
    }
}
