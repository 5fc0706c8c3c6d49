//! Pitch-level data: types, CSV ingestion and export, validation, filtering
//! and dataset summaries.
//!
//! Coordinates are in feet at the plate-crossing plane. `x` is measured from
//! the center of home plate, positive toward the umpire's right; `y` is the
//! height above the ground.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Physical sanity window: |x| must not exceed this (ft).
pub const MAX_ABS_X: f64 = 5.0;
/// Physical sanity window: y must lie in [0, MAX_Y] (ft).
pub const MAX_Y: f64 = 8.0;
/// Earliest season accepted.
pub const MIN_SEASON: i32 = 1900;

/// Canonical column order of the pitch CSV format.
pub const CANONICAL_COLUMNS: [&str; 12] = [
    "season",
    "game_id",
    "umpire_id",
    "pitcher_id",
    "batter_id",
    "batter_hand",
    "pitch_type",
    "x_ft",
    "y_ft",
    "balls",
    "strikes",
    "outcome",
];

#[derive(Debug, Error)]
pub enum DataError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("missing column `{0}`")]
    MissingColumn(String),
    #[error("file contains no data rows")]
    EmptyFile,
    #[error("parse error at line {row}, column `{column}`: {reason}")]
    ParseError {
        row: u64,
        column: String,
        reason: String,
    },
    #[error("invalid pitch at line {row}, column `{column}`: {reason}")]
    InvalidPitch {
        row: u64,
        column: String,
        reason: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BatterHand {
    Left,
    Right,
}

impl BatterHand {
    pub fn as_str(self) -> &'static str {
        match self {
            BatterHand::Left => "L",
            BatterHand::Right => "R",
        }
    }

    pub fn parse_label(s: &str) -> Option<Self> {
        match s.trim() {
            "L" | "l" | "Left" | "left" => Some(BatterHand::Left),
            "R" | "r" | "Right" | "right" => Some(BatterHand::Right),
            _ => None,
        }
    }
}

impl fmt::Display for BatterHand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PitchType {
    FourSeam,
    TwoSeam,
    Slider,
    ChangeUp,
    Curveball,
    Forkball,
    Other,
}

impl PitchType {
    pub const ALL: [PitchType; 7] = [
        PitchType::FourSeam,
        PitchType::TwoSeam,
        PitchType::Slider,
        PitchType::ChangeUp,
        PitchType::Curveball,
        PitchType::Forkball,
        PitchType::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PitchType::FourSeam => "four_seam",
            PitchType::TwoSeam => "two_seam",
            PitchType::Slider => "slider",
            PitchType::ChangeUp => "changeup",
            PitchType::Curveball => "curveball",
            PitchType::Forkball => "forkball",
            PitchType::Other => "other",
        }
    }

    /// Unknown spellings map to [`PitchType::Other`].
    pub fn parse_label(s: &str) -> Self {
        let norm: String = s
            .trim()
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_lowercase())
            .collect();
        match norm.as_str() {
            "fourseam" | "4seam" | "ff" | "fastball" => PitchType::FourSeam,
            "twoseam" | "2seam" | "ft" | "sinker" | "si" => PitchType::TwoSeam,
            "slider" | "sl" => PitchType::Slider,
            "changeup" | "ch" => PitchType::ChangeUp,
            "curveball" | "curve" | "cu" => PitchType::Curveball,
            "forkball" | "fork" | "fo" | "splitter" | "fs" => PitchType::Forkball,
            _ => PitchType::Other,
        }
    }
}

impl fmt::Display for PitchType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    CalledStrike,
    CalledBall,
    SwingingStrike,
    Foul,
    InPlay,
    Bunt,
    BuntFoul,
    HitByPitch,
    Other,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::CalledStrike => "called_strike",
            Outcome::CalledBall => "called_ball",
            Outcome::SwingingStrike => "swinging_strike",
            Outcome::Foul => "foul",
            Outcome::InPlay => "in_play",
            Outcome::Bunt => "bunt",
            Outcome::BuntFoul => "bunt_foul",
            Outcome::HitByPitch => "hbp",
            Outcome::Other => "other",
        }
    }

    pub fn parse_label(s: &str) -> Option<Self> {
        Some(match s.trim() {
            "called_strike" => Outcome::CalledStrike,
            "called_ball" => Outcome::CalledBall,
            "swinging_strike" => Outcome::SwingingStrike,
            "foul" => Outcome::Foul,
            "in_play" => Outcome::InPlay,
            "bunt" => Outcome::Bunt,
            "bunt_foul" => Outcome::BuntFoul,
            "hbp" => Outcome::HitByPitch,
            "other" => Outcome::Other,
            _ => return None,
        })
    }

    /// A take that forced an umpire decision.
    pub fn is_called(self) -> bool {
        matches!(self, Outcome::CalledStrike | Outcome::CalledBall)
    }

    /// Any offer at the pitch: swinging strike, foul, ball in play, bunt or bunt foul.
    pub fn is_hit_attempt(self) -> bool {
        matches!(
            self,
            Outcome::SwingingStrike
                | Outcome::InPlay
                | Outcome::Foul
                | Outcome::Bunt
                | Outcome::BuntFoul
        )
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One tracked pitch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pitch {
    pub season: i32,
    pub game_id: String,
    /// Home-plate umpire; `"ABS"` for robot-umpire seasons.
    pub umpire_id: String,
    pub pitcher_id: String,
    pub batter_id: String,
    pub batter_hand: BatterHand,
    pub pitch_type: PitchType,
    pub x: f64,
    pub y: f64,
    pub balls: u8,
    pub strikes: u8,
    pub outcome: Outcome,
}

impl Pitch {
    /// Checks the pitch invariants, returning the offending column and reason.
    pub fn check(&self) -> Result<(), (&'static str, String)> {
        if !self.x.is_finite() || self.x.abs() > MAX_ABS_X {
            return Err((
                "x_ft",
                format!("x = {} outside [-{MAX_ABS_X}, {MAX_ABS_X}]", self.x),
            ));
        }
        if !self.y.is_finite() || !(0.0..=MAX_Y).contains(&self.y) {
            return Err(("y_ft", format!("y = {} outside [0, {MAX_Y}]", self.y)));
        }
        if self.balls > 3 {
            return Err(("balls", format!("balls = {} outside [0, 3]", self.balls)));
        }
        if self.strikes > 2 {
            return Err((
                "strikes",
                format!("strikes = {} outside [0, 2]", self.strikes),
            ));
        }
        if self.season < MIN_SEASON {
            return Err((
                "season",
                format!("season {} before {MIN_SEASON}", self.season),
            ));
        }
        Ok(())
    }
}

/// An ordered, immutable collection of pitches.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Dataset {
    pub pitches: Vec<Pitch>,
    pub source_label: String,
}

impl Dataset {
    pub fn new(source_label: impl Into<String>, pitches: Vec<Pitch>) -> Self {
        Dataset {
            pitches,
            source_label: source_label.into(),
        }
    }

    pub fn row_count(&self) -> usize {
        self.pitches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pitches.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Pitch> {
        self.pitches.iter()
    }

    pub fn called(&self) -> impl Iterator<Item = &Pitch> {
        self.pitches.iter().filter(|p| p.outcome.is_called())
    }

    pub fn filter(&self, spec: &FilterSpec) -> Dataset {
        Dataset {
            pitches: self
                .pitches
                .iter()
                .filter(|p| spec.matches(p))
                .cloned()
                .collect(),
            source_label: self.source_label.clone(),
        }
    }

    pub fn summary(&self) -> Summary {
        let mut games = BTreeSet::new();
        let mut pitchers = BTreeSet::new();
        let mut batters = BTreeSet::new();
        let mut per_season = BTreeMap::new();
        for p in &self.pitches {
            games.insert(p.game_id.as_str());
            pitchers.insert(p.pitcher_id.as_str());
            batters.insert(p.batter_id.as_str());
            *per_season.entry(p.season).or_insert(0) += 1;
        }
        Summary {
            n_pitches: self.pitches.len(),
            n_games: games.len(),
            n_pitchers: pitchers.len(),
            n_batters: batters.len(),
            per_season,
        }
    }

    /// Writes the dataset in the canonical CSV schema.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), DataError> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(CANONICAL_COLUMNS)?;
        for p in &self.pitches {
            w.write_record([
                p.season.to_string(),
                p.game_id.clone(),
                p.umpire_id.clone(),
                p.pitcher_id.clone(),
                p.batter_id.clone(),
                p.batter_hand.as_str().to_string(),
                p.pitch_type.as_str().to_string(),
                p.x.to_string(),
                p.y.to_string(),
                p.balls.to_string(),
                p.strikes.to_string(),
                p.outcome.as_str().to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Exact distinct counts over the identifier fields.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Summary {
    pub n_pitches: usize,
    pub n_games: usize,
    pub n_pitchers: usize,
    pub n_batters: usize,
    pub per_season: BTreeMap<i32, usize>,
}

/// Conjunctive pitch filter; every field is optional.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct FilterSpec {
    pub seasons: Option<Vec<i32>>,
    pub umpire_ids: Option<Vec<String>>,
    pub pitch_types: Option<Vec<PitchType>>,
    pub batter_hand: Option<BatterHand>,
    /// (balls, strikes)
    pub count: Option<(u8, u8)>,
    pub called_only: bool,
}

impl FilterSpec {
    pub fn called_only() -> Self {
        FilterSpec {
            called_only: true,
            ..Default::default()
        }
    }

    pub fn with_count(balls: u8, strikes: u8) -> Self {
        FilterSpec {
            count: Some((balls, strikes)),
            ..Default::default()
        }
    }

    pub fn matches(&self, p: &Pitch) -> bool {
        if let Some(s) = &self.seasons {
            if !s.contains(&p.season) {
                return false;
            }
        }
        if let Some(u) = &self.umpire_ids {
            if !u.contains(&p.umpire_id) {
                return false;
            }
        }
        if let Some(t) = &self.pitch_types {
            if !t.contains(&p.pitch_type) {
                return false;
            }
        }
        if let Some(h) = self.batter_hand {
            if h != p.batter_hand {
                return false;
            }
        }
        if let Some((b, s)) = self.count {
            if p.balls != b || p.strikes != s {
                return false;
            }
        }
        !self.called_only || p.outcome.is_called()
    }

    /// The filter matching exactly the pitches both filters match, or `None`
    /// when the single-valued fields contradict each other.
    pub fn and(&self, other: &FilterSpec) -> Option<FilterSpec> {
        fn both<T: Clone + PartialEq>(a: &Option<Vec<T>>, b: &Option<Vec<T>>) -> Option<Vec<T>> {
            match (a, b) {
                (Some(a), Some(b)) => Some(a.iter().filter(|v| b.contains(v)).cloned().collect()),
                (Some(a), None) => Some(a.clone()),
                (None, b) => b.clone(),
            }
        }
        fn single<T: Copy + PartialEq>(a: Option<T>, b: Option<T>) -> Result<Option<T>, ()> {
            match (a, b) {
                (Some(a), Some(b)) if a != b => Err(()),
                (a, b) => Ok(a.or(b)),
            }
        }
        Some(FilterSpec {
            seasons: both(&self.seasons, &other.seasons),
            umpire_ids: both(&self.umpire_ids, &other.umpire_ids),
            pitch_types: both(&self.pitch_types, &other.pitch_types),
            batter_hand: single(self.batter_hand, other.batter_hand).ok()?,
            count: single(self.count, other.count).ok()?,
            called_only: self.called_only || other.called_only,
        })
    }
}

/// Maps canonical field names to the column headers of a foreign export.
/// Fields not listed use their canonical name.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct CsvSchema {
    pub columns: HashMap<String, String>,
    /// Extra outcome spellings, e.g. `"B" -> "called_ball"`.
    pub outcome_aliases: HashMap<String, String>,
}

impl CsvSchema {
    fn column_name<'a>(&'a self, canonical: &'a str) -> &'a str {
        self.columns
            .get(canonical)
            .map(String::as_str)
            .unwrap_or(canonical)
    }

    fn parse_outcome(&self, raw: &str) -> Option<Outcome> {
        let raw = raw.trim();
        match self.outcome_aliases.get(raw) {
            Some(canon) => Outcome::parse_label(canon),
            None => Outcome::parse_label(raw),
        }
    }
}

/// One rejected row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    /// 1-based line number in the file (the header is line 1).
    pub row: u64,
    pub column: String,
    pub reason: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}: {}", self.row, self.column, self.reason)
    }
}

/// Result of a lenient read: all valid pitches plus every rejected row.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub dataset: Dataset,
    pub violations: Vec<Violation>,
    pub rows_read: usize,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

enum RowError {
    Parse(Violation),
    Invalid(Violation),
}

impl RowError {
    fn into_violation(self) -> Violation {
        match self {
            RowError::Parse(v) | RowError::Invalid(v) => v,
        }
    }

    fn into_error(self) -> DataError {
        match self {
            RowError::Parse(v) => DataError::ParseError {
                row: v.row,
                column: v.column,
                reason: v.reason,
            },
            RowError::Invalid(v) => DataError::InvalidPitch {
                row: v.row,
                column: v.column,
                reason: v.reason,
            },
        }
    }
}

struct ColumnIndex([usize; 12]);

impl ColumnIndex {
    fn resolve(headers: &csv::StringRecord, schema: &CsvSchema) -> Result<Self, DataError> {
        let mut idx = [0usize; 12];
        for (slot, canonical) in idx.iter_mut().zip(CANONICAL_COLUMNS) {
            let name = schema.column_name(canonical);
            *slot = headers
                .iter()
                .position(|h| h.trim() == name)
                .ok_or_else(|| DataError::MissingColumn(name.to_string()))?;
        }
        Ok(ColumnIndex(idx))
    }

    fn parse_row(
        &self,
        record: &csv::StringRecord,
        line: u64,
        schema: &CsvSchema,
    ) -> Result<Pitch, RowError> {
        let field = |i: usize| record.get(self.0[i]).unwrap_or("").trim();
        let fail = |i: usize, reason: String| {
            RowError::Parse(Violation {
                row: line,
                column: schema.column_name(CANONICAL_COLUMNS[i]).to_string(),
                reason,
            })
        };
        fn num<T: std::str::FromStr>(s: &str) -> Option<T> {
            s.parse().ok()
        }

        let season: i32 =
            num(field(0)).ok_or_else(|| fail(0, format!("`{}` is not an integer", field(0))))?;
        let batter_hand = BatterHand::parse_label(field(5))
            .ok_or_else(|| fail(5, format!("`{}` is not L or R", field(5))))?;
        let x: f64 =
            num(field(7)).ok_or_else(|| fail(7, format!("`{}` is not a number", field(7))))?;
        let y: f64 =
            num(field(8)).ok_or_else(|| fail(8, format!("`{}` is not a number", field(8))))?;
        let balls: u8 =
            num(field(9)).ok_or_else(|| fail(9, format!("`{}` is not a count", field(9))))?;
        let strikes: u8 =
            num(field(10)).ok_or_else(|| fail(10, format!("`{}` is not a count", field(10))))?;
        let outcome = schema
            .parse_outcome(field(11))
            .ok_or_else(|| fail(11, format!("unknown outcome `{}`", field(11))))?;

        let pitch = Pitch {
            season,
            game_id: field(1).to_string(),
            umpire_id: field(2).to_string(),
            pitcher_id: field(3).to_string(),
            batter_id: field(4).to_string(),
            batter_hand,
            pitch_type: PitchType::parse_label(field(6)),
            x,
            y,
            balls,
            strikes,
            outcome,
        };
        pitch.check().map_err(|(col, reason)| {
            let i = CANONICAL_COLUMNS
                .iter()
                .position(|c| *c == col)
                .unwrap_or(0);
            RowError::Invalid(Violation {
                row: line,
                column: schema.column_name(CANONICAL_COLUMNS[i]).to_string(),
                reason,
            })
        })?;
        Ok(pitch)
    }
}

fn scan<R: Read>(
    reader: R,
    schema: &CsvSchema,
    mut on_row: impl FnMut(Result<Pitch, RowError>) -> Result<(), DataError>,
) -> Result<usize, DataError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.is_empty() || headers.iter().all(|h| h.trim().is_empty()) {
        return Err(DataError::EmptyFile);
    }
    let columns = ColumnIndex::resolve(&headers, schema)?;
    let mut rows = 0usize;
    let mut record = csv::StringRecord::new();
    while rdr.read_record(&mut record)? {
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        rows += 1;
        on_row(columns.parse_row(&record, line, schema))?;
    }
    if rows == 0 {
        return Err(DataError::EmptyFile);
    }
    Ok(rows)
}

/// Strict read: the first malformed or out-of-window row is an error.
pub fn read_csv<R: Read>(
    reader: R,
    schema: &CsvSchema,
    source_label: &str,
) -> Result<Dataset, DataError> {
    let mut pitches = Vec::new();
    scan(reader, schema, |row| {
        pitches.push(row.map_err(RowError::into_error)?);
        Ok(())
    })?;
    Ok(Dataset::new(source_label, pitches))
}

/// Loads a pitch CSV; the source label is the file stem.
pub fn load_csv(path: impl AsRef<Path>, schema: &CsvSchema) -> Result<Dataset, DataError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)?;
    read_csv(std::io::BufReader::new(file), schema, &label_for(path))
}

/// Lenient read that collects every row-level violation instead of stopping
/// at the first. Missing columns and empty files are still fatal.
pub fn validate_csv<R: Read>(
    reader: R,
    schema: &CsvSchema,
    source_label: &str,
) -> Result<ValidationReport, DataError> {
    let mut report = ValidationReport {
        dataset: Dataset::new(source_label, Vec::new()),
        ..Default::default()
    };
    report.rows_read = scan(reader, schema, |row| {
        match row {
            Ok(p) => report.dataset.pitches.push(p),
            Err(e) => report.violations.push(e.into_violation()),
        }
        Ok(())
    })?;
    Ok(report)
}

pub fn validate_file(
    path: impl AsRef<Path>,
    schema: &CsvSchema,
) -> Result<ValidationReport, DataError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)?;
    validate_csv(std::io::BufReader::new(file), schema, &label_for(path))
}

fn label_for(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}
