use std::collections::BTreeMap;

use serde::Serialize;
use zonefit::analysis::{
    decision_pitch_mix, hit_attempt_ratio, strike_ratio, two_proportion_test, BandClassifier,
};
use zonefit::{
    AnalysisError, BandLabel, Dataset, FilterSpec, GroupKey, GroupKeyField, RatioReport,
    RulebookZone,
};

use crate::commands::{load_pitches, load_schema, parse_bands};
use crate::error::{CliError, Result};
use crate::output::{write_csv_rows, Manifest, OutDir};
use crate::{MixArgs, RatioArgs};

/// One CSV row of a ratio table; fields not grouped on are left empty.
#[derive(Serialize)]
struct RatioRow {
    band: String,
    season: Option<i32>,
    pitch_type: Option<String>,
    hand: Option<String>,
    umpire: Option<String>,
    n: u64,
    k: u64,
    ratio: f64,
    lo: f64,
    hi: f64,
}

const RATIO_HEADER: [&str; 10] = [
    "band",
    "season",
    "pitch_type",
    "hand",
    "umpire",
    "n",
    "k",
    "ratio",
    "lo",
    "hi",
];

impl RatioRow {
    fn new(r: &RatioReport) -> Self {
        RatioRow {
            band: r.band.to_string(),
            season: r.group.season,
            pitch_type: r.group.pitch_type.map(|t| t.to_string()),
            hand: r.group.batter_hand.map(|h| h.to_string()),
            umpire: r.group.umpire_id.clone(),
            n: r.n,
            k: r.k,
            ratio: r.ratio,
            lo: r.interval.lo,
            hi: r.interval.hi,
        }
    }
}

#[derive(Serialize)]
struct SignificanceRow {
    band: String,
    group: String,
    season_a: i32,
    season_b: i32,
    n_a: u64,
    k_a: u64,
    n_b: u64,
    k_b: u64,
    z: f64,
    p_value: f64,
    degenerate: bool,
}

const SIGNIFICANCE_HEADER: [&str; 11] = [
    "band",
    "group",
    "season_a",
    "season_b",
    "n_a",
    "k_a",
    "n_b",
    "k_b",
    "z",
    "p_value",
    "degenerate",
];

#[derive(Serialize)]
struct RatioEcho<'a> {
    bands: Vec<String>,
    group_by: &'a [GroupKeyField],
    band_width: f64,
}

fn classifier(width: f64) -> Result<BandClassifier> {
    BandClassifier::new(RulebookZone::default(), width)
        .ok_or_else(|| CliError::input(format!("band width must be positive, got {width}")))
}

fn parse_group_by(items: &[String]) -> Result<Vec<GroupKeyField>> {
    let mut out: Vec<GroupKeyField> = Vec::new();
    for s in items
        .iter()
        .filter(|s| !s.trim().is_empty() && s.trim() != "none")
    {
        let f: GroupKeyField = s.parse().map_err(CliError::input)?;
        if !out.contains(&f) {
            out.push(f);
        }
    }
    Ok(out)
}

type Table = fn(&Dataset, &BandClassifier, BandLabel, &[GroupKeyField]) -> Vec<RatioReport>;

struct Setup {
    out: OutDir,
    data: Dataset,
    cls: BandClassifier,
    bands: Vec<BandLabel>,
    group_by: Vec<GroupKeyField>,
}

fn setup(a: &RatioArgs, command: &'static str, seed: Option<u64>) -> Result<Setup> {
    let mut manifest = Manifest::new(command, seed.unwrap_or(0));
    let schema = load_schema(&a.schema, &mut manifest)?;
    let bands = parse_bands(&a.band)?;
    let group_by = parse_group_by(&a.group_by)?;
    let cls = classifier(a.band_width)?;
    let data = load_pitches(&a.input, &schema, &mut manifest)?;
    manifest.config(&RatioEcho {
        bands: bands.iter().map(|b| b.to_string()).collect(),
        group_by: &group_by,
        band_width: a.band_width,
    })?;
    Ok(Setup {
        out: OutDir::new(&a.out, manifest)?,
        data,
        cls,
        bands,
        group_by,
    })
}

fn ratio_rows(s: &Setup, table: Table) -> Vec<RatioRow> {
    s.bands
        .iter()
        .flat_map(|&b| table(&s.data, &s.cls, b, &s.group_by))
        .map(|r| RatioRow::new(&r))
        .collect()
}

/// Pairwise season comparisons of every (band, group) cell, with the season
/// always among the grouping fields.
fn significance(s: &Setup, table: Table) -> Result<Vec<SignificanceRow>> {
    let mut fields = s.group_by.clone();
    if !fields.contains(&GroupKeyField::Season) {
        fields.insert(0, GroupKeyField::Season);
    }
    let mut rows = Vec::new();
    for &band in &s.bands {
        let mut cells: BTreeMap<GroupKey, Vec<(i32, u64, u64)>> = BTreeMap::new();
        for r in table(&s.data, &s.cls, band, &fields) {
            let season = r.group.season.expect("season is grouped");
            cells
                .entry(r.group.without_season())
                .or_default()
                .push((season, r.n, r.k));
        }
        for (group, seasons) in cells {
            for (i, &(sa, na, ka)) in seasons.iter().enumerate() {
                for &(sb, nb, kb) in &seasons[i + 1..] {
                    let t = two_proportion_test(ka, na, kb, nb)?;
                    rows.push(SignificanceRow {
                        band: band.to_string(),
                        group: group.to_string(),
                        season_a: sa,
                        season_b: sb,
                        n_a: na,
                        k_a: ka,
                        n_b: nb,
                        k_b: kb,
                        z: t.z,
                        p_value: t.p_value,
                        degenerate: t.degenerate,
                    });
                }
            }
        }
    }
    Ok(rows)
}

fn run_table(
    a: &RatioArgs,
    command: &'static str,
    seed: Option<u64>,
    table: Table,
    file: &str,
) -> Result<()> {
    let mut s = setup(a, command, seed)?;
    let rows = ratio_rows(&s, table);
    write_csv_rows(&s.out.file(file), &rows, &RATIO_HEADER)?;
    let sig = significance(&s, table)?;
    write_csv_rows(&s.out.file("significance.csv"), &sig, &SIGNIFICANCE_HEADER)?;
    println!(
        "{} cells, {} season comparisons written to {}",
        rows.len(),
        sig.len(),
        a.out.display()
    );
    s.out.finish()
}

/// Strike-call ratios (`zones.csv`) plus `significance.csv`.
pub fn run_zones(a: &RatioArgs, seed: Option<u64>) -> Result<()> {
    run_table(a, "zones", seed, strike_ratio, "zones.csv")
}

/// Hit-attempt ratios (`attempts.csv`) plus `significance.csv`.
pub fn run_attempts(a: &RatioArgs, seed: Option<u64>) -> Result<()> {
    run_table(a, "attempts", seed, hit_attempt_ratio, "attempts.csv")
}

#[derive(Serialize)]
struct MixCsvRow {
    season: Option<i32>,
    band: String,
    pitch_type: String,
    count: u64,
    total: u64,
    frequency: f64,
}

#[derive(Serialize)]
struct MixEcho {
    bands: Vec<String>,
    by_season: bool,
    band_width: f64,
}

/// Decision-pitch mix per band (`mix.csv`), optionally per season. Bands no
/// 2-2 pitch reaches are skipped with a warning.
pub fn run_mix(a: &MixArgs, seed: Option<u64>) -> Result<()> {
    let mut manifest = Manifest::new("mix", seed.unwrap_or(0));
    let schema = load_schema(&a.schema, &mut manifest)?;
    let mut bands = Vec::new();
    for b in parse_bands(&a.band)? {
        match b {
            BandLabel::Band(z) => bands.push(z),
            BandLabel::Pooled(side) if a.band.iter().all(|s| !s.eq_ignore_ascii_case("all")) => {
                return Err(CliError::input(format!(
                    "mix is reported per single band; use {}1 or {}2",
                    side.as_str(),
                    side.as_str()
                )))
            }
            BandLabel::Pooled(_) => {}
        }
    }
    let cls = classifier(a.band_width)?;
    let d = load_pitches(&a.input, &schema, &mut manifest)?;
    manifest.config(&MixEcho {
        bands: bands.iter().map(|b| b.as_str().to_string()).collect(),
        by_season: a.by_season,
        band_width: a.band_width,
    })?;
    let mut out = OutDir::new(&a.out, manifest)?;

    let groups: Vec<(Option<i32>, Dataset)> = if a.by_season {
        d.summary()
            .per_season
            .keys()
            .map(|&s| {
                let spec = FilterSpec {
                    seasons: Some(vec![s]),
                    ..Default::default()
                };
                (Some(s), d.filter(&spec))
            })
            .collect()
    } else {
        vec![(None, d)]
    };

    let mut rows = Vec::new();
    for (season, data) in &groups {
        for &band in &bands {
            match decision_pitch_mix(data, &cls, band) {
                Ok(t) => rows.extend(t.rows.iter().map(|r| MixCsvRow {
                    season: *season,
                    band: band.as_str().to_string(),
                    pitch_type: r.pitch_type.to_string(),
                    count: r.count,
                    total: t.total,
                    frequency: r.frequency,
                })),
                Err(AnalysisError::EmptyCell(b)) => {
                    let when = season.map(|s| format!(" in {s}")).unwrap_or_default();
                    out.manifest.warn(format!(
                        "no 2-2 pitches reach {}{when}; skipped",
                        b.as_str()
                    ));
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    write_csv_rows(
        &out.file("mix.csv"),
        &rows,
        &[
            "season",
            "band",
            "pitch_type",
            "count",
            "total",
            "frequency",
        ],
    )?;
    println!("{} mix rows written to {}", rows.len(), a.out.display());
    out.finish()
}
