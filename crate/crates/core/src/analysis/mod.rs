//! Gray-zone analyses: band classification, strike and hit-attempt ratios,
//! decision-pitch mixes and per-umpire fits.

mod bands;
mod stats;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bands::{
    classify_band, BandClassifier, BandLabel, BandSet, BandSide, ZoneBand, DEFAULT_BAND_WIDTH,
};
pub use stats::{
    beta_quantile, jeffreys_interval, jeffreys_interval_at, two_proportion_test, ProportionTest,
};

use crate::data::{BatterHand, Dataset, Outcome, Pitch, PitchType};
use crate::fit::{fit, FitConfig, FitError, FitResult, Interval, MIN_CALLED};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("invalid counts k = {k}, n = {n}")]
    InvalidCounts { k: u64, n: u64 },
    #[error("no decision pitches reach band {0}")]
    EmptyCell(ZoneBand),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKeyField {
    Season,
    PitchType,
    Hand,
    Umpire,
}

impl FromStr for GroupKeyField {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "season" => Ok(GroupKeyField::Season),
            "pitch_type" | "type" => Ok(GroupKeyField::PitchType),
            "hand" | "batter_hand" => Ok(GroupKeyField::Hand),
            "umpire" | "umpire_id" => Ok(GroupKeyField::Umpire),
            other => Err(format!("unknown group-by field `{other}`")),
        }
    }
}

/// Values of the grouping fields for one cell; fields not grouped on are
/// `None`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct GroupKey {
    pub season: Option<i32>,
    pub pitch_type: Option<PitchType>,
    pub batter_hand: Option<BatterHand>,
    pub umpire_id: Option<String>,
}

impl GroupKey {
    pub fn of(p: &Pitch, fields: &[GroupKeyField]) -> Self {
        let mut key = GroupKey::default();
        for f in fields {
            match f {
                GroupKeyField::Season => key.season = Some(p.season),
                GroupKeyField::PitchType => key.pitch_type = Some(p.pitch_type),
                GroupKeyField::Hand => key.batter_hand = Some(p.batter_hand),
                GroupKeyField::Umpire => key.umpire_id = Some(p.umpire_id.clone()),
            }
        }
        key
    }

    /// The key with the season removed, for comparing cells across seasons.
    pub fn without_season(&self) -> Self {
        GroupKey {
            season: None,
            ..self.clone()
        }
    }
}

impl fmt::Display for GroupKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(s) = self.season {
            parts.push(format!("season={s}"));
        }
        if let Some(t) = self.pitch_type {
            parts.push(format!("pitch_type={t}"));
        }
        if let Some(h) = self.batter_hand {
            parts.push(format!("hand={h}"));
        }
        if let Some(u) = &self.umpire_id {
            parts.push(format!("umpire={u}"));
        }
        if parts.is_empty() {
            f.write_str("all")
        } else {
            f.write_str(&parts.join(";"))
        }
    }
}

/// Binomial summary of one (band, group) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub band: BandLabel,
    pub group: GroupKey,
    pub n: u64,
    pub k: u64,
    pub ratio: f64,
    /// 95% Jeffreys interval.
    pub interval: Interval,
}

/// Counts `success` among the pitches that pass `include` and fall in
/// `band`, per group cell. Cells with no pitches are omitted.
fn ratio_table(
    d: &Dataset,
    cls: &BandClassifier,
    band: BandLabel,
    group_by: &[GroupKeyField],
    include: impl Fn(&Pitch) -> bool,
    success: impl Fn(&Pitch) -> bool,
) -> Vec<RatioReport> {
    let mut cells: BTreeMap<GroupKey, (u64, u64)> = BTreeMap::new();
    for p in d.iter().filter(|p| include(p)) {
        if band.matches(cls.classify(p.x, p.y, p.batter_hand)) {
            let cell = cells.entry(GroupKey::of(p, group_by)).or_default();
            cell.0 += 1;
            cell.1 += success(p) as u64;
        }
    }
    cells
        .into_iter()
        .map(|(group, (n, k))| RatioReport {
            band,
            group,
            n,
            k,
            ratio: k as f64 / n as f64,
            interval: jeffreys_interval(k, n).expect("n >= 1 and k <= n"),
        })
        .collect()
}

/// Share of called pitches in `band` that were called strikes.
pub fn strike_ratio(
    d: &Dataset,
    cls: &BandClassifier,
    band: impl Into<BandLabel>,
    group_by: &[GroupKeyField],
) -> Vec<RatioReport> {
    ratio_table(
        d,
        cls,
        band.into(),
        group_by,
        |p| p.outcome.is_called(),
        |p| p.outcome == Outcome::CalledStrike,
    )
}

/// Share of all pitches in `band` the batter offered at.
pub fn hit_attempt_ratio(
    d: &Dataset,
    cls: &BandClassifier,
    band: impl Into<BandLabel>,
    group_by: &[GroupKeyField],
) -> Vec<RatioReport> {
    ratio_table(
        d,
        cls,
        band.into(),
        group_by,
        |_| true,
        |p| p.outcome.is_hit_attempt(),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixRow {
    pub pitch_type: PitchType,
    pub count: u64,
    pub frequency: f64,
}

/// Pitch-type frequencies among 2-2 pitches reaching one band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixTable {
    pub band: ZoneBand,
    pub total: u64,
    /// One row per pitch type, in [`PitchType::ALL`] order.
    pub rows: Vec<MixRow>,
}

pub fn decision_pitch_mix(
    d: &Dataset,
    cls: &BandClassifier,
    band: ZoneBand,
) -> Result<MixTable, AnalysisError> {
    let mut counts = [0u64; PitchType::ALL.len()];
    for p in d.iter() {
        if p.balls == 2 && p.strikes == 2 && cls.classify(p.x, p.y, p.batter_hand).contains(band) {
            let i = PitchType::ALL
                .iter()
                .position(|t| *t == p.pitch_type)
                .unwrap();
            counts[i] += 1;
        }
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(AnalysisError::EmptyCell(band));
    }
    Ok(MixTable {
        band,
        total,
        rows: PitchType::ALL
            .iter()
            .zip(counts)
            .map(|(&pitch_type, count)| MixRow {
                pitch_type,
                count,
                frequency: count as f64 / total as f64,
            })
            .collect(),
    })
}

/// Outcome of fitting every (umpire, season) group.
#[derive(Debug, Clone, Default)]
pub struct UmpireFits {
    pub fits: BTreeMap<(String, i32), FitResult>,
    /// Groups below the called-pitch threshold, with their called count.
    pub skipped: Vec<((String, i32), usize)>,
    /// Groups whose fit failed.
    pub errors: BTreeMap<(String, i32), FitError>,
}

/// Fits each (umpire, season) group with at least `min_called` called
/// pitches. A failing group does not abort the others.
pub fn per_umpire_fits(
    d: &Dataset,
    min_called: usize,
    cfg: &FitConfig,
) -> Result<UmpireFits, AnalysisError> {
    if min_called < MIN_CALLED {
        return Err(AnalysisError::InvalidArgument(format!(
            "min_called must be at least {MIN_CALLED}, got {min_called}"
        )));
    }
    let mut groups: BTreeMap<(String, i32), Vec<Pitch>> = BTreeMap::new();
    for p in d.iter() {
        groups
            .entry((p.umpire_id.clone(), p.season))
            .or_default()
            .push(p.clone());
    }
    let mut out = UmpireFits::default();
    let mut eligible = Vec::new();
    for (key, pitches) in groups {
        let called = pitches.iter().filter(|p| p.outcome.is_called()).count();
        if called < min_called {
            out.skipped.push((key, called));
        } else {
            eligible.push((key, pitches));
        }
    }
    let results: Vec<_> = eligible
        .into_par_iter()
        .map(|(key, pitches)| {
            let label = format!("{}-{}", key.0, key.1);
            let r = fit(&Dataset::new(label, pitches), cfg);
            (key, r)
        })
        .collect();
    for (key, r) in results {
        match r {
            Ok(f) => {
                out.fits.insert(key, f);
            }
            Err(e) => {
                out.errors.insert(key, e);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pitch(x: f64, y: f64, outcome: Outcome, pitch_type: PitchType, season: i32) -> Pitch {
        Pitch {
            season,
            game_id: "G".into(),
            umpire_id: "U".into(),
            pitcher_id: "P".into(),
            batter_id: "B".into(),
            batter_hand: BatterHand::Right,
            pitch_type,
            x,
            y,
            balls: 2,
            strikes: 2,
            outcome,
        }
    }

    #[test]
    fn empty_cells_are_omitted() {
        let d = Dataset::new(
            "t",
            vec![pitch(
                0.0,
                2.5,
                Outcome::CalledStrike,
                PitchType::Slider,
                2023,
            )],
        );
        assert!(strike_ratio(&d, &BandClassifier::default(), ZoneBand::Low2, &[]).is_empty());
    }

    #[test]
    fn strike_ratio_counts_called_only() {
        let d = Dataset::new(
            "t",
            vec![
                pitch(0.0, 1.4, Outcome::CalledStrike, PitchType::Slider, 2023),
                pitch(0.0, 1.4, Outcome::CalledBall, PitchType::Slider, 2023),
                pitch(0.0, 1.4, Outcome::CalledBall, PitchType::Slider, 2024),
                pitch(0.0, 1.4, Outcome::Foul, PitchType::Slider, 2024),
            ],
        );
        let rows = strike_ratio(
            &d,
            &BandClassifier::default(),
            ZoneBand::Low2,
            &[GroupKeyField::Season],
        );
        assert_eq!(rows.len(), 2);
        assert_eq!((rows[0].k, rows[0].n), (1, 2));
        assert_eq!((rows[1].k, rows[1].n), (0, 1));
        assert_eq!(rows[1].interval.lo, 0.0);
        let attempts = hit_attempt_ratio(&d, &BandClassifier::default(), ZoneBand::Low2, &[]);
        assert_eq!((attempts[0].k, attempts[0].n), (1, 4));
    }

    #[test]
    fn pooled_band_covers_both_sides() {
        let d = Dataset::new(
            "t",
            vec![
                pitch(0.0, 3.4, Outcome::CalledStrike, PitchType::Slider, 2023),
                pitch(0.0, 3.6, Outcome::CalledBall, PitchType::Slider, 2023),
            ],
        );
        let rows = strike_ratio(
            &d,
            &BandClassifier::default(),
            BandLabel::Pooled(BandSide::High),
            &[],
        );
        assert_eq!((rows[0].k, rows[0].n), (1, 2));
    }

    #[test]
    fn slider_only_mix() {
        let d = Dataset::new(
            "t",
            vec![pitch(0.0, 1.6, Outcome::Foul, PitchType::Slider, 2023); 3],
        );
        let t = decision_pitch_mix(&d, &BandClassifier::default(), ZoneBand::Low1).unwrap();
        assert_eq!(t.total, 3);
        let slider = t
            .rows
            .iter()
            .find(|r| r.pitch_type == PitchType::Slider)
            .unwrap();
        assert_eq!(slider.frequency, 1.0);
        assert!(matches!(
            decision_pitch_mix(&d, &BandClassifier::default(), ZoneBand::High1),
            Err(AnalysisError::EmptyCell(ZoneBand::High1))
        ));
    }

    #[test]
    fn umpire_threshold_is_enforced() {
        assert!(per_umpire_fits(&Dataset::default(), 10, &FitConfig::default()).is_err());
        let d = Dataset::new(
            "t",
            vec![pitch(
                0.0,
                2.5,
                Outcome::CalledStrike,
                PitchType::Slider,
                2023,
            )],
        );
        let r = per_umpire_fits(&d, 50, &FitConfig::default()).unwrap();
        assert!(r.fits.is_empty());
        assert_eq!(r.skipped, vec![(("U".to_string(), 2023), 1)]);
    }
}
