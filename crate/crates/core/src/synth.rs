//! Synthetic pitch generator.
//!
//! Locations, call labels, swing decisions and metadata each draw from their
//! own random stream (see [`crate::rng`]), so for a fixed seed the locations
//! do not change when the metadata configuration does.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{BatterHand, Dataset, Outcome, Pitch, PitchType, MAX_ABS_X, MAX_Y};
use crate::rng;
use crate::zone::{RulebookZone, ZoneCall, ZoneParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SynthError {
    #[error("invalid synth config: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LocationDist {
    Uniform {
        x_min: f64,
        x_max: f64,
        y_min: f64,
        y_max: f64,
    },
    /// Truncated to the physical sanity window by rejection.
    Gaussian {
        mean_x: f64,
        mean_y: f64,
        sd_x: f64,
        sd_y: f64,
    },
}

impl Default for LocationDist {
    fn default() -> Self {
        LocationDist::Uniform {
            x_min: -2.0,
            x_max: 2.0,
            y_min: 0.5,
            y_max: 4.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelMode {
    /// Called strike with the model probability.
    #[default]
    Probabilistic,
    /// Called strike exactly when the rule-book box says so.
    #[serde(alias = "rulebook_deterministic")]
    Rulebook,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthMetadata {
    pub season: i32,
    pub umpire_id: String,
    /// Pitch-type weights; must sum to 1.
    pub pitch_type_mix: Vec<(PitchType, f64)>,
    /// Share of right-handed batters.
    pub right_hand_share: f64,
    /// Share of pitches the batter offers at; the rest are called.
    pub swing_share: f64,
    pub pitches_per_game: usize,
    pub n_pitchers: usize,
    pub n_batters: usize,
}

impl Default for SynthMetadata {
    fn default() -> Self {
        SynthMetadata {
            season: 2023,
            umpire_id: "U01".into(),
            pitch_type_mix: vec![
                (PitchType::FourSeam, 0.40),
                (PitchType::Slider, 0.20),
                (PitchType::ChangeUp, 0.10),
                (PitchType::Curveball, 0.10),
                (PitchType::Forkball, 0.10),
                (PitchType::TwoSeam, 0.10),
            ],
            right_hand_share: 0.6,
            swing_share: 0.0,
            pitches_per_game: 150,
            n_pitchers: 20,
            n_batters: 60,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub true_params: ZoneParams,
    pub n: usize,
    #[serde(default)]
    pub location: LocationDist,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub label_mode: LabelMode,
    #[serde(default)]
    pub metadata: SynthMetadata,
    #[serde(default)]
    pub rulebook: RulebookZone,
}

impl SynthConfig {
    pub fn new(true_params: ZoneParams, n: usize, seed: u64) -> Self {
        SynthConfig {
            true_params,
            n,
            location: LocationDist::default(),
            seed,
            label_mode: LabelMode::Probabilistic,
            metadata: SynthMetadata::default(),
            rulebook: RulebookZone::default(),
        }
    }

    pub fn rulebook(n: usize, seed: u64) -> Self {
        SynthConfig {
            label_mode: LabelMode::Rulebook,
            ..SynthConfig::new(ZoneParams::rulebook_start(), n, seed)
        }
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: String| Err(SynthError::InvalidConfig(m));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        if let Err(e) = self.true_params.validate() {
            return bad(e.to_string());
        }
        match self.location {
            LocationDist::Uniform {
                x_min,
                x_max,
                y_min,
                y_max,
            } => {
                if !(x_min < x_max && y_min < y_max) {
                    return bad("uniform extent is degenerate".into());
                }
                if x_min < -MAX_ABS_X || x_max > MAX_ABS_X || y_min < 0.0 || y_max > MAX_Y {
                    return bad("uniform extent leaves the physical window".into());
                }
            }
            LocationDist::Gaussian {
                mean_x,
                mean_y,
                sd_x,
                sd_y,
            } => {
                if !(sd_x > 0.0 && sd_y > 0.0) || !sd_x.is_finite() || !sd_y.is_finite() {
                    return bad("gaussian standard deviations must be positive".into());
                }
                if mean_x.abs() > MAX_ABS_X || !(0.0..=MAX_Y).contains(&mean_y) {
                    return bad("gaussian mean lies outside the physical window".into());
                }
            }
        }
        let m = &self.metadata;
        if m.pitch_type_mix.is_empty() || m.pitch_type_mix.iter().any(|(_, w)| !(*w >= 0.0)) {
            return bad("pitch_type_mix needs non-negative weights".into());
        }
        let total: f64 = m.pitch_type_mix.iter().map(|(_, w)| w).sum();
        if (total - 1.0).abs() > 1e-9 {
            return bad(format!("pitch_type_mix sums to {total}, not 1"));
        }
        for (name, share) in [
            ("right_hand_share", m.right_hand_share),
            ("swing_share", m.swing_share),
        ] {
            if !(0.0..=1.0).contains(&share) {
                return bad(format!("{name} = {share} outside [0, 1]"));
            }
        }
        if m.pitches_per_game == 0 || m.n_pitchers == 0 || m.n_batters == 0 {
            return bad("pitches_per_game, n_pitchers and n_batters must be positive".into());
        }
        if m.season < crate::data::MIN_SEASON {
            return bad(format!("season {} is too early", m.season));
        }
        Ok(())
    }
}

const SWING_OUTCOMES: [(Outcome, f64); 5] = [
    (Outcome::SwingingStrike, 0.30),
    (Outcome::Foul, 0.35),
    (Outcome::InPlay, 0.30),
    (Outcome::Bunt, 0.03),
    (Outcome::BuntFoul, 0.02),
];

fn pick<T: Copy, R: Rng>(rng: &mut R, weighted: &[(T, f64)]) -> T {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for &(v, w) in weighted {
        acc += w;
        if u < acc {
            return v;
        }
    }
    weighted[weighted.len() - 1].0
}

pub fn generate(cfg: &SynthConfig) -> Result<Dataset, SynthError> {
    cfg.validate()?;
    let mut loc = rng::stream(cfg.seed, rng::STREAM_LOCATION);
    let mut label = rng::stream(cfg.seed, rng::STREAM_LABEL);
    let mut swing = rng::stream(cfg.seed, rng::STREAM_SWING);
    let mut meta = rng::stream(cfg.seed, rng::STREAM_METADATA);
    let m = &cfg.metadata;

    let gaussian = match cfg.location {
        LocationDist::Gaussian {
            mean_x,
            mean_y,
            sd_x,
            sd_y,
        } => Some((
            Normal::new(mean_x, sd_x).expect("validated"),
            Normal::new(mean_y, sd_y).expect("validated"),
        )),
        LocationDist::Uniform { .. } => None,
    };

    let mut pitches = Vec::with_capacity(cfg.n);
    for i in 0..cfg.n {
        let (x, y) = match (cfg.location, &gaussian) {
            (
                LocationDist::Uniform {
                    x_min,
                    x_max,
                    y_min,
                    y_max,
                },
                _,
            ) => (
                loc.random_range(x_min..x_max),
                loc.random_range(y_min..y_max),
            ),
            (_, Some((nx, ny))) => loop {
                let (x, y) = (nx.sample(&mut loc), ny.sample(&mut loc));
                if x.abs() <= MAX_ABS_X && (0.0..=MAX_Y).contains(&y) {
                    break (x, y);
                }
            },
            _ => unreachable!(),
        };

        let u: f64 = label.random();
        let strike = match cfg.label_mode {
            LabelMode::Probabilistic => u < cfg.true_params.strike_probability(x, y),
            LabelMode::Rulebook => cfg.rulebook.call(x, y) == ZoneCall::Strike,
        };
        let call = if strike {
            Outcome::CalledStrike
        } else {
            Outcome::CalledBall
        };

        let swung = swing.random::<f64>() < m.swing_share;
        let swing_outcome = pick(&mut swing, &SWING_OUTCOMES);
        let outcome = if swung { swing_outcome } else { call };

        let pitch_type = pick(&mut meta, &m.pitch_type_mix);
        let batter_hand = if meta.random::<f64>() < m.right_hand_share {
            BatterHand::Right
        } else {
            BatterHand::Left
        };
        let balls = meta.random_range(0..4u8);
        let strikes = meta.random_range(0..3u8);
        let pitcher = meta.random_range(0..m.n_pitchers);
        let batter = meta.random_range(0..m.n_batters);

        pitches.push(Pitch {
            season: m.season,
            game_id: format!("{}-G{:05}", m.season, i / m.pitches_per_game),
            umpire_id: m.umpire_id.clone(),
            pitcher_id: format!("P{pitcher:03}"),
            batter_id: format!("B{batter:03}"),
            batter_hand,
            pitch_type,
            x,
            y,
            balls,
            strikes,
            outcome,
        });
    }
    Ok(Dataset::new(
        format!("synthetic-{}-seed{}", m.season, cfg.seed),
        pitches,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zone::contour_radius;

    fn truth() -> ZoneParams {
        ZoneParams::new(0.0, 2.5, 0.9, 1.11, 20.0, 8.0).unwrap()
    }

    #[test]
    fn same_seed_same_dataset() {
        let a = generate(&SynthConfig::new(truth(), 500, 3)).unwrap();
        let b = generate(&SynthConfig::new(truth(), 500, 3)).unwrap();
        assert_eq!(a, b);
        let c = generate(&SynthConfig::new(truth(), 500, 4)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn metadata_changes_do_not_move_locations() {
        let a = generate(&SynthConfig::new(truth(), 300, 9)).unwrap();
        let mut cfg = SynthConfig::new(truth(), 300, 9);
        cfg.metadata.pitch_type_mix = vec![(PitchType::Slider, 1.0)];
        cfg.metadata.right_hand_share = 0.1;
        cfg.metadata.swing_share = 0.5;
        let b = generate(&cfg).unwrap();
        for (p, q) in a.iter().zip(b.iter()) {
            assert_eq!((p.x, p.y), (q.x, q.y));
        }
        assert!(b.iter().all(|p| p.pitch_type == PitchType::Slider));
    }

    #[test]
    fn rulebook_mode_matches_rulebook_call() {
        let cfg = SynthConfig::rulebook(2000, 5);
        let d = generate(&cfg).unwrap();
        for p in d.iter() {
            let expect = match cfg.rulebook.call(p.x, p.y) {
                ZoneCall::Strike => Outcome::CalledStrike,
                ZoneCall::Ball => Outcome::CalledBall,
            };
            assert_eq!(p.outcome, expect);
        }
    }

    #[test]
    fn boundary_locations_are_coin_flips() {
        // Every pitch sits at d = alpha on the horizontal axis.
        let p = ZoneParams {
            beta: 1e4,
            ..truth()
        };
        let mut cfg = SynthConfig::new(p, 10_000, 11);
        cfg.location = LocationDist::Uniform {
            x_min: p.x0 + p.alpha,
            x_max: p.x0 + p.alpha + 1e-15,
            y_min: p.y0,
            y_max: p.y0 + 1e-15,
        };
        let d = generate(&cfg).unwrap();
        let k = d
            .iter()
            .filter(|q| q.outcome == Outcome::CalledStrike)
            .count() as f64;
        let n = d.row_count() as f64;
        let sigma = (0.25 / n).sqrt();
        assert!((k / n - 0.5).abs() < 3.0 * sigma, "{}", k / n);
    }

    #[test]
    fn strike_rate_higher_inside_half_contour() {
        for (seed, p) in [
            (1, truth()),
            (2, ZoneParams::new(0.2, 2.3, 0.7, 1.5, 3.0, 2.0).unwrap()),
            (3, ZoneParams::new(-0.1, 2.7, 1.1, 0.9, 60.0, 30.0).unwrap()),
        ] {
            let d = generate(&SynthConfig::new(p, 10_000, seed)).unwrap();
            let r = contour_radius(&p, 0.5);
            let (mut ki, mut ni, mut ko, mut no) = (0.0, 0.0, 0.0, 0.0);
            for q in d.iter() {
                let s = (q.outcome == Outcome::CalledStrike) as u8 as f64;
                if p.distance(q.x, q.y) < r {
                    ki += s;
                    ni += 1.0;
                } else {
                    ko += s;
                    no += 1.0;
                }
            }
            assert!(ki / ni > ko / no);
        }
    }

    #[test]
    fn cell_frequencies_converge_to_model() {
        // a coarse 4x4 lattice of small cells; each cell gets its own sample
        let p = ZoneParams::new(0.0, 2.5, 0.9, 1.11, 4.0, 3.0).unwrap();
        let half = 0.02;
        let mut seed = 100;
        for cx in [-1.5, -0.5, 0.5, 1.5] {
            for cy in [1.0, 2.0, 3.0, 4.0] {
                seed += 1;
                let mut cfg = SynthConfig::new(p, 4000, seed);
                cfg.location = LocationDist::Uniform {
                    x_min: cx - half,
                    x_max: cx + half,
                    y_min: cy - half,
                    y_max: cy + half,
                };
                let d = generate(&cfg).unwrap();
                let k = d
                    .iter()
                    .filter(|q| q.outcome == Outcome::CalledStrike)
                    .count() as f64;
                let n = d.row_count() as f64;
                let expect = p.strike_probability(cx, cy);
                let sigma = (expect * (1.0 - expect) / n).sqrt().max(0.5 / n);
                assert!(
                    (k / n - expect).abs() <= 3.0 * sigma,
                    "cell ({cx}, {cy}): {} vs {expect}",
                    k / n
                );
            }
        }
    }

    #[test]
    fn invalid_configs_rejected() {
        let mut cfg = SynthConfig::new(truth(), 0, 1);
        assert!(generate(&cfg).is_err());
        cfg.n = 10;
        cfg.metadata.pitch_type_mix = vec![(PitchType::Slider, 0.5)];
        assert!(generate(&cfg).is_err());
        let mut cfg = SynthConfig::new(truth(), 10, 1);
        cfg.location = LocationDist::Gaussian {
            mean_x: 0.0,
            mean_y: 2.5,
            sd_x: 0.0,
            sd_y: 1.0,
        };
        assert!(generate(&cfg).is_err());
    }

    #[test]
    fn gaussian_locations_stay_in_window() {
        let mut cfg = SynthConfig::new(truth(), 5000, 8);
        cfg.location = LocationDist::Gaussian {
            mean_x: 0.0,
            mean_y: 2.5,
            sd_x: 3.0,
            sd_y: 3.0,
        };
        let d = generate(&cfg).unwrap();
        assert!(d.iter().all(|p| p.check().is_ok()));
    }
}
