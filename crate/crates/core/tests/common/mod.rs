#![allow(dead_code)]

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zonefit::{BatterHand, Dataset, Outcome, Pitch, PitchType};

pub const OUTCOMES: [Outcome; 9] = [
    Outcome::CalledStrike,
    Outcome::CalledBall,
    Outcome::SwingingStrike,
    Outcome::Foul,
    Outcome::InPlay,
    Outcome::Bunt,
    Outcome::BuntFoul,
    Outcome::HitByPitch,
    Outcome::Other,
];

pub fn pitch(x: f64, y: f64, outcome: Outcome) -> Pitch {
    Pitch {
        season: 2023,
        game_id: "G1".into(),
        umpire_id: "U1".into(),
        pitcher_id: "P1".into(),
        batter_id: "B1".into(),
        batter_hand: BatterHand::Right,
        pitch_type: PitchType::FourSeam,
        x,
        y,
        balls: 0,
        strikes: 0,
        outcome,
    }
}

pub fn arb_pitch() -> impl Strategy<Value = Pitch> {
    (
        (2020..2026i32, 0..5u32, 0..3u32, 0..4u32, 0..6u32),
        (
            any::<bool>(),
            0..PitchType::ALL.len(),
            -3.0..3.0f64,
            0.0..6.0f64,
        ),
        (0..4u8, 0..3u8, 0..OUTCOMES.len()),
    )
        .prop_map(
            |((season, g, u, p, b), (left, t, x, y), (balls, strikes, o))| Pitch {
                season,
                game_id: format!("G{g}"),
                umpire_id: format!("U{u}"),
                pitcher_id: format!("P{p}"),
                batter_id: format!("B{b}"),
                batter_hand: if left {
                    BatterHand::Left
                } else {
                    BatterHand::Right
                },
                pitch_type: PitchType::ALL[t],
                x,
                y,
                balls,
                strikes,
                outcome: OUTCOMES[o],
            },
        )
}

pub fn arb_dataset(max: usize) -> impl Strategy<Value = Dataset> {
    prop::collection::vec(arb_pitch(), 0..max).prop_map(|p| Dataset::new("prop", p))
}

/// Pitches concentrated around the rule-book edges so that every band is
/// populated, with every outcome, hand, pitch type and a share of 2-2 counts.
pub fn random_dataset(n: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pitches = (0..n)
        .map(|i| {
            let x = rng.random_range(-1.4..1.4);
            let y = rng.random_range(1.0..4.0);
            let two_two = rng.random_bool(0.3);
            Pitch {
                season: 2022 + rng.random_range(0..3),
                game_id: format!("G{}", i / 50),
                umpire_id: format!("U{}", rng.random_range(0..3)),
                pitcher_id: format!("P{}", rng.random_range(0..10)),
                batter_id: format!("B{}", rng.random_range(0..20)),
                batter_hand: if rng.random_bool(0.5) {
                    BatterHand::Left
                } else {
                    BatterHand::Right
                },
                pitch_type: PitchType::ALL[rng.random_range(0..PitchType::ALL.len())],
                // snap some coordinates onto band edges
                x: if rng.random_bool(0.1) {
                    [-1.15, -0.9, -0.65, 0.65, 0.9, 1.15][rng.random_range(0..6)]
                } else {
                    x
                },
                y: if rng.random_bool(0.1) {
                    [1.25, 1.5, 1.75, 3.25, 3.5, 3.75][rng.random_range(0..6)]
                } else {
                    y
                },
                balls: if two_two { 2 } else { rng.random_range(0..4) },
                strikes: if two_two { 2 } else { rng.random_range(0..3) },
                outcome: OUTCOMES[rng.random_range(0..OUTCOMES.len())],
            }
        })
        .collect();
    Dataset::new("random", pitches)
}
