//! Shared fixtures for the benchmarks.

use zonefit::fit::CalledSample;
use zonefit::synth::generate;
use zonefit::{Dataset, SynthConfig, ZoneParams};

pub fn truth() -> ZoneParams {
    ZoneParams::new(0.0, 2.5, 0.9, 1.11, 20.0, 8.0).unwrap()
}

/// Probabilistic synthetic pitches with 30% swings, so analyses see every
/// outcome class.
pub fn dataset(n: usize, seed: u64) -> Dataset {
    let mut cfg = SynthConfig::new(truth(), n, seed);
    cfg.metadata.swing_share = 0.3;
    generate(&cfg).unwrap()
}

pub fn called_sample(n: usize, seed: u64) -> CalledSample {
    CalledSample::from_dataset(&generate(&SynthConfig::new(truth(), n, seed)).unwrap())
}
