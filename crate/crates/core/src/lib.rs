//! Strike-zone estimation and gray-zone analysis.
//!
//! The zone is modelled as a logistic field over a superellipse distance:
//! a pitch at `(x, y)` is called a strike with probability
//! `1 / (1 + exp(beta * (d - alpha)))`, where `d` is the superellipse
//! distance from the zone center with exponent `r` and vertical scaling
//! `lambda`. This crate provides
//!
//! * pitch-level data types with CSV ingestion and validation ([`data`]),
//! * the zone model, analytic contours and the rule-book classifier ([`zone`]),
//! * probability grids for heat maps and differencing ([`grid`]),
//! * a Nelder-Mead minimizer ([`optim`]) and the maximum-likelihood fitter
//!   with bootstrap intervals built on it ([`fit`]),
//! * gray-zone band classification and ratio/mix analyses ([`analysis`]),
//! * a seeded synthetic pitch generator used as a verification oracle
//!   ([`synth`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod data;
pub mod fit;
pub mod grid;
mod kernel;
pub mod optim;
pub mod rng;
pub mod synth;
pub mod zone;

pub use analysis::{
    AnalysisError, BandLabel, GroupKey, GroupKeyField, RatioReport, ZoneBand, DEFAULT_BAND_WIDTH,
};
pub use data::{
    BatterHand, CsvSchema, DataError, Dataset, FilterSpec, Outcome, Pitch, PitchType, Summary,
};
pub use fit::{FitConfig, FitError, FitResult, Interval};
pub use grid::{Extent, GridError, ProbabilityGrid};
pub use synth::{LabelMode, LocationDist, SynthConfig, SynthError};
pub use zone::{DerivedMetrics, RulebookZone, ZoneCall, ZoneError, ZoneParams, R_CAP};
