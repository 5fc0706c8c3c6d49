//! Maximum-likelihood estimation of [`ZoneParams`] from called pitches, with
//! nonparametric bootstrap percentile intervals.
//!
//! Only called pitches (takes) carry information about the umpire's call
//! function, so swings and other outcomes are ignored. The negative
//! log-likelihood is the *sum* over called pitches of `-ln P(strike)` for
//! called strikes and `-ln P(ball)` for called balls.
//!
//! The optimizer works on an unconstrained parametrization:
//!
//! | parameter | coordinate        |
//! |-----------|-------------------|
//! | `x0`      | `x0`              |
//! | `y0`      | `y0`              |
//! | `alpha`   | `ln alpha`        |
//! | `lambda`  | `ln lambda`       |
//! | `beta`    | `ln beta`         |
//! | `r`       | `ln (r - 1)`      |
//!
//! `beta` is clamped at [`FitConfig::beta_cap`] and `r` at [`R_CAP`]; a fit
//! that ends on the `beta` clamp is flagged with `capped_beta`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{Dataset, Outcome};
use crate::kernel;
use crate::optim::{Minimum, NelderMead};
use crate::rng;
use crate::zone::{derived_metrics, DerivedMetrics, ZoneParams, R_CAP};

/// Smallest number of called pitches accepted by [`fit`].
pub const MIN_CALLED: usize = 50;
/// Largest fraction of bootstrap replicates allowed to fail.
pub const MAX_BOOTSTRAP_FAILURE_RATE: f64 = 0.10;

const START_JITTER: f64 = 0.3;
const SIMPLEX_STEPS: [f64; 6] = [0.05, 0.05, 0.1, 0.1, 0.5, 0.5];
const REPLICATE_STEP_SCALE: f64 = 0.2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("dataset contains no called pitches")]
    NoCalledPitches,
    #[error("need at least {min} called pitches, got {got}")]
    TooFewPitches { got: usize, min: usize },
    #[error("all {n} called pitches are {class}; the boundary is not identifiable")]
    PerfectSeparation { n: usize, class: &'static str },
    #[error("{failed} of {total} bootstrap replicates failed")]
    BootstrapFailed { failed: usize, total: usize },
    #[error("invalid fit config: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FitConfig {
    pub n_starts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
    pub n_bootstrap: usize,
    pub beta_cap: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            n_starts: 8,
            max_iters: 5000,
            tol: 1e-8,
            seed: 0,
            n_bootstrap: 200,
            beta_cap: 1e4,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<(), FitError> {
        if self.n_starts == 0 {
            return Err(FitError::InvalidConfig(
                "n_starts must be at least 1".into(),
            ));
        }
        if self.max_iters == 0 {
            return Err(FitError::InvalidConfig("max_iters must be positive".into()));
        }
        if !(self.tol > 0.0) {
            return Err(FitError::InvalidConfig("tol must be positive".into()));
        }
        if !(self.beta_cap > 0.0) || !self.beta_cap.is_finite() {
            return Err(FitError::InvalidConfig(
                "beta_cap must be positive and finite".into(),
            ));
        }
        Ok(())
    }
}

/// Parameters in the optimizer's unconstrained coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformedParams {
    pub x0: f64,
    pub y0: f64,
    pub ln_alpha: f64,
    pub ln_lambda: f64,
    pub ln_beta: f64,
    pub ln_r_minus_1: f64,
}

impl TransformedParams {
    pub fn from_params(p: &ZoneParams) -> Self {
        TransformedParams {
            x0: p.x0,
            y0: p.y0,
            ln_alpha: p.alpha.ln(),
            ln_lambda: p.lambda.ln(),
            ln_beta: p.beta.ln(),
            ln_r_minus_1: (p.r - 1.0).ln(),
        }
    }

    pub fn to_params(&self, beta_cap: f64) -> ZoneParams {
        ZoneParams {
            x0: self.x0,
            y0: self.y0,
            alpha: self.ln_alpha.exp(),
            lambda: self.ln_lambda.exp(),
            beta: self.ln_beta.exp().min(beta_cap),
            r: (1.0 + self.ln_r_minus_1.exp()).min(R_CAP),
        }
    }

    fn as_array(&self) -> [f64; 6] {
        [
            self.x0,
            self.y0,
            self.ln_alpha,
            self.ln_lambda,
            self.ln_beta,
            self.ln_r_minus_1,
        ]
    }

    fn from_slice(v: &[f64]) -> Self {
        TransformedParams {
            x0: v[0],
            y0: v[1],
            ln_alpha: v[2],
            ln_lambda: v[3],
            ln_beta: v[4],
            ln_r_minus_1: v[5],
        }
    }

    /// Pulls coordinates lying beyond the clamps back onto them, so the
    /// reported coordinates describe the parameters actually used.
    fn clamped(mut self, beta_cap: f64) -> Self {
        self.ln_beta = self.ln_beta.min(beta_cap.ln());
        self.ln_r_minus_1 = self.ln_r_minus_1.min((R_CAP - 1.0).ln());
        self
    }
}

/// Called pitches reduced to what the likelihood needs. Weights let a
/// bootstrap resample be represented by multiplicities of the original
/// points.
#[derive(Debug, Clone)]
pub struct CalledSample {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// -1 for a called strike, +1 for a called ball.
    sign: Vec<f64>,
    weights: Option<Vec<f64>>,
}

impl CalledSample {
    pub fn from_dataset(d: &Dataset) -> Self {
        let mut s = CalledSample {
            xs: Vec::new(),
            ys: Vec::new(),
            sign: Vec::new(),
            weights: None,
        };
        for p in d.called() {
            s.xs.push(p.x);
            s.ys.push(p.y);
            s.sign.push(if p.outcome == Outcome::CalledStrike {
                -1.0
            } else {
                1.0
            });
        }
        s
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn n_strikes(&self) -> usize {
        self.sign.iter().filter(|&&s| s < 0.0).count()
    }

    /// Sum of per-pitch negative log-likelihoods.
    pub fn nll(&self, p: &ZoneParams) -> f64 {
        kernel::nll_sum(p, &self.xs, &self.ys, &self.sign, self.weights.as_deref())
    }

    /// Resample with replacement, stored as multiplicities of distinct points.
    fn resample<R: Rng>(&self, rng: &mut R) -> CalledSample {
        let n = self.len();
        let mut counts = vec![0u32; n];
        for _ in 0..n {
            counts[rng.random_range(0..n)] += 1;
        }
        let mut out = CalledSample {
            xs: Vec::new(),
            ys: Vec::new(),
            sign: Vec::new(),
            weights: Some(Vec::new()),
        };
        let base = self.weights.as_deref();
        for (i, &c) in counts.iter().enumerate() {
            if c > 0 {
                out.xs.push(self.xs[i]);
                out.ys.push(self.ys[i]);
                out.sign.push(self.sign[i]);
                let w = base.map_or(1.0, |b| b[i]);
                out.weights.as_mut().unwrap().push(c as f64 * w);
            }
        }
        out
    }

    fn check_fittable(&self) -> Result<(), FitError> {
        let n = self.len();
        if n == 0 {
            return Err(FitError::NoCalledPitches);
        }
        if n < MIN_CALLED {
            return Err(FitError::TooFewPitches {
                got: n,
                min: MIN_CALLED,
            });
        }
        let k = self.n_strikes();
        if k == 0 {
            return Err(FitError::PerfectSeparation {
                n,
                class: "called balls",
            });
        }
        if k == n {
            return Err(FitError::PerfectSeparation {
                n,
                class: "called strikes",
            });
        }
        Ok(())
    }
}

/// Sum over called pitches of the Bernoulli negative log-likelihood.
pub fn negative_log_likelihood(p: &ZoneParams, d: &Dataset) -> Result<f64, FitError> {
    let s = CalledSample::from_dataset(d);
    if s.is_empty() {
        return Err(FitError::NoCalledPitches);
    }
    Ok(s.nll(p))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamIntervals {
    pub x0: Interval,
    pub y0: Interval,
    pub alpha: Interval,
    pub lambda: Interval,
    pub beta: Interval,
    pub r: Interval,
}

impl ParamIntervals {
    pub fn get(&self, name: &str) -> Option<Interval> {
        Some(match name {
            "x0" => self.x0,
            "y0" => self.y0,
            "alpha" => self.alpha,
            "lambda" => self.lambda,
            "beta" => self.beta,
            "r" => self.r,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedIntervals {
    pub width: Interval,
    pub height: Interval,
    pub center_x: Interval,
    pub center_y: Interval,
}

impl DerivedIntervals {
    pub fn get(&self, name: &str) -> Option<Interval> {
        Some(match name {
            "width" => self.width,
            "height" => self.height,
            "center_x" => self.center_x,
            "center_y" => self.center_y,
            _ => return None,
        })
    }
}

/// 95% bootstrap percentile intervals. These are frequentist intervals, not
/// Bayesian credible intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapIntervals {
    pub method: String,
    pub level: f64,
    pub n_replicates: usize,
    pub n_failed: usize,
    pub params: ParamIntervals,
    pub derived: DerivedIntervals,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub params: ZoneParams,
    pub transformed_params: TransformedParams,
    pub nll: f64,
    pub nll_convention: String,
    pub converged: bool,
    pub capped_beta: bool,
    pub n_pitches_used: usize,
    pub intervals: Option<BootstrapIntervals>,
    pub derived: DerivedMetrics,
    pub config_echo: FitConfig,
}

pub const PARAM_NAMES: [&str; 6] = ["x0", "y0", "alpha", "lambda", "beta", "r"];
pub const DERIVED_NAMES: [&str; 4] = ["width", "height", "center_x", "center_y"];

pub fn param_value(p: &ZoneParams, name: &str) -> Option<f64> {
    Some(match name {
        "x0" => p.x0,
        "y0" => p.y0,
        "alpha" => p.alpha,
        "lambda" => p.lambda,
        "beta" => p.beta,
        "r" => p.r,
        _ => return None,
    })
}

pub fn derived_value(m: &DerivedMetrics, name: &str) -> Option<f64> {
    Some(match name {
        "width" => m.width,
        "height" => m.height,
        "center_x" => m.center_x,
        "center_y" => m.center_y,
        _ => return None,
    })
}

impl FitResult {
    /// Rows of `(name, estimate, lo, hi)` for every parameter and derived
    /// metric; bounds are `None` without bootstrap intervals.
    pub fn estimate_rows(&self) -> Vec<(&'static str, f64, Option<Interval>)> {
        let mut rows = Vec::new();
        for name in PARAM_NAMES {
            let iv = self.intervals.as_ref().and_then(|b| b.params.get(name));
            rows.push((name, param_value(&self.params, name).unwrap(), iv));
        }
        for name in DERIVED_NAMES {
            let iv = self.intervals.as_ref().and_then(|b| b.derived.get(name));
            rows.push((name, derived_value(&self.derived, name).unwrap(), iv));
        }
        rows
    }
}

struct PointFit {
    theta: TransformedParams,
    params: ZoneParams,
    nll: f64,
    converged: bool,
}

fn optimizer(cfg: &FitConfig) -> NelderMead {
    NelderMead::new(SIMPLEX_STEPS.to_vec(), cfg.max_iters, cfg.tol)
}

fn minimize_from(sample: &CalledSample, cfg: &FitConfig, start: &[f64]) -> Minimum {
    minimize_with(&optimizer(cfg), sample, cfg, start)
}

/// Replicate optima sit within a few standard errors of the warm start, so
/// the simplex starts smaller and is not rebuilt.
fn replicate_optimizer(cfg: &FitConfig) -> NelderMead {
    let steps = SIMPLEX_STEPS
        .iter()
        .map(|s| s * REPLICATE_STEP_SCALE)
        .collect();
    NelderMead {
        max_restarts: 0,
        ..NelderMead::new(steps, cfg.max_iters, cfg.tol)
    }
}

fn minimize_with(
    opt: &NelderMead,
    sample: &CalledSample,
    cfg: &FitConfig,
    start: &[f64],
) -> Minimum {
    let cap = cfg.beta_cap;
    opt.minimize(
        |v| sample.nll(&TransformedParams::from_slice(v).to_params(cap)),
        start,
    )
}

/// Base start plus `n_starts - 1` jittered copies.
fn starting_points(cfg: &FitConfig) -> Vec<[f64; 6]> {
    let base = TransformedParams::from_params(&ZoneParams::rulebook_start()).as_array();
    let mut jitter = rng::stream(cfg.seed, rng::STREAM_START_JITTER);
    let mut starts = vec![base];
    for _ in 1..cfg.n_starts {
        let mut s = base;
        for v in s.iter_mut() {
            *v += jitter.random_range(-START_JITTER..START_JITTER);
        }
        starts.push(s);
    }
    starts
}

fn best_of(sample: &CalledSample, cfg: &FitConfig, starts: &[[f64; 6]]) -> PointFit {
    let runs: Vec<Minimum> = starts
        .par_iter()
        .map(|s| minimize_from(sample, cfg, s))
        .collect();
    let converged = runs.iter().any(|m| m.converged);
    // first index wins ties so the choice is independent of scheduling
    let best = runs
        .into_iter()
        .reduce(|a, b| if b.f < a.f { b } else { a })
        .expect("at least one start");
    let theta = TransformedParams::from_slice(&best.x).clamped(cfg.beta_cap);
    PointFit {
        params: theta.to_params(cfg.beta_cap),
        theta,
        nll: best.f,
        converged,
    }
}

fn is_capped(params: &ZoneParams, cfg: &FitConfig) -> bool {
    params.beta >= cfg.beta_cap * (1.0 - 1e-12)
}

/// Point estimate without intervals.
pub fn fit_point(d: &Dataset, cfg: &FitConfig) -> Result<FitResult, FitError> {
    cfg.validate()?;
    let sample = CalledSample::from_dataset(d);
    sample.check_fittable()?;
    let pf = best_of(&sample, cfg, &starting_points(cfg));
    Ok(result_from(&pf, &sample, cfg, None))
}

fn result_from(
    pf: &PointFit,
    sample: &CalledSample,
    cfg: &FitConfig,
    intervals: Option<BootstrapIntervals>,
) -> FitResult {
    FitResult {
        params: pf.params,
        transformed_params: pf.theta,
        nll: pf.nll,
        nll_convention: "sum over called pitches".into(),
        converged: pf.converged,
        capped_beta: is_capped(&pf.params, cfg),
        n_pitches_used: sample.len(),
        intervals,
        derived: derived_metrics(&pf.params),
        config_echo: *cfg,
    }
}

/// Multi-start Nelder-Mead fit, followed by bootstrap intervals when
/// `cfg.n_bootstrap > 0`.
pub fn fit(d: &Dataset, cfg: &FitConfig) -> Result<FitResult, FitError> {
    cfg.validate()?;
    let sample = CalledSample::from_dataset(d);
    sample.check_fittable()?;
    let pf = best_of(&sample, cfg, &starting_points(cfg));
    let intervals = bootstrap_around(&sample, &pf, cfg)?;
    Ok(result_from(&pf, &sample, cfg, intervals))
}

/// Bootstrap percentile intervals for the fit of `d`; `None` when
/// `cfg.n_bootstrap == 0`.
pub fn bootstrap_intervals(
    d: &Dataset,
    cfg: &FitConfig,
) -> Result<Option<BootstrapIntervals>, FitError> {
    cfg.validate()?;
    let sample = CalledSample::from_dataset(d);
    sample.check_fittable()?;
    let pf = best_of(&sample, cfg, &starting_points(cfg));
    bootstrap_around(&sample, &pf, cfg)
}

/// Each replicate resamples the called pitches with its own derived seed and
/// refits with a single start at the full-data optimum.
fn bootstrap_around(
    sample: &CalledSample,
    point: &PointFit,
    cfg: &FitConfig,
) -> Result<Option<BootstrapIntervals>, FitError> {
    if cfg.n_bootstrap == 0 {
        return Ok(None);
    }
    let start = point.theta.as_array();
    let opt = replicate_optimizer(cfg);
    let replicates: Vec<Option<ZoneParams>> = (0..cfg.n_bootstrap as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng::stream(rng::derive_seed(cfg.seed, i), rng::STREAM_BOOTSTRAP);
            let resampled = sample.resample(&mut rng);
            let k = resampled.n_strikes();
            if k == 0 || k == resampled.len() {
                return None;
            }
            let m = minimize_with(&opt, &resampled, cfg, &start);
            m.f.is_finite()
                .then(|| TransformedParams::from_slice(&m.x).to_params(cfg.beta_cap))
        })
        .collect();

    let ok: Vec<ZoneParams> = replicates.iter().flatten().copied().collect();
    let failed = cfg.n_bootstrap - ok.len();
    if failed as f64 > MAX_BOOTSTRAP_FAILURE_RATE * cfg.n_bootstrap as f64 {
        return Err(FitError::BootstrapFailed {
            failed,
            total: cfg.n_bootstrap,
        });
    }

    let interval = |values: Vec<f64>, estimate: f64| {
        let (lo, hi) = percentile_interval(values, 0.025, 0.975);
        // percentile intervals can miss a skewed point estimate; widen to
        // keep the estimate inside
        Interval {
            lo: lo.min(estimate),
            hi: hi.max(estimate),
        }
    };
    let by = |f: fn(&ZoneParams) -> f64| interval(ok.iter().map(f).collect(), f(&point.params));
    let by_derived = |f: fn(&DerivedMetrics) -> f64| {
        interval(
            ok.iter().map(|p| f(&derived_metrics(p))).collect(),
            f(&derived_metrics(&point.params)),
        )
    };

    Ok(Some(BootstrapIntervals {
        method: "nonparametric bootstrap percentile".into(),
        level: 0.95,
        n_replicates: ok.len(),
        n_failed: failed,
        params: ParamIntervals {
            x0: by(|p| p.x0),
            y0: by(|p| p.y0),
            alpha: by(|p| p.alpha),
            lambda: by(|p| p.lambda),
            beta: by(|p| p.beta),
            r: by(|p| p.r),
        },
        derived: DerivedIntervals {
            width: by_derived(|m| m.width),
            height: by_derived(|m| m.height),
            center_x: by_derived(|m| m.center_x),
            center_y: by_derived(|m| m.center_y),
        },
    }))
}

/// Linear-interpolation percentiles of `values` at the two probabilities.
pub fn percentile_interval(mut values: Vec<f64>, lo_q: f64, hi_q: f64) -> (f64, f64) {
    values.sort_by(f64::total_cmp);
    let at = |q: f64| {
        let pos = q * (values.len() - 1) as f64;
        let i = pos.floor() as usize;
        let frac = pos - i as f64;
        if i + 1 < values.len() {
            values[i] + frac * (values[i + 1] - values[i])
        } else {
            values[i]
        }
    };
    (at(lo_q), at(hi_q))
}
