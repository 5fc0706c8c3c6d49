//! The parametric strike-zone model.
//!
//! A pitch at `(x, y)` sits at superellipse distance
//!
//! ```text
//! d = (|x - x0|^r + |(y - y0) / lambda|^r)^(1/r)
//! ```
//!
//! from the zone center, and is called a strike with probability
//! `sigmoid(-beta * (d - alpha))`. Level sets of the probability are
//! superellipses of half-width `d*` and half-height `lambda * d*`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest admissible rectilinearity exponent. Past this the superellipse is
/// numerically a rectangle.
pub const R_CAP: f64 = 64.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZoneError {
    #[error("invalid zone parameters: {0}")]
    InvalidParams(String),
    #[error("probability level {0} must lie strictly between 0 and 1")]
    InvalidLevel(f64),
    #[error("contour needs at least 8 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("contour at level {level} is empty (radius {radius} <= 0)")]
    EmptyContour { level: f64, radius: f64 },
}

/// The six free parameters of the zone model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZoneParams {
    /// Horizontal center (ft).
    pub x0: f64,
    /// Vertical center (ft).
    pub y0: f64,
    /// Half-width (ft).
    pub alpha: f64,
    /// Height-to-width ratio.
    pub lambda: f64,
    /// Boundary steepness (1/ft).
    pub beta: f64,
    /// Rectilinearity exponent.
    pub r: f64,
}

impl ZoneParams {
    pub fn new(
        x0: f64,
        y0: f64,
        alpha: f64,
        lambda: f64,
        beta: f64,
        r: f64,
    ) -> Result<Self, ZoneError> {
        let p = ZoneParams {
            x0,
            y0,
            alpha,
            lambda,
            beta,
            r,
        };
        p.validate()?;
        Ok(p)
    }

    /// The rule-book box expressed in model parameters, with moderate
    /// steepness and an elliptical shape.
    pub fn rulebook_start() -> Self {
        ZoneParams {
            x0: 0.0,
            y0: 2.5,
            alpha: 0.9,
            lambda: 10.0 / 9.0,
            beta: 10.0,
            r: 2.0,
        }
    }

    pub fn validate(&self) -> Result<(), ZoneError> {
        let all = [self.x0, self.y0, self.alpha, self.lambda, self.beta, self.r];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(ZoneError::InvalidParams(
                "all parameters must be finite".into(),
            ));
        }
        if self.alpha <= 0.0 || self.lambda <= 0.0 || self.beta <= 0.0 {
            return Err(ZoneError::InvalidParams(
                "alpha, lambda and beta must be positive".into(),
            ));
        }
        if !(1.0..=R_CAP).contains(&self.r) {
            return Err(ZoneError::InvalidParams(format!(
                "r = {} outside [1, {R_CAP}]",
                self.r
            )));
        }
        Ok(())
    }

    pub fn distance(&self, x: f64, y: f64) -> f64 {
        superellipse_distance(self, x, y)
    }

    pub fn strike_probability(&self, x: f64, y: f64) -> f64 {
        strike_probability(self, x, y)
    }

    pub fn derived(&self) -> DerivedMetrics {
        derived_metrics(self)
    }

    /// Logit of the strike probability, `-beta * (d - alpha)`.
    #[inline]
    pub fn strike_logit(&self, x: f64, y: f64) -> f64 {
        -self.beta * (superellipse_distance(self, x, y) - self.alpha)
    }
}

/// Superellipse distance from the zone center. The larger coordinate is
/// factored out before exponentiation so large `r` cannot overflow.
#[inline]
pub fn superellipse_distance(p: &ZoneParams, x: f64, y: f64) -> f64 {
    let a = (x - p.x0).abs();
    let b = ((y - p.y0) / p.lambda).abs();
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == 0.0 {
        return 0.0;
    }
    if lo == 0.0 {
        return hi;
    }
    let q = (lo / hi).powf(p.r);
    hi * (q.ln_1p() / p.r).exp()
}

/// Numerically stable logistic function.
#[inline]
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + exp(t))` without overflow or loss of precision.
#[inline]
pub fn softplus(t: f64) -> f64 {
    t.max(0.0) + (-t.abs()).exp().ln_1p()
}

pub fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

#[inline]
pub fn strike_probability(p: &ZoneParams, x: f64, y: f64) -> f64 {
    sigmoid(p.strike_logit(x, y))
}

/// Radius of the level set at probability `level`: `alpha - logit(level) / beta`.
pub fn contour_radius(p: &ZoneParams, level: f64) -> f64 {
    p.alpha - logit(level) / p.beta
}

/// An analytic iso-probability curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contour {
    pub level: f64,
    /// Superellipse radius `d*` of the level set (half-width in ft).
    pub radius: f64,
    /// Vertices in counter-clockwise order starting at angle 0; the polyline
    /// closes from the last vertex back to the first.
    pub points: Vec<(f64, f64)>,
}

/// Samples the closed level set `strike_probability = level` at `n` angles
/// uniformly spaced on `[0, 2pi)`.
pub fn contour(p: &ZoneParams, level: f64, n: usize) -> Result<Contour, ZoneError> {
    if !(level > 0.0 && level < 1.0) {
        return Err(ZoneError::InvalidLevel(level));
    }
    if n < 8 {
        return Err(ZoneError::TooFewVertices(n));
    }
    let radius = contour_radius(p, level);
    if radius <= 0.0 || !radius.is_finite() {
        return Err(ZoneError::EmptyContour { level, radius });
    }
    let e = 2.0 / p.r;
    let points = (0..n)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / n as f64;
            let (s, c) = theta.sin_cos();
            (
                p.x0 + radius * c.signum() * c.abs().powf(e),
                p.y0 + p.lambda * radius * s.signum() * s.abs().powf(e),
            )
        })
        .collect();
    Ok(Contour {
        level,
        radius,
        points,
    })
}

/// Fixed rectangular rule-book zone (ft). Defaults already include the
/// ball radius on each side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RulebookZone {
    pub x_half: f64,
    pub y_low: f64,
    pub y_high: f64,
}

impl Default for RulebookZone {
    fn default() -> Self {
        RulebookZone {
            x_half: 0.9,
            y_low: 1.5,
            y_high: 3.5,
        }
    }
}

impl RulebookZone {
    pub fn new(x_half: f64, y_low: f64, y_high: f64) -> Result<Self, ZoneError> {
        if !(x_half > 0.0) || !(y_low < y_high) {
            return Err(ZoneError::InvalidParams(format!(
                "rule-book zone needs x_half > 0 and y_low < y_high, got {x_half}, {y_low}, {y_high}"
            )));
        }
        Ok(RulebookZone {
            x_half,
            y_low,
            y_high,
        })
    }

    /// Open intervals on both axes: a pitch exactly on the edge is a ball.
    pub fn call(&self, x: f64, y: f64) -> ZoneCall {
        rulebook_call(self, x, y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ZoneCall {
    Strike,
    Ball,
}

pub fn rulebook_call(z: &RulebookZone, x: f64, y: f64) -> ZoneCall {
    if x > -z.x_half && x < z.x_half && y > z.y_low && y < z.y_high {
        ZoneCall::Strike
    } else {
        ZoneCall::Ball
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedMetrics {
    /// `2 * alpha`
    pub width: f64,
    /// `2 * alpha * lambda`
    pub height: f64,
    pub center_x: f64,
    pub center_y: f64,
}

pub fn derived_metrics(p: &ZoneParams) -> DerivedMetrics {
    DerivedMetrics {
        width: 2.0 * p.alpha,
        height: 2.0 * p.alpha * p.lambda,
        center_x: p.x0,
        center_y: p.y0,
    }
}
