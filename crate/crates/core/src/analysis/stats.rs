//! Binomial interval and two-sample test used by the ratio analyses.

use serde::{Deserialize, Serialize};
use statrs::function::beta::{beta_reg, ln_beta};
use statrs::function::erf::erfc;

use super::AnalysisError;
use crate::fit::Interval;

/// Central 95% interval of the Jeffreys posterior Beta(k + 1/2, n - k + 1/2),
/// with the lower bound pinned to 0 when `k = 0` and the upper bound pinned
/// to 1 when `k = n`.
pub fn jeffreys_interval(k: u64, n: u64) -> Result<Interval, AnalysisError> {
    jeffreys_interval_at(k, n, 0.95)
}

pub fn jeffreys_interval_at(k: u64, n: u64, level: f64) -> Result<Interval, AnalysisError> {
    if n == 0 || k > n {
        return Err(AnalysisError::InvalidCounts { k, n });
    }
    let a = k as f64 + 0.5;
    let b = (n - k) as f64 + 0.5;
    let tail = (1.0 - level) / 2.0;
    let lo = if k == 0 {
        0.0
    } else {
        beta_quantile(a, b, tail)
    };
    let hi = if k == n {
        1.0
    } else {
        beta_quantile(a, b, 1.0 - tail)
    };
    Ok(Interval { lo, hi })
}

/// Inverse of the regularized incomplete beta function by safeguarded
/// Newton iteration: Newton steps are taken while they stay inside the
/// current bracket, bisection otherwise.
pub fn beta_quantile(a: f64, b: f64, p: f64) -> f64 {
    if p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return 1.0;
    }
    let ln_norm = ln_beta(a, b);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut x = a / (a + b);
    for _ in 0..200 {
        let f = beta_reg(a, b, x) - p;
        if f == 0.0 {
            return x;
        }
        if f < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let density = ((a - 1.0) * x.ln() + (b - 1.0) * (1.0 - x).ln() - ln_norm).exp();
        let newton = x - f / density;
        let next = if density.is_finite() && density > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 1e-16 * x.max(1e-300) || hi - lo <= f64::EPSILON * hi {
            return next;
        }
        x = next;
    }
    x
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProportionTest {
    pub z: f64,
    /// Two-sided p-value.
    pub p_value: f64,
    /// The pooled proportion was 0 or 1; `z = 0` and `p = 1` by convention.
    pub degenerate: bool,
}

/// Pooled two-proportion z-test of `k1/n1` against `k2/n2`.
pub fn two_proportion_test(
    k1: u64,
    n1: u64,
    k2: u64,
    n2: u64,
) -> Result<ProportionTest, AnalysisError> {
    if n1 == 0 || n2 == 0 || k1 > n1 || k2 > n2 {
        return Err(AnalysisError::InvalidCounts {
            k: if n1 == 0 || k1 > n1 { k1 } else { k2 },
            n: if n1 == 0 || k1 > n1 { n1 } else { n2 },
        });
    }
    let (n1f, n2f) = (n1 as f64, n2 as f64);
    let pooled = (k1 + k2) as f64 / (n1f + n2f);
    if pooled <= 0.0 || pooled >= 1.0 {
        return Ok(ProportionTest {
            z: 0.0,
            p_value: 1.0,
            degenerate: true,
        });
    }
    let se = (pooled * (1.0 - pooled) * (1.0 / n1f + 1.0 / n2f)).sqrt();
    let z = (k1 as f64 / n1f - k2 as f64 / n2f) / se;
    let p_value = erfc(z.abs() / std::f64::consts::SQRT_2).min(1.0);
    Ok(ProportionTest {
        z,
        p_value,
        degenerate: false,
    })
}
