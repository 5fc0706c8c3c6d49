//! Summed negative log-likelihood over structure-of-arrays pitch data.
//!
//! The fitter spends nearly all of its time here. The loop is written
//! branch-free with polynomial `exp`/`ln` so that the compiler can vectorize
//! it; on x86-64 AVX-512 or AVX2 copies of the same code are selected at
//! runtime. All copies perform the same IEEE operations in the same order
//! (no FMA contraction), so the result does not depend on which one runs.

use crate::zone::ZoneParams;

const LOG2E: f64 = std::f64::consts::LOG2_E;
#[allow(clippy::excessive_precision)]
const LN2_HI: f64 = 6.931_471_803_691_238_164_90e-1;
#[allow(clippy::excessive_precision)]
const LN2_LO: f64 = 1.908_214_929_270_587_700_02e-10;
/// 1.5 * 2^52: adding it rounds to an integer held in the low mantissa bits.
const SHIFTER: f64 = 6_755_399_441_055_744.0;
/// Inputs to `fast_ln` are kept normal.
const TINY: f64 = 1e-300;
const LANES: usize = 8;

/// `exp(x)` for x in [-708, 709], relative error about 2e-16.
#[inline(always)]
pub(crate) fn fast_exp(x: f64) -> f64 {
    #[allow(clippy::manual_clamp)]
    let x = x.max(-708.0).min(709.0);
    let t = x * LOG2E + SHIFTER;
    let k = t - SHIFTER;
    let r = (x - k * LN2_HI) - k * LN2_LO;
    // Taylor series on |r| <= ln2 / 2
    let mut p = 1.0 / 6_227_020_800.0;
    p = p * r + 1.0 / 479_001_600.0;
    p = p * r + 1.0 / 39_916_800.0;
    p = p * r + 1.0 / 3_628_800.0;
    p = p * r + 1.0 / 362_880.0;
    p = p * r + 1.0 / 40_320.0;
    p = p * r + 1.0 / 5_040.0;
    p = p * r + 1.0 / 720.0;
    p = p * r + 1.0 / 120.0;
    p = p * r + 1.0 / 24.0;
    p = p * r + 1.0 / 6.0;
    p = p * r + 0.5;
    p = p * r + 1.0;
    p = p * r + 1.0;
    let scale = f64::from_bits((t.to_bits() & 0xFFFF_FFFF).wrapping_add(1023) << 52);
    p * scale
}

/// `ln(x)` for positive normal x, relative error about 2e-16.
#[inline(always)]
pub(crate) fn fast_ln(x: f64) -> f64 {
    let bits = x.to_bits();
    // split x = 2^e * m with m in [sqrt(1/2), sqrt(2))
    let e = (bits.wrapping_sub(0x3fe6_a09e_667f_3bcd) as i64) >> 52;
    let m = f64::from_bits(bits.wrapping_sub((e as u64) << 52));
    let ef = f64::from_bits(0x4338_0000_0000_0000u64.wrapping_add(e as u64)) - SHIFTER;
    // ln m = 2 atanh(s)
    let s = (m - 1.0) / (m + 1.0);
    let s2 = s * s;
    let mut p = 1.0 / 21.0;
    p = p * s2 + 1.0 / 19.0;
    p = p * s2 + 1.0 / 17.0;
    p = p * s2 + 1.0 / 15.0;
    p = p * s2 + 1.0 / 13.0;
    p = p * s2 + 1.0 / 11.0;
    p = p * s2 + 1.0 / 9.0;
    p = p * s2 + 1.0 / 7.0;
    p = p * s2 + 1.0 / 5.0;
    p = p * s2 + 1.0 / 3.0;
    p = p * s2 + 1.0;
    ef * LN2_HI + (2.0 * s * p + ef * LN2_LO)
}

/// `ln(1 + t)` for t >= 0, keeping the bits of `t` lost when forming `1 + t`.
#[inline(always)]
pub(crate) fn fast_ln_1p(t: f64) -> f64 {
    let m = 1.0 + t;
    let lost = t - (m - 1.0);
    fast_ln(m) + lost / m
}

#[derive(Clone, Copy)]
struct Coeffs {
    x0: f64,
    y0: f64,
    inv_lambda: f64,
    alpha: f64,
    beta: f64,
    r: f64,
    inv_r: f64,
}

impl Coeffs {
    #[inline(always)]
    fn term(&self, x: f64, y: f64, sign: f64) -> f64 {
        let u = (x - self.x0).abs();
        let v = ((y - self.y0) * self.inv_lambda).abs();
        let hi = u.max(v).max(TINY);
        let lo = u.min(v).max(TINY);
        // (lo/hi)^r, then hi * (1 + q)^(1/r)
        let q = fast_exp(self.r * fast_ln(lo / hi));
        let d = hi * fast_exp(fast_ln_1p(q) * self.inv_r);
        // the label enters as a sign on the strike logit -beta * (d - alpha):
        // a strike costs softplus(-logit), a ball softplus(logit)
        let z = sign * self.beta * (self.alpha - d);
        z.max(0.0) + fast_ln_1p(fast_exp(-z.abs()))
    }
}

#[inline(always)]
fn sum_terms<const WEIGHTED: bool>(
    c: Coeffs,
    xs: &[f64],
    ys: &[f64],
    sign: &[f64],
    w: &[f64],
) -> f64 {
    let n = xs.len();
    let (ys, sign) = (&ys[..n], &sign[..n]);
    // unit weights are never read
    let w = if WEIGHTED { &w[..n] } else { ys };
    let mut acc = [0.0f64; LANES];
    let chunks = xs
        .chunks_exact(LANES)
        .zip(ys.chunks_exact(LANES))
        .zip(sign.chunks_exact(LANES))
        .zip(w.chunks_exact(LANES));
    for (((x, y), s), wt) in chunks {
        for l in 0..LANES {
            let t = c.term(x[l], y[l], s[l]);
            acc[l] += if WEIGHTED { wt[l] * t } else { t };
        }
    }
    let mut tail = 0.0;
    for i in n / LANES * LANES..n {
        let t = c.term(xs[i], ys[i], sign[i]);
        tail += if WEIGHTED { w[i] * t } else { t };
    }
    acc.iter().sum::<f64>() + tail
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2")]
unsafe fn sum_terms_avx2<const WEIGHTED: bool>(
    c: Coeffs,
    xs: &[f64],
    ys: &[f64],
    sign: &[f64],
    w: &[f64],
) -> f64 {
    sum_terms::<WEIGHTED>(c, xs, ys, sign, w)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx512f")]
unsafe fn sum_terms_avx512<const WEIGHTED: bool>(
    c: Coeffs,
    xs: &[f64],
    ys: &[f64],
    sign: &[f64],
    w: &[f64],
) -> f64 {
    sum_terms::<WEIGHTED>(c, xs, ys, sign, w)
}

fn dispatch<const WEIGHTED: bool>(
    c: Coeffs,
    xs: &[f64],
    ys: &[f64],
    sign: &[f64],
    w: &[f64],
) -> f64 {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("avx512f") {
            // SAFETY: the CPU supports the enabled feature
            return unsafe { sum_terms_avx512::<WEIGHTED>(c, xs, ys, sign, w) };
        }
        if std::arch::is_x86_feature_detected!("avx2") {
            // SAFETY: the CPU supports the enabled feature
            return unsafe { sum_terms_avx2::<WEIGHTED>(c, xs, ys, sign, w) };
        }
    }
    sum_terms::<WEIGHTED>(c, xs, ys, sign, w)
}

/// `sum_i w_i * softplus(sign_i * beta * (alpha - d_i))`, with unit weights
/// when `weights` is `None`. `sign` is -1 for a called strike and +1 for a
/// called ball.
pub(crate) fn nll_sum(
    p: &ZoneParams,
    xs: &[f64],
    ys: &[f64],
    sign: &[f64],
    weights: Option<&[f64]>,
) -> f64 {
    let c = Coeffs {
        x0: p.x0,
        y0: p.y0,
        inv_lambda: 1.0 / p.lambda,
        alpha: p.alpha,
        beta: p.beta,
        r: p.r,
        inv_r: 1.0 / p.r,
    };
    match weights {
        None => dispatch::<false>(c, xs, ys, sign, &[]),
        Some(w) => dispatch::<true>(c, xs, ys, sign, w),
    }
}
