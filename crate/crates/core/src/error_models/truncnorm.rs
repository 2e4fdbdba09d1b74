//! Standard normal conditioned on an interval, sampled by inverse CDF.

use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};
use num_traits::Float;
use rand::RngCore;

use crate::error::{input, Result};

/// Below this width the conditioned density is flat to ~1e-12 and we draw uniformly.
const FLAT_WIDTH: f64 = 1e-6;

pub fn norm_pdf(x: f64) -> f64 {
    Float::exp(-0.5 * x * x) / Float::sqrt(2.0 * PI)
}

pub fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// Φ⁻¹ by Acklam's rational approximation plus one Halley step.
pub fn norm_inv_cdf(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00, 3.754408661907416e+00];
    const P_LOW: f64 = 0.02425;

    let x = if p < P_LOW {
        let q = Float::sqrt(-2.0 * Float::ln(p));
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = Float::sqrt(-2.0 * Float::ln(1.0 - p));
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    let e = norm_cdf(x) - p;
    let u = e * Float::sqrt(2.0 * PI) * Float::exp(0.5 * x * x);
    x - u / (1.0 + 0.5 * x * u)
}

/// Uniform draw on the open interval (0, 1).
pub fn open_unit(rng: &mut impl RngCore) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

pub fn standard_normal(rng: &mut impl RngCore) -> f64 {
    norm_inv_cdf(open_unit(rng))
}

/// Standard normal conditioned on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedNormal {
    lo: f64,
    hi: f64,
}

impl TruncatedNormal {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) {
            return input("truncation interval needs lo < hi");
        }
        Ok(TruncatedNormal { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn sample(&self, rng: &mut impl RngCore) -> f64 {
        let u = open_unit(rng);
        if self.hi - self.lo <= FLAT_WIDTH {
            return self.lo + u * (self.hi - self.lo);
        }
        // work in the lower tail where Φ keeps relative precision
        let flip = self.lo > 0.0;
        let (a, b) = if flip { (-self.hi, -self.lo) } else { (self.lo, self.hi) };
        let (pa, pb) = (norm_cdf(a), norm_cdf(b));
        let x = norm_inv_cdf(pa + u * (pb - pa)).max(a).min(b);
        if flip {
            -x
        } else {
            x
        }
    }

    pub fn mean(&self) -> f64 {
        if self.hi - self.lo <= FLAT_WIDTH {
            return 0.5 * (self.lo + self.hi);
        }
        let flip = self.lo > 0.0;
        let (a, b) = if flip { (-self.hi, -self.lo) } else { (self.lo, self.hi) };
        let m = (norm_pdf(a) - norm_pdf(b)) / (norm_cdf(b) - norm_cdf(a));
        if flip {
            -m
        } else {
            m
        }
    }
}

pub fn sample_truncated_gaussian(lo: f64, hi: f64, count: usize, rng: &mut impl RngCore) -> Result<Vec<f64>> {
    let t = TruncatedNormal::new(lo, hi)?;
    Ok((0..count).map(|_| t.sample(rng)).collect())
}
