//! Closed-form exponents and bounds: ensemble distance-distribution
//! exponent, measurement counts, rate bounds and the Bernoulli rate function.
//!
//! Everything is computed in natural logarithms unless a base is requested.

use crate::error::{Error, Result};
use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{LN_2, SQRT_2};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogBase {
    Natural,
    Two,
}

/// Shannon entropy of a Bernoulli(`theta`) variable, `0` at the endpoints
/// and NaN outside `[0, 1]`.
pub fn binary_entropy(theta: f64, base: LogBase) -> f64 {
    if !(0.0..=1.0).contains(&theta) {
        return f64::NAN;
    }
    let term = |p: f64| if p > 0.0 { -p * libm::log(p) } else { 0.0 };
    let h = term(theta) + term(1.0 - theta);
    match base {
        LogBase::Natural => h,
        LogBase::Two => h / LN_2,
    }
}

/// Growth exponent `b_theta = H(theta) + (1 - R) ln((1 + (1 - 2 theta)^w_r) / 2)`
/// of the average weight distribution of the row-regular ensemble.
pub fn ensemble_exponent(theta: f64, rate: f64, w_r: u32) -> Result<f64> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Domain(format!("theta = {theta} outside (0, 1)")));
    }
    if !(rate > 0.0 && rate < 1.0) {
        return Err(Error::Domain(format!("rate = {rate} outside (0, 1)")));
    }
    let arg = (1.0 + libm::pow(1.0 - 2.0 * theta, f64::from(w_r))) / 2.0;
    if arg <= 0.0 {
        return Err(Error::Domain(format!(
            "log argument {arg} not positive at theta = {theta}, w_r = {w_r}"
        )));
    }
    Ok(binary_entropy(theta, LogBase::Natural) + (1.0 - rate) * libm::log(arg))
}

/// `b_theta` sampled on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentCurve {
    pub theta: Vec<f64>,
    pub b: Vec<f64>,
    /// `1 - R`.
    pub alpha: f64,
    pub w_r: u32,
}

/// Default grid for exponent sweeps.
pub const THETA_STEP: f64 = 1e-3;
pub const THETA_MARGIN: f64 = 1e-6;

/// Samples `b_theta` on `margin, margin + step, ...` up to `1 - margin`.
/// Points where the exponent is undefined are skipped.
pub fn exponent_curve(rate: f64, w_r: u32, step: f64, margin: f64) -> Result<ExponentCurve> {
    if !(step > 0.0) || !(0.0..0.5).contains(&margin) {
        return Err(Error::InvalidParameter(format!(
            "grid step {step} / margin {margin} invalid"
        )));
    }
    let mut theta = Vec::new();
    let mut b = Vec::new();
    let n = libm::floor((1.0 - 2.0 * margin) / step) as usize;
    for i in 0..=n {
        let t = margin + i as f64 * step;
        if t >= 1.0 - margin + 1e-15 {
            break;
        }
        if let Ok(v) = ensemble_exponent(t, rate, w_r) {
            theta.push(t);
            b.push(v);
        }
    }
    Ok(ExponentCurve {
        theta,
        b,
        alpha: 1.0 - rate,
        w_r,
    })
}

/// `ceil((8/3) ln 2 K^2 log2 N)`.
pub fn measurement_bound(k: u64, n_cols: u64) -> Result<u64> {
    if k == 0 || n_cols < 2 {
        return Err(Error::Domain(format!("need k >= 1, N >= 2 (k = {k}, N = {n_cols})")));
    }
    let kk = k as f64;
    let v = 8.0 / 3.0 * LN_2 * kk * kk * libm::log2(n_cols as f64);
    Ok(libm::ceil(v) as u64)
}

/// Divisor of the entropy term in the binary-RIP rate bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum EntropyScale {
    /// `1 - (1 - sqrt2/K) log2(K-1)/log2 K - H2(sqrt2/K)/K`.
    #[default]
    OverK,
    /// Same with the entropy term divided by `log2 K` instead of `K`.
    OverLog2K,
}

/// Largest rate compatible with binary RIP constant `< sqrt2 - 1` on
/// `K`-sparse binary vectors.
pub fn prop3_rate_bound(k: u64, variant: EntropyScale) -> Result<f64> {
    let kk = k as f64;
    let g = SQRT_2 / kk;
    if !(g < 1.0) {
        return Err(Error::Domain(format!("sqrt(2)/K = {g} >= 1 for K = {k}")));
    }
    let lk = libm::log2(kk);
    let h = binary_entropy(g, LogBase::Two);
    let last = match variant {
        EntropyScale::OverK => h / kk,
        EntropyScale::OverLog2K => h / lk,
    };
    Ok(1.0 - (1.0 - g) * libm::log2(kk - 1.0) / lk - last)
}

/// Cramer rate function of a `+-1` product variable, with its quadratic
/// approximation and the optimizing tilt.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateFunction {
    pub exact: f64,
    pub quadratic: f64,
    pub theta_star: f64,
}

/// `I(x) = x theta* - ln cosh theta*` with `theta* = atanh x`.
pub fn rate_function(x: f64) -> Result<RateFunction> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Domain(format!("x = {x} outside [0, 1)")));
    }
    let theta_star = 0.5 * libm::log((1.0 + x) / (1.0 - x));
    Ok(RateFunction {
        exact: x * theta_star - libm::log(libm::cosh(theta_star)),
        quadratic: 0.5 * x * x,
        theta_star,
    })
}

fn ln_pairs(n_cols: u64) -> f64 {
    let n = n_cols as f64;
    libm::log(n) + libm::log(n - 1.0) - LN_2
}

/// `ln( C(N,2) exp(-2 m I(1/(2K))) )`, the pre-asymptotic union bound on
/// the probability that a Bernoulli matrix has coherence above `1/(2K)`.
pub fn bernoulli_union_bound(m: u64, n_cols: u64, k: u64) -> Result<f64> {
    check_union_args(m, n_cols, k)?;
    let i = rate_function(1.0 / (2.0 * k as f64))?.exact;
    Ok(ln_pairs(n_cols) - 2.0 * m as f64 * i)
}

/// The same union bound with the two-sided Chernoff tail
/// `P(|S/m| > x) <= 2 exp(-m I(x))` for each pair.
pub fn bernoulli_union_bound_chernoff(m: u64, n_cols: u64, k: u64) -> Result<f64> {
    check_union_args(m, n_cols, k)?;
    let i = rate_function(1.0 / (2.0 * k as f64))?.exact;
    Ok(ln_pairs(n_cols) + LN_2 - m as f64 * i)
}

fn check_union_args(m: u64, n_cols: u64, k: u64) -> Result<()> {
    if m == 0 || n_cols < 2 || k == 0 {
        return Err(Error::Domain(format!(
            "need m >= 1, N >= 2, k >= 1 (m = {m}, N = {n_cols}, k = {k})"
        )));
    }
    Ok(())
}
