//! Inversion of the triangular Toeplitz symbol and the convolution
//! identities tying a, b, u, and d together.
//!
//! Two routes are provided and kept independent so each can check the
//! other: the O(n^2) recurrence
//!
//!   b_0 = 1/a_0,   b_k = -(1/a_0) sum_{j=0}^{k-1} a_{k-j} b_j
//!
//! and an O(n log n) power-series reciprocal by Newton doubling,
//!   b^(2m) = b^(m) (2e - a b^(m))  truncated to 2m terms.
//!
//! The recurrence accumulates with error-free transformations, which
//! keeps its error *relative* to each b_k instead of absolute: rounding
//! injected at step j propagates into b_k scaled by b_{k-j}, so tail
//! entries far below 1 stay accurate to a few ulps. For moderate n the
//! Newton route gets a final residual-polish pass with the same
//! accumulation so the two routes agree to near machine-relative
//! precision.

use serde::{Deserialize, Serialize};

use crate::conv::{conv_values, ConvPlan};
use crate::error::{Error, Result};
use crate::seq::RealSeq;
use crate::sum::DdAcc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InverseMethod {
    NaiveRecurrence,
    NewtonDC,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InverseResult {
    pub b: RealSeq,
    pub method: InverseMethod,
    /// max_k |sum_{j<=k} a_j u_{k-j} - 1| over sampled k.
    pub au_residual: f64,
    /// true if the input was rescaled to a_0 = 1 internally.
    pub normalized: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FundamentalResult {
    /// u_k = sum_{j<=k} b_j.
    pub u: RealSeq,
    /// d_k = a_{k-1} - a_k, stored from index 1 (d[i] holds d_{i+1}).
    pub d: Vec<f64>,
}

/// Largest n for which invert_newton runs the O(n^2) residual-polish pass.
pub const NEWTON_REFINE_LIMIT: usize = 1 << 14;

/// Default newton tolerance: 1e-9 * sqrt(n).
pub fn default_newton_tol(n: usize) -> f64 {
    1e-9 * (n as f64).sqrt()
}

/// Number of residual sample points used when reporting au_residual.
const AU_SAMPLES: usize = 64;

fn check_invertible(a: &RealSeq) -> Result<()> {
    if a[0] == 0.0 {
        return Err(Error::Singular);
    }
    Ok(())
}

/// Log-spaced sample indices in [lo, hi], endpoints always included.
pub(crate) fn log_samples(lo: usize, hi: usize, max_count: usize) -> Vec<usize> {
    assert!(lo <= hi && max_count >= 2);
    if hi - lo + 1 <= max_count {
        return (lo..=hi).collect();
    }
    let mut ks = Vec::with_capacity(max_count);
    let llo = (lo.max(1) as f64).ln();
    let lhi = (hi as f64).ln();
    for i in 0..max_count {
        let t = i as f64 / (max_count - 1) as f64;
        let k = (llo + t * (lhi - llo)).exp().round() as usize;
        ks.push(k.clamp(lo, hi));
    }
    ks[0] = lo;
    *ks.last_mut().unwrap() = hi;
    ks.dedup();
    ks
}

/// Compensated dot sum_{j=0}^{k} x_j y_{k-j}.
fn conv_coeff(x: &[f64], y: &[f64], k: usize) -> f64 {
    let j_lo = (k + 1).saturating_sub(y.len());
    let j_hi = k.min(x.len() - 1);
    let mut acc = DdAcc::new();
    for j in j_lo..=j_hi {
        acc.add_prod(x[j], y[k - j]);
    }
    acc.value()
}

fn sampled_au_residual(a: &[f64], u: &[f64]) -> f64 {
    let n = u.len().min(a.len());
    let mut worst = 0.0f64;
    for k in log_samples(0, n - 1, AU_SAMPLES) {
        worst = worst.max((conv_coeff(a, u, k) - 1.0).abs());
    }
    worst
}

fn prefix_sums(b: &[f64]) -> Vec<f64> {
    let mut u = Vec::with_capacity(b.len());
    let mut acc = DdAcc::new();
    for &x in b {
        acc.add(x);
        u.push(acc.value());
    }
    u
}

/// Inverse symbol via the recurrence, evaluated left to right.
pub fn invert_naive(a: &RealSeq, n: usize) -> Result<InverseResult> {
    check_invertible(a)?;
    if n == 0 {
        return Err(Error::validation("n must be >= 1"));
    }
    if n > a.len() {
        return Err(Error::validation(format!(
            "n = {n} exceeds available sequence length {}",
            a.len()
        )));
    }
    let a0 = a[0];
    let normalized = a0 != 1.0;
    let av: Vec<f64> = if normalized {
        a.values()[..n].iter().map(|x| x / a0).collect()
    } else {
        a.values()[..n].to_vec()
    };
    let mut b = vec![0.0f64; n];
    b[0] = 1.0;
    for k in 1..n {
        let mut acc = DdAcc::new();
        for j in 0..k {
            acc.add_prod(av[k - j], b[j]);
        }
        b[k] = -acc.value();
    }
    if normalized {
        for x in &mut b {
            *x /= a0;
        }
    }
    let u = prefix_sums(&b);
    let au_residual = sampled_au_residual(a.values(), &u);
    Ok(InverseResult {
        b: RealSeq::new(b)?,
        method: InverseMethod::NaiveRecurrence,
        au_residual,
        normalized,
    })
}

/// Inverse symbol via Newton doubling on the power series.
/// Entries of `a` past its stored length are treated as zero.
pub fn invert_newton(a: &RealSeq, n: usize, tol: f64) -> Result<InverseResult> {
    check_invertible(a)?;
    if n == 0 {
        return Err(Error::validation("n must be >= 1"));
    }
    if !(tol > 0.0) {
        return Err(Error::validation("tol must be > 0"));
    }
    let a0 = a[0];
    let normalized = a0 != 1.0;
    let avail = a.len().min(n);
    let av: Vec<f64> = if normalized {
        a.values()[..avail].iter().map(|x| x / a0).collect()
    } else {
        a.values()[..avail].to_vec()
    };
    let plan = ConvPlan::default();

    let target = n.next_power_of_two();
    let mut b = vec![1.0f64];
    let mut m = 1usize;
    while m < target {
        let m2 = 2 * m;
        let ah = &av[..av.len().min(m2)];
        // t = (a * b) mod x^2m
        let mut t = conv_values(ah, &b, m2.min(ah.len() + b.len() - 1), &plan)?;
        t.resize(m2, 0.0);
        // s = 2e - t
        for x in &mut t {
            *x = -*x;
        }
        t[0] += 2.0;
        let mut bn = conv_values(&b, &t, m2.min(b.len() + t.len() - 1), &plan)?;
        bn.resize(m2, 0.0);
        b = bn;
        m = m2;
    }
    b.truncate(n);

    if n > 1 && n <= NEWTON_REFINE_LIMIT {
        // One residual correction with compensated coefficients:
        // r = e - a b (exact products), b <- b + b r.
        let r: Vec<f64> = (0..n)
            .map(|k| {
                let target = if k == 0 { 1.0 } else { 0.0 };
                target - conv_coeff(&av, &b, k)
            })
            .collect();
        let delta = conv_values(&b, &r, n, &plan)?;
        for (x, d) in b.iter_mut().zip(&delta) {
            *x += d;
        }
    }

    // Convergence gate: max-abs of (a b - e) over all n coefficients.
    let residual = if n == 1 {
        (av[0] * b[0] - 1.0).abs()
    } else {
        let z = conv_values(&av, &b, n, &ConvPlan::fast())?;
        z.iter()
            .enumerate()
            .map(|(k, &v)| if k == 0 { (v - 1.0).abs() } else { v.abs() })
            .fold(0.0f64, f64::max)
    };
    if residual > tol {
        return Err(Error::Convergence { residual, tol });
    }

    if normalized {
        for x in &mut b {
            *x /= a0;
        }
    }
    let u = prefix_sums(&b);
    let au_residual = sampled_au_residual(a.values(), &u);
    Ok(InverseResult {
        b: RealSeq::new(b)?,
        method: InverseMethod::NewtonDC,
        au_residual,
        normalized,
    })
}

/// Fundamental matrix u (prefix sums of b) and difference sequence d.
pub fn fundamental(a: &RealSeq, b: &RealSeq) -> Result<FundamentalResult> {
    if b.len() > a.len() {
        return Err(Error::validation("len(b) must be <= len(a)"));
    }
    let u = prefix_sums(b.values());
    let av = a.values();
    let d: Vec<f64> = (1..a.len()).map(|k| av[k - 1] - av[k]).collect();
    Ok(FundamentalResult {
        u: RealSeq::new(u)?,
        d,
    })
}

/// max over sampled k >= 1 of |sum_{j<=k} a_j b_{k-j}| (the a*b = e identity).
pub fn residual_ab(a: &RealSeq, b: &RealSeq, samples: usize) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::validation("residual_ab requires len(a) = len(b)"));
    }
    if samples == 0 {
        return Err(Error::validation("samples must be >= 1"));
    }
    if a.len() < 2 {
        return Ok(0.0);
    }
    let mut worst = 0.0f64;
    for k in log_samples(1, a.len() - 1, samples.max(2)) {
        worst = worst.max(conv_coeff(a.values(), b.values(), k).abs());
    }
    Ok(worst)
}

/// max over sampled k >= 0 of |sum_{j<=k} a_j u_{k-j} - 1| (the a*u = 1 identity).
pub fn residual_au(a: &RealSeq, u: &RealSeq, samples: usize) -> Result<f64> {
    if a.len() != u.len() {
        return Err(Error::validation("residual_au requires len(a) = len(u)"));
    }
    if samples == 0 {
        return Err(Error::validation("samples must be >= 1"));
    }
    let mut worst = 0.0f64;
    for k in log_samples(0, a.len() - 1, samples.max(2)) {
        worst = worst.max((conv_coeff(a.values(), u.values(), k) - 1.0).abs());
    }
    Ok(worst)
}

/// Exhaustive a*u = 1 deviation over every k, via one fast convolution.
pub fn exhaustive_residual_au(a: &RealSeq, u: &RealSeq) -> Result<f64> {
    if a.len() != u.len() {
        return Err(Error::validation("residual_au requires len(a) = len(u)"));
    }
    let n = a.len();
    let z = conv_values(a.values(), u.values(), n, &ConvPlan::fast())?;
    Ok(z.iter().map(|&v| (v - 1.0).abs()).fold(0.0f64, f64::max))
}

/// max over sampled k >= 1 of |u_k - sum_{j=1}^{k} u_{k-j} d_j| (the renewal identity on u).
/// `d` is indexed from 1: d[i] holds d_{i+1}.
pub fn verify_uu(u: &RealSeq, d: &[f64], samples: usize) -> Result<f64> {
    if d.len() + 1 < u.len() {
        return Err(Error::validation("verify_uu requires len(d) >= len(u) - 1"));
    }
    if samples == 0 {
        return Err(Error::validation("samples must be >= 1"));
    }
    if u.len() < 2 {
        return Ok(0.0);
    }
    let uv = u.values();
    let mut worst = 0.0f64;
    for k in log_samples(1, u.len() - 1, samples.max(2)) {
        let mut acc = DdAcc::new();
        for j in 1..=k {
            acc.add_prod(uv[k - j], d[j - 1]);
        }
        worst = worst.max((uv[k] - acc.value()).abs());
    }
    Ok(worst)
}
