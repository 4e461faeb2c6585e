//! Truncated discrete convolution: schoolbook and FFT-backed paths.
//!
//! Both paths compute z_k = sum_{j=0}^{k} x_j y_{k-j}, treating entries
//! past the stored prefix as zero. The schoolbook path accumulates with
//! error-free transformations; the fast path zero-pads to the next power
//! of two and uses a complex FFT (rustfft).

use std::sync::Mutex;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::seq::RealSeq;
use crate::sum::DdAcc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvMethod {
    Schoolbook,
    FastTransform,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConvPlan {
    pub method: ConvMethod,
    /// Auto switches to the fast path when min(len) reaches this.
    pub crossover: usize,
}

impl Default for ConvPlan {
    fn default() -> Self {
        ConvPlan {
            method: ConvMethod::Auto,
            crossover: 64,
        }
    }
}

impl ConvPlan {
    pub fn schoolbook() -> Self {
        ConvPlan {
            method: ConvMethod::Schoolbook,
            ..Default::default()
        }
    }

    pub fn fast() -> Self {
        ConvPlan {
            method: ConvMethod::FastTransform,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.crossover == 0 {
            return Err(Error::validation("crossover must be >= 1"));
        }
        Ok(())
    }
}

// The planner caches twiddle tables across calls; plans themselves are
// deterministic for a fixed size.
static PLANNER: Mutex<Option<FftPlanner<f64>>> = Mutex::new(None);

fn fft_forward(buf: &mut [Complex<f64>], inverse: bool) {
    let mut guard = PLANNER.lock().unwrap();
    let planner = guard.get_or_insert_with(FftPlanner::new);
    let fft = if inverse {
        planner.plan_fft_inverse(buf.len())
    } else {
        planner.plan_fft_forward(buf.len())
    };
    drop(guard);
    fft.process(buf);
}

/// Convolution of raw slices, truncated to m terms.
pub fn conv_values(x: &[f64], y: &[f64], m: usize, plan: &ConvPlan) -> Result<Vec<f64>> {
    plan.validate()?;
    if m == 0 {
        return Err(Error::validation("convolution length m must be >= 1"));
    }
    if x.is_empty() || y.is_empty() {
        return Err(Error::validation("convolution inputs must be nonempty"));
    }
    if m > x.len() + y.len() - 1 {
        return Err(Error::validation(format!(
            "m = {m} exceeds full convolution length {}",
            x.len() + y.len() - 1
        )));
    }
    let use_fast = match plan.method {
        ConvMethod::Schoolbook => false,
        ConvMethod::FastTransform => true,
        ConvMethod::Auto => x.len().min(y.len()) >= plan.crossover,
    };
    Ok(if use_fast {
        conv_fft(x, y, m)
    } else {
        conv_schoolbook(x, y, m)
    })
}

fn conv_schoolbook(x: &[f64], y: &[f64], m: usize) -> Vec<f64> {
    let mut z = Vec::with_capacity(m);
    for k in 0..m {
        let j_lo = k.saturating_sub(y.len() - 1);
        let j_hi = k.min(x.len() - 1);
        let mut acc = DdAcc::new();
        for j in j_lo..=j_hi {
            acc.add_prod(x[j], y[k - j]);
        }
        z.push(acc.value());
    }
    z
}

fn conv_fft(x: &[f64], y: &[f64], m: usize) -> Vec<f64> {
    let full = x.len() + y.len() - 1;
    let len = full.next_power_of_two();
    let mut fx: Vec<Complex<f64>> = Vec::with_capacity(len);
    fx.extend(x.iter().map(|&v| Complex::new(v, 0.0)));
    fx.resize(len, Complex::new(0.0, 0.0));
    let mut fy: Vec<Complex<f64>> = Vec::with_capacity(len);
    fy.extend(y.iter().map(|&v| Complex::new(v, 0.0)));
    fy.resize(len, Complex::new(0.0, 0.0));
    fft_forward(&mut fx, false);
    fft_forward(&mut fy, false);
    let scale = 1.0 / len as f64;
    for (a, b) in fx.iter_mut().zip(&fy) {
        *a = *a * *b * scale;
    }
    fft_forward(&mut fx, true);
    fx[..m].iter().map(|c| c.re).collect()
}

/// z_k = sum_{j<=k} x_j y_{k-j} for 0 <= k < m.
pub fn conv_truncated(x: &RealSeq, y: &RealSeq, m: usize, plan: &ConvPlan) -> Result<RealSeq> {
    RealSeq::new(conv_values(x.values(), y.values(), m, plan)?)
}

/// Full linear convolution, length len(x) + len(y) - 1.
pub fn conv_full(x: &RealSeq, y: &RealSeq, plan: &ConvPlan) -> Result<RealSeq> {
    conv_truncated(x, y, x.len() + y.len() - 1, plan)
}
