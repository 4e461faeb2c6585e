//! p-norms, empirical decay-rate estimation, and executable checks of the
//! product/Hoelder/convolution inequality chain.
//!
//! Decay rate is measured as a log-log tail slope: finite prefixes cannot
//! decide l^p membership, and for the power-law family the slope and the
//! summability-based rate coincide.

use serde::{Deserialize, Serialize};

use crate::conv::{conv_full, ConvPlan};
use crate::error::{Error, Result};
use crate::seq::RealSeq;
use crate::sum::DdAcc;

/// 1/p with the convention 1/inf = 0.
#[inline]
fn inv(p: f64) -> f64 {
    if p.is_infinite() {
        0.0
    } else {
        1.0 / p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PNormValue {
    /// Exponent; f64::INFINITY denotes the sup norm.
    pub p: f64,
    pub value: f64,
    /// true if the un-rescaled sum would have over- or underflowed.
    pub saturated: bool,
}

/// Norm over positive exponents without the p >= 1 axiom gate; used
/// internally where the generalized Hoelder lemma permits 0 < r < 1.
fn pnorm_raw(values: &[f64], p: f64) -> PNormValue {
    let m = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if p.is_infinite() {
        return PNormValue {
            p,
            value: m,
            saturated: false,
        };
    }
    if m == 0.0 {
        return PNormValue {
            p,
            value: 0.0,
            saturated: false,
        };
    }
    let mut acc = DdAcc::new();
    for &v in values {
        acc.add((v.abs() / m).powf(p));
    }
    let value = m * acc.value().powf(1.0 / p);
    let probe = m.powf(p);
    let saturated = !probe.is_normal();
    PNormValue { p, value, saturated }
}

/// The p-norm (sum |a_k|^p)^(1/p) over the stored prefix, max-rescaled
/// against overflow; p = inf returns max |a_k|.
pub fn pnorm(a: &RealSeq, p: f64) -> Result<PNormValue> {
    if !(p >= 1.0) {
        return Err(Error::validation(format!(
            "p-norm requires p >= 1 (or infinity), got {p}"
        )));
    }
    Ok(pnorm_raw(a.values(), p))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    /// Estimated exponent rho with |s_k| ~ k^(-rho) on the window.
    pub rate: f64,
    pub window: (usize, usize),
    /// RMS residual of the fit in log space; +inf flags an unusable fit.
    pub rms_residual: f64,
    pub samples: usize,
}

pub(crate) fn estimate_decay_rate_values(
    s: &[f64],
    window: Option<(usize, usize)>,
) -> Result<DecayFit> {
    let n = s.len();
    let (k_lo, k_hi) = window.unwrap_or_else(|| ((n as f64).sqrt().ceil() as usize, n - 1));
    let k_lo = k_lo.max(1);
    if k_lo >= k_hi || k_hi >= n {
        return Err(Error::validation(format!(
            "fit window ({k_lo}, {k_hi}) invalid for sequence of length {n}"
        )));
    }
    let want = (k_hi - k_lo + 1).min(512).max(32);
    let ks = crate::inverse::log_samples(k_lo, k_hi, want);

    let mut xs = Vec::with_capacity(ks.len());
    let mut ys = Vec::with_capacity(ks.len());
    let mut excluded = 0usize;
    for &k in &ks {
        let v = s[k].abs();
        if v <= 1e-300 {
            excluded += 1;
        } else {
            xs.push((k as f64).ln());
            ys.push(v.ln());
        }
    }
    if xs.len() < 8 {
        return Err(Error::InsufficientData(format!(
            "only {} usable samples in window ({k_lo}, {k_hi})",
            xs.len()
        )));
    }
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    let icept = my - slope * mx;
    let mut ss = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        let r = y - (slope * x + icept);
        ss += r * r;
    }
    let mut rms = (ss / m).sqrt();
    if excluded * 10 > ks.len() {
        rms = f64::INFINITY;
    }
    Ok(DecayFit {
        rate: -slope,
        window: (k_lo, k_hi),
        rms_residual: rms,
        samples: xs.len(),
    })
}

/// Least-squares log-log slope of |s_k| against k over geometrically
/// spaced samples; default window is (ceil(sqrt(n)), n-1).
pub fn estimate_decay_rate(s: &RealSeq, window: Option<(usize, usize)>) -> Result<DecayFit> {
    estimate_decay_rate_values(s.values(), window)
}

/// Exponent triple for the Hoelder / Young checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolderExponents {
    pub p: f64,
    pub q: f64,
    pub r: f64,
}

impl HolderExponents {
    /// Classical conjugate pair: 1/p + 1/q = 1, r = 1.
    pub fn conjugate(p: f64, q: f64) -> Result<Self> {
        if !(p >= 1.0) || !(q >= 1.0) {
            return Err(Error::validation("Hoelder exponents require p, q >= 1"));
        }
        if (inv(p) + inv(q) - 1.0).abs() > 1e-12 {
            return Err(Error::validation(format!(
                "exponents not conjugate: 1/{p} + 1/{q} != 1"
            )));
        }
        Ok(HolderExponents { p, q, r: 1.0 })
    }

    /// Convolution mode: 1 + 1/r = 1/p + 1/q; r = inf when 1/p + 1/q = 1.
    pub fn convolution(p: f64, q: f64) -> Result<Self> {
        if !(p >= 1.0) || !(q >= 1.0) {
            return Err(Error::validation("Young exponents require p, q >= 1"));
        }
        let s = inv(p) + inv(q) - 1.0;
        if s < -1e-12 {
            return Err(Error::validation(format!(
                "no admissible r: 1/{p} + 1/{q} < 1"
            )));
        }
        let r = if s <= 1e-12 { f64::INFINITY } else { 1.0 / s };
        Ok(HolderExponents { p, q, r })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// xy <= x^p/p + y^q/q for conjugate p, q > 1 and nonnegative x, y.
pub fn young_product_check(x: f64, y: f64, p: f64, q: f64) -> Result<InequalityCheck> {
    if x < 0.0 || y < 0.0 {
        return Err(Error::validation("young_product_check requires x, y >= 0"));
    }
    if !(p > 1.0) || !(q > 1.0) || (1.0 / p + 1.0 / q - 1.0).abs() > 1e-12 {
        return Err(Error::validation(format!(
            "exponent pair ({p}, {q}) is not conjugate"
        )));
    }
    let lhs = x * y;
    let rhs = x.powf(p) / p + y.powf(q) / q;
    let holds = lhs <= rhs + 1e-12 * rhs.max(1.0);
    Ok(InequalityCheck { lhs, rhs, holds })
}

/// ||x y||_1 <= ||x||_p ||y||_q for the elementwise product.
pub fn holder_check(x: &RealSeq, y: &RealSeq, exps: &HolderExponents) -> Result<InequalityCheck> {
    if x.len() != y.len() {
        return Err(Error::validation("holder_check requires equal lengths"));
    }
    if (inv(exps.p) + inv(exps.q) - 1.0).abs() > 1e-12 {
        return Err(Error::validation("holder_check requires conjugate p, q"));
    }
    let prod: Vec<f64> = x.values().iter().zip(y.values()).map(|(a, b)| a * b).collect();
    let lhs = pnorm_raw(&prod, 1.0).value;
    let rhs = pnorm_raw(x.values(), exps.p).value * pnorm_raw(y.values(), exps.q).value;
    let holds = lhs <= rhs * (1.0 + 1e-10);
    Ok(InequalityCheck { lhs, rhs, holds })
}

/// ||x_1 ... x_m||_r <= prod ||x_k||_{p_k} with sum 1/p_k = 1/r.
pub fn generalized_holder_check(
    xs: &[RealSeq],
    ps: &[f64],
    r: f64,
) -> Result<InequalityCheck> {
    if xs.is_empty() || xs.len() != ps.len() {
        return Err(Error::validation(
            "generalized_holder_check requires m >= 1 sequences with matching exponents",
        ));
    }
    let n = xs[0].len();
    if xs.iter().any(|x| x.len() != n) {
        return Err(Error::validation("all sequences must have equal length"));
    }
    if ps.iter().any(|&p| !(p > 0.0)) || !(r > 0.0) {
        return Err(Error::validation("exponents must be positive"));
    }
    let sum_inv: f64 = ps.iter().map(|&p| inv(p)).sum();
    if (sum_inv - inv(r)).abs() > 1e-12 {
        return Err(Error::validation(format!(
            "exponent identity violated: sum 1/p_k = {sum_inv} != 1/r = {}",
            inv(r)
        )));
    }
    let mut prod = vec![1.0f64; n];
    for x in xs {
        for (p, v) in prod.iter_mut().zip(x.values()) {
            *p *= v;
        }
    }
    let lhs = pnorm_raw(&prod, r).value;
    let rhs = xs
        .iter()
        .zip(ps)
        .map(|(x, &p)| pnorm_raw(x.values(), p).value)
        .product::<f64>();
    let holds = lhs <= rhs * (1.0 + 1e-10);
    Ok(InequalityCheck { lhs, rhs, holds })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YoungConvCheck {
    /// Solved from 1 + 1/r = 1/p + 1/q; f64::INFINITY for the sup-norm case.
    pub r: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// ||x * y||_r <= ||x||_p ||y||_q for the truncated convolution.
pub fn young_convolution_check(
    x: &RealSeq,
    y: &RealSeq,
    p: f64,
    q: f64,
) -> Result<YoungConvCheck> {
    let exps = HolderExponents::convolution(p, q)?;
    let z = conv_full(x, y, &ConvPlan::default())?;
    let lhs = pnorm_raw(z.values(), exps.r).value;
    let rhs = pnorm_raw(x.values(), p).value * pnorm_raw(y.values(), q).value;
    let holds = lhs <= rhs * (1.0 + 1e-10);
    Ok(YoungConvCheck {
        r: exps.r,
        lhs,
        rhs,
        holds,
    })
}

/// Partial-norm growth curves demonstrating the divergence mechanism
/// behind the decay theorem: when 1/p + 1/q > 1, the p-partials of a and
/// the q-partials of u cannot both stay bounded.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SlowDecayWitness {
    pub p: f64,
    pub q: f64,
    /// Prefix lengths (decade points).
    pub prefixes: Vec<usize>,
    /// Partial sums of |a_k|^p over each prefix.
    pub a_partials: Vec<f64>,
    /// Partial sums of |u_k|^q over each prefix.
    pub u_partials: Vec<f64>,
    pub a_divergent: bool,
    pub u_divergent: bool,
}

fn partials_at(prefixes: &[usize], s: &[f64], p: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(prefixes.len());
    let mut acc = DdAcc::new();
    let mut idx = 0usize;
    for &n in prefixes {
        while idx < n {
            acc.add(s[idx].abs().powf(p));
            idx += 1;
        }
        out.push(acc.value());
    }
    out
}

/// Decade increments that stop shrinking mark a divergent partial sum.
fn looks_divergent(partials: &[f64]) -> bool {
    if partials.len() < 3 {
        return false;
    }
    let mut incs = Vec::new();
    for w in partials.windows(2) {
        incs.push(w[1] - w[0]);
    }
    let last = incs[incs.len() - 1];
    let prev = incs[incs.len() - 2];
    prev > 0.0 && last >= 0.9 * prev
}

pub fn slow_decay_witness(
    a: &RealSeq,
    u: &RealSeq,
    p: f64,
    q: f64,
) -> Result<SlowDecayWitness> {
    if !(p >= 1.0) || !(q >= 1.0) {
        return Err(Error::validation("slow_decay_witness requires p, q >= 1"));
    }
    if inv(p) + inv(q) <= 1.0 {
        return Err(Error::validation(
            "slow_decay_witness requires 1/p + 1/q > 1",
        ));
    }
    let n = a.len().min(u.len());
    let mut prefixes = Vec::new();
    let mut m = 10usize;
    while m < n {
        prefixes.push(m);
        m *= 10;
    }
    prefixes.push(n);
    let a_partials = partials_at(&prefixes, a.values(), p);
    let u_partials = partials_at(&prefixes, u.values(), q);
    let a_divergent = looks_divergent(&a_partials);
    let u_divergent = looks_divergent(&u_partials);
    Ok(SlowDecayWitness {
        p,
        q,
        prefixes,
        a_partials,
        u_partials,
        a_divergent,
        u_divergent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inverse::{fundamental, invert_newton};
    use crate::seq::{generate, GeneratorSpec};

    fn seq(v: &[f64]) -> RealSeq {
        RealSeq::new(v.to_vec()).unwrap()
    }

    #[test]
    fn pythagorean_pair() {
        let n = pnorm(&seq(&[3.0, 4.0]), 2.0).unwrap();
        assert!((n.value - 5.0).abs() < 1e-14);
    }

    #[test]
    fn sup_norm() {
        let n = pnorm(&seq(&[1.0, -1.0, 1.0, -1.0]), f64::INFINITY).unwrap();
        assert_eq!(n.value, 1.0);
    }

    #[test]
    fn harmonic_partial_sum() {
        // H(10^6), checked against direct compensated summation
        let a = generate(&GeneratorSpec::power_law(1.0, 1_000_000)).unwrap();
        let n = pnorm(&a, 1.0).unwrap();
        let mut acc = DdAcc::new();
        for k in 0..1_000_000usize {
            acc.add(1.0 / (1.0 + k as f64));
        }
        assert!((n.value - acc.value()).abs() <= 1e-9);
        assert!((n.value - 14.392726).abs() < 1e-3);
    }

    #[test]
    fn p_below_one_rejected() {
        assert!(pnorm(&seq(&[1.0]), 0.5).is_err());
    }

    #[test]
    fn norm_monotone_in_p() {
        let a = seq(&[0.3, -0.9, 0.2, 0.7, -0.1]);
        let mut prev = f64::INFINITY;
        for &p in &[1.0, 1.5, 2.0, 3.0, 10.0, f64::INFINITY] {
            let v = pnorm(&a, p).unwrap().value;
            assert!(v <= prev * (1.0 + 1e-12));
            prev = v;
        }
    }

    #[test]
    fn exact_power_law_rate() {
        let n = 100_000;
        for rho in [0.1f64, 0.75, 1.3, 2.0] {
            let s: Vec<f64> = (0..n).map(|k| (1.0 + k as f64).powf(-rho)).collect();
            let fit = estimate_decay_rate(&seq(&s), None).unwrap();
            assert!(
                (fit.rate - rho).abs() <= 0.01,
                "rho={rho} fitted={}",
                fit.rate
            );
            assert!(fit.samples >= 8);
        }
    }

    #[test]
    fn insufficient_data_error() {
        let s = seq(&[0.0; 100]);
        assert!(matches!(
            estimate_decay_rate(&s, Some((1, 99))),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn young_product_cases() {
        let c = young_product_check(1.0, 1.0, 2.0, 2.0).unwrap();
        assert!(c.holds && (c.lhs - 1.0).abs() < 1e-15 && (c.rhs - 1.0).abs() < 1e-15);
        let c = young_product_check(2.0, 3.0, 2.0, 2.0).unwrap();
        assert!(c.holds && (c.lhs - 6.0).abs() < 1e-15 && (c.rhs - 6.5).abs() < 1e-15);
        let c = young_product_check(0.0, 5.0, 3.0, 1.5).unwrap();
        assert!(c.holds && c.lhs == 0.0);
        assert!(young_product_check(1.0, 1.0, 2.0, 3.0).is_err());
    }

    #[test]
    fn holder_cases() {
        let e = HolderExponents::conjugate(2.0, 2.0).unwrap();
        let c = holder_check(&seq(&[1.0, 0.0]), &seq(&[0.0, 1.0]), &e).unwrap();
        assert!(c.holds && c.lhs == 0.0);

        let s = 1.0 / 2.0f64.sqrt();
        let c = holder_check(&seq(&[s, s]), &seq(&[s, s]), &e).unwrap();
        assert!(c.holds);
        assert!((c.lhs - 1.0).abs() < 1e-14 && (c.rhs - 1.0).abs() < 1e-14);

        assert!(holder_check(&seq(&[1.0]), &seq(&[1.0, 2.0]), &e).is_err());
    }

    #[test]
    fn generalized_holder_cases() {
        // m = 1, p1 = r: equality
        let c = generalized_holder_check(&[seq(&[1.0, 2.0, 3.0])], &[2.0], 2.0).unwrap();
        assert!(c.holds && (c.lhs - c.rhs).abs() <= 1e-12 * c.rhs);

        // all-ones, p = (3,3,3), r = 1: both sides equal 2
        let ones = seq(&[1.0, 1.0]);
        let c = generalized_holder_check(
            &[ones.clone(), ones.clone(), ones.clone()],
            &[3.0, 3.0, 3.0],
            1.0,
        )
        .unwrap();
        assert!(c.holds);
        assert!((c.lhs - 2.0).abs() < 1e-12 && (c.rhs - 2.0).abs() < 1e-12);

        assert!(generalized_holder_check(&[ones], &[2.0], 1.0).is_err());
    }

    #[test]
    fn young_convolution_cases() {
        // case A: p = q = r = 1, nonnegative inputs give equality
        let h = seq(&[0.5, 0.5]);
        let c = young_convolution_check(&h, &h, 1.0, 1.0).unwrap();
        assert!(c.holds && (c.r - 1.0).abs() < 1e-12);
        assert!((c.lhs - 1.0).abs() < 1e-14 && (c.rhs - 1.0).abs() < 1e-14);

        // delta convolved with anything: equality at p = 1
        let delta = seq(&[1.0, 0.0, 0.0]);
        let y = seq(&[0.3, -0.6, 0.2]);
        let c = young_convolution_check(&delta, &y, 1.0, 2.0).unwrap();
        assert!(c.holds && (c.lhs - c.rhs).abs() <= 1e-12 * c.rhs);

        // case B: r = inf when 1/p + 1/q = 1
        let c = young_convolution_check(&y, &y, 2.0, 2.0).unwrap();
        assert!(c.holds && c.r.is_infinite());

        // inadmissible exponents
        assert!(young_convolution_check(&y, &y, 2.0, 3.0).is_err());
    }

    #[test]
    fn witness_harmonic_divergence() {
        let n = 100_000;
        let a = generate(&GeneratorSpec::power_law(1.0, n)).unwrap();
        let w = slow_decay_witness(&a, &a, 1.0, 1.0).unwrap();
        assert!(w.a_divergent);
    }

    #[test]
    fn witness_slow_decay_pair() {
        let n = 100_000;
        let a = generate(&GeneratorSpec::power_law(0.25, n)).unwrap();
        let inv = invert_newton(&a, n, 1e-6).unwrap();
        let f = fundamental(&a, &inv.b).unwrap();
        // q = 1.2 < 1/(1 - alpha): u-partials unbounded
        let w = slow_decay_witness(&a, &f.u, 2.0, 1.2).unwrap();
        assert!(w.u_divergent);
        assert!(w.a_divergent || w.u_divergent);
    }

    #[test]
    fn witness_precondition() {
        let a = seq(&[1.0, 0.5]);
        assert!(slow_decay_witness(&a, &a, 2.0, 2.0).is_err());
    }
}
