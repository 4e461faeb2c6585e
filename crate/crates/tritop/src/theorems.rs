//! Executable validators for the numbered claims, with witnesses.
//!
//! Limit statements are checked through a finite-data proxy (strictly
//! decreasing decade maxima, final decade below half the first); the
//! reports label the proxy as such in `params`. A validator whose
//! sequence-class hypotheses fail never reports `passed`; it comes back
//! with `applicable = false` so a green run cannot be vacuous.

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::norms::DecayFit;
use crate::seq::{Decay, RealSeq, SeqClass};
use crate::sum::DdAcc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "Stmt2_Bounds")]
    Stmt2Bounds,
    #[serde(rename = "Thm1_FundamentalDecay")]
    Thm1FundamentalDecay,
    #[serde(rename = "Cor_InverseDecay")]
    CorInverseDecay,
    #[serde(rename = "Thm_DecayRate")]
    ThmDecayRate,
    #[serde(rename = "Thm4_Signs")]
    Thm4Signs,
    #[serde(rename = "ThmFinal_NormTwo")]
    ThmFinalNormTwo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub index: usize,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TheoremReport {
    pub theorem_id: TheoremId,
    pub passed: bool,
    /// false when the hypotheses of the claim are not met by the input;
    /// `passed` is never true in that case.
    pub applicable: bool,
    pub witnesses: Vec<Witness>,
    pub params: Map<String, Value>,
}

impl TheoremReport {
    fn new(theorem_id: TheoremId) -> Self {
        TheoremReport {
            theorem_id,
            passed: false,
            applicable: true,
            witnesses: Vec::new(),
            params: Map::new(),
        }
    }

    fn set(&mut self, key: &str, v: Value) {
        self.params.insert(key.to_string(), v);
    }
}

const MAX_WITNESSES: usize = 10;

/// Stmt2_Bounds: 0 <= u_k <= 1 for u built from a monotone nonincreasing
/// nonnegative symbol.
pub fn check_stmt2(u: &RealSeq, tol: f64) -> TheoremReport {
    let mut rep = TheoremReport::new(TheoremId::Stmt2Bounds);
    let mut violations: Vec<(f64, Witness)> = Vec::new();
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for (k, &v) in u.values().iter().enumerate() {
        min = min.min(v);
        max = max.max(v);
        let excess = (-tol - v).max(v - (1.0 + tol));
        if excess > 0.0 {
            violations.push((excess, Witness { index: k, value: v }));
        }
    }
    violations.sort_by(|a, b| b.0.total_cmp(&a.0));
    rep.passed = violations.is_empty();
    rep.witnesses = violations
        .into_iter()
        .take(MAX_WITNESSES)
        .map(|(_, w)| w)
        .collect();
    rep.set("tol", json!(tol));
    rep.set("min_u", json!(min));
    rep.set("max_u", json!(max));
    rep.set("n", json!(u.len()));
    rep
}

/// Maxima of |s_k| over decades [10^d, 10^(d+1)); only full decades count.
fn decade_maxima(s: &[f64], k_start: usize) -> Vec<(usize, f64)> {
    let mut out = Vec::new();
    let mut lo = 1usize;
    loop {
        let hi = lo * 10;
        if hi > s.len() {
            break;
        }
        let from = lo.max(k_start);
        if from < hi {
            let m = s[from..hi].iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            out.push((lo, m));
        }
        lo = hi;
    }
    out
}

fn decade_proxy(rep: &mut TheoremReport, maxima: &[(usize, f64)]) -> Result<bool> {
    if maxima.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "decade proxy needs >= 3 full decades, got {}",
            maxima.len()
        )));
    }
    let mut ok = true;
    for w in maxima.windows(2) {
        if !(w[1].1 < w[0].1) {
            ok = false;
            rep.witnesses.push(Witness {
                index: w[1].0,
                value: w[1].1,
            });
        }
    }
    let first = maxima[0].1;
    let last = maxima[maxima.len() - 1].1;
    if !(last < 0.5 * first) {
        ok = false;
        rep.witnesses.push(Witness {
            index: maxima[maxima.len() - 1].0,
            value: last,
        });
    }
    rep.witnesses.truncate(MAX_WITNESSES);
    rep.set(
        "decade_maxima",
        json!(maxima.iter().map(|&(k, v)| json!([k, v])).collect::<Vec<_>>()),
    );
    rep.set("proxy", json!("strictly decreasing decade maxima, final < 0.5 * first"));
    Ok(ok)
}

fn slow_monotone_hypotheses(rep: &mut TheoremReport, class: &SeqClass) -> bool {
    let ok = class.monotone_nonincreasing && class.decay == Decay::Slow;
    rep.set("hyp_monotone_nonincreasing", json!(class.monotone_nonincreasing));
    rep.set("hyp_slow_decay", json!(class.decay == Decay::Slow));
    rep.set("hyp_strictly_at_1", json!(class.strictly_at_1));
    if !ok {
        rep.set("not_applicable_reason", json!("monotone slow-decay hypotheses not met"));
    }
    ok
}

/// Thm1_FundamentalDecay proxy: u_k -> 0 under monotone slow decay.
pub fn check_thm1(u: &RealSeq, class: &SeqClass) -> Result<TheoremReport> {
    let mut rep = TheoremReport::new(TheoremId::Thm1FundamentalDecay);
    rep.applicable = slow_monotone_hypotheses(&mut rep, class);
    if !rep.applicable {
        return Ok(rep);
    }
    let maxima = decade_maxima(u.values(), 1);
    rep.passed = decade_proxy(&mut rep, &maxima)?;
    Ok(rep)
}

/// Corollary proxy: b_k -> 0 (over |b_k|, k >= 1) under the same hypotheses.
pub fn check_cor_b_decay(b: &RealSeq, class: &SeqClass) -> Result<TheoremReport> {
    let mut rep = TheoremReport::new(TheoremId::CorInverseDecay);
    rep.applicable = slow_monotone_hypotheses(&mut rep, class);
    if !rep.applicable {
        return Ok(rep);
    }
    let maxima = decade_maxima(b.values(), 1);
    rep.passed = decade_proxy(&mut rep, &maxima)?;
    Ok(rep)
}

/// Decay theorem: fitted rate of u must satisfy rate <= (1 - alpha) + slack.
/// The sharper empirical observation rate ~ 1 - alpha is recorded but does
/// not gate `passed`.
pub fn check_thm_decay_rate(u_fit: &DecayFit, alpha: f64) -> Result<TheoremReport> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::validation("check_thm_decay_rate requires 0 < alpha <= 1"));
    }
    const SLACK: f64 = 0.05;
    let mut rep = TheoremReport::new(TheoremId::ThmDecayRate);
    let bound = 1.0 - alpha;
    rep.passed = u_fit.rate <= bound + SLACK;
    if !rep.passed {
        rep.witnesses.push(Witness {
            index: u_fit.window.1,
            value: u_fit.rate,
        });
    }
    rep.set("alpha", json!(alpha));
    rep.set("fitted_rate", json!(u_fit.rate));
    rep.set("bound", json!(bound));
    rep.set("slack", json!(SLACK));
    rep.set("rms_residual", json!(u_fit.rms_residual));
    // auxiliary observation from the experiment section, not a theorem
    rep.set(
        "sharp_observation_two_sided_ok",
        json!((u_fit.rate - bound).abs() <= SLACK),
    );
    Ok(rep)
}

/// Thm4_Signs: b_k <= 0 for k >= 1 when the symbol is nonnegative log-convex.
pub fn check_thm4(b: &RealSeq, class: &SeqClass, tol: f64) -> TheoremReport {
    let mut rep = TheoremReport::new(TheoremId::Thm4Signs);
    rep.applicable = class.log_convex;
    rep.set("hyp_log_convex", json!(class.log_convex));
    if !class.log_convex {
        rep.set("not_applicable_reason", json!("symbol is not log-convex"));
    }
    let mut violations: Vec<(f64, Witness)> = Vec::new();
    let mut worst = f64::NEG_INFINITY;
    for (k, &v) in b.values().iter().enumerate().skip(1) {
        worst = worst.max(v);
        if v > tol {
            violations.push((v, Witness { index: k, value: v }));
        }
    }
    violations.sort_by(|a, b| b.0.total_cmp(&a.0));
    let signs_ok = violations.is_empty();
    rep.witnesses = violations
        .into_iter()
        .take(MAX_WITNESSES)
        .map(|(_, w)| w)
        .collect();
    rep.set("tol", json!(tol));
    rep.set("max_b_tail", json!(worst));
    rep.passed = signs_ok && rep.applicable;
    rep
}

/// Final theorem: sum |b_k| = 2. Check (i) the algebraic identity
/// S_N = 2 - u_N and (ii) that the remaining gap 2 - S_N is small.
pub fn check_thm_final(
    b: &RealSeq,
    u: &RealSeq,
    class: &SeqClass,
    tol_identity: f64,
    tail_bound: f64,
) -> TheoremReport {
    let mut rep = TheoremReport::new(TheoremId::ThmFinalNormTwo);
    rep.applicable = class.monotone_nonincreasing
        && class.log_convex
        && class.decay == Decay::Slow;
    rep.set("hyp_monotone_nonincreasing", json!(class.monotone_nonincreasing));
    rep.set("hyp_log_convex", json!(class.log_convex));
    rep.set("hyp_slow_decay", json!(class.decay == Decay::Slow));

    let mut acc = DdAcc::new();
    for &x in b.values() {
        acc.add(x.abs());
    }
    let s_n = acc.value();
    let u_n = *u.values().last().unwrap();

    let identity_err = (s_n - (2.0 - u_n)).abs();
    let identity_ok = identity_err <= tol_identity;
    let gap = 2.0 - s_n;
    let tail_ok = gap <= tail_bound;

    rep.set("sum_abs_b", json!(s_n));
    rep.set("u_last", json!(u_n));
    rep.set("identity_error", json!(identity_err));
    rep.set("tol_identity", json!(tol_identity));
    rep.set("tail_gap", json!(gap));
    rep.set("tail_bound", json!(tail_bound));
    rep.set("identity_ok", json!(identity_ok));
    rep.set("tail_ok", json!(tail_ok));
    if !rep.applicable {
        rep.set(
            "not_applicable_reason",
            json!("slow log-convex decay hypotheses not met; tail check skipped"),
        );
    }

    if !identity_ok {
        rep.witnesses.push(Witness {
            index: b.len() - 1,
            value: identity_err,
        });
    }
    if rep.applicable && !tail_ok {
        rep.witnesses.push(Witness {
            index: b.len() - 1,
            value: gap,
        });
    }
    rep.passed = rep.applicable && identity_ok && tail_ok;
    rep
}
