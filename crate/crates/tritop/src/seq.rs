//! Sequence representation, generators, and structural classifiers.
//!
//! A lower triangular Toeplitz matrix is fully described by its first
//! column, so the whole artifact works on finite prefixes of scalar
//! sequences. Truncation is exact for triangular structure: the inverse
//! of the leading n x n submatrix is the leading n x n submatrix of the
//! inverse.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite prefix of a real sequence {a_k}, stored from index 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealSeq {
    values: Vec<f64>,
}

impl RealSeq {
    /// Build a sequence from raw values. Rejects empty input and
    /// non-finite entries.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::validation("sequence must have length >= 1"));
        }
        if let Some((k, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite())
        {
            return Err(Error::validation(format!(
                "non-finite value {v} at index {k}"
            )));
        }
        Ok(RealSeq { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // length >= 1 by construction
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// First prefix of length n (exact for triangular structure).
    pub fn prefix(&self, n: usize) -> Result<RealSeq> {
        if n == 0 || n > self.len() {
            return Err(Error::validation(format!(
                "prefix length {n} out of range 1..={}",
                self.len()
            )));
        }
        Ok(RealSeq {
            values: self.values[..n].to_vec(),
        })
    }
}

impl std::ops::Index<usize> for RealSeq {
    type Output = f64;
    fn index(&self, k: usize) -> &f64 {
        &self.values[k]
    }
}

/// How a sequence was produced. Keeping the generator around lets the
/// classifier decide decay class symbolically instead of guessing from
/// a finite prefix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "param")]
pub enum GeneratorKind {
    /// a_k = (1 + k)^(-alpha), alpha >= 0.
    PowerLaw(f64),
    /// Values supplied verbatim.
    Literal,
    /// All entries equal to c.
    Constant(f64),
    /// [1, 1, 0, 0, ...]: fast-decaying symbol whose inverse does not decay.
    JaffardExample,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
}

impl GeneratorSpec {
    pub fn power_law(alpha: f64, n: usize) -> Self {
        GeneratorSpec {
            kind: GeneratorKind::PowerLaw(alpha),
            n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::validation("generator length n must be >= 1"));
        }
        match self.kind {
            GeneratorKind::PowerLaw(alpha) => {
                if !alpha.is_finite() || alpha < 0.0 {
                    return Err(Error::validation(format!(
                        "power-law exponent must satisfy alpha >= 0, got {alpha}"
                    )));
                }
            }
            GeneratorKind::Constant(c) => {
                if !c.is_finite() {
                    return Err(Error::validation("constant generator value must be finite"));
                }
            }
            GeneratorKind::Literal | GeneratorKind::JaffardExample => {}
        }
        Ok(())
    }
}

/// Generate the sequence described by `spec`. Pure: same spec gives
/// bit-identical output.
pub fn generate(spec: &GeneratorSpec) -> Result<RealSeq> {
    spec.validate()?;
    let n = spec.n;
    let values = match spec.kind {
        GeneratorKind::PowerLaw(alpha) => (0..n)
            .map(|k| (1.0 + k as f64).powf(-alpha))
            .collect(),
        GeneratorKind::Constant(c) => vec![c; n],
        GeneratorKind::JaffardExample => {
            let mut v = vec![0.0; n];
            v[0] = 1.0;
            if n > 1 {
                v[1] = 1.0;
            }
            v
        }
        GeneratorKind::Literal => {
            return Err(Error::validation(
                "Literal generator carries no values; construct RealSeq directly",
            ))
        }
    };
    RealSeq::new(values)
}

/// Asymptotic class of a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decay {
    /// sum |a_k| converges.
    Fast,
    /// a_k -> 0 but sum |a_k| diverges.
    Slow,
    /// a_k -> a_* > 0.
    Stagnation,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecaySource {
    Symbolic,
    Empirical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeqClass {
    pub monotone_nonincreasing: bool,
    /// a_0 > a_1 strictly.
    pub strictly_at_1: bool,
    pub log_convex: bool,
    pub decay: Decay,
    pub decay_source: DecaySource,
}

/// Default classification tolerance: 1e-12 * max|a_k|.
pub fn default_class_tol(a: &RealSeq) -> f64 {
    1e-12 * a.values().iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Classify monotonicity, log-convexity and decay.
///
/// With a generator spec present the decay class is decided symbolically
/// (exact). Without one, a finite-prefix tail heuristic is used: it can
/// report Unknown and never claims to decide the limit classes.
pub fn classify(a: &RealSeq, spec: Option<&GeneratorSpec>, tol: f64) -> SeqClass {
    let v = a.values();
    let n = v.len();

    let monotone_nonincreasing = (1..n).all(|k| v[k - 1] >= v[k] - tol);
    let strictly_at_1 = n >= 2 && v[0] > v[1];

    let nonneg = v.iter().all(|&x| x >= -tol);
    let log_convex = nonneg
        && (1..n.saturating_sub(1)).all(|k| v[k] * v[k] <= v[k - 1] * v[k + 1] + tol);

    let (decay, decay_source) = match spec.map(|s| s.kind) {
        Some(GeneratorKind::PowerLaw(alpha)) => {
            let d = if alpha == 0.0 {
                Decay::Stagnation
            } else if alpha > 1.0 {
                Decay::Fast
            } else {
                Decay::Slow
            };
            (d, DecaySource::Symbolic)
        }
        Some(GeneratorKind::Constant(c)) => {
            let d = if c > 0.0 { Decay::Stagnation } else { Decay::Fast };
            (d, DecaySource::Symbolic)
        }
        Some(GeneratorKind::JaffardExample) => (Decay::Fast, DecaySource::Symbolic),
        Some(GeneratorKind::Literal) | None => (empirical_decay(v, tol), DecaySource::Empirical),
    };

    SeqClass {
        monotone_nonincreasing,
        strictly_at_1,
        log_convex,
        decay,
        decay_source,
    }
}

/// Tail heuristic on the last decade of indices. Stagnation if the tail
/// is flat and bounded away from zero; otherwise a log-log slope over the
/// tail decides Slow (rate <= 1) vs Fast (rate > 1); Unknown when the
/// fit is not usable.
fn empirical_decay(v: &[f64], tol: f64) -> Decay {
    let n = v.len();
    if n < 16 {
        return Decay::Unknown;
    }
    let k_lo = n / 10;
    let tail = &v[k_lo..];
    let t_max = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let t_min = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    let t_mean = tail.iter().sum::<f64>() / tail.len() as f64;
    if t_max - t_min < tol && t_mean > tol {
        return Decay::Stagnation;
    }
    match crate::norms::estimate_decay_rate_values(v, Some((k_lo.max(1), n - 1))) {
        Ok(fit) if fit.rms_residual.is_finite() => {
            if fit.rate <= 1.0 {
                Decay::Slow
            } else {
                Decay::Fast
            }
        }
        _ => Decay::Unknown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_law_alpha_zero_is_ones() {
        let s = generate(&GeneratorSpec::power_law(0.0, 4)).unwrap();
        assert_eq!(s.values(), &[1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn power_law_alpha_one() {
        let s = generate(&GeneratorSpec::power_law(1.0, 4)).unwrap();
        let want = [1.0, 0.5, 1.0 / 3.0, 0.25];
        for (a, b) in s.values().iter().zip(&want) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn jaffard_example() {
        let s = generate(&GeneratorSpec {
            kind: GeneratorKind::JaffardExample,
            n: 4,
        })
        .unwrap();
        assert_eq!(s.values(), &[1.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(generate(&GeneratorSpec::power_law(0.5, 0)).is_err());
        assert!(generate(&GeneratorSpec::power_law(-1.0, 4)).is_err());
    }

    #[test]
    fn generate_is_pure() {
        let spec = GeneratorSpec::power_law(0.37, 100);
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
    }

    #[test]
    fn classify_power_law_slow() {
        let spec = GeneratorSpec::power_law(0.5, 100);
        let a = generate(&spec).unwrap();
        let c = classify(&a, Some(&spec), default_class_tol(&a));
        assert!(c.monotone_nonincreasing);
        assert!(c.strictly_at_1);
        assert!(c.log_convex);
        assert_eq!(c.decay, Decay::Slow);
        assert_eq!(c.decay_source, DecaySource::Symbolic);
    }

    #[test]
    fn classify_constant_stagnation() {
        let spec = GeneratorSpec {
            kind: GeneratorKind::Constant(1.0),
            n: 10,
        };
        let a = generate(&spec).unwrap();
        let c = classify(&a, Some(&spec), default_class_tol(&a));
        assert!(c.monotone_nonincreasing);
        assert!(!c.strictly_at_1);
        assert!(c.log_convex);
        assert_eq!(c.decay, Decay::Stagnation);
    }

    #[test]
    fn classify_jaffard_not_log_convex() {
        let spec = GeneratorSpec {
            kind: GeneratorKind::JaffardExample,
            n: 8,
        };
        let a = generate(&spec).unwrap();
        let c = classify(&a, Some(&spec), 1e-12);
        // a_1^2 = 1 > a_0 * a_2 = 0
        assert!(!c.log_convex);
        assert_eq!(c.decay, Decay::Fast);
    }

    #[test]
    fn power_law_monotone_log_convex_every_n() {
        for &alpha in &[0.1, 0.5, 1.0, 1.7] {
            for &n in &[2usize, 3, 17, 256] {
                let spec = GeneratorSpec::power_law(alpha, n);
                let a = generate(&spec).unwrap();
                let c = classify(&a, Some(&spec), default_class_tol(&a));
                assert!(c.monotone_nonincreasing, "alpha={alpha} n={n}");
                assert!(c.log_convex, "alpha={alpha} n={n}");
            }
        }
    }

    #[test]
    fn log_convex_positivity_remark() {
        // log-convex with a_0 > 0, a_1 > 0 implies all entries positive
        let spec = GeneratorSpec::power_law(0.8, 1000);
        let a = generate(&spec).unwrap();
        let c = classify(&a, Some(&spec), default_class_tol(&a));
        assert!(c.log_convex && a[0] > 0.0 && a[1] > 0.0);
        assert!(a.values().iter().all(|&x| x > 0.0));
    }

    #[test]
    fn empirical_stagnation_detected() {
        let a = RealSeq::new(vec![1.0; 200]).unwrap();
        let c = classify(&a, None, 1e-12);
        assert_eq!(c.decay, Decay::Stagnation);
        assert_eq!(c.decay_source, DecaySource::Empirical);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(RealSeq::new(vec![1.0, f64::NAN]).is_err());
        assert!(RealSeq::new(vec![]).is_err());
    }
}
