//! Compensated summation primitives.
//!
//! Long sums of same-signed slowly decaying terms, and heavily cancelling
//! sums in the inversion recurrence, both need better than plain f64
//! accumulation. `DdAcc` keeps a double-double running sum built from
//! error-free transformations (TwoSum / Dekker TwoProd), so the final
//! result is accurate to a couple of ulps of the true sum regardless of
//! intermediate cancellation.

/// Knuth's TwoSum: returns (s, e) with s = fl(a + b) and a + b = s + e exactly.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

const SPLIT: f64 = 134217729.0; // 2^27 + 1

/// Dekker split of a double into high and low parts.
#[inline]
fn split(a: f64) -> (f64, f64) {
    let c = SPLIT * a;
    let hi = c - (c - a);
    let lo = a - hi;
    (hi, lo)
}

/// Dekker's TwoProd: returns (p, e) with p = fl(a * b) and a * b = p + e exactly.
#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, e)
}

/// Double-double accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct DdAcc {
    hi: f64,
    lo: f64,
}

impl DdAcc {
    #[inline]
    pub fn new() -> Self {
        DdAcc { hi: 0.0, lo: 0.0 }
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let (s, e) = two_sum(self.hi, x);
        self.hi = s;
        self.lo += e;
    }

    /// Accumulate the product a * b without losing its rounding error.
    #[inline]
    pub fn add_prod(&mut self, a: f64, b: f64) {
        let (p, e) = two_prod(a, b);
        self.add(p);
        self.lo += e;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.hi + self.lo
    }
}

/// Compensated sum of a slice (Kahan–Babuska via DdAcc).
pub fn compensated_sum(xs: &[f64]) -> f64 {
    let mut acc = DdAcc::new();
    for &x in xs {
        acc.add(x);
    }
    acc.value()
}

/// Compensated dot product sum(x[i] * y[i]).
pub fn compensated_dot(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    let mut acc = DdAcc::new();
    for (&a, &b) in x.iter().zip(y) {
        acc.add_prod(a, b);
    }
    acc.value()
}
