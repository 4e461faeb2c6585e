//! Randomized algebraic invariants of the convolution, norm, and
//! inversion layers.

use proptest::collection::vec;
use proptest::prelude::*;

use tritop::{
    conv_full, conv_truncated, invert_naive, pnorm, ConvPlan, RealSeq,
};

fn seq(max_len: usize) -> impl Strategy<Value = RealSeq> {
    vec(-1.0f64..1.0, 1..=max_len).prop_map(|v| RealSeq::new(v).unwrap())
}

/// Symbol with a_0 bounded away from zero, so inversion is well conditioned.
fn symbol(max_len: usize) -> impl Strategy<Value = RealSeq> {
    (0.5f64..2.0, vec(-0.4f64..0.4, 0..max_len)).prop_map(|(head, tail)| {
        let mut v = vec![head];
        v.extend(tail);
        RealSeq::new(v).unwrap()
    })
}

fn linf(x: &RealSeq) -> f64 {
    pnorm(x, f64::INFINITY).unwrap().value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn conv_commutes(x in seq(128), y in seq(128)) {
        let plan = ConvPlan::default();
        let xy = conv_full(&x, &y, &plan).unwrap();
        let yx = conv_full(&y, &x, &plan).unwrap();
        let scale = linf(&x) * linf(&y) * (x.len() + y.len()) as f64;
        for (a, b) in xy.values().iter().zip(yx.values()) {
            prop_assert!((a - b).abs() <= 1e-12 * scale.max(1.0));
        }
    }

    #[test]
    fn conv_methods_agree(x in seq(256), y in seq(256)) {
        let fast = conv_full(&x, &y, &ConvPlan::fast()).unwrap();
        let slow = conv_full(&x, &y, &ConvPlan::schoolbook()).unwrap();
        let scale = pnorm(&x, 2.0).unwrap().value * pnorm(&y, 2.0).unwrap().value;
        for (a, b) in fast.values().iter().zip(slow.values()) {
            prop_assert!((a - b).abs() <= 1e-10 * scale.max(1.0));
        }
    }

    #[test]
    fn conv_truncation_is_prefix(x in seq(64), y in seq(64), m in 1usize..32) {
        let plan = ConvPlan::default();
        let full = conv_full(&x, &y, &plan).unwrap();
        let m = m.min(x.len() + y.len() - 1);
        let trunc = conv_truncated(&x, &y, m, &plan).unwrap();
        for k in 0..m {
            prop_assert_eq!(trunc[k].to_bits(), full[k].to_bits());
        }
    }

    #[test]
    fn conv_is_linear(x in seq(48), y in seq(48), z in seq(48), c in -4.0f64..4.0) {
        // conv(x, c*y + z) = c*conv(x, y) + conv(x, z), padding shorter inputs
        let plan = ConvPlan::schoolbook();
        let len = y.len().max(z.len());
        let get = |s: &RealSeq, k: usize| if k < s.len() { s[k] } else { 0.0 };
        let combo = RealSeq::new(
            (0..len).map(|k| c * get(&y, k) + get(&z, k)).collect(),
        ).unwrap();
        let lhs = conv_truncated(&x, &combo, x.len(), &plan).unwrap();
        let xy = conv_truncated(&x, &y, x.len(), &plan).unwrap();
        let xz = conv_truncated(&x, &z, x.len(), &plan).unwrap();
        let scale = linf(&x) * (linf(&y).max(linf(&z))) * (c.abs() + 1.0) * len as f64;
        for k in 0..x.len() {
            prop_assert!((lhs[k] - (c * xy[k] + xz[k])).abs() <= 1e-12 * scale.max(1.0));
        }
    }

    #[test]
    fn norms_decrease_in_p(x in seq(128)) {
        let ps = [1.0, 1.25, 1.5, 2.0, 3.0, 10.0, f64::INFINITY];
        let ns: Vec<f64> = ps.iter().map(|&p| pnorm(&x, p).unwrap().value).collect();
        for w in ns.windows(2) {
            prop_assert!(w[0] >= w[1] - 1e-12 * w[0].abs());
        }
    }

    #[test]
    fn norm_triangle_inequality(x in seq(64), y in seq(64), p in prop::sample::select(vec![1.0, 1.5, 2.0, 4.0, f64::INFINITY])) {
        let len = x.len().max(y.len());
        let get = |s: &RealSeq, k: usize| if k < s.len() { s[k] } else { 0.0 };
        let sum = RealSeq::new((0..len).map(|k| get(&x, k) + get(&y, k)).collect()).unwrap();
        let lhs = pnorm(&sum, p).unwrap().value;
        let rhs = pnorm(&x, p).unwrap().value + pnorm(&y, p).unwrap().value;
        prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn inverse_round_trips(a in symbol(48)) {
        let n = a.len();
        let inv = invert_naive(&a, n).unwrap();
        // conv(a, b) must be the identity series e = (1, 0, 0, ...)
        let prod = conv_truncated(&a, &inv.b, n, &ConvPlan::schoolbook()).unwrap();
        let scale = linf(&inv.b).max(1.0);
        prop_assert!((prod[0] - 1.0).abs() <= 1e-12 * scale);
        for k in 1..n {
            prop_assert!(prod[k].abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn inverse_prefix_consistency(a in symbol(64), cut in 1usize..32) {
        let n = a.len();
        let m = cut.min(n);
        let full = invert_naive(&a, n).unwrap().b;
        let part = invert_naive(&a.prefix(m).unwrap(), m).unwrap().b;
        for k in 0..m {
            prop_assert_eq!(full[k].to_bits(), part[k].to_bits());
        }
    }
}
