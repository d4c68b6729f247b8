mod common;

use approx::assert_abs_diff_eq;
use eec_core::stats::{
    box_stats, classify_and_summarize, paired_t_test, paired_two_sample_t_test, student_t_two_tailed_p, BiasGroup,
};
use eec_core::pairing::Dimension;
use eec_core::predictions::Task;
use proptest::prelude::*;

#[test]
fn oracle_reproduces_closed_forms() {
    // the reference itself, against the df = 1 and df = 2 closed forms
    for t in [0.0, 0.5, 1.0, 3.0] {
        let cauchy = 1.0 - 2.0 / std::f64::consts::PI * f64::atan(t);
        assert_abs_diff_eq!(common::t_two_tailed_oracle(t, 1.0), cauchy, epsilon = 1e-13);
        let df2 = 1.0 - t / (2.0 + t * t).sqrt();
        assert_abs_diff_eq!(common::t_two_tailed_oracle(t, 2.0), df2, epsilon = 1e-13);
    }
}

#[test]
fn p_values_match_quadrature_grid() {
    for df in [1.0, 4.0, 10.0, 100.0, 1583.0] {
        for t in [0.0, 0.5, 1.0, 2.0, 4.0] {
            let got = student_t_two_tailed_p(t, df).unwrap();
            let want = common::t_two_tailed_oracle(t, df);
            assert!((got - want).abs() <= 1e-10, "t={t} df={df}: {got} vs {want}");
        }
    }
}

#[test]
fn tabulated_values() {
    // two-tailed critical values: t_{0.975, 10} = 2.228139, t_{0.995, 4} = 4.604095
    assert_abs_diff_eq!(student_t_two_tailed_p(2.228_138_851_986_274, 10.0).unwrap(), 0.05, epsilon = 1e-9);
    assert_abs_diff_eq!(student_t_two_tailed_p(4.604_094_871_415_897, 4.0).unwrap(), 0.01, epsilon = 1e-9);
    assert_abs_diff_eq!(student_t_two_tailed_p(2.0, 10.0).unwrap(), 0.073_388, epsilon = 1e-6);
    assert_eq!(student_t_two_tailed_p(1.0, 1.0).unwrap(), 0.5);
}

#[test]
fn one_to_five_against_oracle() {
    let r = paired_t_test(&[1.0, 2.0, 3.0, 4.0, 5.0], 0.05).unwrap();
    let want = common::t_two_tailed_oracle(3.0 * 2f64.sqrt(), 4.0);
    assert_abs_diff_eq!(r.p_value, want, epsilon = 1e-12);
}

#[test]
fn large_t_tail_is_tiny_but_positive() {
    let p = student_t_two_tailed_p(30.0, 1583.0).unwrap();
    assert!(p > 0.0 && p < 1e-100);
    assert_eq!(student_t_two_tailed_p(f64::INFINITY, 3.0).unwrap(), 0.0);
}

fn sample(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn p_symmetric_and_monotone(t in 0.0f64..20.0, dt in 0.001f64..5.0, df in 1.0f64..2000.0) {
        let p = student_t_two_tailed_p(t, df).unwrap();
        prop_assert_eq!(p, student_t_two_tailed_p(-t, df).unwrap());
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert!(student_t_two_tailed_p(t + dt, df).unwrap() <= p);
    }

    #[test]
    fn two_formulations_agree(pairs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2..80)) {
        let (l, r): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let d: Vec<f64> = l.iter().zip(&r).map(|(a, b)| a - b).collect();
        let one = paired_t_test(&d, 0.05).unwrap();
        let two = paired_two_sample_t_test(&l, &r, 0.05).unwrap();
        prop_assert!((one.p_value - two.p_value).abs() <= 1e-12);
        prop_assert!((one.t_statistic - two.t_statistic).abs() <= 1e-12 * one.t_statistic.abs().max(1.0));
    }

    #[test]
    fn translation_invariance(pairs in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 2..60), c in -0.5f64..0.5) {
        let (l, r): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let base = paired_two_sample_t_test(&l, &r, 0.05).unwrap();
        let ls: Vec<f64> = l.iter().map(|x| x + c).collect();
        let rs: Vec<f64> = r.iter().map(|x| x + c).collect();
        let shifted = paired_two_sample_t_test(&ls, &rs, 0.05).unwrap();
        prop_assert!((base.p_value - shifted.p_value).abs() <= 1e-9);
        prop_assert!((base.mean_delta - shifted.mean_delta).abs() <= 1e-12);
    }

    #[test]
    fn sign_flip_mirrors(d in sample(2..60), alpha in 0.001f64..0.2) {
        let flipped: Vec<f64> = d.iter().map(|x| -x).collect();
        let a = paired_t_test(&d, alpha).unwrap();
        let b = paired_t_test(&flipped, alpha).unwrap();
        prop_assert_eq!(a.p_value, b.p_value);
        prop_assert_eq!(a.t_statistic, -b.t_statistic);
        let sa = classify_and_summarize("s", Task::Joy, Dimension::Gender, &d, a).unwrap();
        let sb = classify_and_summarize("s", Task::Joy, Dimension::Gender, &flipped, b).unwrap();
        let mirrored = match sa.group {
            BiasGroup::LeftHigher => BiasGroup::RightHigher,
            BiasGroup::RightHigher => BiasGroup::LeftHigher,
            g => g,
        };
        prop_assert_eq!(sb.group, mirrored);
        prop_assert_eq!(sa.avg_delta_pos, sb.avg_delta_neg.map(|v| -v));
        prop_assert_eq!(sa.delta_spread, sb.delta_spread);
    }

    #[test]
    fn box_stats_match_order_statistics(v in sample(1..50)) {
        let b = box_stats(&v).unwrap();
        prop_assert!((b.q1 - common::type7(&v, 0.25)).abs() <= 1e-12);
        prop_assert!((b.median - common::type7(&v, 0.5)).abs() <= 1e-12);
        prop_assert!((b.q3 - common::type7(&v, 0.75)).abs() <= 1e-12);
        let iqr = b.q3 - b.q1;
        let inside: Vec<f64> = v.iter().copied().filter(|&x| x >= b.q1 - 1.5 * iqr && x <= b.q3 + 1.5 * iqr).collect();
        prop_assert_eq!(b.whisker_low, inside.iter().copied().fold(f64::INFINITY, f64::min));
        prop_assert_eq!(b.whisker_high, inside.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    }

    #[test]
    fn summary_spread_and_signed_means(d in sample(2..60)) {
        let t = paired_t_test(&d, 0.05).unwrap();
        let s = classify_and_summarize("s", Task::Fear, Dimension::Race, &d, t).unwrap();
        let max = d.iter().copied().fold(f64::MIN, f64::max);
        let min = d.iter().copied().fold(f64::MAX, f64::min);
        prop_assert_eq!(s.delta_spread, max - min);
        prop_assert!(s.avg_delta_pos.is_none_or(|m| m > 0.0));
        prop_assert!(s.avg_delta_neg.is_none_or(|m| m < 0.0));
    }
}
