use eec_core::audit::{analyze_predictions, AnalysisConfig};
use eec_core::corpus::Corpus;
use eec_core::lexicon::Lexicons;
use eec_core::pairing::Dimension;
use eec_core::predictions::Task;
use eec_core::report::render_report;
use eec_core::stats::{aggregate_groups, classify_and_summarize, paired_t_test, BiasGroup, SystemBiasSummary};
use eec_core::synth::{synth_predictions, BiasSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// 46 systems with random location and scale, so all three groups appear.
fn summaries() -> Vec<SystemBiasSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(46);
    (0..46)
        .map(|i| {
            let loc = rng.random_range(-0.04..0.04);
            let scale = rng.random_range(0.01..0.08);
            let n = rng.random_range(5..60);
            let d: Vec<f64> = (0..n).map(|_| loc + scale * rng.random_range(-1.0..1.0)).collect();
            let t = paired_t_test(&d, 0.05 / 46.0).unwrap();
            classify_and_summarize(&format!("sys{i:02}"), Task::Anger, Dimension::Gender, &d, t).unwrap()
        })
        .collect()
}

#[test]
fn group_table_matches_naive_group_by() {
    let s = summaries();
    let table = aggregate_groups(Task::Anger, Dimension::Gender, &s).unwrap();
    let mut counted = 0;
    for (row, group) in table.rows.iter().zip(BiasGroup::ALL) {
        assert_eq!(row.group, Some(group));
        let (mut pos_sum, mut pos_n, mut neg_sum, mut neg_n, mut members) = (0.0, 0, 0.0, 0, 0);
        for x in &s {
            let g = if x.test.p_value >= x.test.alpha {
                BiasGroup::NotSignificant
            } else if x.test.mean_delta > 0.0 {
                BiasGroup::LeftHigher
            } else {
                BiasGroup::RightHigher
            };
            assert_eq!(g, x.group);
            if g != group {
                continue;
            }
            members += 1;
            if let Some(v) = x.avg_delta_pos {
                pos_sum += v;
                pos_n += 1;
            }
            if let Some(v) = x.avg_delta_neg {
                neg_sum += v;
                neg_n += 1;
            }
        }
        assert!(members > 0, "{group:?} empty; pick another seed");
        assert_eq!(row.count, members);
        let close = |a: Option<f64>, sum: f64, n: i32| match a {
            Some(v) => n > 0 && (v - sum / n as f64).abs() < 1e-15,
            None => n == 0,
        };
        assert!(close(row.mean_avg_delta_pos, pos_sum, pos_n));
        assert!(close(row.mean_avg_delta_neg, neg_sum, neg_n));
        counted += members;
    }
    assert_eq!(counted, 46);
    assert_eq!(table.all.count, 46);
}

#[test]
fn three_systems_three_rows() {
    let c = Corpus::generate(&Lexicons::builtin());
    let specs = [("down", -0.1), ("flat", 0.0), ("up", 0.1)];
    let sets: Vec<_> = specs
        .iter()
        .map(|(name, shift)| {
            let spec = BiasSpec {
                gender_shift: *shift,
                noise_sd: 0.01,
                seed: 3,
                ..BiasSpec::default()
            };
            synth_predictions(&c, &spec, name, Task::Joy).unwrap()
        })
        .collect();
    let config = AnalysisConfig {
        dimensions: vec![Dimension::Gender],
        ..AnalysisConfig::default()
    };
    let run = analyze_predictions(&c, &sets, &config).unwrap();
    assert_eq!(run.info.corrections, 3);
    let table = &run.tables[0];
    let counts: Vec<usize> = table.rows.iter().map(|r| r.count).collect();
    assert_eq!(counts, [1, 1, 1]);
    // a shift of 10 noise units leaves no delta of the opposite sign
    assert_eq!(table.rows[1].mean_avg_delta_neg, None);
    assert_eq!(table.rows[2].mean_avg_delta_pos, None);
    let text = render_report(&run.info, &run.summaries, &run.tables);
    assert!(text.contains("F↑–M↓ significant"));
    assert!(text.contains('−'));
}
