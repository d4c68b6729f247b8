//! Comparison units against a brute-force enumeration over the written
//! corpus file: sentences are compared token by token, with a hand-written
//! table of gendered words.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use eec_core::corpus::Corpus;
use eec_core::lexicon::Lexicons;
use eec_core::pairing::{build_gender_comparisons, build_race_comparisons, filter_comparisons, Subset, UnitKind};
use eec_core::predictions::Task;
use eec_core::stats::compute_deltas;
use eec_core::synth::{synth_predictions, BiasSpec};
use proptest::prelude::*;

const SWAPS: [(&str, &str); 12] = [
    ("she", "he"),
    ("her", "him"),
    ("herself", "himself"),
    ("woman", "man"),
    ("girl", "boy"),
    ("sister", "brother"),
    ("daughter", "son"),
    ("wife", "husband"),
    ("girlfriend", "boyfriend"),
    ("mother", "father"),
    ("aunt", "uncle"),
    ("mom", "dad"),
];

#[derive(Debug, Clone)]
struct Row {
    id: String,
    tokens: Vec<String>,
    gender: String,
    race: String,
}

/// Rows of the corpus file grouped by (template, emotion word).
fn instantiations(corpus: &Corpus) -> BTreeMap<(String, String), Vec<Row>> {
    let mut buf = Vec::new();
    corpus.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "ID,Sentence,Template,Person,Gender,Race,EmotionWord,Emotion");
    let mut groups: BTreeMap<(String, String), Vec<Row>> = BTreeMap::new();
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 8, "{line}");
        let tokens = cols[1]
            .trim_end_matches('.')
            .split(' ')
            .map(|w| w.to_lowercase())
            .collect();
        groups
            .entry((cols[2].to_string(), cols[6].to_string()))
            .or_default()
            .push(Row {
                id: cols[0].to_string(),
                tokens,
                gender: cols[4].to_string(),
                race: cols[5].to_string(),
            });
    }
    groups
}

fn is_swap(f: &[String], m: &[String]) -> bool {
    if f.len() != m.len() {
        return false;
    }
    let mut diffs = 0;
    for (a, b) in f.iter().zip(m) {
        if a != b {
            if !SWAPS.iter().any(|(x, y)| a == x && b == y) {
                return false;
            }
            diffs += 1;
        }
    }
    diffs >= 1
}

fn is_name(r: &Row) -> bool {
    r.race != "unspecified"
}

type Pair = (Vec<String>, Vec<String>);

fn brute_gender(corpus: &Corpus) -> BTreeSet<Pair> {
    let mut out = BTreeSet::new();
    for rows in instantiations(corpus).values() {
        for f in rows.iter().filter(|r| r.gender == "female" && !is_name(r)) {
            for m in rows.iter().filter(|r| r.gender == "male" && !is_name(r)) {
                if is_swap(&f.tokens, &m.tokens) {
                    out.insert((vec![f.id.clone()], vec![m.id.clone()]));
                }
            }
        }
        let side = |g: &str| -> Vec<String> {
            let mut v: Vec<String> = rows.iter().filter(|r| is_name(r) && r.gender == g).map(|r| r.id.clone()).collect();
            v.sort();
            v
        };
        if rows.iter().any(is_name) {
            out.insert((side("female"), side("male")));
        }
    }
    out
}

fn brute_race(corpus: &Corpus) -> BTreeSet<Pair> {
    let mut out = BTreeSet::new();
    for rows in instantiations(corpus).values() {
        let side = |race: &str| -> Vec<String> {
            let mut v: Vec<String> = rows.iter().filter(|r| r.race == race).map(|r| r.id.clone()).collect();
            v.sort();
            v
        };
        if rows.iter().any(is_name) {
            out.insert((side("african_american"), side("european_american")));
        }
    }
    out
}

fn engine(units: &[eec_core::pairing::ComparisonUnit]) -> BTreeSet<Pair> {
    units
        .iter()
        .map(|u| {
            let mut l = u.left_ids.clone();
            let mut r = u.right_ids.clone();
            l.sort();
            r.sort();
            (l, r)
        })
        .collect()
}

fn corpus() -> Corpus {
    Corpus::generate(&Lexicons::builtin())
}

#[test]
fn gender_units_match_enumeration() {
    let c = corpus();
    let units = build_gender_comparisons(&c).unwrap();
    let brute = brute_gender(&c);
    assert_eq!(brute.len(), 1584);
    assert_eq!(units.len(), 1584);
    assert_eq!(engine(&units), brute);
}

#[test]
fn race_units_match_enumeration() {
    let c = corpus();
    let units = build_race_comparisons(&c).unwrap();
    let brute = brute_race(&c);
    assert_eq!(brute.len(), 144);
    assert_eq!(engine(&units), brute);
    assert!(brute.iter().all(|(l, r)| l.len() == 20 && r.len() == 20));
}

#[test]
fn neutral_units_match_enumeration() {
    let c = corpus();
    let units = filter_comparisons(&build_gender_comparisons(&c).unwrap(), Subset::NeutralOnly).unwrap();
    let neutral = c.filtered(|r| r.emotion_index.is_none());
    let brute = brute_gender(&neutral);
    assert_eq!(brute.len(), 44);
    assert_eq!(engine(&units), brute);
}

#[test]
fn name_average_deltas_match_direct_sums() {
    let c = corpus();
    let spec = BiasSpec {
        gender_shift: 0.02,
        race_shift: -0.03,
        noise_sd: 0.05,
        seed: 5,
        ..BiasSpec::default()
    };
    let preds = synth_predictions(&c, &spec, "sys", Task::Sadness).unwrap();
    let groups = instantiations(&c);
    // instantiation label in unit ids is t{tt}-e{ee}
    let by_label: HashMap<String, &Vec<Row>> = groups
        .values()
        .map(|rows| {
            let id = &rows[0].id;
            (format!("{}-{}", &id[..3], &id[8..]), rows)
        })
        .collect();
    let mut checked = 0;
    for (units, left, right, key) in [
        (build_gender_comparisons(&c).unwrap(), "female", "male", "gender"),
        (build_race_comparisons(&c).unwrap(), "african_american", "european_american", "race"),
    ] {
        let deltas = compute_deltas(&units, &preds);
        for (u, d) in units.iter().zip(&deltas) {
            if u.kind != UnitKind::NameAverage {
                continue;
            }
            let label = u.id.split(':').nth(1).unwrap();
            let rows = by_label[label];
            let avg = |want: &str| {
                let mut total = 0.0;
                let mut n = 0usize;
                for r in rows.iter().filter(|r| is_name(r)) {
                    let v = if key == "gender" { &r.gender } else { &r.race };
                    if v == want {
                        total += preds.score(&r.id).unwrap();
                        n += 1;
                    }
                }
                assert_eq!(n, 20);
                total / n as f64
            };
            assert!((d.delta - (avg(left) - avg(right))).abs() < 1e-12, "{}", u.id);
            checked += 1;
        }
    }
    assert_eq!(checked, 288);
}

#[test]
fn emotion_subsets_partition_full_set() {
    let c = corpus();
    let units = build_gender_comparisons(&c).unwrap();
    let mut total = filter_comparisons(&units, Subset::NeutralOnly).unwrap().len();
    for task in [Task::Anger, Task::Fear, Task::Joy, Task::Sadness] {
        let n = filter_comparisons(&units, Subset::EmotionMatched(task)).unwrap().len();
        assert_eq!(n, 385);
        total += n;
    }
    assert_eq!(total, units.len());
}

fn subsets() -> impl Strategy<Value = Subset> {
    prop_oneof![
        Just(Subset::Full),
        Just(Subset::NeutralOnly),
        prop::sample::select(vec![Task::Anger, Task::Fear, Task::Joy, Task::Sadness]).prop_map(Subset::EmotionMatched),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn filtering_is_idempotent(subset in subsets(), templates in prop::sample::subsequence((1u32..=11).collect::<Vec<_>>(), 1..=11)) {
        let c = corpus().with_templates(&templates);
        let units = build_gender_comparisons(&c).unwrap();
        let once = filter_comparisons(&units, subset).unwrap();
        let twice = filter_comparisons(&once, subset).unwrap();
        prop_assert_eq!(&once, &twice);
        prop_assert!(once.iter().all(|u| units.contains(u)));
        let expected: usize = templates.iter().map(|&t| if t <= 7 { 20 * 11 } else { 11 }).sum();
        prop_assert_eq!(units.len(), expected);
    }
}
