use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn eec(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eec"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn generate_writes_corpus_and_units() {
    let dir = tempfile::tempdir().unwrap();
    let o = eec(&["generate", "--out", "gen", "--units"], dir.path());
    assert!(o.status.success(), "{o:?}");
    let corpus = fs::read_to_string(dir.path().join("gen/corpus.csv")).unwrap();
    assert_eq!(corpus.lines().count(), 8641);
    assert!(corpus.contains(",This woman made me feel angry.,"));
    let units = fs::read_to_string(dir.path().join("gen/gender_units.jsonl")).unwrap();
    assert_eq!(units.lines().count(), 1584);
}

#[test]
fn synth_analyze_report() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let o = eec(
        &["synth", "--out", "preds", "--task", "anger", "--count", "2", "--gender-shift", "0.05", "--noise", "0.01"],
        p,
    );
    assert!(o.status.success(), "{o:?}");
    assert!(p.join("preds/synth-000.anger.csv").is_file());
    let o = eec(&["analyze", "--predictions", "preds", "--out", "res", "--format", "csv,json"], p);
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("threshold 0.05/4 = 1.250000e-2"));
    for f in ["run.json", "summary.csv", "summary.json", "groups.csv", "plot_data.json", "report.txt"] {
        assert!(p.join("res").join(f).is_file(), "{f}");
    }
    let summary = fs::read_to_string(p.join("res/summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 1 + 2 * 2);
    assert!(summary.lines().filter(|l| l.contains(",gender,")).all(|l| l.contains("left_higher")));

    let o = eec(&["report", "--from", "res", "--out", "again"], p);
    assert!(o.status.success(), "{o:?}");
    assert_eq!(
        fs::read_to_string(p.join("res/report.txt")).unwrap(),
        fs::read_to_string(p.join("again/report.txt")).unwrap()
    );
}

#[test]
fn corrections_flag_sets_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert!(eec(&["synth", "--out", "preds", "--task", "joy"], p).status.success());
    let o = eec(&["analyze", "--predictions", "preds", "--corrections", "438", "--subset", "neutral"], p);
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("= 1.141553e-4"));
}

#[test]
fn validate_reports_prediction_defects() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert!(eec(&["generate", "--out", "."], p).status.success());
    assert!(eec(&["synth", "--out", "preds", "--task", "fear"], p).status.success());
    let o = eec(&["validate", "--corpus", "corpus.csv", "--predictions", "preds"], p);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    assert_eq!(stdout(&o).trim(), "[]");

    let path = p.join("preds/synth.fear.csv");
    let text = fs::read_to_string(&path).unwrap();
    let trimmed: Vec<&str> = text.lines().take(text.lines().count() - 10).collect();
    fs::write(&path, trimmed.join("\n") + "\n").unwrap();
    let o = eec(&["validate", "--predictions", "preds"], p);
    assert_eq!(o.status.code(), Some(1));
    let diags: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(diags[0]["code"], "missing_ids");
    assert!(diags[0]["message"].as_str().unwrap().contains("10"));

    // analysis skips the broken file and has nothing left
    let o = eec(&["analyze", "--predictions", "preds"], p);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn validate_flags_tampered_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert!(eec(&["generate", "--out", "."], p).status.success());
    let text = fs::read_to_string(p.join("corpus.csv")).unwrap();
    fs::write(p.join("corpus.csv"), text.replacen("This woman made me feel angry.", "This woman made me feel calm.", 1)).unwrap();
    let o = eec(&["validate", "--corpus", "corpus.csv"], p);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("corpus_file"));
}

#[test]
fn io_failures_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = eec(&["analyze", "--predictions", "nowhere"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = eec(&["generate", "--persons", "missing.tsv"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn custom_lexicons() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let defaults = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let templates = fs::read_to_string(defaults.join("templates.tsv")).unwrap();
    let kept: Vec<&str> = templates
        .lines()
        .filter(|l| l.starts_with('#') || l.starts_with("1\t") || l.starts_with("8\t"))
        .collect();
    fs::create_dir(p.join("lex")).unwrap();
    fs::write(p.join("lex/templates.tsv"), kept.join("\n") + "\n").unwrap();
    let o = eec(&["generate", "--lexicons", "lex", "--out", "."], p);
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("wrote 1260 sentences"));

    let persons = fs::read_to_string(defaults.join("persons.tsv")).unwrap();
    let broken: Vec<&str> = persons.lines().filter(|l| !l.starts_with("this man")).collect();
    fs::write(p.join("persons.tsv"), broken.join("\n") + "\n").unwrap();
    let o = eec(&["validate", "--persons", "persons.tsv"], p);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("unpaired noun phrase"), "{}", stdout(&o));
}
