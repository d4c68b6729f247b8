//! Whole-run analysis: many prediction sets against one corpus.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, PredictionError};
use crate::pairing::{build_comparisons, filter_comparisons, ComparisonUnit, Dimension, SubsetKind};
use crate::predictions::{parse_prediction_filename, PredictionSet, Task};
use crate::stats::{aggregate_groups, analyze_system, bonferroni_threshold, BiasGroup, GroupTable, SystemBiasSummary};

pub const DEFAULT_ALPHA: f64 = 0.05;

/// One machine-readable finding from validation or analysis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub code: String,
    pub source: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(code: &str, source: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            code: code.to_string(),
            source: source.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    pub alpha: f64,
    /// Bonferroni denominator; defaults to (analyzed sets) x (dimensions).
    pub corrections: Option<usize>,
    pub subset: SubsetKind,
    pub dimensions: Vec<Dimension>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            alpha: DEFAULT_ALPHA,
            corrections: None,
            subset: SubsetKind::Full,
            dimensions: Dimension::ALL.to_vec(),
        }
    }
}

/// Header facts for a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunInfo {
    pub alpha: f64,
    pub corrections: usize,
    pub threshold: f64,
    pub subset: SubsetKind,
    pub systems: usize,
    pub corpus_fingerprint: String,
}

/// Every delta of one system along one dimension, for external plotting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotSeries {
    pub system_id: String,
    pub task: Task,
    pub dimension: Dimension,
    pub group: BiasGroup,
    pub unit_ids: Vec<String>,
    pub deltas: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisRun {
    pub info: RunInfo,
    pub summaries: Vec<SystemBiasSummary>,
    pub plots: Vec<PlotSeries>,
    pub tables: Vec<GroupTable>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Reads every `{system}.{task}.csv` in `dir`, in file-name order. Invalid
/// files become diagnostics.
pub fn load_prediction_dir(
    dir: &Path,
    corpus: &Corpus,
    tasks: Option<&[Task]>,
) -> Result<(Vec<PredictionSet>, Vec<Diagnostic>), Error> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut names = BTreeSet::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        if entry.path().is_file() {
            if let Some(name) = entry.file_name().to_str() {
                names.insert(name.to_string());
            }
        }
    }
    let mut sets = Vec::new();
    let mut diags = Vec::new();
    for name in names.iter().filter(|n| n.ends_with(".csv")) {
        let Some((_, task)) = parse_prediction_filename(name) else {
            diags.push(Diagnostic::new(
                "prediction_filename",
                name.as_str(),
                "file name must look like {system_id}.{task}.csv",
            ));
            continue;
        };
        if tasks.is_some_and(|t| !t.contains(&task)) {
            continue;
        }
        match PredictionSet::from_path(&dir.join(name), corpus) {
            Ok(set) => sets.push(set),
            Err(Error::Predictions { source, .. }) => {
                diags.extend(source.0.iter().map(|e| prediction_diagnostic(name, e)));
            }
            Err(e) if e.is_io() => return Err(e),
            Err(e) => diags.push(Diagnostic::new("predictions", name.as_str(), e.to_string())),
        }
    }
    Ok((sets, diags))
}

fn prediction_diagnostic(source: &str, e: &PredictionError) -> Diagnostic {
    let code = match e {
        PredictionError::MissingIds(_) => "missing_ids",
        PredictionError::DuplicateId { .. } => "duplicate_id",
        PredictionError::UnknownId { .. } => "unknown_id",
        PredictionError::OutOfRange { .. } => "score_out_of_range",
        PredictionError::Malformed { .. } => "malformed_row",
        PredictionError::Header(_) => "bad_header",
    };
    Diagnostic::new(code, source, e.to_string())
}

/// Runs the paired test for every set and dimension and builds the group
/// tables. Fails only when no set can be analyzed.
pub fn analyze_predictions(
    corpus: &Corpus,
    sets: &[PredictionSet],
    config: &AnalysisConfig,
) -> Result<AnalysisRun, Error> {
    if !(config.alpha > 0.0 && config.alpha < 1.0) {
        return Err(Error::Validation(format!("alpha must lie in (0, 1), got {}", config.alpha)));
    }
    if config.corrections == Some(0) {
        return Err(Error::Validation("corrections must be at least 1".into()));
    }
    let mut all_units: Vec<(Dimension, Vec<ComparisonUnit>)> = Vec::new();
    for &d in &config.dimensions {
        all_units.push((d, build_comparisons(corpus, d)?));
    }

    let mut diagnostics = Vec::new();
    let mut work = Vec::new();
    for set in sets {
        let subset = config.subset.for_task(set.task);
        let mut per_dim = Vec::new();
        let mut skipped = false;
        for (d, units) in &all_units {
            match filter_comparisons(units, subset) {
                Ok(u) if u.len() >= 2 => per_dim.push((*d, u)),
                Ok(u) => {
                    diagnostics.push(Diagnostic::new(
                        "too_few_comparisons",
                        format!("{}.{}", set.system_id, set.task),
                        format!("{} {d} comparison(s) in subset {}; need 2", u.len(), config.subset.as_str()),
                    ));
                    skipped = true;
                }
                Err(e) => {
                    diagnostics.push(Diagnostic::new(
                        "subset_not_applicable",
                        format!("{}.{}", set.system_id, set.task),
                        e.to_string(),
                    ));
                    skipped = true;
                }
            }
            if skipped {
                break;
            }
        }
        if !skipped {
            work.push((set, per_dim));
        }
    }
    if work.is_empty() {
        return Err(Error::Validation("no prediction set could be analyzed".into()));
    }

    let corrections = config
        .corrections
        .unwrap_or(work.len() * config.dimensions.len().max(1));
    let threshold = bonferroni_threshold(config.alpha, corrections);

    let mut summaries = Vec::new();
    let mut plots = Vec::new();
    for (set, per_dim) in work {
        for (d, units) in per_dim {
            let (summary, deltas) = analyze_system(set, &units, d, threshold)?;
            plots.push(PlotSeries {
                system_id: set.system_id.clone(),
                task: set.task,
                dimension: d,
                group: summary.group,
                unit_ids: deltas.iter().map(|p| p.unit_id.clone()).collect(),
                deltas: deltas.iter().map(|p| p.delta).collect(),
            });
            summaries.push(summary);
        }
    }
    summaries.sort_by(|a, b| (a.task, a.dimension, &a.system_id).cmp(&(b.task, b.dimension, &b.system_id)));
    plots.sort_by(|a, b| (a.task, a.dimension, &a.system_id).cmp(&(b.task, b.dimension, &b.system_id)));

    let systems = summaries
        .iter()
        .map(|s| (s.system_id.as_str(), s.task))
        .collect::<BTreeSet<_>>()
        .len();
    let tables = group_tables(&summaries)?;
    Ok(AnalysisRun {
        info: RunInfo {
            alpha: config.alpha,
            corrections,
            threshold,
            subset: config.subset,
            systems,
            corpus_fingerprint: corpus.fingerprint().to_string(),
        },
        summaries,
        plots,
        tables,
        diagnostics,
    })
}

/// One table per (task, dimension) present, in task then dimension order.
pub fn group_tables(summaries: &[SystemBiasSummary]) -> Result<Vec<GroupTable>, Error> {
    let keys: BTreeSet<(Task, Dimension)> = summaries.iter().map(|s| (s.task, s.dimension)).collect();
    keys.into_iter()
        .map(|(task, dim)| {
            let members: Vec<SystemBiasSummary> = summaries
                .iter()
                .filter(|s| s.task == task && s.dimension == dim)
                .cloned()
                .collect();
            Ok(aggregate_groups(task, dim, &members)?)
        })
        .collect()
}

/// Checks that the corpus has one sentence per template, person and
/// matching emotion word.
pub fn check_corpus_counts(corpus: &Corpus) -> Vec<Diagnostic> {
    let lex = corpus.lexicons();
    let persons = lex.persons.len();
    let mut diags = Vec::new();
    let mut expected_total = 0;
    for t in &lex.templates {
        let words = t.emotion_register.map_or(1, |r| lex.emotion_indices(r).count());
        let expected = persons * words;
        expected_total += expected;
        let found = corpus.records().iter().filter(|r| r.template_id == t.id).count();
        if found != expected {
            diags.push(Diagnostic::new(
                "corpus_count",
                format!("template {}", t.id),
                format!("expected {persons} x {words} = {expected} sentences, found {found}"),
            ));
        }
    }
    if corpus.len() != expected_total {
        diags.push(Diagnostic::new(
            "corpus_count",
            "corpus",
            format!("expected {expected_total} sentences in total, found {}", corpus.len()),
        ));
    }
    diags
}

/// Lexicon, corpus and (optionally) prediction-directory checks.
pub fn validate_all(corpus: &Corpus, predictions: Option<&Path>) -> Result<Vec<Diagnostic>, Error> {
    let mut diags = check_corpus_counts(corpus);

    let mut buf = Vec::new();
    corpus.write_csv(&mut buf)?;
    match Corpus::read_csv(buf.as_slice(), corpus.lexicons()) {
        Ok(back) if back == *corpus => {}
        Ok(_) => diags.push(Diagnostic::new("corpus_roundtrip", "corpus", "re-read corpus differs")),
        Err(e) => diags.push(Diagnostic::new("corpus_roundtrip", "corpus", e.to_string())),
    }

    for d in Dimension::ALL {
        if let Err(e) = build_comparisons(corpus, d) {
            diags.push(Diagnostic::new("corpus_integrity", d.as_str(), e.to_string()));
        }
    }

    if let Some(dir) = predictions {
        let (_, pred_diags) = load_prediction_dir(dir, corpus, None)?;
        diags.extend(pred_diags);
    }
    Ok(diags)
}
