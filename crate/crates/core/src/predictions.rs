//! Prediction files: one `ID,Score` row per corpus sentence.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{PredictionError, PredictionErrors};
use crate::lexicon::Emotion;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Anger,
    Fear,
    Joy,
    Sadness,
    Valence,
}

impl Task {
    pub const ALL: [Task; 5] = [Task::Anger, Task::Fear, Task::Joy, Task::Sadness, Task::Valence];

    pub fn as_str(self) -> &'static str {
        match self {
            Task::Anger => "anger",
            Task::Fear => "fear",
            Task::Joy => "joy",
            Task::Sadness => "sadness",
            Task::Valence => "valence",
        }
    }

    /// The emotion category a task scores; valence has none.
    pub fn emotion(self) -> Option<Emotion> {
        match self {
            Task::Anger => Some(Emotion::Anger),
            Task::Fear => Some(Emotion::Fear),
            Task::Joy => Some(Emotion::Joy),
            Task::Sadness => Some(Emotion::Sadness),
            Task::Valence => None,
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Task::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown task `{s}`"))
    }
}

/// Splits `{system_id}.{task}.csv` into its parts.
pub fn parse_prediction_filename(name: &str) -> Option<(String, Task)> {
    let stem = name.strip_suffix(".csv")?;
    let (system, task) = stem.rsplit_once('.')?;
    if system.is_empty() {
        return None;
    }
    Some((system.to_string(), task.parse().ok()?))
}

pub fn prediction_filename(system_id: &str, task: Task) -> String {
    format!("{system_id}.{task}.csv")
}

/// One system's complete, range-checked scores for one task.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionSet {
    pub system_id: String,
    pub task: Task,
    scores: HashMap<String, f64>,
}

impl PredictionSet {
    /// Checks a prediction file against the corpus. All defects are
    /// collected, not just the first.
    pub fn from_reader<R: Read>(
        system_id: &str,
        task: Task,
        input: R,
        corpus: &Corpus,
    ) -> Result<Self, PredictionErrors> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .from_reader(input);
        let header = rdr
            .headers()
            .map_err(|e| PredictionErrors(vec![PredictionError::Malformed { row: 1, message: e.to_string() }]))?
            .clone();
        if header.len() != 2 || header[0].trim() != "ID" || header[1].trim() != "Score" {
            let found = header.iter().collect::<Vec<_>>().join(",");
            return Err(PredictionErrors(vec![PredictionError::Header(found)]));
        }

        let mut errors = Vec::new();
        let mut scores = HashMap::with_capacity(corpus.len());
        let mut seen = HashSet::with_capacity(corpus.len());
        for (i, row) in rdr.records().enumerate() {
            // header is row 1
            let row_no = i + 2;
            let row = match row {
                Ok(r) => r,
                Err(e) => {
                    errors.push(PredictionError::Malformed { row: row_no, message: e.to_string() });
                    continue;
                }
            };
            if row.len() != 2 {
                errors.push(PredictionError::Malformed {
                    row: row_no,
                    message: format!("expected 2 fields, found {}", row.len()),
                });
                continue;
            }
            let id = row[0].trim();
            let score: f64 = match row[1].trim().parse() {
                Ok(s) => s,
                Err(_) => {
                    errors.push(PredictionError::Malformed {
                        row: row_no,
                        message: format!("score `{}` is not a number", &row[1]),
                    });
                    continue;
                }
            };
            if !seen.insert(id.to_string()) {
                errors.push(PredictionError::DuplicateId { row: row_no, id: id.to_string() });
                continue;
            }
            if !corpus.contains(id) {
                errors.push(PredictionError::UnknownId { row: row_no, id: id.to_string() });
                continue;
            }
            if !(0.0..=1.0).contains(&score) {
                errors.push(PredictionError::OutOfRange { row: row_no, id: id.to_string(), score });
                continue;
            }
            scores.insert(id.to_string(), score);
        }

        let missing: Vec<String> = corpus
            .records()
            .iter()
            .filter(|r| !seen.contains(&r.id))
            .map(|r| r.id.clone())
            .collect();
        if !missing.is_empty() {
            errors.push(PredictionError::MissingIds(missing));
        }
        if errors.is_empty() {
            Ok(Self {
                system_id: system_id.to_string(),
                task,
                scores,
            })
        } else {
            Err(PredictionErrors(errors))
        }
    }

    /// Builds a set directly from scores, enforcing the same rules as the
    /// file reader.
    pub fn from_scores(
        system_id: &str,
        task: Task,
        scores: impl IntoIterator<Item = (String, f64)>,
        corpus: &Corpus,
    ) -> Result<Self, PredictionErrors> {
        let mut csv = String::from("ID,Score\n");
        for (id, s) in scores {
            csv.push_str(&format!("{id},{s}\n"));
        }
        Self::from_reader(system_id, task, csv.as_bytes(), corpus)
    }

    pub fn from_path(path: &Path, corpus: &Corpus) -> Result<Self, crate::error::Error> {
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
        let (system, task) = parse_prediction_filename(name).ok_or_else(|| {
            crate::error::Error::Validation(format!(
                "{}: file name must look like {{system_id}}.{{task}}.csv",
                path.display()
            ))
        })?;
        let file = std::fs::File::open(path).map_err(|e| crate::error::Error::io(path, e))?;
        Self::from_reader(&system, task, std::io::BufReader::new(file), corpus).map_err(|source| {
            crate::error::Error::Predictions {
                path: path.to_path_buf(),
                source,
            }
        })
    }

    /// For generators whose scores are complete and in range by construction.
    pub(crate) fn from_trusted(system_id: &str, task: Task, scores: HashMap<String, f64>) -> Self {
        debug_assert!(scores.values().all(|s| (0.0..=1.0).contains(s)));
        Self {
            system_id: system_id.to_string(),
            task,
            scores,
        }
    }

    pub fn score(&self, id: &str) -> Option<f64> {
        self.scores.get(id).copied()
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// Writes rows in corpus order. Scores use the shortest representation
    /// that reads back to the same value.
    pub fn write_csv<W: Write>(&self, corpus: &Corpus, out: W) -> Result<(), csv::Error> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(["ID", "Score"])?;
        for r in corpus.records() {
            if let Some(s) = self.scores.get(&r.id) {
                w.write_record([r.id.as_str(), &s.to_string()])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::Lexicons;

    fn corpus() -> Corpus {
        Corpus::generate(&Lexicons::builtin())
    }

    fn file(c: &Corpus, edit: impl Fn(usize, &str) -> Option<String>) -> String {
        let mut s = String::from("ID,Score\n");
        for (i, r) in c.records().iter().enumerate() {
            if let Some(line) = edit(i, &r.id) {
                s.push_str(&line);
                s.push('\n');
            }
        }
        s
    }

    #[test]
    fn complete_file_accepted() {
        let c = corpus();
        let text = file(&c, |_, id| Some(format!("{id},0.5")));
        let p = PredictionSet::from_reader("sys", Task::Joy, text.as_bytes(), &c).unwrap();
        assert_eq!(p.len(), 8640);
        assert_eq!(p.score("t01-p00-e00"), Some(0.5));
    }

    #[test]
    fn missing_ids_are_listed() {
        let c = corpus();
        let text = file(&c, |i, id| (i >= 10).then(|| format!("{id},0.5")));
        let err = PredictionSet::from_reader("sys", Task::Joy, text.as_bytes(), &c).unwrap_err();
        assert_eq!(err.0.len(), 1);
        match &err.0[0] {
            PredictionError::MissingIds(ids) => {
                assert_eq!(ids.len(), 10);
                assert_eq!(ids[0], "t01-p00-e00");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn each_defect_is_distinct() {
        let c = corpus();
        let mut text = file(&c, |i, id| match i {
            0 => Some(format!("{id},1.2")),
            1 => Some(format!("{id},-0.1")),
            _ => Some(format!("{id},0.5")),
        });
        text.push_str("t01-p00-e01,0.4\n");
        text.push_str("t99-p00-e00,0.4\n");
        text.push_str("t01-p00-e02,abc\n");
        let err = PredictionSet::from_reader("sys", Task::Joy, text.as_bytes(), &c).unwrap_err();
        let e = &err.0;
        assert!(matches!(&e[0], PredictionError::OutOfRange { row: 2, score, .. } if *score == 1.2));
        assert!(matches!(&e[1], PredictionError::OutOfRange { row: 3, .. }));
        assert!(matches!(&e[2], PredictionError::DuplicateId { id, .. } if id == "t01-p00-e01"));
        assert!(matches!(&e[3], PredictionError::UnknownId { id, .. } if id == "t99-p00-e00"));
        assert!(matches!(&e[4], PredictionError::Malformed { .. }));
        assert_eq!(e.len(), 5);
    }

    #[test]
    fn nan_is_out_of_range() {
        let c = corpus();
        let text = file(&c, |i, id| Some(if i == 3 { format!("{id},NaN") } else { format!("{id},0.5") }));
        let err = PredictionSet::from_reader("sys", Task::Joy, text.as_bytes(), &c).unwrap_err();
        assert!(matches!(err.0[0], PredictionError::OutOfRange { row: 5, .. }));
    }

    #[test]
    fn bad_header() {
        let c = corpus();
        let err = PredictionSet::from_reader("s", Task::Joy, "id,score\n".as_bytes(), &c).unwrap_err();
        assert!(matches!(err.0[0], PredictionError::Header(_)));
    }

    #[test]
    fn filenames() {
        assert_eq!(
            parse_prediction_filename("team.v2.valence.csv"),
            Some(("team.v2".to_string(), Task::Valence))
        );
        assert_eq!(parse_prediction_filename("x.mood.csv"), None);
        assert_eq!(parse_prediction_filename(".joy.csv"), None);
        assert_eq!(prediction_filename("a", Task::Fear), "a.fear.csv");
    }

    #[test]
    fn write_then_read() {
        let c = corpus();
        let scores = c.records().iter().enumerate().map(|(i, r)| (r.id.clone(), (i % 97) as f64 / 96.0 / 3.0));
        let p = PredictionSet::from_scores("s", Task::Anger, scores, &c).unwrap();
        let mut buf = Vec::new();
        p.write_csv(&c, &mut buf).unwrap();
        let back = PredictionSet::from_reader("s", Task::Anger, buf.as_slice(), &c).unwrap();
        assert_eq!(back, p);
    }
}
