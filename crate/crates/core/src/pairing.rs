//! Gender and race comparison units.
//!
//! A unit compares two sets of sentences from one (template, emotion word)
//! instantiation that differ only in the person slot. Units hold sentence ids
//! rather than scores, so one pairing serves any number of prediction files.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{sentence_id, Corpus, SentenceRecord};
use crate::error::{ContractError, IntegrityError};
use crate::lexicon::{Emotion, Gender, PersonKind, Race};
use crate::predictions::Task;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dimension {
    /// Female minus male.
    Gender,
    /// African American minus European American.
    Race,
}

impl Dimension {
    pub const ALL: [Dimension; 2] = [Dimension::Gender, Dimension::Race];

    pub fn as_str(self) -> &'static str {
        match self {
            Dimension::Gender => "gender",
            Dimension::Race => "race",
        }
    }

    /// Short labels for the left and right side, e.g. `("F", "M")`.
    pub fn side_labels(self) -> (&'static str, &'static str) {
        match self {
            Dimension::Gender => ("F", "M"),
            Dimension::Race => ("AA", "EA"),
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Dimension {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gender" => Ok(Dimension::Gender),
            "race" => Ok(Dimension::Race),
            other => Err(format!("unknown dimension `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitKind {
    /// One female noun-phrase sentence against its male counterpart.
    NounPhrasePair,
    /// Mean over one group of first names against the mean over the other.
    NameAverage,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonUnit {
    /// Stable label, e.g. `gender:t07-e38:mom-dad` or `race:t08-e--:names`.
    pub id: String,
    pub dimension: Dimension,
    pub kind: UnitKind,
    pub template_id: u32,
    pub emotion_index: Option<usize>,
    pub emotion: Option<Emotion>,
    pub emotion_word: Option<String>,
    pub left_ids: Vec<String>,
    pub right_ids: Vec<String>,
}

/// Which comparisons enter an analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subset {
    Full,
    /// Only instantiations without an emotion word.
    NeutralOnly,
    /// Only instantiations whose emotion word matches the task's emotion.
    EmotionMatched(Task),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubsetKind {
    Full,
    Neutral,
    EmotionMatched,
}

impl SubsetKind {
    pub fn for_task(self, task: Task) -> Subset {
        match self {
            SubsetKind::Full => Subset::Full,
            SubsetKind::Neutral => Subset::NeutralOnly,
            SubsetKind::EmotionMatched => Subset::EmotionMatched(task),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SubsetKind::Full => "full",
            SubsetKind::Neutral => "neutral",
            SubsetKind::EmotionMatched => "emotion-matched",
        }
    }
}

struct Instantiation<'a> {
    template_id: u32,
    emotion_index: Option<usize>,
    records: Vec<&'a SentenceRecord>,
}

impl Instantiation<'_> {
    fn label(&self) -> String {
        match self.emotion_index {
            Some(e) => format!("t{:02}-e{e:02}", self.template_id),
            None => format!("t{:02}-e--", self.template_id),
        }
    }

    fn find(&self, person_index: usize) -> Option<&SentenceRecord> {
        self.records.iter().copied().find(|r| r.person_index == person_index)
    }

    fn id_for(&self, person_index: usize) -> String {
        sentence_id(self.template_id, person_index, self.emotion_index)
    }
}

fn instantiations(corpus: &Corpus) -> Vec<Instantiation<'_>> {
    let mut groups: BTreeMap<(u32, Option<usize>), Vec<&SentenceRecord>> = BTreeMap::new();
    for r in corpus.records() {
        groups.entry((r.template_id, r.emotion_index)).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((template_id, emotion_index), records)| Instantiation {
            template_id,
            emotion_index,
            records,
        })
        .collect()
}

fn unit(
    corpus: &Corpus,
    inst: &Instantiation<'_>,
    dimension: Dimension,
    kind: UnitKind,
    tag: &str,
    left_ids: Vec<String>,
    right_ids: Vec<String>,
) -> ComparisonUnit {
    let word = inst.emotion_index.map(|i| &corpus.lexicons().emotions[i]);
    ComparisonUnit {
        id: format!("{}:{}:{}", dimension, inst.label(), tag),
        dimension,
        kind,
        template_id: inst.template_id,
        emotion_index: inst.emotion_index,
        emotion: word.map(|w| w.emotion),
        emotion_word: word.map(|w| w.surface.clone()),
        left_ids,
        right_ids,
    }
}

/// Left and right sentence ids.
type Sides = (Vec<String>, Vec<String>);

/// Every given name of the lexicon must be present once any is; returns the
/// two sides' ids, or `None` if the instantiation holds no name sentences.
fn name_sides(
    corpus: &Corpus,
    inst: &Instantiation<'_>,
    left: impl Fn(Gender, Race) -> bool,
) -> Result<Option<Sides>, IntegrityError> {
    let persons = &corpus.lexicons().persons;
    let names: Vec<usize> = (0..persons.len())
        .filter(|&i| persons[i].kind == PersonKind::GivenName)
        .collect();
    let present: Vec<&SentenceRecord> = names.iter().filter_map(|&i| inst.find(i)).collect();
    let Some(anchor) = present.first() else {
        return Ok(None);
    };
    if let Some(&absent) = names.iter().find(|&&i| inst.find(i).is_none()) {
        return Err(IntegrityError {
            present: anchor.id.clone(),
            missing: inst.id_for(absent),
        });
    }
    let (l, r): (Vec<&&SentenceRecord>, Vec<&&SentenceRecord>) = present.iter().partition(|rec| left(rec.gender, rec.race));
    Ok(Some((
        l.into_iter().map(|rec| rec.id.clone()).collect(),
        r.into_iter().map(|rec| rec.id.clone()).collect(),
    )))
}

/// Ten noun-phrase pairs plus one name-average unit per instantiation
/// (1,584 units over the default corpus).
pub fn build_gender_comparisons(corpus: &Corpus) -> Result<Vec<ComparisonUnit>, IntegrityError> {
    let persons = &corpus.lexicons().persons;
    let mut pairs: Vec<(usize, usize, &str)> = Vec::new();
    for (fi, f) in persons.iter().enumerate() {
        if f.kind != PersonKind::NounPhrase || f.gender != Gender::Female {
            continue;
        }
        let mi = persons
            .iter()
            .position(|m| m.kind == PersonKind::NounPhrase && m.gender == Gender::Male && m.pair_id == f.pair_id)
            .expect("validated lexicons pair every noun phrase");
        pairs.push((fi, mi, f.pair_id.as_deref().unwrap_or_default()));
    }

    let mut units = Vec::new();
    for inst in instantiations(corpus) {
        for &(fi, mi, pair) in &pairs {
            match (inst.find(fi), inst.find(mi)) {
                (Some(f), Some(m)) => units.push(unit(
                    corpus,
                    &inst,
                    Dimension::Gender,
                    UnitKind::NounPhrasePair,
                    pair,
                    vec![f.id.clone()],
                    vec![m.id.clone()],
                )),
                (Some(f), None) => {
                    return Err(IntegrityError {
                        present: f.id.clone(),
                        missing: inst.id_for(mi),
                    })
                }
                (None, Some(m)) => {
                    return Err(IntegrityError {
                        present: m.id.clone(),
                        missing: inst.id_for(fi),
                    })
                }
                (None, None) => {}
            }
        }
        if let Some((left, right)) = name_sides(corpus, &inst, |g, _| g == Gender::Female)? {
            units.push(unit(corpus, &inst, Dimension::Gender, UnitKind::NameAverage, "names", left, right));
        }
    }
    Ok(units)
}

/// One name-average unit per instantiation, pooling both genders
/// (144 units over the default corpus).
pub fn build_race_comparisons(corpus: &Corpus) -> Result<Vec<ComparisonUnit>, IntegrityError> {
    let mut units = Vec::new();
    for inst in instantiations(corpus) {
        if let Some((left, right)) = name_sides(corpus, &inst, |_, r| r == Race::AfricanAmerican)? {
            units.push(unit(corpus, &inst, Dimension::Race, UnitKind::NameAverage, "names", left, right));
        }
    }
    Ok(units)
}

pub fn build_comparisons(corpus: &Corpus, dimension: Dimension) -> Result<Vec<ComparisonUnit>, IntegrityError> {
    match dimension {
        Dimension::Gender => build_gender_comparisons(corpus),
        Dimension::Race => build_race_comparisons(corpus),
    }
}

/// Restricts units to a subset. Never adds units; idempotent.
pub fn filter_comparisons(units: &[ComparisonUnit], subset: Subset) -> Result<Vec<ComparisonUnit>, ContractError> {
    let keep: Box<dyn Fn(&ComparisonUnit) -> bool> = match subset {
        Subset::Full => Box::new(|_| true),
        Subset::NeutralOnly => Box::new(|u| u.emotion_index.is_none()),
        Subset::EmotionMatched(task) => {
            let emotion = task.emotion().ok_or_else(|| {
                ContractError::new(format!("task {task} has no matching emotion category"))
            })?;
            Box::new(move |u| u.emotion == Some(emotion))
        }
    };
    Ok(units.iter().filter(|u| keep(u)).cloned().collect())
}

/// Debug dump, one JSON object per line.
pub fn write_units_jsonl<W: Write>(units: &[ComparisonUnit], mut out: W) -> std::io::Result<()> {
    for u in units {
        serde_json::to_writer(&mut out, u)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
