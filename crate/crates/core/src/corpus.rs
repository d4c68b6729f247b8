//! Sentence expansion and the generated corpus.

use std::collections::HashMap;
use std::io::{Read, Write};

use serde::Serialize;

use crate::error::{ContractError, CorpusFileError};
use crate::lexicon::{
    EmotionWord, Gender, Lexicons, PersonRole, PersonTerm, Race, Template, ARTICLE_SLOT, EMOTION_SLOT,
    PERSON_SLOT, REFLEXIVE_SLOT,
};

pub const CORPUS_HEADER: [&str; 8] = [
    "ID",
    "Sentence",
    "Template",
    "Person",
    "Gender",
    "Race",
    "EmotionWord",
    "Emotion",
];

/// Fills one template with a person term and, for emotion templates, an
/// emotion word of the template's register.
pub fn expand_template(
    template: &Template,
    person: &PersonTerm,
    emotion: Option<&EmotionWord>,
) -> Result<String, ContractError> {
    match (template.emotion_register, emotion) {
        (Some(reg), Some(w)) if w.register != reg => {
            return Err(ContractError::new(format!(
                "template {} takes {} words, got {} word `{}`",
                template.id, reg, w.register, w.surface
            )))
        }
        (Some(reg), None) => {
            return Err(ContractError::new(format!(
                "template {} needs a {} emotion word",
                template.id, reg
            )))
        }
        (None, Some(w)) => {
            return Err(ContractError::new(format!(
                "template {} has no emotion slot, got `{}`",
                template.id, w.surface
            )))
        }
        _ => {}
    }

    let form = match template.person_role {
        PersonRole::Subject => &person.subject_form,
        PersonRole::Object => &person.object_form,
    };
    let mut text = template.pattern.replace(PERSON_SLOT, form);
    if template.has_reflexive {
        let reflexive = match person.gender {
            Gender::Female => "herself",
            Gender::Male => "himself",
        };
        text = text.replace(REFLEXIVE_SLOT, reflexive);
    }
    if let Some(w) = emotion {
        if template.has_article_before_emotion {
            text = text.replace(ARTICLE_SLOT, indefinite_article(&w.surface));
        }
        text = text.replace(EMOTION_SLOT, &w.surface);
    }
    Ok(finish_sentence(&text))
}

/// "an" before a vowel letter, "a" otherwise. Orthographic only: "honest"
/// gets "a".
pub fn indefinite_article(word: &str) -> &'static str {
    match word.chars().next().map(|c| c.to_ascii_lowercase()) {
        Some('a' | 'e' | 'i' | 'o' | 'u') => "an",
        _ => "a",
    }
}

fn finish_sentence(raw: &str) -> String {
    let body = raw.trim().trim_end_matches('.').trim_end();
    let mut chars = body.chars();
    let mut out = String::with_capacity(body.len() + 1);
    if let Some(first) = chars.next() {
        out.extend(first.to_uppercase());
        out.push_str(chars.as_str());
    }
    out.push('.');
    out
}

/// `t{template:02}-p{person:02}-e{emotion:02}`, with `e--` when the template
/// has no emotion slot. Indices are 0-based positions in the lexicons.
pub fn sentence_id(template_id: u32, person_index: usize, emotion_index: Option<usize>) -> String {
    match emotion_index {
        Some(e) => format!("t{template_id:02}-p{person_index:02}-e{e:02}"),
        None => format!("t{template_id:02}-p{person_index:02}-e--"),
    }
}

fn parse_sentence_id(id: &str) -> Option<(u32, usize, Option<usize>)> {
    let (head, emotion) = match id.strip_suffix("-e--") {
        Some(head) => (head, None),
        None => {
            let (head, e) = id.rsplit_once("-e")?;
            (head, Some(e.parse().ok()?))
        }
    };
    let (t, p) = head.split_once("-p")?;
    let parsed = (t.strip_prefix('t')?.parse().ok()?, p.parse().ok()?, emotion);
    // reject non-canonical spellings such as "t1-p+3-e07"
    (sentence_id(parsed.0, parsed.1, parsed.2) == id).then_some(parsed)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SentenceRecord {
    pub id: String,
    pub text: String,
    pub template_id: u32,
    /// Index into `Lexicons::persons`.
    pub person_index: usize,
    /// Index into `Lexicons::emotions`.
    pub emotion_index: Option<usize>,
    pub gender: Gender,
    pub race: Race,
}

/// Every expanded sentence, in template, person, emotion order.
#[derive(Debug, Clone)]
pub struct Corpus {
    lexicons: Lexicons,
    records: Vec<SentenceRecord>,
    fingerprint: String,
    by_id: HashMap<String, usize>,
}

impl PartialEq for Corpus {
    fn eq(&self, other: &Self) -> bool {
        self.fingerprint == other.fingerprint && self.records == other.records
    }
}

impl Corpus {
    /// Expands every template against every person term and, for emotion
    /// templates, every emotion word of the template's register.
    pub fn generate(lexicons: &Lexicons) -> Self {
        let mut templates: Vec<&Template> = lexicons.templates.iter().collect();
        templates.sort_by_key(|t| t.id);
        let mut records = Vec::new();
        for template in templates {
            let emotions: Vec<Option<usize>> = match template.emotion_register {
                Some(reg) => lexicons.emotion_indices(reg).map(Some).collect(),
                None => vec![None],
            };
            for (pi, person) in lexicons.persons.iter().enumerate() {
                for &ei in &emotions {
                    let word = ei.map(|i| &lexicons.emotions[i]);
                    let text = expand_template(template, person, word)
                        .expect("registers are matched by construction");
                    records.push(SentenceRecord {
                        id: sentence_id(template.id, pi, ei),
                        text,
                        template_id: template.id,
                        person_index: pi,
                        emotion_index: ei,
                        gender: person.gender,
                        race: person.race,
                    });
                }
            }
        }
        Self::from_parts(lexicons.clone(), records)
    }

    fn from_parts(lexicons: Lexicons, records: Vec<SentenceRecord>) -> Self {
        let by_id = records.iter().enumerate().map(|(i, r)| (r.id.clone(), i)).collect();
        let fingerprint = lexicons.fingerprint();
        Self {
            lexicons,
            records,
            fingerprint,
            by_id,
        }
    }

    /// A copy holding only the records that satisfy `keep`.
    pub fn filtered(&self, keep: impl Fn(&SentenceRecord) -> bool) -> Self {
        let records = self.records.iter().filter(|r| keep(r)).cloned().collect();
        Self::from_parts(self.lexicons.clone(), records)
    }

    /// A copy holding only the given templates.
    pub fn with_templates(&self, ids: &[u32]) -> Self {
        self.filtered(|r| ids.contains(&r.template_id))
    }

    pub fn records(&self) -> &[SentenceRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn lexicons(&self) -> &Lexicons {
        &self.lexicons
    }

    /// Fingerprint of the lexicons the corpus was generated from.
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn get(&self, id: &str) -> Option<&SentenceRecord> {
        self.by_id.get(id).map(|&i| &self.records[i])
    }

    pub fn contains(&self, id: &str) -> bool {
        self.by_id.contains_key(id)
    }

    pub fn person(&self, record: &SentenceRecord) -> &PersonTerm {
        &self.lexicons.persons[record.person_index]
    }

    pub fn emotion_word(&self, record: &SentenceRecord) -> Option<&EmotionWord> {
        record.emotion_index.map(|i| &self.lexicons.emotions[i])
    }

    /// Writes the comma-separated corpus file (LF line endings).
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(CORPUS_HEADER)?;
        for r in &self.records {
            let word = self.emotion_word(r);
            w.write_record([
                r.id.as_str(),
                r.text.as_str(),
                &r.template_id.to_string(),
                self.person(r).surface.as_str(),
                r.gender.as_str(),
                r.race.as_str(),
                word.map_or("", |w| w.surface.as_str()),
                word.map_or("", |w| w.emotion.as_str()),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a corpus file back, checking every column against `lexicons`.
    pub fn read_csv<R: Read>(input: R, lexicons: &Lexicons) -> Result<Self, CorpusFileError> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
        let header = rdr.headers()?.clone();
        if header.iter().ne(CORPUS_HEADER.iter().copied()) {
            return Err(CorpusFileError::Header {
                expected: CORPUS_HEADER.join(","),
                found: header.iter().collect::<Vec<_>>().join(","),
            });
        }
        let mut records = Vec::new();
        let mut seen = HashMap::new();
        for (i, row) in rdr.records().enumerate() {
            let line = i + 2;
            let row = row?;
            let bad = |message: String| CorpusFileError::Row { line, message };
            if row.len() != CORPUS_HEADER.len() {
                return Err(bad(format!("expected {} fields, found {}", CORPUS_HEADER.len(), row.len())));
            }
            let id = &row[0];
            let (tid, pi, ei) = parse_sentence_id(id).ok_or_else(|| bad(format!("malformed id `{id}`")))?;
            if let Some(prev) = seen.insert(id.to_string(), line) {
                return Err(bad(format!("id {id} already appeared on line {prev}")));
            }
            let template = lexicons
                .template(tid)
                .ok_or_else(|| bad(format!("unknown template {tid}")))?;
            let person = lexicons
                .persons
                .get(pi)
                .ok_or_else(|| bad(format!("person index {pi} out of range")))?;
            let word = match ei {
                Some(e) => Some(
                    lexicons
                        .emotions
                        .get(e)
                        .ok_or_else(|| bad(format!("emotion index {e} out of range")))?,
                ),
                None => None,
            };
            let text = expand_template(template, person, word).map_err(|e| bad(e.to_string()))?;
            let expected = [
                id,
                text.as_str(),
                &tid.to_string(),
                person.surface.as_str(),
                person.gender.as_str(),
                person.race.as_str(),
                word.map_or("", |w| w.surface.as_str()),
                word.map_or("", |w| w.emotion.as_str()),
            ];
            for (col, (want, got)) in expected.iter().zip(row.iter()).enumerate() {
                if *want != got {
                    return Err(bad(format!(
                        "{} is `{got}`, lexicons give `{want}`",
                        CORPUS_HEADER[col]
                    )));
                }
            }
            records.push(SentenceRecord {
                id: id.to_string(),
                text,
                template_id: tid,
                person_index: pi,
                emotion_index: ei,
                gender: person.gender,
                race: person.race,
            });
        }
        Ok(Self::from_parts(lexicons.clone(), records))
    }
}
