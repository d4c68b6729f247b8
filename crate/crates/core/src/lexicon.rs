//! Person terms, emotion words and sentence templates.
//!
//! All three lexicons are plain tab-separated text. Blank lines and lines
//! starting with `#` are ignored. The defaults ship inside the crate and are
//! parsed by the same loader as user files.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, LexiconError};

const DEFAULT_PERSONS: &str = include_str!("../data/persons.tsv");
const DEFAULT_EMOTIONS: &str = include_str!("../data/emotions.tsv");
const DEFAULT_TEMPLATES: &str = include_str!("../data/templates.tsv");

pub const PERSONS_FILE: &str = "persons.tsv";
pub const EMOTIONS_FILE: &str = "emotions.tsv";
pub const TEMPLATES_FILE: &str = "templates.tsv";

macro_rules! tag_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(rename_all = "snake_case")]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                let lowered = s.trim().to_ascii_lowercase();
                match lowered.as_str() {
                    $($text => Ok($name::$variant),)+
                    _ => Err(format!(
                        "unknown {} `{}` (expected one of: {})",
                        stringify!($name).to_ascii_lowercase(),
                        s,
                        [$($text),+].join(", ")
                    )),
                }
            }
        }
    };
}

tag_enum!(Gender { Female => "female", Male => "male" });

tag_enum!(Race {
    AfricanAmerican => "african_american",
    EuropeanAmerican => "european_american",
    Unspecified => "unspecified",
});

tag_enum!(
    /// Whether a person term is a first name or a gendered noun phrase.
    PersonKind { GivenName => "name", NounPhrase => "noun_phrase" }
);

tag_enum!(Emotion {
    Anger => "anger",
    Fear => "fear",
    Joy => "joy",
    Sadness => "sadness",
});

tag_enum!(
    /// Emotional state words ("angry") versus situation/event words ("annoying").
    Register { State => "state", Situation => "situation" }
);

tag_enum!(PersonRole { Subject => "subject", Object => "object" });

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PersonTerm {
    pub surface: String,
    pub subject_form: String,
    pub object_form: String,
    pub gender: Gender,
    pub race: Race,
    pub kind: PersonKind,
    /// Links a female noun phrase to its male counterpart.
    pub pair_id: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmotionWord {
    pub surface: String,
    pub emotion: Emotion,
    pub register: Register,
}

/// A sentence frame.
///
/// Placeholders in `pattern`: `{person}` (required, once), `{emotion}`,
/// `{reflexive}` (herself/himself) and `{article}` (a/an, only directly
/// before `{emotion}`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Template {
    pub id: u32,
    pub pattern: String,
    /// `None` for frames without an emotion slot.
    pub emotion_register: Option<Register>,
    pub person_role: PersonRole,
    pub has_reflexive: bool,
    pub has_article_before_emotion: bool,
}

pub(crate) const PERSON_SLOT: &str = "{person}";
pub(crate) const EMOTION_SLOT: &str = "{emotion}";
pub(crate) const REFLEXIVE_SLOT: &str = "{reflexive}";
pub(crate) const ARTICLE_SLOT: &str = "{article}";

/// The three validated input lists, in lexicon order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lexicons {
    pub persons: Vec<PersonTerm>,
    pub emotions: Vec<EmotionWord>,
    pub templates: Vec<Template>,
}

/// Optional overrides; `None` falls back to the embedded default.
#[derive(Debug, Clone, Default)]
pub struct LexiconPaths<'a> {
    pub persons: Option<&'a Path>,
    pub emotions: Option<&'a Path>,
    pub templates: Option<&'a Path>,
}

impl Lexicons {
    /// The built-in lists: 40 names, 10 noun-phrase pairs, 40 emotion words
    /// and 11 templates.
    pub fn builtin() -> Self {
        Self::from_sources(
            ("persons.tsv (builtin)", DEFAULT_PERSONS),
            ("emotions.tsv (builtin)", DEFAULT_EMOTIONS),
            ("templates.tsv (builtin)", DEFAULT_TEMPLATES),
        )
        .expect("builtin lexicons are valid")
    }

    pub fn from_sources(
        persons: (&str, &str),
        emotions: (&str, &str),
        templates: (&str, &str),
    ) -> Result<Self, LexiconError> {
        let lex = Self {
            persons: parse_persons(persons.0, persons.1)?,
            emotions: parse_emotions(emotions.0, emotions.1)?,
            templates: parse_templates(templates.0, templates.1)?,
        };
        lex.validate()?;
        Ok(lex)
    }

    /// Loads each list from its path when given, otherwise from the defaults.
    pub fn load(paths: &LexiconPaths<'_>) -> Result<Self, Error> {
        let read = |p: Option<&Path>, fallback: &'static str, label: &str| -> Result<(String, String), Error> {
            match p {
                Some(path) => {
                    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
                    Ok((path.display().to_string(), text))
                }
                None => Ok((format!("{label} (builtin)"), fallback.to_string())),
            }
        };
        let persons = read(paths.persons, DEFAULT_PERSONS, PERSONS_FILE)?;
        let emotions = read(paths.emotions, DEFAULT_EMOTIONS, EMOTIONS_FILE)?;
        let templates = read(paths.templates, DEFAULT_TEMPLATES, TEMPLATES_FILE)?;
        Ok(Self::from_sources(
            (&persons.0, &persons.1),
            (&emotions.0, &emotions.1),
            (&templates.0, &templates.1),
        )?)
    }

    /// Loads whichever of `persons.tsv`, `emotions.tsv` and `templates.tsv`
    /// exist in `dir`; missing files fall back to the defaults.
    pub fn load_dir(dir: &Path) -> Result<Self, Error> {
        if !dir.is_dir() {
            return Err(Error::io(
                dir,
                std::io::Error::new(std::io::ErrorKind::NotFound, "lexicon directory not found"),
            ));
        }
        let pick = |name: &str| {
            let p = dir.join(name);
            p.is_file().then_some(p)
        };
        let (p, e, t) = (pick(PERSONS_FILE), pick(EMOTIONS_FILE), pick(TEMPLATES_FILE));
        Self::load(&LexiconPaths {
            persons: p.as_deref(),
            emotions: e.as_deref(),
            templates: t.as_deref(),
        })
    }

    pub fn template(&self, id: u32) -> Option<&Template> {
        self.templates.iter().find(|t| t.id == id)
    }

    /// Emotion word indices (into `emotions`) of one register, in lexicon order.
    pub fn emotion_indices(&self, register: Register) -> impl Iterator<Item = usize> + '_ {
        self.emotions
            .iter()
            .enumerate()
            .filter(move |(_, w)| w.register == register)
            .map(|(i, _)| i)
    }

    /// SHA-256 over the canonical text of all three lists.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(render_persons(&self.persons));
        hasher.update([0u8]);
        hasher.update(render_emotions(&self.emotions));
        hasher.update([0u8]);
        hasher.update(render_templates(&self.templates));
        hex::encode(hasher.finalize())
    }

    /// Checks the cross-row rules that a single line cannot express.
    pub fn validate(&self) -> Result<(), LexiconError> {
        validate_persons(&self.persons)?;
        validate_emotions(&self.emotions)?;
        validate_templates(&self.templates)?;
        for t in &self.templates {
            if let Some(reg) = t.emotion_register {
                if self.emotion_indices(reg).next().is_none() {
                    return Err(LexiconError::rule(
                        "register without emotion words",
                        format!("template {} needs {} words but the emotion lexicon has none", t.id, reg),
                    ));
                }
            }
        }
        Ok(())
    }
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
}

fn field<T: FromStr<Err = String>>(source: &str, line: usize, raw: &str) -> Result<T, LexiconError> {
    raw.parse().map_err(|e: String| LexiconError::parse(source, line, e))
}

fn nonempty<'a>(source: &str, line: usize, raw: &'a str, what: &str) -> Result<&'a str, LexiconError> {
    let v = raw.trim();
    if v.is_empty() {
        Err(LexiconError::parse(source, line, format!("empty {what}")))
    } else {
        Ok(v)
    }
}

pub fn parse_persons(source: &str, text: &str) -> Result<Vec<PersonTerm>, LexiconError> {
    data_lines(text)
        .map(|(line, l)| {
            let cols: Vec<&str> = l.split('\t').collect();
            if !(6..=7).contains(&cols.len()) {
                return Err(LexiconError::parse(
                    source,
                    line,
                    format!(
                        "expected 6 or 7 tab-separated columns (surface, subject, object, gender, race, kind[, pair]), found {}",
                        cols.len()
                    ),
                ));
            }
            let pair_id = cols.get(6).map(|s| s.trim()).filter(|s| !s.is_empty());
            Ok(PersonTerm {
                surface: nonempty(source, line, cols[0], "surface")?.to_string(),
                subject_form: nonempty(source, line, cols[1], "subject form")?.to_string(),
                object_form: nonempty(source, line, cols[2], "object form")?.to_string(),
                gender: field(source, line, cols[3])?,
                race: field(source, line, cols[4])?,
                kind: field(source, line, cols[5])?,
                pair_id: pair_id.map(str::to_string),
            })
        })
        .collect()
}

pub fn parse_emotions(source: &str, text: &str) -> Result<Vec<EmotionWord>, LexiconError> {
    data_lines(text)
        .map(|(line, l)| {
            let cols: Vec<&str> = l.split('\t').collect();
            if cols.len() != 3 {
                return Err(LexiconError::parse(
                    source,
                    line,
                    format!("expected 3 tab-separated columns (surface, emotion, register), found {}", cols.len()),
                ));
            }
            Ok(EmotionWord {
                surface: nonempty(source, line, cols[0], "surface")?.to_string(),
                emotion: field(source, line, cols[1])?,
                register: field(source, line, cols[2])?,
            })
        })
        .collect()
}

pub fn parse_templates(source: &str, text: &str) -> Result<Vec<Template>, LexiconError> {
    data_lines(text)
        .map(|(line, l)| {
            let cols: Vec<&str> = l.split('\t').collect();
            if cols.len() != 4 {
                return Err(LexiconError::parse(
                    source,
                    line,
                    format!("expected 4 tab-separated columns (id, register, role, pattern), found {}", cols.len()),
                ));
            }
            let id: u32 = cols[0]
                .trim()
                .parse()
                .map_err(|_| LexiconError::parse(source, line, format!("template id `{}` is not a number", cols[0])))?;
            let emotion_register = match cols[1].trim().to_ascii_lowercase().as_str() {
                "none" | "" => None,
                other => Some(field::<Register>(source, line, other)?),
            };
            let person_role = field(source, line, cols[2])?;
            let pattern = nonempty(source, line, cols[3], "pattern")?.to_string();
            check_pattern(&pattern, emotion_register).map_err(|m| LexiconError::parse(source, line, m))?;
            Ok(Template {
                id,
                has_reflexive: pattern.contains(REFLEXIVE_SLOT),
                has_article_before_emotion: pattern.contains(ARTICLE_SLOT),
                pattern,
                emotion_register,
                person_role,
            })
        })
        .collect()
}

fn check_pattern(pattern: &str, register: Option<Register>) -> Result<(), String> {
    let known = [PERSON_SLOT, EMOTION_SLOT, REFLEXIVE_SLOT, ARTICLE_SLOT];
    let mut rest = pattern;
    while let Some(open) = rest.find('{') {
        let close = rest[open..]
            .find('}')
            .ok_or_else(|| format!("unclosed placeholder in `{pattern}`"))?;
        let slot = &rest[open..open + close + 1];
        if !known.contains(&slot) {
            return Err(format!("unknown placeholder {slot}"));
        }
        rest = &rest[open + close + 1..];
    }
    if pattern.matches(PERSON_SLOT).count() != 1 {
        return Err("pattern must contain {person} exactly once".into());
    }
    let emotion_slots = pattern.matches(EMOTION_SLOT).count();
    match (register, emotion_slots) {
        (Some(_), 1) | (None, 0) => {}
        (Some(_), _) => return Err("templates with an emotion register need exactly one {emotion}".into()),
        (None, _) => return Err("templates with register `none` cannot contain {emotion}".into()),
    }
    if pattern.contains(ARTICLE_SLOT) && !pattern.contains("{article} {emotion}") {
        return Err("{article} must directly precede {emotion}".into());
    }
    if pattern.matches(REFLEXIVE_SLOT).count() > 1 || pattern.matches(ARTICLE_SLOT).count() > 1 {
        return Err("{reflexive} and {article} may appear at most once".into());
    }
    Ok(())
}

fn validate_persons(persons: &[PersonTerm]) -> Result<(), LexiconError> {
    if persons.is_empty() {
        return Err(LexiconError::rule("empty person lexicon", "at least one person term is required"));
    }
    let mut seen = HashSet::new();
    for p in persons {
        if !seen.insert(p.surface.as_str()) {
            return Err(LexiconError::rule("duplicate person term", p.surface.clone()));
        }
        match p.kind {
            PersonKind::GivenName => {
                if p.race == Race::Unspecified {
                    return Err(LexiconError::rule("name without race", p.surface.clone()));
                }
                if p.pair_id.is_some() {
                    return Err(LexiconError::rule("name with pair id", p.surface.clone()));
                }
                if p.subject_form != p.surface || p.object_form != p.surface {
                    return Err(LexiconError::rule("inflected name", p.surface.clone()));
                }
            }
            PersonKind::NounPhrase => {
                if p.race != Race::Unspecified {
                    return Err(LexiconError::rule("noun phrase with race", p.surface.clone()));
                }
                if p.pair_id.is_none() {
                    return Err(LexiconError::rule(
                        "unpaired noun phrase",
                        format!("`{}` has no pair id", p.surface),
                    ));
                }
            }
        }
    }

    let mut pairs: BTreeMap<&str, Vec<&PersonTerm>> = BTreeMap::new();
    for p in persons.iter().filter(|p| p.kind == PersonKind::NounPhrase) {
        pairs.entry(p.pair_id.as_deref().unwrap_or_default()).or_default().push(p);
    }
    for (id, members) in &pairs {
        let female = members.iter().filter(|p| p.gender == Gender::Female).count();
        let male = members.iter().filter(|p| p.gender == Gender::Male).count();
        if female != 1 || male != 1 {
            let names: Vec<&str> = members.iter().map(|p| p.surface.as_str()).collect();
            return Err(LexiconError::rule(
                "unpaired noun phrase",
                format!(
                    "pair `{id}` has {female} female and {male} male member(s): {}",
                    names.join(", ")
                ),
            ));
        }
    }

    let names: Vec<&PersonTerm> = persons.iter().filter(|p| p.kind == PersonKind::GivenName).collect();
    if !names.is_empty() {
        for gender in Gender::ALL {
            for race in [Race::AfricanAmerican, Race::EuropeanAmerican] {
                if !names.iter().any(|p| p.gender == *gender && p.race == race) {
                    return Err(LexiconError::rule(
                        "empty name cell",
                        format!("no {gender} {race} names; every gender and race needs at least one"),
                    ));
                }
            }
        }
    }
    Ok(())
}

fn validate_emotions(emotions: &[EmotionWord]) -> Result<(), LexiconError> {
    let mut seen = HashSet::new();
    for w in emotions {
        if !seen.insert((w.register, w.surface.as_str())) {
            return Err(LexiconError::rule(
                "duplicate emotion word",
                format!("`{}` appears twice among {} words", w.surface, w.register),
            ));
        }
    }
    Ok(())
}

fn validate_templates(templates: &[Template]) -> Result<(), LexiconError> {
    if templates.is_empty() {
        return Err(LexiconError::rule("empty template list", "at least one template is required"));
    }
    let mut seen = HashSet::new();
    for t in templates {
        if t.id == 0 {
            return Err(LexiconError::rule("template id", "template ids start at 1"));
        }
        if !seen.insert(t.id) {
            return Err(LexiconError::rule("duplicate template id", t.id.to_string()));
        }
    }
    Ok(())
}

fn render_persons(persons: &[PersonTerm]) -> String {
    persons
        .iter()
        .map(|p| {
            format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                p.surface,
                p.subject_form,
                p.object_form,
                p.gender,
                p.race,
                p.kind,
                p.pair_id.as_deref().unwrap_or("")
            )
        })
        .collect()
}

fn render_emotions(emotions: &[EmotionWord]) -> String {
    emotions
        .iter()
        .map(|w| format!("{}\t{}\t{}\n", w.surface, w.emotion, w.register))
        .collect()
}

fn render_templates(templates: &[Template]) -> String {
    templates
        .iter()
        .map(|t| {
            format!(
                "{}\t{}\t{}\t{}\n",
                t.id,
                t.emotion_register.map_or("none", Register::as_str),
                t.person_role,
                t.pattern
            )
        })
        .collect()
}
