//! Synthetic scorers with a known, injected bias.
//!
//! score = base + gender_shift (female terms) + race_shift (African American
//! names) + N(0, noise_sd), clamped to [0, 1]. The base depends on the
//! sentence's emotion word, or is `neutral_base` for templates without one.
//!
//! Noise comes from ChaCha8 seeded with `seed` (via `seed_from_u64`), drawn
//! once per sentence in corpus order, so fixtures are identical across
//! platforms.

use std::collections::{BTreeMap, HashMap};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::ContractError;
use crate::lexicon::{Emotion, Gender, Race, Register};
use crate::predictions::{PredictionSet, Task};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasSpec {
    pub gender_shift: f64,
    pub race_shift: f64,
    pub noise_sd: f64,
    pub base_by_emotion: BTreeMap<Emotion, RegisterBases>,
    pub neutral_base: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegisterBases {
    pub state: f64,
    pub situation: f64,
}

impl RegisterBases {
    fn get(&self, register: Register) -> f64 {
        match register {
            Register::State => self.state,
            Register::Situation => self.situation,
        }
    }
}

impl Default for BiasSpec {
    /// Unbiased and noiseless, with bases inside [0.2, 0.8].
    fn default() -> Self {
        let bases = [
            (Emotion::Anger, 0.70, 0.62),
            (Emotion::Fear, 0.66, 0.58),
            (Emotion::Joy, 0.30, 0.36),
            (Emotion::Sadness, 0.64, 0.56),
        ];
        Self {
            gender_shift: 0.0,
            race_shift: 0.0,
            noise_sd: 0.0,
            base_by_emotion: bases
                .into_iter()
                .map(|(e, state, situation)| (e, RegisterBases { state, situation }))
                .collect(),
            neutral_base: 0.45,
            seed: 0,
        }
    }
}

impl BiasSpec {
    pub fn validate(&self) -> Result<(), ContractError> {
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        if !(self.noise_sd >= 0.0 && self.noise_sd.is_finite()) {
            return Err(ContractError::new(format!("noise_sd must be finite and >= 0, got {}", self.noise_sd)));
        }
        if !self.gender_shift.is_finite() || !self.race_shift.is_finite() {
            return Err(ContractError::new("shifts must be finite"));
        }
        if !unit(self.neutral_base) {
            return Err(ContractError::new(format!("neutral_base {} outside [0, 1]", self.neutral_base)));
        }
        for e in Emotion::ALL {
            let b = self
                .base_by_emotion
                .get(e)
                .ok_or_else(|| ContractError::new(format!("no base score for {e}")))?;
            if !unit(b.state) || !unit(b.situation) {
                return Err(ContractError::new(format!("base score for {e} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// Deterministic scores for every corpus sentence.
pub fn synth_predictions(
    corpus: &Corpus,
    spec: &BiasSpec,
    system_id: &str,
    task: Task,
) -> Result<PredictionSet, ContractError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let noise = (spec.noise_sd > 0.0)
        .then(|| Normal::new(0.0, spec.noise_sd).expect("noise_sd validated"));
    let mut scores = HashMap::with_capacity(corpus.len());
    for r in corpus.records() {
        let base = match corpus.emotion_word(r) {
            Some(w) => spec.base_by_emotion[&w.emotion].get(w.register),
            None => spec.neutral_base,
        };
        let mut score = base;
        if r.gender == Gender::Female {
            score += spec.gender_shift;
        }
        if r.race == Race::AfricanAmerican {
            score += spec.race_shift;
        }
        if let Some(n) = &noise {
            score += n.sample(&mut rng);
        }
        scores.insert(r.id.clone(), score.clamp(0.0, 1.0));
    }
    Ok(PredictionSet::from_trusted(system_id, task, scores))
}
