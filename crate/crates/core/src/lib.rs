//! Equity evaluation corpus toolkit.
//!
//! Generates the template corpus of gender- and race-varying sentences,
//! pairs sentences that differ only in the person slot, and tests each
//! system's predictions for consistent score differences with a paired
//! t-test under Bonferroni correction.
//!
//! ```
//! use eec_core::{corpus::Corpus, lexicon::Lexicons, pairing};
//!
//! let corpus = Corpus::generate(&Lexicons::builtin());
//! assert_eq!(corpus.len(), 8640);
//! assert_eq!(pairing::build_gender_comparisons(&corpus).unwrap().len(), 1584);
//! ```

pub mod audit;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod lexicon;
pub mod numfmt;
pub mod pairing;
pub mod predictions;
pub mod report;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
