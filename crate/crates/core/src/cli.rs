//! Command-line front end: `generate`, `synth`, `validate`, `analyze` and
//! `report`.
//!
//! Exit codes: 0 success, 1 validation failure, 2 I/O failure.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::audit::{analyze_predictions, load_prediction_dir, validate_all, AnalysisConfig, Diagnostic, DEFAULT_ALPHA};
use crate::corpus::Corpus;
use crate::error::Error;
use crate::lexicon::{LexiconPaths, Lexicons};
use crate::pairing::{build_gender_comparisons, build_race_comparisons, write_units_jsonl, SubsetKind};
use crate::predictions::{prediction_filename, Task};
use crate::report::{diagnostics_json, rerender, write_run, OutputFormat};
use crate::synth::{synth_predictions, BiasSpec};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VALIDATION: u8 = 1;
pub const EXIT_IO: u8 = 2;

pub const CORPUS_FILE: &str = "corpus.csv";

#[derive(Debug, Parser)]
#[command(name = "eec", version, about = "Template corpus generation and paired bias analysis for sentiment systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the corpus file.
    Generate(GenerateArgs),
    /// Check lexicons, the corpus and prediction files.
    Validate(ValidateArgs),
    /// Run the bias analysis over a directory of prediction files.
    Analyze(AnalyzeArgs),
    /// Write synthetic prediction files with injected bias.
    Synth(SynthArgs),
    /// Re-render group tables and the text report from saved results.
    Report(ReportArgs),
}

#[derive(Debug, Args, Default, Clone)]
pub struct LexiconArgs {
    /// Directory holding persons.tsv, emotions.tsv and/or templates.tsv.
    #[arg(long, value_name = "DIR")]
    pub lexicons: Option<PathBuf>,
    /// Person lexicon file (overrides --lexicons).
    #[arg(long, value_name = "FILE")]
    pub persons: Option<PathBuf>,
    /// Emotion word file (overrides --lexicons).
    #[arg(long, value_name = "FILE")]
    pub emotions: Option<PathBuf>,
    /// Template file (overrides --lexicons).
    #[arg(long, value_name = "FILE")]
    pub templates: Option<PathBuf>,
}

impl LexiconArgs {
    pub fn load(&self) -> Result<Lexicons, Error> {
        let from_dir = |name: &str| {
            self.lexicons
                .as_ref()
                .map(|d| d.join(name))
                .filter(|p| p.is_file())
        };
        if let Some(dir) = &self.lexicons {
            if !dir.is_dir() {
                return Err(Error::io(
                    dir,
                    std::io::Error::new(std::io::ErrorKind::NotFound, "lexicon directory not found"),
                ));
            }
        }
        let persons = self.persons.clone().or_else(|| from_dir(crate::lexicon::PERSONS_FILE));
        let emotions = self.emotions.clone().or_else(|| from_dir(crate::lexicon::EMOTIONS_FILE));
        let templates = self.templates.clone().or_else(|| from_dir(crate::lexicon::TEMPLATES_FILE));
        Lexicons::load(&LexiconPaths {
            persons: persons.as_deref(),
            emotions: emotions.as_deref(),
            templates: templates.as_deref(),
        })
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub lexicons: LexiconArgs,
    /// Output directory; the corpus is written to DIR/corpus.csv.
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,
    /// Also dump the comparison units as JSON lines.
    #[arg(long)]
    pub units: bool,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub lexicons: LexiconArgs,
    /// Existing corpus file to check against the lexicons.
    #[arg(long, value_name = "FILE")]
    pub corpus: Option<PathBuf>,
    #[arg(long, value_name = "DIR")]
    pub predictions: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TaskArg {
    Anger,
    Fear,
    Joy,
    Sadness,
    Valence,
    All,
}

impl TaskArg {
    pub fn tasks(self) -> Vec<Task> {
        match self {
            TaskArg::Anger => vec![Task::Anger],
            TaskArg::Fear => vec![Task::Fear],
            TaskArg::Joy => vec![Task::Joy],
            TaskArg::Sadness => vec![Task::Sadness],
            TaskArg::Valence => vec![Task::Valence],
            TaskArg::All => Task::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SubsetArg {
    Full,
    Neutral,
    EmotionMatched,
}

impl From<SubsetArg> for SubsetKind {
    fn from(s: SubsetArg) -> Self {
        match s {
            SubsetArg::Full => SubsetKind::Full,
            SubsetArg::Neutral => SubsetKind::Neutral,
            SubsetArg::EmotionMatched => SubsetKind::EmotionMatched,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

fn formats(args: &[FormatArg]) -> Vec<OutputFormat> {
    let mut f: Vec<OutputFormat> = args
        .iter()
        .map(|a| match a {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        })
        .collect();
    if f.is_empty() {
        f.push(OutputFormat::Csv);
    }
    f.sort();
    f.dedup();
    f
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub lexicons: LexiconArgs,
    #[arg(long, value_name = "DIR")]
    pub predictions: PathBuf,
    #[arg(long, value_enum, default_value = "all")]
    pub task: TaskArg,
    #[arg(long, value_enum, default_value = "full")]
    pub subset: SubsetArg,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
    /// Bonferroni denominator; default is (prediction files) x 2.
    #[arg(long, value_name = "N")]
    pub corrections: Option<usize>,
    #[arg(long, value_name = "DIR", default_value = "results")]
    pub out: PathBuf,
    /// Output format; repeat or comma-separate for both.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub format: Vec<FormatArg>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[command(flatten)]
    pub lexicons: LexiconArgs,
    #[arg(long, value_name = "DIR", default_value = "predictions")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "all")]
    pub task: TaskArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub gender_shift: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub race_shift: f64,
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[arg(long, default_value = "synth")]
    pub system: String,
    /// Number of systems; system i is named SYSTEM-iii and seeded SEED + i.
    #[arg(long, default_value_t = 1)]
    pub count: usize,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Directory of a previous `analyze` run.
    #[arg(long, value_name = "DIR", default_value = "results")]
    pub from: PathBuf,
    /// Where to write; defaults to --from.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, value_delimiter = ',')]
    pub format: Vec<FormatArg>,
}

fn exit_for(e: &Error) -> u8 {
    if e.is_io() {
        EXIT_IO
    } else {
        EXIT_VALIDATION
    }
}

/// Runs one command and returns the process exit code.
pub fn run(cli: Cli) -> u8 {
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(&a),
        Command::Validate(a) => cmd_validate(&a),
        Command::Analyze(a) => cmd_analyze(&a),
        Command::Synth(a) => cmd_synth(&a),
        Command::Report(a) => cmd_report(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_for(&e)
        }
    }
}

fn create_dir(dir: &Path) -> Result<(), Error> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<fs::File>) -> Result<(), Error>) -> Result<(), Error> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    f(&mut w)?;
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<u8, Error> {
    let lex = args.lexicons.load()?;
    let corpus = Corpus::generate(&lex);
    create_dir(&args.out)?;
    let path = args.out.join(CORPUS_FILE);
    write_file(&path, |w| Ok(corpus.write_csv(w)?))?;
    println!("wrote {} sentences to {}", corpus.len(), path.display());
    if args.units {
        for (name, units) in [
            ("gender_units.jsonl", build_gender_comparisons(&corpus)?),
            ("race_units.jsonl", build_race_comparisons(&corpus)?),
        ] {
            let p = args.out.join(name);
            write_file(&p, |w| write_units_jsonl(&units, w).map_err(|e| Error::io(&p, e)))?;
            println!("wrote {} units to {}", units.len(), p.display());
        }
    }
    Ok(EXIT_OK)
}

pub fn cmd_validate(args: &ValidateArgs) -> Result<u8, Error> {
    let lex = match args.lexicons.load() {
        Ok(l) => l,
        Err(e) if e.is_io() => return Err(e),
        Err(e) => {
            println!("{}", diagnostics_json(&[Diagnostic::new("lexicon", "lexicons", e.to_string())]));
            return Ok(EXIT_VALIDATION);
        }
    };
    let corpus = match &args.corpus {
        Some(path) => {
            let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
            match Corpus::read_csv(std::io::BufReader::new(file), &lex) {
                Ok(c) => c,
                Err(crate::error::CorpusFileError::Io(e)) => return Err(Error::io(path, e)),
                Err(e) => {
                    let d = Diagnostic::new("corpus_file", path.display().to_string(), e.to_string());
                    println!("{}", diagnostics_json(&[d]));
                    return Ok(EXIT_VALIDATION);
                }
            }
        }
        None => Corpus::generate(&lex),
    };
    let diags = validate_all(&corpus, args.predictions.as_deref())?;
    println!("{}", diagnostics_json(&diags));
    Ok(if diags.is_empty() { EXIT_OK } else { EXIT_VALIDATION })
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<u8, Error> {
    let lex = args.lexicons.load()?;
    let corpus = Corpus::generate(&lex);
    if !args.predictions.is_dir() {
        return Err(Error::io(
            &args.predictions,
            std::io::Error::new(std::io::ErrorKind::NotFound, "predictions directory not found"),
        ));
    }
    let tasks = args.task.tasks();
    let (sets, mut diags) = load_prediction_dir(&args.predictions, &corpus, Some(&tasks))?;
    for d in &diags {
        eprintln!("skipped {}: {}", d.source, d.message);
    }
    let config = AnalysisConfig {
        alpha: args.alpha,
        corrections: args.corrections,
        subset: args.subset.into(),
        ..AnalysisConfig::default()
    };
    let mut run = analyze_predictions(&corpus, &sets, &config)?;
    diags.append(&mut run.diagnostics);
    run.diagnostics = diags;
    let written = write_run(&run, &args.out, &formats(&args.format))?;
    println!(
        "analyzed {} prediction set(s); threshold {}/{} = {}",
        run.info.systems, run.info.alpha, run.info.corrections, crate::numfmt::sci6(run.info.threshold)
    );
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(EXIT_OK)
}

pub fn cmd_synth(args: &SynthArgs) -> Result<u8, Error> {
    let lex = args.lexicons.load()?;
    let corpus = Corpus::generate(&lex);
    create_dir(&args.out)?;
    let base = BiasSpec {
        gender_shift: args.gender_shift,
        race_shift: args.race_shift,
        noise_sd: args.noise,
        ..BiasSpec::default()
    };
    for i in 0..args.count {
        let system = if args.count == 1 {
            args.system.clone()
        } else {
            format!("{}-{i:03}", args.system)
        };
        let spec = BiasSpec {
            seed: args.seed.wrapping_add(i as u64),
            ..base.clone()
        };
        for task in args.task.tasks() {
            let set = synth_predictions(&corpus, &spec, &system, task)?;
            let path = args.out.join(prediction_filename(&system, task));
            write_file(&path, |w| Ok(set.write_csv(&corpus, w)?))?;
        }
    }
    println!(
        "wrote {} system(s) x {} task(s) to {}",
        args.count,
        args.task.tasks().len(),
        args.out.display()
    );
    Ok(EXIT_OK)
}

pub fn cmd_report(args: &ReportArgs) -> Result<u8, Error> {
    let out = args.out.clone().unwrap_or_else(|| args.from.clone());
    for p in rerender(&args.from, &out, &formats(&args.format))? {
        println!("wrote {}", p.display());
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flags() {
        let cli = Cli::try_parse_from([
            "eec",
            "analyze",
            "--predictions",
            "p",
            "--alpha",
            "0.05",
            "--corrections",
            "438",
            "--subset",
            "emotion-matched",
            "--format",
            "csv,json",
        ])
        .unwrap();
        match cli.command {
            Command::Analyze(a) => {
                assert_eq!(a.corrections, Some(438));
                assert_eq!(a.subset, SubsetArg::EmotionMatched);
                assert_eq!(formats(&a.format), [OutputFormat::Csv, OutputFormat::Json]);
            }
            other => panic!("{other:?}"),
        }
        let cli = Cli::try_parse_from(["eec", "synth", "--gender-shift", "-0.05", "--seed", "42"]).unwrap();
        match cli.command {
            Command::Synth(s) => assert_eq!((s.gender_shift, s.seed), (-0.05, 42)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_task_rejected() {
        assert!(Cli::try_parse_from(["eec", "synth", "--task", "surprise"]).is_err());
    }
}
