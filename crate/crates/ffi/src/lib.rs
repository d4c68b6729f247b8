//! C ABI over `eec-core`.
//!
//! Every function returns an [`EecStatus`]; values come back through out
//! pointers. On failure the message is available from [`eec_last_error`] on
//! the same thread. No panic crosses the boundary: a caught panic becomes
//! `EEC_STATUS_PANIC`.
//!
//! Handles (`EecCorpus`, `EecAnalysis`) are owned by the caller and released
//! with the matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::ptr;

use eec_core::audit::{analyze_predictions, AnalysisConfig, AnalysisRun};
use eec_core::corpus::Corpus;
use eec_core::lexicon::Lexicons;
use eec_core::pairing::Dimension;
use eec_core::predictions::{PredictionSet, Task};
use eec_core::stats::{self, BiasGroup, BoxStats, SystemBiasSummary, TestResult};
use eec_core::synth::{synth_predictions, BiasSpec};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EecStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Io = 3,
    Validation = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EecTask {
    Anger = 0,
    Fear = 1,
    Joy = 2,
    Sadness = 3,
    Valence = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EecDimension {
    Gender = 0,
    Race = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EecGroup {
    NotSignificant = 0,
    /// Female (or African American) scored significantly higher.
    LeftHigher = 1,
    RightHigher = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EecBoxStats {
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EecTestResult {
    pub n: usize,
    pub mean_delta: f64,
    pub sd_delta: f64,
    /// +/-infinity when every delta is the same non-zero value.
    pub t_statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
    pub alpha: f64,
    pub significant: bool,
}

/// One system along one dimension. `avg_delta_pos` is NaN when
/// `has_avg_delta_pos` is false; likewise for the negative side.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EecSummary {
    pub task: EecTask,
    pub dimension: EecDimension,
    pub group: EecGroup,
    pub test: EecTestResult,
    pub has_avg_delta_pos: bool,
    pub avg_delta_pos: f64,
    pub has_avg_delta_neg: bool,
    pub avg_delta_neg: f64,
    pub delta_min: f64,
    pub delta_max: f64,
    pub delta_spread: f64,
    pub box_stats: EecBoxStats,
}

/// Opaque corpus handle.
pub struct EecCorpus {
    corpus: Corpus,
}

/// Opaque analysis result handle.
pub struct EecAnalysis {
    run: AnalysisRun,
    system_ids: Vec<CString>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(EecStatus, String);

impl Failure {
    fn null(what: &str) -> Self {
        Failure(EecStatus::NullPointer, format!("{what} is null"))
    }

    fn invalid(message: impl Into<String>) -> Self {
        Failure(EecStatus::InvalidArgument, message.into())
    }
}

impl From<eec_core::Error> for Failure {
    fn from(e: eec_core::Error) -> Self {
        let status = if e.is_io() { EecStatus::Io } else { EecStatus::Validation };
        Failure(status, e.to_string())
    }
}

impl From<eec_core::error::ContractError> for Failure {
    fn from(e: eec_core::error::ContractError) -> Self {
        Failure::invalid(e.to_string())
    }
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> EecStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            EecStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("internal panic: {message}"));
            EecStatus::Panic
        }
    }
}

/// # Safety
/// `p` is null or points to a NUL-terminated string.
unsafe fn path_arg(p: *const c_char, what: &str) -> Result<PathBuf, Failure> {
    Ok(PathBuf::from(str_arg(p, what)?))
}

/// # Safety
/// `p` is null or points to a NUL-terminated string.
unsafe fn str_arg(p: *const c_char, what: &str) -> Result<String, Failure> {
    if p.is_null() {
        return Err(Failure::null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map(str::to_owned)
        .map_err(|_| Failure::invalid(format!("{what} is not UTF-8")))
}

/// # Safety
/// `p` is null or valid for writes of `T`.
unsafe fn write_out<T>(p: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        return Err(Failure::null(what));
    }
    p.write(value);
    Ok(())
}

/// # Safety
/// `data` is null only if `len` is 0; otherwise it points to `len` doubles.
unsafe fn slice_arg<'a>(data: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(Failure::null(what));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

impl From<EecTask> for Task {
    fn from(t: EecTask) -> Self {
        match t {
            EecTask::Anger => Task::Anger,
            EecTask::Fear => Task::Fear,
            EecTask::Joy => Task::Joy,
            EecTask::Sadness => Task::Sadness,
            EecTask::Valence => Task::Valence,
        }
    }
}

impl From<Task> for EecTask {
    fn from(t: Task) -> Self {
        match t {
            Task::Anger => EecTask::Anger,
            Task::Fear => EecTask::Fear,
            Task::Joy => EecTask::Joy,
            Task::Sadness => EecTask::Sadness,
            Task::Valence => EecTask::Valence,
        }
    }
}

impl From<BoxStats> for EecBoxStats {
    fn from(b: BoxStats) -> Self {
        Self {
            q1: b.q1,
            median: b.median,
            q3: b.q3,
            whisker_low: b.whisker_low,
            whisker_high: b.whisker_high,
        }
    }
}

impl From<TestResult> for EecTestResult {
    fn from(t: TestResult) -> Self {
        Self {
            n: t.n,
            mean_delta: t.mean_delta,
            sd_delta: t.sd_delta,
            t_statistic: t.t_statistic,
            degrees_of_freedom: t.degrees_of_freedom,
            p_value: t.p_value,
            alpha: t.alpha,
            significant: t.significant,
        }
    }
}

impl From<&SystemBiasSummary> for EecSummary {
    fn from(s: &SystemBiasSummary) -> Self {
        Self {
            task: s.task.into(),
            dimension: match s.dimension {
                Dimension::Gender => EecDimension::Gender,
                Dimension::Race => EecDimension::Race,
            },
            group: match s.group {
                BiasGroup::NotSignificant => EecGroup::NotSignificant,
                BiasGroup::LeftHigher => EecGroup::LeftHigher,
                BiasGroup::RightHigher => EecGroup::RightHigher,
            },
            test: s.test.into(),
            has_avg_delta_pos: s.avg_delta_pos.is_some(),
            avg_delta_pos: s.avg_delta_pos.unwrap_or(f64::NAN),
            has_avg_delta_neg: s.avg_delta_neg.is_some(),
            avg_delta_neg: s.avg_delta_neg.unwrap_or(f64::NAN),
            delta_min: s.delta_min,
            delta_max: s.delta_max,
            delta_spread: s.delta_spread,
            box_stats: s.box_stats.into(),
        }
    }
}

/// Message of the last failed call on this thread, or NULL after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn eec_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn eec_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Two-tailed Student t p-value.
///
/// # Safety
/// `out` must be valid for writing one double.
#[no_mangle]
pub unsafe extern "C" fn eec_student_t_p(t: f64, df: f64, out: *mut f64) -> EecStatus {
    guard(|| write_out(out, stats::student_t_two_tailed_p(t, df)?, "out"))
}

/// alpha / n.
///
/// # Safety
/// `out` must be valid for writing one double.
#[no_mangle]
pub unsafe extern "C" fn eec_bonferroni(alpha: f64, n: usize, out: *mut f64) -> EecStatus {
    guard(|| {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Failure::invalid(format!("alpha must lie in (0, 1), got {alpha}")));
        }
        if n == 0 {
            return Err(Failure::invalid("number of assessments must be at least 1"));
        }
        write_out(out, stats::bonferroni_threshold(alpha, n), "out")
    })
}

/// Quartiles and 1.5 IQR whiskers.
///
/// # Safety
/// `values` points to `len` doubles; `out` is valid for writing.
#[no_mangle]
pub unsafe extern "C" fn eec_box_stats(values: *const f64, len: usize, out: *mut EecBoxStats) -> EecStatus {
    guard(|| {
        let v = slice_arg(values, len, "values")?;
        write_out(out, stats::box_stats(v)?.into(), "out")
    })
}

/// Paired t-test on the differences, compared against `alpha` as given.
///
/// # Safety
/// `deltas` points to `len` doubles; `out` is valid for writing.
#[no_mangle]
pub unsafe extern "C" fn eec_paired_t_test(
    deltas: *const f64,
    len: usize,
    alpha: f64,
    out: *mut EecTestResult,
) -> EecStatus {
    guard(|| {
        let d = slice_arg(deltas, len, "deltas")?;
        write_out(out, stats::paired_t_test(d, alpha)?.into(), "out")
    })
}

/// Corpus from the built-in lexicons.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn eec_corpus_new(out: *mut *mut EecCorpus) -> EecStatus {
    guard(|| {
        let handle = Box::new(EecCorpus {
            corpus: Corpus::generate(&Lexicons::builtin()),
        });
        write_out(out, Box::into_raw(handle), "out")
    })
}

/// Corpus from a directory with persons.tsv, emotions.tsv and/or
/// templates.tsv; missing files fall back to the built-in lists.
///
/// # Safety
/// `lexicon_dir` is a NUL-terminated path; `out` is valid for writing.
#[no_mangle]
pub unsafe extern "C" fn eec_corpus_load(lexicon_dir: *const c_char, out: *mut *mut EecCorpus) -> EecStatus {
    guard(|| {
        let dir = path_arg(lexicon_dir, "lexicon_dir")?;
        let lex = Lexicons::load_dir(&dir)?;
        let handle = Box::new(EecCorpus {
            corpus: Corpus::generate(&lex),
        });
        write_out(out, Box::into_raw(handle), "out")
    })
}

/// # Safety
/// `corpus` is null or a handle from `eec_corpus_new`/`eec_corpus_load` not
/// yet freed.
#[no_mangle]
pub unsafe extern "C" fn eec_corpus_free(corpus: *mut EecCorpus) {
    if !corpus.is_null() {
        drop(Box::from_raw(corpus));
    }
}

/// # Safety
/// `corpus` is a live handle; `out` is valid for writing.
#[no_mangle]
pub unsafe extern "C" fn eec_corpus_len(corpus: *const EecCorpus, out: *mut usize) -> EecStatus {
    guard(|| {
        let c = corpus.as_ref().ok_or_else(|| Failure::null("corpus"))?;
        write_out(out, c.corpus.len(), "out")
    })
}

/// Writes the corpus CSV to `path`.
///
/// # Safety
/// `corpus` is a live handle; `path` is a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn eec_corpus_write_csv(corpus: *const EecCorpus, path: *const c_char) -> EecStatus {
    guard(|| {
        let c = corpus.as_ref().ok_or_else(|| Failure::null("corpus"))?;
        let path = path_arg(path, "path")?;
        let file = std::fs::File::create(&path).map_err(|e| Failure(EecStatus::Io, format!("{}: {e}", path.display())))?;
        c.corpus
            .write_csv(std::io::BufWriter::new(file))
            .map_err(|e| Failure(EecStatus::Io, format!("{}: {e}", path.display())))
    })
}

/// Writes a synthetic prediction file `{dir}/{system_id}.{task}.csv`.
///
/// # Safety
/// `corpus` is a live handle; `dir` and `system_id` are NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn eec_synth_write(
    corpus: *const EecCorpus,
    dir: *const c_char,
    system_id: *const c_char,
    task: EecTask,
    gender_shift: f64,
    race_shift: f64,
    noise_sd: f64,
    seed: u64,
) -> EecStatus {
    guard(|| {
        let c = &corpus.as_ref().ok_or_else(|| Failure::null("corpus"))?.corpus;
        let dir = path_arg(dir, "dir")?;
        let system_id = str_arg(system_id, "system_id")?;
        let spec = BiasSpec {
            gender_shift,
            race_shift,
            noise_sd,
            seed,
            ..BiasSpec::default()
        };
        let set = synth_predictions(c, &spec, &system_id, task.into())?;
        let path = dir.join(eec_core::predictions::prediction_filename(&system_id, task.into()));
        let io = |e: &dyn std::fmt::Display| Failure(EecStatus::Io, format!("{}: {e}", path.display()));
        let file = std::fs::File::create(&path).map_err(|e| io(&e))?;
        set.write_csv(c, std::io::BufWriter::new(file)).map_err(|e| io(&e))
    })
}

fn load_set(path: &Path, corpus: &Corpus) -> Result<PredictionSet, Failure> {
    Ok(PredictionSet::from_path(path, corpus)?)
}

/// Analyzes prediction files named `{system_id}.{task}.csv` along both
/// dimensions over the full corpus. `corrections` = 0 uses the default
/// Bonferroni denominator (files x 2).
///
/// # Safety
/// `corpus` is a live handle; `paths` points to `n_paths` NUL-terminated
/// strings; `out` is valid for writing.
#[no_mangle]
pub unsafe extern "C" fn eec_analyze_files(
    corpus: *const EecCorpus,
    paths: *const *const c_char,
    n_paths: usize,
    alpha: f64,
    corrections: usize,
    out: *mut *mut EecAnalysis,
) -> EecStatus {
    guard(|| {
        let c = &corpus.as_ref().ok_or_else(|| Failure::null("corpus"))?.corpus;
        if n_paths == 0 {
            return Err(Failure::invalid("no prediction files given"));
        }
        if paths.is_null() {
            return Err(Failure::null("paths"));
        }
        let mut sets = Vec::with_capacity(n_paths);
        for i in 0..n_paths {
            let p = path_arg(*paths.add(i), "paths[i]")?;
            sets.push(load_set(&p, c)?);
        }
        let config = AnalysisConfig {
            alpha,
            corrections: (corrections > 0).then_some(corrections),
            ..AnalysisConfig::default()
        };
        let run = analyze_predictions(c, &sets, &config)?;
        let system_ids = run
            .summaries
            .iter()
            .map(|s| CString::new(s.system_id.replace('\0', " ")).unwrap_or_default())
            .collect();
        write_out(out, Box::into_raw(Box::new(EecAnalysis { run, system_ids })), "out")
    })
}

/// # Safety
/// `analysis` is null or a live handle from `eec_analyze_files`.
#[no_mangle]
pub unsafe extern "C" fn eec_analysis_free(analysis: *mut EecAnalysis) {
    if !analysis.is_null() {
        drop(Box::from_raw(analysis));
    }
}

/// Number of summaries (files x dimensions), sorted by task, dimension and
/// system id.
///
/// # Safety
/// `analysis` is a live handle; `out` is valid for writing.
#[no_mangle]
pub unsafe extern "C" fn eec_analysis_len(analysis: *const EecAnalysis, out: *mut usize) -> EecStatus {
    guard(|| {
        let a = analysis.as_ref().ok_or_else(|| Failure::null("analysis"))?;
        write_out(out, a.run.summaries.len(), "out")
    })
}

/// The Bonferroni-corrected threshold that was applied.
///
/// # Safety
/// `analysis` is a live handle; `out` is valid for writing.
#[no_mangle]
pub unsafe extern "C" fn eec_analysis_threshold(analysis: *const EecAnalysis, out: *mut f64) -> EecStatus {
    guard(|| {
        let a = analysis.as_ref().ok_or_else(|| Failure::null("analysis"))?;
        write_out(out, a.run.info.threshold, "out")
    })
}

/// Summary `index`; `system_id` (optional) receives a string owned by the
/// handle.
///
/// # Safety
/// `analysis` is a live handle; `out` is valid for writing; `system_id` is
/// null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn eec_analysis_summary(
    analysis: *const EecAnalysis,
    index: usize,
    out: *mut EecSummary,
    system_id: *mut *const c_char,
) -> EecStatus {
    guard(|| {
        let a = analysis.as_ref().ok_or_else(|| Failure::null("analysis"))?;
        let s = a.run.summaries.get(index).ok_or_else(|| {
            Failure::invalid(format!("index {index} out of range ({} summaries)", a.run.summaries.len()))
        })?;
        write_out(out, EecSummary::from(s), "out")?;
        if !system_id.is_null() {
            system_id.write(a.system_ids[index].as_ptr());
        }
        Ok(())
    })
}
