//! Output files of an analysis run and the plain-text report.
//!
//! CSV numbers carry 6 decimals (p-values and thresholds in scientific
//! notation), JSON keeps full precision, and the text tables use 3 decimals.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::audit::{group_tables, AnalysisRun, Diagnostic, PlotSeries, RunInfo};
use crate::error::Error;
use crate::numfmt::{fixed6, sci6, table3};
use crate::stats::{BiasGroup, BoxStats, GroupTable, SystemBiasSummary, TestResult};

pub const RUN_FILE: &str = "run.json";
pub const SUMMARY_STEM: &str = "summary";
pub const GROUPS_STEM: &str = "groups";
pub const PLOT_STEM: &str = "plot_data";
pub const DIAGNOSTICS_FILE: &str = "diagnostics.json";
pub const REPORT_FILE: &str = "report.txt";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Flat per-system row of `summary.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct SummaryRow {
    system: String,
    task: String,
    dimension: String,
    n: usize,
    mean_delta: String,
    sd_delta: String,
    t: String,
    df: usize,
    p: String,
    alpha: String,
    significant: bool,
    group: String,
    avg_delta_pos: String,
    avg_delta_neg: String,
    delta_min: String,
    delta_max: String,
    delta_spread: String,
    q1: String,
    median: String,
    q3: String,
    whisker_low: String,
    whisker_high: String,
}

impl From<&SystemBiasSummary> for SummaryRow {
    fn from(s: &SystemBiasSummary) -> Self {
        let f = |x: f64| fixed6(Some(x));
        Self {
            system: s.system_id.clone(),
            task: s.task.to_string(),
            dimension: s.dimension.to_string(),
            n: s.test.n,
            mean_delta: f(s.test.mean_delta),
            sd_delta: f(s.test.sd_delta),
            t: f(s.test.t_statistic),
            df: s.test.degrees_of_freedom,
            p: sci6(s.test.p_value),
            alpha: sci6(s.test.alpha),
            significant: s.test.significant,
            group: s.group.to_string(),
            avg_delta_pos: fixed6(s.avg_delta_pos),
            avg_delta_neg: fixed6(s.avg_delta_neg),
            delta_min: f(s.delta_min),
            delta_max: f(s.delta_max),
            delta_spread: f(s.delta_spread),
            q1: f(s.box_stats.q1),
            median: f(s.box_stats.median),
            q3: f(s.box_stats.q3),
            whisker_low: f(s.box_stats.whisker_low),
            whisker_high: f(s.box_stats.whisker_high),
        }
    }
}

impl TryFrom<SummaryRow> for SystemBiasSummary {
    type Error = String;

    fn try_from(r: SummaryRow) -> Result<Self, Self::Error> {
        let num = |name: &str, v: &str| -> Result<f64, String> {
            v.parse::<f64>().map_err(|_| format!("{}: bad {name} `{v}`", r.system))
        };
        let opt = |name: &str, v: &str| -> Result<Option<f64>, String> {
            if v.is_empty() {
                Ok(None)
            } else {
                num(name, v).map(Some)
            }
        };
        Ok(SystemBiasSummary {
            system_id: r.system.clone(),
            task: r.task.parse()?,
            dimension: r.dimension.parse()?,
            test: TestResult {
                n: r.n,
                mean_delta: num("mean_delta", &r.mean_delta)?,
                sd_delta: num("sd_delta", &r.sd_delta)?,
                t_statistic: num("t", &r.t)?,
                degrees_of_freedom: r.df,
                p_value: num("p", &r.p)?,
                alpha: num("alpha", &r.alpha)?,
                significant: r.significant,
            },
            group: r.group.parse()?,
            avg_delta_pos: opt("avg_delta_pos", &r.avg_delta_pos)?,
            avg_delta_neg: opt("avg_delta_neg", &r.avg_delta_neg)?,
            delta_min: num("delta_min", &r.delta_min)?,
            delta_max: num("delta_max", &r.delta_max)?,
            delta_spread: num("delta_spread", &r.delta_spread)?,
            box_stats: BoxStats {
                q1: num("q1", &r.q1)?,
                median: num("median", &r.median)?,
                q3: num("q3", &r.q3)?,
                whisker_low: num("whisker_low", &r.whisker_low)?,
                whisker_high: num("whisker_high", &r.whisker_high)?,
            },
        })
    }
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>, Error> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(file))
}

fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<(), Error> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn write_summary_csv(path: &Path, summaries: &[SystemBiasSummary]) -> Result<(), Error> {
    let mut w = csv_writer(path)?;
    for s in summaries {
        w.serialize(SummaryRow::from(s))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_summary_csv(path: &Path) -> Result<Vec<SystemBiasSummary>, Error> {
    let mut rdr = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for row in rdr.deserialize::<SummaryRow>() {
        out.push(SystemBiasSummary::try_from(row?).map_err(|e| Error::Validation(format!("{}: {e}", path.display())))?);
    }
    Ok(out)
}

pub fn write_groups_csv(path: &Path, tables: &[GroupTable]) -> Result<(), Error> {
    let mut w = csv_writer(path)?;
    w.write_record(["task", "dimension", "group", "label", "count", "mean_avg_delta_pos", "mean_avg_delta_neg"])?;
    for t in tables {
        for row in t.rows.iter().chain(std::iter::once(&t.all)) {
            let (key, label) = match row.group {
                Some(g) => (g.as_str().to_string(), g.label(t.dimension)),
                None => ("all".to_string(), "All".to_string()),
            };
            w.write_record([
                t.task.as_str(),
                t.dimension.as_str(),
                &key,
                &label,
                &row.count.to_string(),
                &fixed6(row.mean_avg_delta_pos),
                &fixed6(row.mean_avg_delta_neg),
            ])?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_plot_csv(path: &Path, plots: &[PlotSeries]) -> Result<(), Error> {
    let mut w = csv_writer(path)?;
    w.write_record(["system", "task", "dimension", "group", "unit_id", "delta"])?;
    for p in plots {
        for (unit, delta) in p.unit_ids.iter().zip(&p.deltas) {
            w.write_record([
                p.system_id.as_str(),
                p.task.as_str(),
                p.dimension.as_str(),
                p.group.as_str(),
                unit,
                &fixed6(Some(*delta)),
            ])?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn ensure_dir(dir: &Path) -> Result<(), Error> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Writes every output of a run; returns the paths written.
pub fn write_run(run: &AnalysisRun, out: &Path, formats: &[OutputFormat]) -> Result<Vec<PathBuf>, Error> {
    ensure_dir(out)?;
    let mut written = Vec::new();
    let mut put = |name: String| {
        let p = out.join(name);
        written.push(p.clone());
        p
    };
    write_json(&put(RUN_FILE.into()), &run.info)?;
    for f in formats {
        match f {
            OutputFormat::Csv => {
                write_summary_csv(&put(format!("{SUMMARY_STEM}.csv")), &run.summaries)?;
                write_groups_csv(&put(format!("{GROUPS_STEM}.csv")), &run.tables)?;
                write_plot_csv(&put(format!("{PLOT_STEM}.csv")), &run.plots)?;
            }
            OutputFormat::Json => {
                write_json(&put(format!("{SUMMARY_STEM}.json")), &run.summaries)?;
                write_json(&put(format!("{GROUPS_STEM}.json")), &run.tables)?;
                let plot_json: Vec<PlotJson<'_>> = run
                    .plots
                    .iter()
                    .map(|p| PlotJson {
                        series: p,
                        box_stats: run
                            .summaries
                            .iter()
                            .find(|s| s.system_id == p.system_id && s.task == p.task && s.dimension == p.dimension)
                            .map(|s| s.box_stats),
                    })
                    .collect();
                write_json(&put(format!("{PLOT_STEM}.json")), &plot_json)?;
            }
        }
    }
    write_json(&put(DIAGNOSTICS_FILE.into()), &run.diagnostics)?;
    let report = render_report(&run.info, &run.summaries, &run.tables);
    let p = put(REPORT_FILE.into());
    fs::write(&p, report).map_err(|e| Error::io(&p, e))?;
    Ok(written)
}

#[derive(Serialize)]
struct PlotJson<'a> {
    #[serde(flatten)]
    series: &'a PlotSeries,
    #[serde(rename = "box")]
    box_stats: Option<BoxStats>,
}

/// Re-renders group tables and the text report from a saved run.
pub fn rerender(from: &Path, out: &Path, formats: &[OutputFormat]) -> Result<Vec<PathBuf>, Error> {
    let run_path = from.join(RUN_FILE);
    let info: RunInfo = serde_json::from_str(&fs::read_to_string(&run_path).map_err(|e| Error::io(&run_path, e))?)?;
    let json = from.join(format!("{SUMMARY_STEM}.json"));
    let csv = from.join(format!("{SUMMARY_STEM}.csv"));
    let summaries: Vec<SystemBiasSummary> = if json.is_file() {
        serde_json::from_str(&fs::read_to_string(&json).map_err(|e| Error::io(&json, e))?)?
    } else if csv.is_file() {
        read_summary_csv(&csv)?
    } else {
        return Err(Error::io(
            &json,
            std::io::Error::new(std::io::ErrorKind::NotFound, "no summary.json or summary.csv"),
        ));
    };
    let tables = group_tables(&summaries)?;
    ensure_dir(out)?;
    let mut written = Vec::new();
    for f in formats {
        let p = match f {
            OutputFormat::Csv => {
                let p = out.join(format!("{GROUPS_STEM}.csv"));
                write_groups_csv(&p, &tables)?;
                p
            }
            OutputFormat::Json => {
                let p = out.join(format!("{GROUPS_STEM}.json"));
                write_json(&p, &tables)?;
                p
            }
        };
        written.push(p);
    }
    let p = out.join(REPORT_FILE);
    fs::write(&p, render_report(&info, &summaries, &tables)).map_err(|e| Error::io(&p, e))?;
    written.push(p);
    Ok(written)
}

/// Plain-text report: run header, one group table per task and dimension,
/// then one line per system.
pub fn render_report(info: &RunInfo, summaries: &[SystemBiasSummary], tables: &[GroupTable]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Bias audit report");
    let _ = writeln!(s, "corpus fingerprint: {}", info.corpus_fingerprint);
    let _ = writeln!(s, "subset: {}", info.subset.as_str());
    let _ = writeln!(s, "alpha: {}", info.alpha);
    let _ = writeln!(s, "corrections: {}", info.corrections);
    let _ = writeln!(
        s,
        "threshold: {}/{} = {}",
        info.alpha,
        info.corrections,
        sci6(info.threshold)
    );
    let _ = writeln!(s, "systems: {}", info.systems);

    for t in tables {
        let (l, r) = t.dimension.side_labels();
        let _ = writeln!(s);
        let _ = writeln!(s, "{} bias: {}", capitalize(t.dimension.as_str()), t.task);
        let _ = writeln!(
            s,
            "  {:<24} {:>6}  {:>8}  {:>8}",
            "Bias group",
            "#Subm.",
            format!("{l}↑–{r}↓"),
            format!("{l}↓–{r}↑")
        );
        for row in t.rows.iter().chain(std::iter::once(&t.all)) {
            let label = row.group.map_or_else(|| "All".to_string(), |g| g.label(t.dimension));
            let _ = writeln!(
                s,
                "  {:<24} {:>6}  {:>8}  {:>8}",
                label,
                row.count,
                table3(row.mean_avg_delta_pos),
                table3(row.mean_avg_delta_neg)
            );
        }
    }

    if !summaries.is_empty() {
        let _ = writeln!(s);
        let _ = writeln!(s, "Systems");
        for x in summaries {
            let _ = writeln!(
                s,
                "  {} {} {}: n={} mean={} p={} group={} spread={}",
                x.system_id,
                x.task,
                x.dimension,
                x.test.n,
                table3(Some(x.test.mean_delta)),
                sci6(x.test.p_value),
                group_tag(x.group, x),
                table3(Some(x.delta_spread))
            );
        }
    }
    s
}

fn group_tag(g: BiasGroup, s: &SystemBiasSummary) -> String {
    g.label(s.dimension)
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    c.next()
        .map(|f| f.to_uppercase().collect::<String>() + c.as_str())
        .unwrap_or_default()
}

/// Diagnostics as a JSON array, one line.
pub fn diagnostics_json(diags: &[Diagnostic]) -> String {
    serde_json::to_string(diags).expect("diagnostics serialize")
}
