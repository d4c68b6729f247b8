//! Per-system bias summaries and the per-group tables built from them.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::boxplot::{box_stats, BoxStats};
use super::ttest::{paired_t_test, TestResult};
use crate::error::ContractError;
use crate::pairing::{ComparisonUnit, Dimension};
use crate::predictions::{PredictionSet, Task};

/// Score difference for one comparison unit: mean left score minus mean
/// right score (female - male, or AA - EA).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairDelta {
    pub unit_id: String,
    pub dimension: Dimension,
    pub delta: f64,
}

fn side_mean(ids: &[String], preds: &PredictionSet) -> f64 {
    let sum: f64 = ids
        .iter()
        .map(|id| preds.score(id).expect("prediction sets are complete"))
        .sum();
    sum / ids.len() as f64
}

/// One delta per unit.
///
/// # Panics
/// If `preds` lacks a score for an id in `units`; validated prediction sets
/// cover the whole corpus.
pub fn compute_deltas(units: &[ComparisonUnit], preds: &PredictionSet) -> Vec<PairDelta> {
    units
        .iter()
        .map(|u| PairDelta {
            unit_id: u.id.clone(),
            dimension: u.dimension,
            delta: side_mean(&u.left_ids, preds) - side_mean(&u.right_ids, preds),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BiasGroup {
    NotSignificant,
    /// Significant, mean delta > 0 (F↑–M↓ or AA↑–EA↓).
    LeftHigher,
    /// Significant, mean delta < 0.
    RightHigher,
}

impl BiasGroup {
    pub const ALL: [BiasGroup; 3] = [BiasGroup::NotSignificant, BiasGroup::LeftHigher, BiasGroup::RightHigher];

    pub fn classify(test: &TestResult) -> Self {
        if !test.significant {
            BiasGroup::NotSignificant
        } else if test.mean_delta > 0.0 {
            BiasGroup::LeftHigher
        } else {
            BiasGroup::RightHigher
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BiasGroup::NotSignificant => "not_significant",
            BiasGroup::LeftHigher => "left_higher",
            BiasGroup::RightHigher => "right_higher",
        }
    }

    /// Row label in a dimension's own vocabulary, e.g. "F↑–M↓ significant".
    pub fn label(self, dimension: Dimension) -> String {
        let (l, r) = dimension.side_labels();
        match self {
            BiasGroup::NotSignificant => format!("{l}={r} not significant"),
            BiasGroup::LeftHigher => format!("{l}↑–{r}↓ significant"),
            BiasGroup::RightHigher => format!("{l}↓–{r}↑ significant"),
        }
    }
}

impl fmt::Display for BiasGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for BiasGroup {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BiasGroup::ALL
            .into_iter()
            .find(|g| g.as_str() == s.trim())
            .ok_or_else(|| format!("unknown bias group `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemBiasSummary {
    pub system_id: String,
    pub task: Task,
    pub dimension: Dimension,
    pub test: TestResult,
    pub group: BiasGroup,
    /// Mean of the positive deltas; `None` when there are none.
    pub avg_delta_pos: Option<f64>,
    /// Mean of the negative deltas; `None` when there are none.
    pub avg_delta_neg: Option<f64>,
    pub delta_min: f64,
    pub delta_max: f64,
    /// `delta_max - delta_min`.
    pub delta_spread: f64,
    #[serde(rename = "box")]
    pub box_stats: BoxStats,
}

fn mean_where(deltas: &[f64], keep: impl Fn(f64) -> bool) -> Option<f64> {
    let (sum, n) = deltas
        .iter()
        .filter(|&&d| keep(d))
        .fold((0.0, 0usize), |(s, n), &d| (s + d, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Fills every summary field from the raw deltas and their test.
pub fn classify_and_summarize(
    system_id: &str,
    task: Task,
    dimension: Dimension,
    deltas: &[f64],
    test: TestResult,
) -> Result<SystemBiasSummary, ContractError> {
    if deltas.len() != test.n {
        return Err(ContractError::new(format!(
            "test was computed over {} deltas, got {}",
            test.n,
            deltas.len()
        )));
    }
    let box_stats = box_stats(deltas)?;
    let delta_min = deltas.iter().copied().fold(f64::INFINITY, f64::min);
    let delta_max = deltas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(SystemBiasSummary {
        system_id: system_id.to_string(),
        task,
        dimension,
        group: BiasGroup::classify(&test),
        test,
        avg_delta_pos: mean_where(deltas, |d| d > 0.0),
        avg_delta_neg: mean_where(deltas, |d| d < 0.0),
        delta_min,
        delta_max,
        delta_spread: delta_max - delta_min,
        box_stats,
    })
}

/// Deltas, test and summary for one system along one dimension.
pub fn analyze_system(
    preds: &PredictionSet,
    units: &[ComparisonUnit],
    dimension: Dimension,
    corrected_alpha: f64,
) -> Result<(SystemBiasSummary, Vec<PairDelta>), ContractError> {
    if let Some(u) = units.iter().find(|u| u.dimension != dimension) {
        return Err(ContractError::new(format!("unit {} is not a {dimension} comparison", u.id)));
    }
    let deltas = compute_deltas(units, preds);
    let values: Vec<f64> = deltas.iter().map(|d| d.delta).collect();
    let test = paired_t_test(&values, corrected_alpha)?;
    let summary = classify_and_summarize(&preds.system_id, preds.task, dimension, &values, test)?;
    Ok((summary, deltas))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupRow {
    /// `None` for the "All" row.
    pub group: Option<BiasGroup>,
    pub count: usize,
    pub mean_avg_delta_pos: Option<f64>,
    pub mean_avg_delta_neg: Option<f64>,
}

/// Three bias-group rows plus an "All" row for one task and dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupTable {
    pub task: Task,
    pub dimension: Dimension,
    pub rows: Vec<GroupRow>,
    pub all: GroupRow,
}

fn group_row(group: Option<BiasGroup>, members: &[&SystemBiasSummary]) -> GroupRow {
    let mean_of = |pick: fn(&SystemBiasSummary) -> Option<f64>| {
        let vals: Vec<f64> = members.iter().filter_map(|s| pick(s)).collect();
        (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
    };
    GroupRow {
        group,
        count: members.len(),
        mean_avg_delta_pos: mean_of(|s| s.avg_delta_pos),
        mean_avg_delta_neg: mean_of(|s| s.avg_delta_neg),
    }
}

/// Averages each group's per-system mean deltas over the group's members.
pub fn aggregate_groups(
    task: Task,
    dimension: Dimension,
    summaries: &[SystemBiasSummary],
) -> Result<GroupTable, ContractError> {
    if let Some(s) = summaries.iter().find(|s| s.task != task || s.dimension != dimension) {
        return Err(ContractError::new(format!(
            "summary for {} is {}/{}, table is {task}/{dimension}",
            s.system_id, s.task, s.dimension
        )));
    }
    let rows = BiasGroup::ALL
        .into_iter()
        .map(|g| {
            let members: Vec<&SystemBiasSummary> = summaries.iter().filter(|s| s.group == g).collect();
            group_row(Some(g), &members)
        })
        .collect();
    let everyone: Vec<&SystemBiasSummary> = summaries.iter().collect();
    Ok(GroupTable {
        task,
        dimension,
        rows,
        all: group_row(None, &everyone),
    })
}
