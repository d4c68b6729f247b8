use serde::{Deserialize, Serialize};

use super::special::student_t_two_tailed_p;
use crate::error::ContractError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub n: usize,
    pub mean_delta: f64,
    /// Sample standard deviation of the differences (n - 1 denominator).
    pub sd_delta: f64,
    #[serde(with = "crate::numfmt::nonfinite")]
    pub t_statistic: f64,
    pub degrees_of_freedom: usize,
    /// Two-tailed.
    pub p_value: f64,
    /// The threshold `p_value` was compared against.
    pub alpha: f64,
    pub significant: bool,
}

/// alpha / n_assessments.
///
/// # Panics
/// If `alpha` is outside (0, 1) or `n_assessments` is zero.
pub fn bonferroni_threshold(alpha: f64, n_assessments: usize) -> f64 {
    assert!(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1), got {alpha}");
    assert!(n_assessments >= 1, "need at least one assessment");
    alpha / n_assessments as f64
}

fn finish(n: usize, mean: f64, var: f64, alpha: f64) -> Result<TestResult, ContractError> {
    let sd = var.max(0.0).sqrt();
    let df = n - 1;
    let (t, p) = if sd == 0.0 {
        // limits of mean / (sd / sqrt n)
        if mean == 0.0 {
            (0.0, 1.0)
        } else {
            (mean.signum() * f64::INFINITY, 0.0)
        }
    } else {
        let t = mean / (sd / (n as f64).sqrt());
        (t, student_t_two_tailed_p(t, df as f64)?)
    };
    Ok(TestResult {
        n,
        mean_delta: mean,
        sd_delta: sd,
        t_statistic: t,
        degrees_of_freedom: df,
        p_value: p,
        alpha,
        significant: p < alpha,
    })
}

fn check_inputs(values: &[f64], alpha: f64) -> Result<(), ContractError> {
    if values.len() < 2 {
        return Err(ContractError::new(format!("t-test needs at least 2 pairs, got {}", values.len())));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(ContractError::new(format!("non-finite value {v} in t-test input")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(ContractError::new(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    Ok(())
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Paired t-test, run as a one-sample test of the differences against zero.
pub fn paired_t_test(deltas: &[f64], corrected_alpha: f64) -> Result<TestResult, ContractError> {
    check_inputs(deltas, corrected_alpha)?;
    let n = deltas.len();
    let m = mean(deltas);
    let var = deltas.iter().map(|d| (d - m) * (d - m)).sum::<f64>() / (n - 1) as f64;
    finish(n, m, var, corrected_alpha)
}

/// The same test computed from the two paired samples, using
/// var(L - R) = var(L) + var(R) - 2 cov(L, R).
pub fn paired_two_sample_t_test(left: &[f64], right: &[f64], corrected_alpha: f64) -> Result<TestResult, ContractError> {
    if left.len() != right.len() {
        return Err(ContractError::new(format!(
            "paired samples differ in length: {} vs {}",
            left.len(),
            right.len()
        )));
    }
    check_inputs(left, corrected_alpha)?;
    check_inputs(right, corrected_alpha)?;
    let n = left.len();
    let (ml, mr) = (mean(left), mean(right));
    let denom = (n - 1) as f64;
    let var_l = left.iter().map(|x| (x - ml).powi(2)).sum::<f64>() / denom;
    let var_r = right.iter().map(|x| (x - mr).powi(2)).sum::<f64>() / denom;
    let cov = left.iter().zip(right).map(|(x, y)| (x - ml) * (y - mr)).sum::<f64>() / denom;
    finish(n, ml - mr, var_l + var_r - 2.0 * cov, corrected_alpha)
}
