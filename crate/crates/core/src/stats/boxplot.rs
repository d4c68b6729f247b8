use serde::{Deserialize, Serialize};

use crate::error::ContractError;

/// Whiskers reach this many IQRs beyond the box.
pub const WHISKER_IQR: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxStats {
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    /// Smallest value >= q1 - 1.5 IQR.
    pub whisker_low: f64,
    /// Largest value <= q3 + 1.5 IQR.
    pub whisker_high: f64,
}

impl BoxStats {
    pub fn iqr(&self) -> f64 {
        self.q3 - self.q1
    }
}

/// Quantile of sorted data by linear interpolation between order statistics
/// (position (n - 1) p).
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty() && (0.0..=1.0).contains(&p));
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn box_stats(values: &[f64]) -> Result<BoxStats, ContractError> {
    if values.is_empty() {
        return Err(ContractError::new("box statistics need at least one value"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(ContractError::new("box statistics need finite values"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q1 = quantile_sorted(&sorted, 0.25);
    let median = quantile_sorted(&sorted, 0.5);
    let q3 = quantile_sorted(&sorted, 0.75);
    let reach = WHISKER_IQR * (q3 - q1);
    let (low_fence, high_fence) = (q1 - reach, q3 + reach);
    let whisker_low = *sorted.iter().find(|&&v| v >= low_fence).expect("q1 lies within the data");
    let whisker_high = *sorted.iter().rev().find(|&&v| v <= high_fence).expect("q3 lies within the data");
    Ok(BoxStats {
        q1,
        median,
        q3,
        whisker_low,
        whisker_high,
    })
}
