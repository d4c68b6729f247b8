//! Paired t-test, Bonferroni correction, box-plot statistics and bias
//! summaries.

mod bias;
mod boxplot;
pub mod special;
mod ttest;

pub use bias::{
    aggregate_groups, analyze_system, classify_and_summarize, compute_deltas, BiasGroup, GroupRow, GroupTable,
    PairDelta, SystemBiasSummary,
};
pub use boxplot::{box_stats, quantile_sorted, BoxStats, WHISKER_IQR};
pub use special::student_t_two_tailed_p;
pub use ttest::{bonferroni_threshold, paired_t_test, paired_two_sample_t_test, TestResult};
