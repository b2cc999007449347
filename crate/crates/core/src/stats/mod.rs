//! Classification metrics and rank-based hypothesis tests.

mod metrics;
mod rank;
mod special;

pub use metrics::{
    confusion, decide_class, metrics, ConfusionCounts, Metric, MetricReport, MetricSet,
};
pub use rank::{kruskal_wallis, mann_whitney_u, midranks, u_statistic, TestMethod, TestResult};
pub use special::{chi_square_sf, normal_sf, regularized_gamma_q};
