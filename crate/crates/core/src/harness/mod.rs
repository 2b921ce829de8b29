//! Monte-Carlo trials, error statistics and report emission.

mod report;
mod selftest;
mod stats;
mod table;
mod trials;

pub use report::{emit_report, Format, Report};
pub use selftest::{run_selftest, CheckOutcome};
pub use stats::{confidence_interval, mean, sample_sd, student_t_quantile, TrialStatistics};
pub use table::{absolute_errors, diagonal_points, ErrorRow, ErrorTable};
pub use trials::{
    compare_bases, compare_bases_with, run_single, run_trials, trial_seeds, BasisComparison, TrialConfig,
};
