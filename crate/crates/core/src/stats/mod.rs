//! Welch two-sample t-test and the significance reports built on it.

mod report;
mod special;
mod welch;

pub use report::{
    best_vs_reference, parse_records_csv, parse_reference_csv, AccuracyRecord, BestReport, BestRow, Reference,
    SignificanceCell, SignificanceRow, SignificanceTable, significance_table,
};
pub use special::{ln_gamma, regularized_incomplete_beta, student_t_two_sided_p};
pub use welch::{welch_ttest, Verdict, WelchResult, ALPHA};
