//! Significance tests, bootstrap intervals and distribution kernels.

pub mod bootstrap;
pub mod dist;
pub mod hypothesis;

pub use bootstrap::{bootstrap_ci, bootstrap_matrix, bootstrap_values, BootstrapConfig, BootstrapInterval};
pub use dist::{binom_cdf, binom_tail, chi2_sf, normal_cdf, normal_quantile, t_cdf};
pub use hypothesis::{
    median, moods_median_test, paired_t_test, sign_test, wilcoxon_signed_rank, Alternative,
    TestKind, TestResult,
};
