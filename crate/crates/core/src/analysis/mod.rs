//! Rank correlation, cross-mechanism disagreement, significance overlap,
//! pair-plot data, IIA scanning and simulation summaries.

mod disagreement;
mod iia;
mod kendall;
mod overlap;
mod pairplot;
mod simulation;

pub use disagreement::{disagreement, disagreement_from_values, ranking_values, DisagreementReport};
pub use iia::{iia_scan, IiaScan, IiaViolation, PairChange, PairOrder, SkippedTriple};
pub use kendall::{kendall_rankings, kendall_tau};
pub use overlap::{significance_overlap, OverlapMatrix};
pub use pairplot::{geometric_criterion, pair_plot_data, Histogram, PairPlotData};
pub use simulation::{setup_taus, simulation_report, CellKey, CellSummary, SetupTaus, SimulationReport};
