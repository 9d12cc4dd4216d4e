//! Reproducible experiment drivers: random multi-block validation of the
//! exact-preconditioner bounds, the randomized double saddle-point grid with
//! prescribed indicator targets, and CSV/JSON report emission.

pub mod emit;
pub mod grid;
pub mod multi;
pub mod report;

pub use emit::{emit_reports, parse_reports_json, reports_to_csv, reports_to_json, ReportFormat};
pub use grid::{random_dsp_grid, GridConfig};
pub use multi::{random_multi_experiment, MultiConfig, MultiVariant};
pub use report::{cluster_extremes, ExperimentReport, RngStream, TheoreticalBounds};
