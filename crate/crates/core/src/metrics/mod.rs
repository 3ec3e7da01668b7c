//! Hausdorff estimation, experiment sweeps, scaling fits and output files.

mod emit;
mod experiment;
mod hausdorff;

pub use emit::{emit, parse_csv, parse_formats, to_csv, to_json, to_svg, CsvRow, Format};
pub use experiment::{
    linear_fit, run_cell, run_experiment, scaling_fits, Experiment, ExperimentRecord, Grid, GridBody, Method,
    ScalingFit, MIN_FIT_EPS,
};
pub use hausdorff::{check_nested, hausdorff_inner, hausdorff_outer, HAUSDORFF_DIRS, NESTING_TOL};
