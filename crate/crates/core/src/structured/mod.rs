//! Structured HPP: CAR-covariance penalties on grid graphs, solved by
//! per-site block coordinate descent or by dense alternating ridge updates.

mod experiment;
mod graph;
mod penalty;
mod shpp;

pub use experiment::{
    render_slice_svg, summarize, synthetic_grid_experiment, EstimateSummary, GridExperiment,
    GridExperimentConfig, GridReport, SignalBlock, SliceStyle, ZERO_TOL,
};
pub use graph::{
    car_dense_precision, car_precision_apply, car_symmetric_apply, car_symmetric_precision,
    estimate_car_moments, CarSpec, GridGraph,
};
pub use penalty::{Precision, Structure};
pub use shpp::{
    shpp_site_sweep, solve_shpp, solve_shpp_dense, solve_structured_hpp, SignalProblem,
    DEFAULT_SHPP_REL_TOL, DENSE_MAX_P,
};
