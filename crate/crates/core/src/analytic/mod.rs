//! Closed-form and semi-closed-form evaluation of the regulated queue.

pub mod finite;
pub mod infinite;
pub mod metrics;
pub mod optimize;

pub use finite::{
    find_xi0, mean_peak_aoi_finite, mean_peak_aoi_mm11, negative_zeros, poly_p, solve_stationary_finite,
    stationary_mm11, StationaryDistribution,
};
pub use infinite::{
    mean_aoi_inf_inf, mean_peak_aoi_inf, mean_service_inf, mean_sojourn_inf, mean_waiting_inf,
    mean_waiting_times_interarrival, sojourn_ccdf, waiting_ccdf,
};
pub use metrics::{analytic_metrics, evaluate, is_feasible, AoiMetrics, Metric};
pub use optimize::{feasible_lambda_range, find_optimal_lambda, find_optimal_lambda_with, Optimum};
