use std::fmt;
use std::str::FromStr;

use crate::analytic::{finite, infinite};
use crate::error::{Error, Result};
use crate::model::{Buffer, ModelParams, Reservoir};

/// Closed-form metrics for one parameter point. Times are in the same unit
/// as the reciprocal rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AoiMetrics {
    /// Only available with infinite buffer and infinite reservoir.
    pub mean_aoi: Option<f64>,
    pub mean_peak_aoi: f64,
    pub mean_sojourn: f64,
    pub mean_waiting: Option<f64>,
    pub mean_service: Option<f64>,
    /// Zero with an infinite buffer.
    pub blocking_prob: f64,
}

/// Selectable output metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Metric {
    Blocking,
    MeanAoi,
    PeakAoi,
    Sojourn,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::Blocking, Metric::MeanAoi, Metric::PeakAoi, Metric::Sojourn];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Blocking => "blocking",
            Metric::MeanAoi => "mean-aoi",
            Metric::PeakAoi => "peak-aoi",
            Metric::Sojourn => "sojourn",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown metric '{s}'")))
    }
}

/// All closed-form metrics available for `params`.
///
/// Finite reservoirs have no closed form and are reported as
/// [`Error::Unsupported`]; use the simulator instead.
pub fn analytic_metrics(params: &ModelParams) -> Result<AoiMetrics> {
    if let Reservoir::Finite(_) = params.reservoir() {
        return Err(Error::Unsupported("no closed form for a finite reservoir; use the simulation engine".into()));
    }
    match params.buffer() {
        Buffer::Infinite => Ok(AoiMetrics {
            mean_aoi: Some(infinite::mean_aoi_inf_inf(params)?),
            mean_peak_aoi: infinite::mean_peak_aoi_inf(params)?,
            mean_sojourn: infinite::mean_sojourn_inf(params)?,
            mean_waiting: Some(infinite::mean_waiting_inf(params)?),
            mean_service: Some(infinite::mean_service_inf(params)?),
            blocking_prob: 0.0,
        }),
        Buffer::Finite(n) => finite::mean_peak_aoi_finite(n, params),
    }
}

/// Closed-form value of a single metric.
pub fn evaluate(params: &ModelParams, metric: Metric) -> Result<f64> {
    let m = analytic_metrics(params)?;
    match metric {
        Metric::MeanAoi => m.mean_aoi.ok_or_else(|| {
            Error::Unsupported("mean AoI has no closed form with a finite buffer; use peak-aoi or simulation".into())
        }),
        Metric::PeakAoi => Ok(m.mean_peak_aoi),
        Metric::Sojourn => Ok(m.mean_sojourn),
        Metric::Blocking => Ok(m.blocking_prob),
    }
}

/// Whether the closed forms for `params` have a stationary regime.
pub fn is_feasible(params: &ModelParams) -> bool {
    match params.buffer() {
        Buffer::Infinite => crate::model::stability_infinite(params),
        Buffer::Finite(n) => crate::model::stability_finite_buffer(params, n) && params.mu2() > 0.0,
    }
}
