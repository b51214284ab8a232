//! Reference parameter sets: the finite-reservoir table and the
//! cross-engine validation panel.

use crate::analytic::{self, Metric};
use crate::error::Result;
use crate::model::{Buffer, ModelParams, Reservoir};

/// One row of the reservoir-capacity table (`lambda = 1`, `r+ = 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table1Row {
    pub mu1: f64,
    pub mu2: f64,
    pub r_minus: f64,
    pub reservoir: Reservoir,
    /// Published mean peak AoI, three decimals.
    pub reference: f64,
}

impl Table1Row {
    pub fn params(&self) -> ModelParams {
        ModelParams::new(1.0, self.mu1, self.mu2, 1.0, self.r_minus)
            .and_then(|p| p.with_reservoir(self.reservoir))
            .expect("table parameters are valid")
    }
}

const fn row(mu1: f64, mu2: f64, r_minus: f64, reservoir: Reservoir, reference: f64) -> Table1Row {
    Table1Row { mu1, mu2, r_minus, reservoir, reference }
}

/// Mean peak AoI for different reservoir capacities.
pub const TABLE1: [Table1Row; 12] = [
    row(2.0, 1.5, 2.0, Reservoir::Finite(1.0), 2.887),
    row(2.0, 1.5, 2.0, Reservoir::Finite(2.0), 2.826),
    row(2.0, 1.5, 2.0, Reservoir::Finite(5.0), 2.744),
    row(2.0, 1.5, 2.0, Reservoir::Infinite, 2.700),
    row(1.5, 1.1, 1.0, Reservoir::Finite(2.0), 10.507),
    row(1.5, 1.1, 1.0, Reservoir::Finite(3.0), 10.373),
    row(1.5, 1.1, 1.0, Reservoir::Finite(5.0), 10.162),
    row(1.5, 1.1, 1.0, Reservoir::Infinite, 9.857),
    row(1.5, 1.1, 2.0, Reservoir::Finite(2.0), 10.789),
    row(1.5, 1.1, 2.0, Reservoir::Finite(3.0), 10.746),
    row(1.5, 1.1, 2.0, Reservoir::Finite(5.0), 10.693),
    row(1.5, 1.1, 2.0, Reservoir::Infinite, 10.667),
];

/// Closed form a validation case is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formula {
    /// Mean AoI, infinite buffer and reservoir.
    MeanAoi,
    /// `1/lambda + E[S]`, infinite buffer.
    PeakInfinite,
    /// Closed-form mean peak AoI with no waiting room.
    PeakNoWaitingRoom,
    /// Mean peak AoI from the finite-buffer stationary solver.
    PeakFiniteBuffer,
}

impl Formula {
    pub fn metric(self) -> Metric {
        match self {
            Formula::MeanAoi => Metric::MeanAoi,
            _ => Metric::PeakAoi,
        }
    }
}

/// A validation case: simulate `params` and compare against `formula`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PanelCase {
    pub name: &'static str,
    pub params: ModelParams,
    pub formula: Formula,
}

impl PanelCase {
    pub fn analytic_value(&self) -> Result<f64> {
        match self.formula {
            Formula::MeanAoi => analytic::mean_aoi_inf_inf(&self.params),
            Formula::PeakInfinite => analytic::mean_peak_aoi_inf(&self.params),
            Formula::PeakNoWaitingRoom => analytic::mean_peak_aoi_mm11(&self.params),
            Formula::PeakFiniteBuffer => {
                let n = self.params.buffer().capacity().unwrap_or(1);
                Ok(analytic::mean_peak_aoi_finite(n, &self.params)?.mean_peak_aoi)
            }
        }
    }
}

fn case(name: &'static str, formula: Formula, buffer: Buffer, rates: [f64; 5]) -> PanelCase {
    let [lambda, mu1, mu2, rp, rm] = rates;
    let params = ModelParams::new(lambda, mu1, mu2, rp, rm)
        .and_then(|p| p.with_buffer(buffer))
        .expect("panel parameters are valid");
    PanelCase { name, params, formula }
}

/// Cross-engine validation panel: five cases for each closed form, rates
/// given as `[lambda, mu1, mu2, r+, r-]`.
pub fn validation_panel() -> Vec<PanelCase> {
    use Buffer::{Finite, Infinite};
    use Formula::*;
    vec![
        case("mean-aoi/mm1", MeanAoi, Infinite, [0.5, 1.0, 1.0, 1.0, 2.0]),
        case("mean-aoi/mm1-slow", MeanAoi, Infinite, [0.3, 0.8, 0.8, 1.0, 4.0]),
        case("mean-aoi/table", MeanAoi, Infinite, [1.0, 2.0, 1.5, 1.0, 2.0]),
        case("mean-aoi/poor-2/3", MeanAoi, Infinite, [0.35, 1.0, 2.0 / 3.0, 1.0, 4.0]),
        case("mean-aoi/poor-4/5", MeanAoi, Infinite, [0.45, 1.0, 0.8, 1.0, 4.0]),
        case("peak-inf/table", PeakInfinite, Infinite, [1.0, 2.0, 1.5, 1.0, 2.0]),
        case("peak-inf/heavy", PeakInfinite, Infinite, [1.0, 1.5, 1.1, 1.0, 1.0]),
        case("peak-inf/poor-2/3", PeakInfinite, Infinite, [0.35, 1.0, 2.0 / 3.0, 1.0, 4.0]),
        case("peak-inf/mid", PeakInfinite, Infinite, [0.6, 1.0, 0.8, 1.0, 2.0]),
        case("peak-inf/mm1", PeakInfinite, Infinite, [0.5, 1.0, 1.0, 1.0, 2.0]),
        case("peak-n1/reference", PeakNoWaitingRoom, Finite(1), [1.0, 2.0, 1.0, 1.0, 4.0]),
        case("peak-n1/unregulated", PeakNoWaitingRoom, Finite(1), [1.0, 1.0, 1.0, 1.0, 2.0]),
        case("peak-n1/slow-empty", PeakNoWaitingRoom, Finite(1), [0.8, 1.0, 0.5, 1.0, 2.0]),
        case("peak-n1/overload", PeakNoWaitingRoom, Finite(1), [2.0, 1.0, 1.0, 1.0, 2.0]),
        case("peak-n1/mid", PeakNoWaitingRoom, Finite(1), [0.6, 1.0, 0.8, 1.0, 2.0]),
        case("peak-n2/low-load", PeakFiniteBuffer, Finite(2), [0.4, 1.0, 0.8, 1.0, 2.0]),
        case("peak-n2/unregulated", PeakFiniteBuffer, Finite(2), [1.0, 1.0, 1.0, 1.0, 2.0]),
        case("peak-n3/mid", PeakFiniteBuffer, Finite(3), [1.0, 1.0, 0.8, 1.0, 2.0]),
        case("peak-n2/slow-empty", PeakFiniteBuffer, Finite(2), [0.5, 1.0, 0.5, 1.0, 3.0]),
        case("peak-n4/mid", PeakFiniteBuffer, Finite(4), [0.8, 1.0, 0.6, 1.0, 2.0]),
    ]
}
