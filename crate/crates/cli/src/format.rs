//! CSV rendering.

use std::fmt::Write as _;

use fluid_aoi::analytic::Metric;
use fluid_aoi::sim::Estimate;
use fluid_aoi::{Buffer, ModelParams, Reservoir};

use crate::args::Engine;

pub const HEADER: &str = "lambda,mu1,mu2,r_plus,r_minus,buffer,reservoir,metric,engine,value,ci_low,ci_high,status";

/// Nine significant digits, positional notation for moderate magnitudes.
pub fn real(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    // Round first so that the exponent accounts for carries like 9.9999999996 -> 10.
    let sci = format!("{v:.8e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..9).contains(&exp) {
        format!("{v:.*}", (8 - exp) as usize)
    } else {
        sci
    }
}

pub fn buffer(b: Buffer) -> String {
    b.to_string()
}

pub fn reservoir(r: Reservoir) -> String {
    match r {
        Reservoir::Infinite => "inf".into(),
        Reservoir::Finite(d) => real(d),
    }
}

/// Outcome of one (point, metric, engine) cell.
#[derive(Debug, Clone, Copy)]
pub enum Cell {
    Exact(f64),
    Interval(Estimate),
    Infeasible,
}

pub fn row(params: &ModelParams, metric: Metric, engine: Engine, cell: Cell, status: &str) -> String {
    let mut s = String::new();
    write!(
        s,
        "{},{},{},{},{},{},{},{},{},",
        real(params.lambda()),
        real(params.mu1()),
        real(params.mu2()),
        real(params.r_plus()),
        real(params.r_minus()),
        buffer(params.buffer()),
        reservoir(params.reservoir()),
        metric,
        engine.name()
    )
    .unwrap();
    match cell {
        Cell::Exact(v) => write!(s, "{},,", real(v)).unwrap(),
        Cell::Interval(e) => write!(s, "{},{},{}", real(e.point), real(e.low()), real(e.high())).unwrap(),
        Cell::Infeasible => s.push_str(",,"),
    }
    write!(s, ",{status}").unwrap();
    s
}
