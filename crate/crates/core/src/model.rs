//! System parameterization, derived constants and stability predicates.
//!
//! The transmitter is a FCFS queue fed by Poisson arrivals at rate `lambda`.
//! While the server is idle an energy reservoir fills at `r_plus`; while it
//! is busy the reservoir drains at `r_minus`. Service is exponential at
//! `mu1` when the reservoir holds energy and at `mu2 <= mu1` when it is empty.

use std::fmt;

use crate::error::{Error, Result};

/// Margin used by the strict stability inequalities. Parameters closer than
/// this to a boundary are rejected, since the closed forms have poles there.
pub const STABILITY_MARGIN: f64 = 1e-12;

/// Waiting room of the transmitter, counting the packet in service.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Buffer {
    Infinite,
    Finite(usize),
}

impl Buffer {
    pub fn capacity(self) -> Option<usize> {
        match self {
            Buffer::Infinite => None,
            Buffer::Finite(n) => Some(n),
        }
    }
}

impl fmt::Display for Buffer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Buffer::Infinite => f.write_str("inf"),
            Buffer::Finite(n) => write!(f, "{n}"),
        }
    }
}

/// Energy capacity of the reservoir.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reservoir {
    Infinite,
    Finite(f64),
}

impl Reservoir {
    pub fn capacity(self) -> f64 {
        match self {
            Reservoir::Infinite => f64::INFINITY,
            Reservoir::Finite(d) => d,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Reservoir::Infinite)
    }
}

/// Full parameterization of the regulated queue.
///
/// Construction validates every invariant, so downstream code can assume
/// positive rates and `mu2 <= mu1`. `mu2 = 0` is admitted (a reservoir that
/// stalls service completely when empty); the analytic peak-age formulas
/// reject it later because they divide by `mu2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    lambda: f64,
    mu1: f64,
    mu2: f64,
    r_plus: f64,
    r_minus: f64,
    buffer: Buffer,
    reservoir: Reservoir,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{name} must be a positive finite number, got {v}")))
    }
}

impl ModelParams {
    /// Infinite buffer and infinite reservoir.
    pub fn new(lambda: f64, mu1: f64, mu2: f64, r_plus: f64, r_minus: f64) -> Result<Self> {
        positive("lambda", lambda)?;
        positive("mu1", mu1)?;
        positive("r_plus", r_plus)?;
        positive("r_minus", r_minus)?;
        if !(mu2.is_finite() && mu2 >= 0.0) {
            return Err(Error::InvalidParams(format!("mu2 must be a nonnegative finite number, got {mu2}")));
        }
        if mu2 > mu1 {
            return Err(Error::InvalidParams(format!("mu2 ({mu2}) must not exceed mu1 ({mu1})")));
        }
        Ok(Self { lambda, mu1, mu2, r_plus, r_minus, buffer: Buffer::Infinite, reservoir: Reservoir::Infinite })
    }

    pub fn with_buffer(mut self, buffer: Buffer) -> Result<Self> {
        if buffer == Buffer::Finite(0) {
            return Err(Error::InvalidParams("finite buffer must hold at least one packet".into()));
        }
        self.buffer = buffer;
        Ok(self)
    }

    pub fn with_reservoir(mut self, reservoir: Reservoir) -> Result<Self> {
        if let Reservoir::Finite(d) = reservoir {
            positive("reservoir capacity", d)?;
        }
        self.reservoir = reservoir;
        Ok(self)
    }

    /// Same system at a different arrival rate.
    pub fn with_lambda(mut self, lambda: f64) -> Result<Self> {
        positive("lambda", lambda)?;
        self.lambda = lambda;
        Ok(self)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn mu1(&self) -> f64 {
        self.mu1
    }
    pub fn mu2(&self) -> f64 {
        self.mu2
    }
    pub fn r_plus(&self) -> f64 {
        self.r_plus
    }
    pub fn r_minus(&self) -> f64 {
        self.r_minus
    }
    pub fn buffer(&self) -> Buffer {
        self.buffer
    }
    pub fn reservoir(&self) -> Reservoir {
        self.reservoir
    }

    /// True when the reservoir has no influence on service (`mu1 == mu2`).
    pub fn is_unregulated(&self) -> bool {
        self.mu1 == self.mu2
    }
}

/// `r+ / (r+ + r-)`, the long-run fraction of time the server must be idle
/// for the reservoir to break even.
pub fn sigma(params: &ModelParams) -> f64 {
    params.r_plus / (params.r_plus + params.r_minus)
}

/// Stability of the infinite-buffer, infinite-reservoir system:
/// `sigma < lambda/mu1 <= lambda/mu2 < 1`, with strict inequalities enforced
/// by [`STABILITY_MARGIN`].
pub fn stability_infinite(params: &ModelParams) -> bool {
    if params.mu2 <= 0.0 {
        return false;
    }
    let s = sigma(params);
    let load1 = params.lambda / params.mu1;
    let load2 = params.lambda / params.mu2;
    s + STABILITY_MARGIN < load1 && load1 <= load2 && load2 + STABILITY_MARGIN < 1.0
}

/// Reservoir stability with a finite buffer of `n` packets:
/// `sum_{k=1..n} (lambda/mu1)^k > r+/r-`. Only `mu1` matters here.
pub fn stability_finite_buffer(params: &ModelParams, n: usize) -> bool {
    if n == 0 {
        return false;
    }
    let rho = params.lambda / params.mu1;
    let mut term = 1.0;
    let mut sum = 0.0;
    for _ in 0..n {
        term *= rho;
        sum += term;
    }
    sum > params.r_plus / params.r_minus + STABILITY_MARGIN
}

pub(crate) fn require_infinite_stability(params: &ModelParams) -> Result<()> {
    if stability_infinite(params) {
        Ok(())
    } else {
        Err(Error::StabilityViolation(format!(
            "need sigma < lambda/mu1 <= lambda/mu2 < 1, got sigma = {:.6}, lambda/mu1 = {:.6}, lambda/mu2 = {:.6}",
            sigma(params),
            params.lambda / params.mu1,
            params.lambda / params.mu2
        )))
    }
}

pub(crate) fn require_finite_stability(params: &ModelParams, n: usize) -> Result<()> {
    if stability_finite_buffer(params, n) {
        Ok(())
    } else {
        Err(Error::StabilityViolation(format!(
            "reservoir unstable with N = {n}: sum of (lambda/mu1)^k must exceed r+/r- = {:.6}",
            params.r_plus / params.r_minus
        )))
    }
}

/// Mixing weight of the slow exponential in the sojourn-time distribution.
pub fn zeta(params: &ModelParams) -> Result<f64> {
    require_infinite_stability(params)?;
    Ok(zeta_unchecked(params))
}

/// Weight of the `(mu2 - lambda)` exponential in the waiting-time tail.
pub fn eta(params: &ModelParams) -> Result<f64> {
    require_infinite_stability(params)?;
    Ok(eta_unchecked(params))
}

fn zeta_unchecked(p: &ModelParams) -> f64 {
    let s = sigma(p);
    (p.mu1 - p.mu2) * (p.mu2 - p.lambda) * s / ((p.lambda - p.mu2 * s) * (p.mu2 - p.mu1 * s))
}

// The second factor of the denominator is (mu2 - mu1*sigma). Reading it as
// (mu2 - mu2*sigma) breaks E[X] = E[S] - E[W] and the mu1 = mu2 reduction.
fn eta_unchecked(p: &ModelParams) -> f64 {
    let s = sigma(p);
    p.lambda * (p.lambda - p.mu1 * s) * (1.0 - s) / ((p.lambda - p.mu2 * s) * (p.mu2 - p.mu1 * s))
}

/// `sigma`, `zeta` and `eta` for a stable infinite-buffer system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    pub sigma: f64,
    pub zeta: f64,
    pub eta: f64,
}

impl DerivedConstants {
    pub fn new(params: &ModelParams) -> Result<Self> {
        require_infinite_stability(params)?;
        Ok(Self { sigma: sigma(params), zeta: zeta_unchecked(params), eta: eta_unchecked(params) })
    }

    /// Decay rate `lambda (1 - sigma) / sigma` of the reservoir-driven mode.
    pub fn reservoir_decay(&self, lambda: f64) -> f64 {
        lambda * (1.0 - self.sigma) / self.sigma
    }
}
