//! Infinite waiting room, infinite reservoir.
//!
//! The stationary sojourn time is a mixture of two exponentials: one decaying
//! at the reservoir rate `lambda (1 - sigma) / sigma` with weight `zeta`, the
//! other at the M/M/1 rate `mu2 - lambda`. Everything else follows from it.

use crate::error::Result;
use crate::model::{DerivedConstants, ModelParams};

/// `P{S > s}`.
pub fn sojourn_ccdf(params: &ModelParams, s: f64) -> Result<f64> {
    let c = DerivedConstants::new(params)?;
    let lambda = params.lambda();
    Ok(c.zeta * (-c.reservoir_decay(lambda) * s).exp() + (1.0 - c.zeta) * (-(params.mu2() - lambda) * s).exp())
}

/// `P{W > s}`. At `s = 0` this is the probability that an arrival waits.
pub fn waiting_ccdf(params: &ModelParams, s: f64) -> Result<f64> {
    let c = DerivedConstants::new(params)?;
    let lambda = params.lambda();
    Ok(c.zeta * c.sigma * (-c.reservoir_decay(lambda) * s).exp() + c.eta * (-(params.mu2() - lambda) * s).exp())
}

/// `E[S]`, the integral of [`sojourn_ccdf`].
pub fn mean_sojourn_inf(params: &ModelParams) -> Result<f64> {
    let c = DerivedConstants::new(params)?;
    let lambda = params.lambda();
    Ok(c.zeta * c.sigma / (lambda * (1.0 - c.sigma)) + (1.0 - c.zeta) / (params.mu2() - lambda))
}

/// `E[W]`, the integral of [`waiting_ccdf`].
pub fn mean_waiting_inf(params: &ModelParams) -> Result<f64> {
    let c = DerivedConstants::new(params)?;
    let lambda = params.lambda();
    Ok(c.zeta * c.sigma * c.sigma / (lambda * (1.0 - c.sigma)) + c.eta / (params.mu2() - lambda))
}

/// `E[X] = E[S] - E[W]` in expanded form. Lies in `[1/mu1, 1/mu2]`.
pub fn mean_service_inf(params: &ModelParams) -> Result<f64> {
    let c = DerivedConstants::new(params)?;
    let (lambda, mu1, mu2, s) = (params.lambda(), params.mu1(), params.mu2(), c.sigma);
    Ok(c.zeta * s / lambda
        + (1.0 - s) * (lambda * mu2 - mu1 * mu2 * s - lambda * lambda + lambda * mu1 * s)
            / ((mu2 - lambda) * (lambda - mu2 * s) * (mu2 - mu1 * s)))
}

/// `E[W A]` where `A` is the interarrival time preceding a packet and `W`
/// its waiting time, `W = (S' - A)^+` with `S'` the previous sojourn.
pub fn mean_waiting_times_interarrival(params: &ModelParams) -> Result<f64> {
    let c = DerivedConstants::new(params)?;
    let (lambda, mu2) = (params.lambda(), params.mu2());
    let theta = c.reservoir_decay(lambda);
    Ok(c.zeta * c.sigma / ((1.0 - c.sigma) * (lambda + theta).powi(2))
        + lambda * (1.0 - c.zeta) / ((mu2 - lambda) * mu2 * mu2))
}

/// Mean AoI with infinite buffer and infinite reservoir:
/// `lambda E[WA] + E[X] + 1/lambda`.
///
/// Treats the service time as independent of the preceding interarrival
/// time. That is exact when `mu1 == mu2`; in the regulated queue a long
/// interarrival gap leaves more energy and slightly shortens service, which
/// this expression ignores.
pub fn mean_aoi_inf_inf(params: &ModelParams) -> Result<f64> {
    let c = DerivedConstants::new(params)?;
    let (lambda, mu1, mu2, s, z) = (params.lambda(), params.mu1(), params.mu2(), c.sigma, c.zeta);
    let theta = c.reservoir_decay(lambda);
    let t1 = lambda * z * s / ((1.0 - s) * (lambda + theta).powi(2));
    let t2 = lambda * lambda * (1.0 - z) / ((mu2 - lambda) * mu2 * mu2);
    let t3 = z * s / lambda;
    let t4 = (1.0 - s) * (lambda * mu2 - mu1 * mu2 * s - lambda * lambda + lambda * mu1 * s)
        / ((mu2 - lambda) * (lambda - mu2 * s) * (mu2 - mu1 * s));
    Ok(t1 + t2 + t3 + t4 + 1.0 / lambda)
}

/// Mean peak AoI with infinite buffer: `1/lambda + E[S]`.
pub fn mean_peak_aoi_inf(params: &ModelParams) -> Result<f64> {
    Ok(1.0 / params.lambda() + mean_sojourn_inf(params)?)
}
