//! Arrival-rate optimization over the closed-form metrics.

use crate::analytic::metrics::{evaluate, is_feasible, Metric};
use crate::error::{Error, Result};
use crate::model::{sigma, Buffer, ModelParams};

pub const DEFAULT_GRID_STEP: f64 = 1e-3;
pub const DEFAULT_TOLERANCE: f64 = 1e-4;

/// Distance kept from stability boundaries when choosing default ranges.
pub const EDGE_TRIM: f64 = 1e-3;

/// Default arrival-rate range for sweeps: the feasible interval implied by
/// the stability conditions, trimmed by [`EDGE_TRIM`] at both ends. Finite
/// buffers have no upper bound, so `2 mu1` is used. `None` if empty.
pub fn feasible_lambda_range(template: &ModelParams) -> Option<(f64, f64)> {
    let (lo, hi) = match template.buffer() {
        Buffer::Infinite => (sigma(template) * template.mu1(), template.mu2()),
        Buffer::Finite(n) => {
            // sum_{k=1..n} rho^k is increasing in rho; bisect for the threshold.
            let target = template.r_plus() / template.r_minus();
            let f = |rho: f64| (1..=n).map(|k| rho.powi(k as i32)).sum::<f64>() - target;
            let (mut a, mut b) = (0.0, 1.0);
            while f(b) < 0.0 {
                b *= 2.0;
            }
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if f(m) < 0.0 {
                    a = m;
                } else {
                    b = m;
                }
            }
            (b * template.mu1(), 2.0 * template.mu1())
        }
    };
    let (lo, hi) = (lo + EDGE_TRIM, hi - EDGE_TRIM);
    (lo < hi).then_some((lo, hi))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum {
    pub lambda: f64,
    pub value: f64,
}

fn objective(template: &ModelParams, lambda: f64, metric: Metric) -> Option<f64> {
    let params = template.with_lambda(lambda).ok()?;
    if !is_feasible(&params) {
        return None;
    }
    evaluate(&params, metric).ok().filter(|v| v.is_finite())
}

/// Minimize `metric` over `lambda` in `[lo, hi]` with the default grid step
/// and tolerance. The arrival rate of `template` is ignored.
pub fn find_optimal_lambda(template: &ModelParams, lo: f64, hi: f64, metric: Metric) -> Result<Optimum> {
    find_optimal_lambda_with(template, lo, hi, metric, DEFAULT_GRID_STEP, DEFAULT_TOLERANCE)
}

/// Grid search followed by golden-section refinement around the best grid
/// point. Infeasible points are skipped.
pub fn find_optimal_lambda_with(
    template: &ModelParams,
    lo: f64,
    hi: f64,
    metric: Metric,
    step: f64,
    tolerance: f64,
) -> Result<Optimum> {
    if !(lo > 0.0 && hi > lo && step > 0.0 && tolerance > 0.0) {
        return Err(Error::InvalidParams(format!(
            "need 0 < lo < hi and positive step/tolerance, got [{lo}, {hi}] step {step} tol {tolerance}"
        )));
    }
    let points = ((hi - lo) / step).floor() as usize;
    let best = (0..=points)
        .map(|k| lo + k as f64 * step)
        .chain(std::iter::once(hi))
        .filter_map(|l| objective(template, l, metric).map(|v| Optimum { lambda: l, value: v }))
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .ok_or(Error::EmptyFeasibleRegion { lo, hi })?;

    let refined = golden_section(
        |l| objective(template, l, metric).unwrap_or(f64::INFINITY),
        (best.lambda - step).max(lo),
        (best.lambda + step).min(hi),
        tolerance,
    );
    Ok(if refined.value < best.value { refined } else { best })
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tolerance: f64) -> Optimum {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tolerance {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let lambda = 0.5 * (a + b);
    Optimum { lambda, value: f(lambda) }
}
