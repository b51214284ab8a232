//! Finite waiting room, infinite reservoir.
//!
//! With `N` places the chain has `N + 1` queue states. Off the reservoir
//! boundary the level density decays as `exp(xi0 * c)`, where `xi0` is the
//! negative zero of the characteristic polynomial `P_N`. The vector `y`
//! (mass with a non-empty reservoir) solves a three-term recurrence driven by
//! `xi0`, and flow balance across each cut `i | i + 1` then yields `p`.

use crate::analytic::metrics::AoiMetrics;
use crate::error::{Error, Result};
use crate::model::{require_finite_stability, ModelParams};

/// Nonnegativity slack when deciding whether a candidate root produces a
/// valid distribution.
const NONNEG_TOL: f64 = 1e-12;

/// Stationary distribution of the number of packets in an `N`-place system.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryDistribution {
    pub n: usize,
    /// `p[i]`: probability of `i` packets in system.
    pub p: Vec<f64>,
    /// `y[i]`: probability of `i` packets and a non-empty reservoir.
    pub y: Vec<f64>,
    pub xi0: f64,
}

impl StationaryDistribution {
    /// Mean number of packets in system.
    pub fn mean_queue_length(&self) -> f64 {
        self.p.iter().enumerate().map(|(i, p)| i as f64 * p).sum()
    }

    /// Probability an arrival finds the buffer full.
    pub fn blocking_prob(&self) -> f64 {
        self.p[self.n]
    }

    /// Residuals of the defining linear system, in order: the `y`
    /// recurrence (N equations), `p0 = y0`, the `N` cut balances, and the
    /// normalization.
    pub fn residuals(&self, params: &ModelParams) -> Vec<f64> {
        let (lambda, mu1, mu2) = (params.lambda(), params.mu1(), params.mu2());
        let (rp, rm) = (params.r_plus(), params.r_minus());
        let (p, y, xi) = (&self.p, &self.y, self.xi0);
        let mut r = Vec::with_capacity(2 * self.n + 2);
        r.push(mu1 * y[1] - (lambda + rp * xi) * y[0]);
        for i in 1..self.n {
            r.push(mu1 * y[i + 1] - (lambda + mu1 - rm * xi) * y[i] + lambda * y[i - 1]);
        }
        r.push(p[0] - y[0]);
        for i in 0..self.n {
            r.push(mu2 * p[i + 1] - lambda * p[i] + (mu1 - mu2) * y[i + 1]);
        }
        r.push(p.iter().sum::<f64>() - 1.0);
        r
    }
}

/// Coefficients of `P_N` viewed as the characteristic polynomial of a
/// Jacobi matrix: first diagonal entry, remaining diagonal entries, and the
/// product of symmetric off-diagonal pairs.
#[derive(Debug, Clone, Copy)]
struct Jacobi {
    first: f64,
    diag: f64,
    coupling: f64,
}

impl Jacobi {
    fn new(params: &ModelParams) -> Self {
        let (lambda, mu1, rp, rm) = (params.lambda(), params.mu1(), params.r_plus(), params.r_minus());
        Self { first: mu1 / rm - lambda / rp, diag: (lambda + mu1) / rm, coupling: lambda * mu1 / (rm * rm) }
    }

    fn eval(&self, n: usize, x: f64) -> f64 {
        if n == 0 {
            return 1.0;
        }
        let (mut prev, mut cur) = (1.0, x - self.first);
        for _ in 2..=n {
            let next = (x - self.diag) * cur - self.coupling * prev;
            prev = cur;
            cur = next;
        }
        cur
    }

    /// Number of zeros of `P_n` strictly below `x` (Sturm count through the
    /// ratios `P_k / P_{k-1}`, which avoids overflow for large `n`).
    fn zeros_below(&self, n: usize, x: f64) -> usize {
        let mut negatives = 0;
        let mut q = x - self.first;
        for k in 1..=n {
            if k > 1 {
                let prev = if q == 0.0 { f64::MIN_POSITIVE } else { q };
                q = (x - self.diag) - self.coupling / prev;
            }
            if q < 0.0 {
                negatives += 1;
            }
        }
        n - negatives
    }

    fn bound(&self) -> f64 {
        let off = self.coupling.sqrt();
        (self.first.abs() + off).max(self.diag.abs() + 2.0 * off)
    }
}

/// `P_N(x)`: `P_0 = 1`, `P_1 = x + lambda/r+ - mu1/r-`,
/// `P_N = (x - (lambda + mu1)/r-) P_{N-1} - (lambda mu1 / r-^2) P_{N-2}`.
///
/// The zeros of `P_N` are the nonzero eigenvalues of the fluid model, so
/// the middle coefficient enters with a minus sign; it is the only sign
/// consistent with the `y` recurrence used by [`solve_stationary_finite`].
pub fn poly_p(n: usize, x: f64, params: &ModelParams) -> f64 {
    Jacobi::new(params).eval(n, x)
}

/// All negative zeros of `P_N`, ordered from closest to zero outward.
///
/// `P_N` is the characteristic polynomial of a Jacobi matrix with positive
/// coupling, so its zeros are real and simple and each one can be isolated
/// by bisection on the Sturm count.
pub fn negative_zeros(n: usize, params: &ModelParams) -> Vec<f64> {
    let jac = Jacobi::new(params);
    let count = jac.zeros_below(n, 0.0);
    let bound = jac.bound() * 1.5 + 1.0;
    let mut zeros = Vec::with_capacity(count);
    for j in (0..count).rev() {
        let (mut lo, mut hi) = (-bound, 0.0f64);
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if jac.zeros_below(n, mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        // Pick whichever bracket end sits closer to the zero.
        let (flo, fhi) = (jac.eval(n, lo).abs(), jac.eval(n, hi).abs());
        zeros.push(if flo < fhi { lo } else { hi });
    }
    zeros
}

fn check_inputs(n: usize, params: &ModelParams) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParams("buffer size must be at least 1".into()));
    }
    require_finite_stability(params, n)?;
    if params.mu2() <= 0.0 {
        return Err(Error::InvalidParams(
            "mu2 must be positive for the finite-buffer solution (service halts on an empty reservoir)".into(),
        ));
    }
    Ok(())
}

/// Forward elimination for a given `xi0`; `None` when the scale collapses.
fn solve_for_root(n: usize, xi: f64, params: &ModelParams) -> Option<StationaryDistribution> {
    let (lambda, mu1, mu2) = (params.lambda(), params.mu1(), params.mu2());
    let (rp, rm) = (params.r_plus(), params.r_minus());

    let mut y = Vec::with_capacity(n + 1);
    y.push(1.0);
    y.push((lambda + rp * xi) * y[0] / mu1);
    for i in 1..n {
        let next = ((lambda + mu1 - rm * xi) * y[i] - lambda * y[i - 1]) / mu1;
        y.push(next);
    }

    let mut p = Vec::with_capacity(n + 1);
    p.push(y[0]);
    for i in 0..n {
        p.push((lambda * p[i] - (mu1 - mu2) * y[i + 1]) / mu2);
    }

    let total: f64 = p.iter().sum();
    if !total.is_finite() || total <= 0.0 {
        return None;
    }
    p.iter_mut().for_each(|v| *v /= total);
    y.iter_mut().for_each(|v| *v /= total);
    Some(StationaryDistribution { n, p, y, xi0: xi })
}

fn is_valid(dist: &StationaryDistribution) -> bool {
    dist.p.iter().chain(&dist.y).all(|v| v.is_finite() && *v >= -NONNEG_TOL)
}

fn select(n: usize, params: &ModelParams) -> Result<StationaryDistribution> {
    check_inputs(n, params)?;
    let zeros = negative_zeros(n, params);
    if zeros.is_empty() {
        return Err(Error::RootNotFound { buffer: n });
    }
    let mut singular = false;
    for xi in zeros {
        match solve_for_root(n, xi, params) {
            Some(dist) if is_valid(&dist) => return Ok(dist),
            Some(_) => {}
            None => singular = true,
        }
    }
    if singular {
        Err(Error::SingularSystem { buffer: n })
    } else {
        Err(Error::RootNotFound { buffer: n })
    }
}

/// The negative zero `xi0` of `P_N` that yields a valid distribution.
pub fn find_xi0(n: usize, params: &ModelParams) -> Result<f64> {
    select(n, params).map(|d| d.xi0)
}

/// Stationary distribution of the number of packets with an `N`-place
/// buffer and infinite reservoir. Runs in `O(N)` after root isolation.
pub fn solve_stationary_finite(n: usize, params: &ModelParams) -> Result<StationaryDistribution> {
    select(n, params)
}

/// Mean peak AoI with an `N`-place buffer.
///
/// Accepted packets arrive at rate `lambda (1 - p_N)`, so the mean gap
/// between accepted packets is `1 / (lambda (1 - p_N))` and Little's law
/// gives `E[S] = L / (lambda (1 - p_N))`.
pub fn mean_peak_aoi_finite(n: usize, params: &ModelParams) -> Result<AoiMetrics> {
    let dist = solve_stationary_finite(n, params)?;
    let accepted = params.lambda() * (1.0 - dist.blocking_prob());
    let sojourn = dist.mean_queue_length() / accepted;
    Ok(AoiMetrics {
        mean_aoi: None,
        mean_peak_aoi: 1.0 / accepted + sojourn,
        mean_sojourn: sojourn,
        mean_waiting: None,
        mean_service: None,
        blocking_prob: dist.blocking_prob(),
    })
}

/// Closed form of the mean peak AoI for `N = 1` (no waiting room).
pub fn mean_peak_aoi_mm11(params: &ModelParams) -> Result<f64> {
    check_inputs(1, params)?;
    let (lambda, mu1, mu2) = (params.lambda(), params.mu1(), params.mu2());
    let ratio = params.r_plus() / params.r_minus();
    Ok((2.0 * ratio * (mu1 * mu2 - mu1 * mu1) + 2.0 * lambda * mu1 + mu1 * mu2) / (lambda * mu1 * mu2))
}

/// Closed-form stationary probabilities `(p0, p1)` for `N = 1`.
pub fn stationary_mm11(params: &ModelParams) -> Result<(f64, f64)> {
    check_inputs(1, params)?;
    let (lambda, mu1, mu2) = (params.lambda(), params.mu1(), params.mu2());
    let ratio = params.r_plus() / params.r_minus();
    let busy = ratio * (mu1 * mu2 - mu1 * mu1) + lambda * mu1;
    let denom = mu1 * mu2 + busy;
    Ok((mu1 * mu2 / denom, busy / denom))
}
