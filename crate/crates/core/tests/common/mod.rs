#![allow(dead_code)]

use fluid_aoi::model::sigma;
use fluid_aoi::ModelParams;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

/// Stable infinite-buffer parameters with the load kept away from both
/// stability edges.
pub fn stable_params() -> impl Strategy<Value = ModelParams> {
    (0.5f64..3.0, 0.3f64..=1.0, 0.2f64..5.0, 0.2f64..5.0, 0.05f64..0.95)
        .prop_filter_map("empty stability interval", |(mu1, frac, rp, rm, pos)| {
            let mu2 = mu1 * frac;
            let s = rp / (rp + rm);
            let lo = s * mu1;
            if lo >= mu2 * 0.98 {
                return None;
            }
            let lambda = lo + (mu2 - lo) * pos;
            ModelParams::new(lambda, mu1, mu2, rp, rm).ok()
        })
        .prop_filter("stable", fluid_aoi::model::stability_infinite)
}

/// Parameters satisfying the reservoir condition for an `n`-place buffer.
pub fn stable_finite_params(n: usize) -> impl Strategy<Value = ModelParams> {
    (0.5f64..3.0, 0.1f64..=1.0, 0.2f64..5.0, 0.2f64..5.0, 0.05f64..3.0).prop_filter_map(
        "reservoir unstable",
        move |(mu1, frac, rp, rm, load)| {
            let p = ModelParams::new(load * mu1, mu1, mu1 * frac, rp, rm).ok()?;
            let slack: f64 = (1..=n).map(|k| (load).powi(k as i32)).sum::<f64>() - rp / rm;
            (slack > 1e-3).then_some(p)
        },
    )
}

/// Adaptive Simpson integration of `f` on `[a, b]`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, left, lm, flm, tol / 2.0, depth - 1)
            + recurse(f, m, fm, b, fb, right, rm, frm, tol / 2.0, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, tol, 60)
}

/// Integral of a tail function over `[0, inf)`, truncated where it drops
/// below 1e-12. Integrates piecewise over doubling intervals so the
/// adaptive rule sees the decay at every scale.
pub fn integrate_tail(f: &dyn Fn(f64) -> f64) -> f64 {
    let mut end = 1.0;
    while f(end) >= 1e-12 {
        end *= 2.0;
    }
    let mut total = adaptive_simpson(f, 0.0, 1.0_f64.min(end), 1e-12);
    let mut a = 1.0;
    while a < end {
        total += adaptive_simpson(f, a, 2.0 * a, 1e-12);
        a *= 2.0;
    }
    total
}

/// Independent finite-buffer solution by dense linear algebra.
///
/// `xi` is located as a negative zero of `det(Q - x R) / x`, where `Q` is the
/// birth-death generator at rate `mu1` and `R` the diagonal drift matrix. The
/// level-density vector is the left null vector of `Q - xi R`; the masses on
/// an empty reservoir come from the global balance of the queue-length chain.
pub struct DenseSolution {
    pub xi: f64,
    pub p: Vec<f64>,
    pub y: Vec<f64>,
}

pub fn dense_finite_solution(n: usize, params: &ModelParams) -> DenseSolution {
    let (lambda, mu1, mu2) = (params.lambda(), params.mu1(), params.mu2());
    let size = n + 1;
    let mut q = DMatrix::<f64>::zeros(size, size);
    for i in 0..size {
        if i < n {
            q[(i, i + 1)] = lambda;
        }
        if i > 0 {
            q[(i, i - 1)] = mu1;
        }
        let out: f64 = q.row(i).sum();
        q[(i, i)] = -out;
    }
    let mut drift = DMatrix::<f64>::zeros(size, size);
    drift[(0, 0)] = params.r_plus();
    for i in 1..size {
        drift[(i, i)] = -params.r_minus();
    }
    let g = |x: f64| (&q - &drift * x).determinant() / x;

    // Scan downward from zero for the first sign change, then bisect.
    let step = 1e-3;
    let mut hi = -1e-9;
    let mut lo = hi - step;
    while g(lo).signum() == g(hi).signum() {
        hi = lo;
        lo -= step;
        assert!(lo > -1e4, "no negative eigenvalue found");
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid).signum() == g(lo).signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let xi = 0.5 * (lo + hi);

    let m = (&q - &drift * xi).transpose();
    let svd = m.svd(false, true);
    let (idx, _) = svd.singular_values.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap();
    let v_t = svd.v_t.unwrap();
    let mut v: Vec<f64> = v_t.row(idx).iter().copied().collect();
    if v[0] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }

    // Unknowns: scale c for y = c v, and empty-reservoir masses z_1..z_n.
    // Balance of state i: inflow = outflow; plus sum(p) = 1.
    let unknowns = n + 1;
    let mut a = DMatrix::<f64>::zeros(size + 1, unknowns);
    let mut b = DVector::<f64>::zeros(size + 1);
    let zcol = |i: usize| i; // z_i sits in column i for i >= 1; column 0 is c.
    for i in 0..size {
        // outflow
        let arr = if i < n { lambda } else { 0.0 };
        a[(i, 0)] += arr * v[i];
        if i >= 1 {
            a[(i, zcol(i))] += arr;
            a[(i, 0)] += mu1 * v[i];
            a[(i, zcol(i))] += mu2;
        }
        // inflow
        if i >= 1 {
            a[(i, 0)] -= lambda * v[i - 1];
            if i > 1 {
                a[(i, zcol(i - 1))] -= lambda;
            }
        }
        if i < n {
            a[(i, 0)] -= mu1 * v[i + 1];
            a[(i, zcol(i + 1))] -= mu2;
        }
    }
    a[(size, 0)] = v.iter().sum();
    for i in 1..size {
        a[(size, zcol(i))] = 1.0;
    }
    b[size] = 1.0;
    let sol = a.svd(true, true).solve(&b, 1e-14).unwrap();
    let c = sol[0];
    let y: Vec<f64> = v.iter().map(|vi| c * vi).collect();
    let p: Vec<f64> = (0..size).map(|i| y[i] + if i >= 1 { sol[zcol(i)] } else { 0.0 }).collect();
    DenseSolution { xi, p, y }
}

pub fn sigma_of(p: &ModelParams) -> f64 {
    sigma(p)
}
