//! Closed forms checked against independently computed references.

mod common;

use approx::assert_abs_diff_eq;
use common::{dense_finite_solution, integrate_tail};
use fluid_aoi::analytic::{self, Metric};
use fluid_aoi::{Buffer, ModelParams};

fn p(lambda: f64, mu1: f64, mu2: f64, rp: f64, rm: f64) -> ModelParams {
    ModelParams::new(lambda, mu1, mu2, rp, rm).unwrap()
}

#[test]
fn quadrature_of_tails_matches_means() {
    for q in [p(1.0, 2.0, 1.5, 1.0, 2.0), p(0.35, 1.0, 2.0 / 3.0, 1.0, 4.0), p(1.0, 1.5, 1.1, 1.0, 1.0)] {
        let es = integrate_tail(&|s| analytic::sojourn_ccdf(&q, s).unwrap());
        let ew = integrate_tail(&|s| analytic::waiting_ccdf(&q, s).unwrap());
        assert_abs_diff_eq!(es, analytic::mean_sojourn_inf(&q).unwrap(), epsilon = 1e-6);
        assert_abs_diff_eq!(ew, analytic::mean_waiting_inf(&q).unwrap(), epsilon = 1e-6);
    }
}

#[test]
fn waiting_interarrival_moment_by_double_quadrature() {
    // E[W A] = E[A E[(S - A)^+ | A]] with A ~ Exp(lambda) independent of S.
    let q = p(1.0, 2.0, 1.5, 1.0, 2.0);
    let lambda = q.lambda();
    let excess = |a: f64| integrate_tail(&|t| analytic::sojourn_ccdf(&q, a + t).unwrap());
    let value = integrate_tail(&|a| a * lambda * (-lambda * a).exp() * excess(a));
    assert_abs_diff_eq!(value, analytic::mean_waiting_times_interarrival(&q).unwrap(), epsilon = 1e-6);
}

#[test]
fn dense_solver_agrees_with_recursive_solver() {
    let cases = [
        (1, p(1.0, 2.0, 1.0, 1.0, 4.0)),
        (2, p(1.0, 1.0, 1.0, 1.0, 2.0)),
        (2, p(0.4, 1.0, 0.8, 1.0, 2.0)),
        (3, p(1.0, 1.0, 0.8, 1.0, 2.0)),
        (4, p(0.8, 1.0, 0.6, 1.0, 2.0)),
        (6, p(1.3, 1.7, 0.9, 0.7, 2.5)),
    ];
    for (n, q) in cases {
        let dense = dense_finite_solution(n, &q);
        let dist = analytic::solve_stationary_finite(n, &q).unwrap();
        assert_abs_diff_eq!(dist.xi0, dense.xi, epsilon = 1e-9);
        for i in 0..=n {
            assert_abs_diff_eq!(dist.p[i], dense.p[i], epsilon = 1e-9);
            assert_abs_diff_eq!(dist.y[i], dense.y[i], epsilon = 1e-9);
        }
    }
}

#[test]
fn unregulated_finite_buffer_is_truncated_geometric() {
    // mu1 = mu2: p_i proportional to rho^i regardless of the reservoir.
    for n in 1..=5 {
        let q = p(0.7, 1.0, 1.0, 1.0, 3.0).with_buffer(Buffer::Finite(n)).unwrap();
        let dist = analytic::solve_stationary_finite(n, &q).unwrap();
        let norm: f64 = (0..=n).map(|k| 0.7f64.powi(k as i32)).sum();
        for (i, pi) in dist.p.iter().enumerate() {
            assert_abs_diff_eq!(*pi, 0.7f64.powi(i as i32) / norm, epsilon = 1e-12);
        }
    }
}

#[test]
fn evaluate_dispatches_on_buffer() {
    let base = p(1.0, 2.0, 1.5, 1.0, 2.0);
    assert_abs_diff_eq!(analytic::evaluate(&base, Metric::PeakAoi).unwrap(), 2.7, epsilon = 1e-12);
    let n1 = p(1.0, 2.0, 1.0, 1.0, 4.0).with_buffer(Buffer::Finite(1)).unwrap();
    assert_abs_diff_eq!(analytic::evaluate(&n1, Metric::PeakAoi).unwrap(), 2.5, epsilon = 1e-12);
    assert_abs_diff_eq!(analytic::evaluate(&n1, Metric::Blocking).unwrap(), 1.5 / 3.5, epsilon = 1e-12);
}
