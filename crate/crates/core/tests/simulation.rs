//! Simulator against known results. Horizons are shorter than the defaults;
//! tolerances are the reported 95% half-widths unless stated.

mod common;

use fluid_aoi::analytic;
use fluid_aoi::sim::{
    interdeparture_crosscheck, run_replication, simulate, simulate_replications, simulate_with_traces, Estimate,
    SimConfig,
};
use fluid_aoi::{Buffer, ModelParams, Reservoir};

/// Within two 95% half-widths (about four standard errors).
fn near(e: &Estimate, value: f64) -> bool {
    (e.point - value).abs() <= 2.0 * e.ci_half_width
}

fn p(lambda: f64, mu1: f64, mu2: f64, rp: f64, rm: f64) -> ModelParams {
    ModelParams::new(lambda, mu1, mu2, rp, rm).unwrap()
}

#[test]
fn unregulated_mean_aoi() {
    let e = simulate(&SimConfig::new(p(0.5, 1.0, 1.0, 1.0, 2.0)).horizon(2e5).seed(1)).unwrap();
    assert!(near(&e.mean_aoi, 3.5), "{:?}", e.mean_aoi);
    assert!(near(&e.mean_peak_aoi, 4.0), "{:?}", e.mean_peak_aoi);
}

#[test]
fn regulated_peak_aoi_with_infinite_reservoir() {
    let e = simulate(&SimConfig::new(p(1.0, 2.0, 1.5, 1.0, 2.0)).horizon(2e5).seed(2)).unwrap();
    assert!(near(&e.mean_peak_aoi, 2.7), "{:?}", e.mean_peak_aoi);
    assert!(near(&e.mean_sojourn, 1.7), "{:?}", e.mean_sojourn);
    assert!(e.reservoir_empty_fraction.point > 0.0);
    assert!(e.mean_peak_aoi.point >= e.mean_aoi.point);
}

#[test]
fn small_reservoir_raises_peak() {
    let q = p(1.0, 2.0, 1.5, 1.0, 2.0).with_reservoir(Reservoir::Finite(1.0)).unwrap();
    let e = simulate(&SimConfig::new(q).horizon(2e5).seed(3)).unwrap();
    // published 2.887
    assert!((e.mean_peak_aoi.point - 2.887).abs() < 0.05, "{:?}", e.mean_peak_aoi);
}

#[test]
fn no_waiting_room_matches_closed_form() {
    for q in [p(1.0, 1.0, 1.0, 1.0, 2.0), p(1.0, 2.0, 1.0, 1.0, 4.0)] {
        let q = q.with_buffer(Buffer::Finite(1)).unwrap();
        let e = simulate(&SimConfig::new(q).horizon(2e5).seed(4)).unwrap();
        let closed = analytic::mean_peak_aoi_mm11(&q).unwrap();
        assert!(near(&e.mean_peak_aoi, closed), "{closed} vs {:?}", e.mean_peak_aoi);
        let (_, p1) = analytic::stationary_mm11(&q).unwrap();
        assert!(near(&e.blocking_prob, p1), "{p1} vs {:?}", e.blocking_prob);
    }
}

#[test]
fn two_place_buffer_matches_stationary_solver() {
    let q = p(0.55, 1.0, 0.8, 1.0, 2.0).with_buffer(Buffer::Finite(2)).unwrap();
    let m = analytic::mean_peak_aoi_finite(2, &q).unwrap();
    let e = simulate(&SimConfig::new(q).horizon(2e5).seed(5)).unwrap();
    assert!(near(&e.mean_peak_aoi, m.mean_peak_aoi), "{} vs {:?}", m.mean_peak_aoi, e.mean_peak_aoi);
    assert!(near(&e.blocking_prob, m.blocking_prob), "{} vs {:?}", m.blocking_prob, e.blocking_prob);
}

#[test]
fn crosscheck_estimators_agree_on_heavy_load() {
    let q = p(1.0, 1.5, 1.1, 1.0, 1.0);
    let config = SimConfig::new(q).horizon(1e6).replications(8).seed(6);
    let (_, traces) = simulate_with_traces(&config).unwrap();
    let pairs: Vec<(f64, f64)> = traces.iter().map(|t| interdeparture_crosscheck(t, config.warmup).unwrap()).collect();
    for (a, d) in &pairs {
        assert!((a - d).abs() < 1e-3 * a, "{a} vs {d}");
    }
    let samples: Vec<f64> = pairs.iter().map(|(a, _)| *a).collect();
    let est = Estimate::from_samples(&samples);
    assert!(near(&est, 9.857), "{est:?}");
}

#[test]
fn sawtooth_area_matches_trace() {
    // Rebuild the time-average age from the trace by trapezoids.
    let q = p(0.8, 1.0, 0.9, 1.0, 3.0);
    let config = SimConfig::new(q).horizon(5_000.0).warmup(500.0).replications(1).seed(7);
    let mut trace = Vec::new();
    let stats = run_replication(&config, 0, Some(&mut trace));

    let mut deliveries: Vec<(f64, f64)> = trace.iter().filter_map(|r| r.departure.map(|d| (d, r.generation))).collect();
    deliveries.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (w, h) = (config.warmup, config.horizon);
    let mut u = 0.0;
    let mut from = w;
    let mut area = 0.0;
    for (d, g) in deliveries {
        if d >= w {
            area += 0.5 * ((from - u) + (d - u)) * (d - from);
            from = d;
        }
        u = g;
    }
    area += 0.5 * ((from - u) + (h - u)) * (h - from);
    assert!((area / (h - w) - stats.mean_aoi).abs() < 1e-9);
}

#[test]
fn unstable_runs_are_permitted() {
    // lambda > mu2 and sigma > lambda/mu1 at once; no stationary regime
    let q = p(0.2, 1.0, 0.1, 5.0, 1.0);
    let e = simulate(&SimConfig::new(q).horizon(1e4).replications(2).seed(8)).unwrap();
    assert!(e.mean_aoi.point.is_finite());
    let stalled = p(1.0, 1.0, 0.0, 1.0, 2.0).with_buffer(Buffer::Finite(1)).unwrap();
    let reps = simulate_replications(&SimConfig::new(stalled).horizon(1e3).replications(2)).unwrap();
    assert!(reps.iter().all(|r| r.mean_aoi > 0.0));
}
