//! Subcommand implementations. Every command computes its full output
//! before writing anything, so failures never leave partial CSV behind.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};

use fluid_aoi::analytic::{self, feasible_lambda_range, find_optimal_lambda, Metric};
use fluid_aoi::experiments::{validation_panel, TABLE1};
use fluid_aoi::sim::{self, SimConfig, SimEstimate};
use fluid_aoi::{Error, ModelParams};

use crate::args::{
    Engine, EvalArgs, ModelArgs, OutputArgs, SimArgs, SimulateArgs, SweepArgs, Table1Args, ValidateArgs,
};
use crate::format::{self, Cell, HEADER};
use crate::Failure;

fn required(value: Option<f64>, flag: &str) -> Result<f64, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("--{flag} is required")))
}

fn build_params(m: &ModelArgs, lambda: f64) -> Result<ModelParams, Failure> {
    let p = ModelParams::new(
        lambda,
        required(m.mu1, "mu1")?,
        required(m.mu2, "mu2")?,
        required(m.r_plus, "r-plus")?,
        required(m.r_minus, "r-minus")?,
    )?;
    Ok(p.with_buffer(m.buffer)?.with_reservoir(m.reservoir)?)
}

fn sim_config(params: ModelParams, s: &SimArgs) -> Result<SimConfig, Failure> {
    let mut config = SimConfig::new(params).seed(s.seed);
    if let Some(h) = s.horizon {
        config = config.horizon(h);
    }
    if let Some(w) = s.warmup {
        config = config.warmup(w);
    }
    if let Some(r) = s.reps {
        config = config.replications(r);
    }
    config.validate()?;
    Ok(config)
}

fn sorted<T: Ord + Copy>(items: &[T]) -> Vec<T> {
    items.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
}

fn emit(output: &OutputArgs, stdout: &mut dyn Write, text: &str) -> Result<(), Failure> {
    match &output.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| Failure::Io(format!("cannot create {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            w.write_all(text.as_bytes()).and_then(|_| w.flush()).map_err(|e| Failure::Io(e.to_string()))
        }
        None => stdout.write_all(text.as_bytes()).map_err(|e| Failure::Io(e.to_string())),
    }
}

fn csv(rows: &[String]) -> String {
    let mut text = String::with_capacity(128 * (rows.len() + 1));
    text.push_str(HEADER);
    text.push('\n');
    for r in rows {
        text.push_str(r);
        text.push('\n');
    }
    text
}

/// Closed-form value, or `None` outside the stability region.
fn analytic_cell(params: &ModelParams, metric: Metric) -> Result<Option<f64>, Failure> {
    if !analytic::is_feasible(params) {
        return Ok(None);
    }
    match analytic::evaluate(params, metric) {
        Ok(v) => Ok(Some(v)),
        Err(Error::StabilityViolation(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// Simulation estimate, or `None` when the queue has no stationary regime.
fn simulation_cell(params: &ModelParams, s: &SimArgs) -> Result<Option<SimEstimate>, Failure> {
    if !sim::has_stationary_regime(params) {
        return Ok(None);
    }
    Ok(Some(sim::simulate(&sim_config(*params, s)?)?))
}

/// Rows for one parameter point in metric-name order, engines in
/// analytic-then-simulation order. `strict` turns infeasibility into an error.
fn point_rows(
    params: &ModelParams,
    metrics: &[Metric],
    engines: &[Engine],
    s: &SimArgs,
    strict: bool,
) -> Result<Vec<String>, Failure> {
    let unstable = || {
        Failure::Model(Error::StabilityViolation(format!(
            "simulated queue has no stationary regime at lambda = {}, mu1 = {}, mu2 = {}, r+ = {}, r- = {}, buffer = {}",
            params.lambda(),
            params.mu1(),
            params.mu2(),
            params.r_plus(),
            params.r_minus(),
            params.buffer()
        )))
    };
    let simulated = if engines.contains(&Engine::Simulation) {
        let est = simulation_cell(params, s)?;
        if est.is_none() && strict {
            return Err(unstable());
        }
        est
    } else {
        None
    };
    let mut rows = Vec::new();
    for &metric in metrics {
        for &engine in engines {
            let cell = match engine {
                Engine::Analytic if strict => Cell::Exact(analytic::evaluate(params, metric)?),
                Engine::Analytic => analytic_cell(params, metric)?.map_or(Cell::Infeasible, Cell::Exact),
                Engine::Simulation => simulated.map_or(Cell::Infeasible, |e| Cell::Interval(e.metric(metric))),
            };
            let status = if matches!(cell, Cell::Infeasible) { "infeasible" } else { "ok" };
            rows.push(format::row(params, metric, engine, cell, status));
        }
    }
    Ok(rows)
}

pub fn eval(a: &EvalArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let params = build_params(&a.model, required(a.model.lambda, "lambda")?)?;
    let rows = point_rows(&params, &sorted(&a.metric), &sorted(&a.engine), &a.sim, true)?;
    emit(&a.output, stdout, &csv(&rows))
}

pub fn simulate(a: &SimulateArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    if a.engine != [Engine::Simulation] {
        return Err(Failure::Usage("simulate only runs the simulation engine; use eval to compare engines".into()));
    }
    let params = build_params(&a.model, required(a.model.lambda, "lambda")?)?;
    let config = sim_config(params, &a.sim)?;
    let metrics = sorted(&a.metric);
    let (estimate, traces) = match &a.trace {
        Some(_) => {
            let (e, t) = sim::simulate_with_traces(&config)?;
            (e, Some(t))
        }
        None => (sim::simulate(&config)?, None),
    };
    let rows: Vec<String> = metrics
        .iter()
        .map(|&m| format::row(&params, m, Engine::Simulation, Cell::Interval(estimate.metric(m)), "ok"))
        .collect();
    if let (Some(path), Some(traces)) = (&a.trace, traces) {
        let file = File::create(path).map_err(|e| Failure::Io(format!("cannot create {}: {e}", path.display())))?;
        let mut w = BufWriter::new(file);
        let write = |w: &mut BufWriter<File>| -> std::io::Result<()> {
            writeln!(w, "replication,packet,generation,departure,dropped")?;
            for (rep, trace) in traces.iter().enumerate() {
                for (i, p) in trace.iter().enumerate() {
                    let departure = p.departure.map(format::real).unwrap_or_default();
                    writeln!(w, "{rep},{i},{},{departure},{}", format::real(p.generation), p.dropped)?;
                }
            }
            w.flush()
        };
        write(&mut w).map_err(|e| Failure::Io(e.to_string()))?;
    }
    emit(&a.output, stdout, &csv(&rows))
}

/// Arrival rates `start + k step` up to `stop`, tolerating rounding at the end.
fn lambda_grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    (0..=n).map(|k| start + k as f64 * step).collect()
}

pub fn sweep(a: &SweepArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    if a.model.lambda.is_some() {
        return Err(Failure::Usage("sweep varies lambda; use --lambda-start/--lambda-stop/--lambda-step".into()));
    }
    let mut model = a.model.clone();
    let mut metrics = a.metric.clone();
    if let Some(preset) = a.preset {
        let (rp, rm) = preset.rates();
        model.mu1 = model.mu1.or(Some(1.0));
        model.r_plus = model.r_plus.or(Some(rp));
        model.r_minus = model.r_minus.or(Some(rm));
        if metrics.is_empty() {
            metrics.push(preset.metric());
        }
    }
    if metrics.is_empty() {
        metrics.push(Metric::PeakAoi);
    }
    let metrics = sorted(&metrics);
    let engines = sorted(&a.engine);
    let template = build_params(&model, 1.0)?;

    let default_range = feasible_lambda_range(&template);
    let (start, stop) = match (a.lambda_start, a.lambda_stop, default_range) {
        (Some(lo), Some(hi), _) => (lo, hi),
        (lo, hi, Some((flo, fhi))) => (lo.unwrap_or(flo), hi.unwrap_or(fhi)),
        (lo, hi, None) => {
            let lo = lo.unwrap_or(0.0);
            let hi = hi.unwrap_or(2.0 * template.mu1());
            return Err(Error::EmptyFeasibleRegion { lo, hi }.into());
        }
    };
    if !(start > 0.0 && start < stop && a.lambda_step > 0.0 && stop.is_finite()) {
        return Err(Failure::Usage(format!(
            "need 0 < lambda-start < lambda-stop and lambda-step > 0, got {start}, {stop}, {}",
            a.lambda_step
        )));
    }

    let mut rows = Vec::new();
    for lambda in lambda_grid(start, stop, a.lambda_step) {
        let params = template.with_lambda(lambda)?;
        rows.extend(point_rows(&params, &metrics, &engines, &a.sim, false)?);
    }
    if a.find_min {
        for &metric in &metrics {
            let best = find_optimal_lambda(&template, start, stop, metric)?;
            let params = template.with_lambda(best.lambda)?;
            rows.push(format::row(&params, metric, Engine::Analytic, Cell::Exact(best.value), "argmin"));
        }
    }
    emit(&a.output, stdout, &csv(&rows))
}

fn table_sim_args(s: &SimArgs) -> SimArgs {
    SimArgs {
        seed: s.seed,
        horizon: Some(s.horizon.unwrap_or(sim::DEFAULT_HORIZON)),
        warmup: s.warmup,
        reps: Some(s.reps.unwrap_or(sim::DEFAULT_REPLICATIONS)),
    }
}

pub fn table1(a: &Table1Args, stdout: &mut dyn Write) -> Result<(), Failure> {
    let s = table_sim_args(&a.sim);
    let mut report = String::new();
    writeln!(
        report,
        "{:>5} {:>5} {:>4} {:>4}  {:>9} {:>9} {:>9} {:>8}  engine",
        "mu1", "mu2", "r-", "D", "reference", "computed", "ci_half", "|diff|"
    )
    .unwrap();
    let mut rows = Vec::new();
    for r in TABLE1.iter() {
        let params = r.params();
        // Every finite capacity shares the seed, so rows compare under common random numbers.
        let (cell, engine) = if r.reservoir.is_infinite() {
            (Cell::Exact(analytic::evaluate(&params, Metric::PeakAoi)?), Engine::Analytic)
        } else {
            let e = sim::simulate(&sim_config(params, &s)?)?;
            (Cell::Interval(e.mean_peak_aoi), Engine::Simulation)
        };
        let (value, half) = match cell {
            Cell::Exact(v) => (v, String::from("-")),
            Cell::Interval(e) => (e.point, format!("{:.4}", e.ci_half_width)),
            Cell::Infeasible => unreachable!("table rows are stable"),
        };
        writeln!(
            report,
            "{:>5} {:>5} {:>4} {:>4}  {:>9.3} {:>9.4} {:>9} {:>8.4}  {}",
            r.mu1,
            r.mu2,
            r.r_minus,
            format::reservoir(r.reservoir).trim_end_matches('0').trim_end_matches('.'),
            r.reference,
            value,
            half,
            (value - r.reference).abs(),
            engine.name()
        )
        .unwrap();
        rows.push(format::row(&params, Metric::PeakAoi, engine, cell, "ok"));
    }
    stdout.write_all(report.as_bytes()).map_err(|e| Failure::Io(e.to_string()))?;
    if a.output.out.is_some() {
        emit(&a.output, stdout, &csv(&rows))?;
    }
    Ok(())
}

/// Returns whether every panel case passed.
pub fn validate(a: &ValidateArgs, stdout: &mut dyn Write) -> Result<bool, Failure> {
    let s = table_sim_args(&a.sim);
    let mut report = String::new();
    let mut rows = Vec::new();
    let mut passed = 0;
    let panel = validation_panel();
    for (i, case) in panel.iter().enumerate() {
        let value = case.analytic_value()?;
        let case_args = SimArgs { seed: s.seed.wrapping_add(i as u64), ..s.clone() };
        let est = sim::simulate(&sim_config(case.params, &case_args)?)?.metric(case.formula.metric());
        let ok = est.covers(value);
        passed += usize::from(ok);
        writeln!(
            report,
            "{} {:<22} analytic {:>10.6}  simulation {:>10.6} [{:.6}, {:.6}]",
            if ok { "PASS" } else { "FAIL" },
            case.name,
            value,
            est.point,
            est.low(),
            est.high()
        )
        .unwrap();
        let metric = case.formula.metric();
        rows.push(format::row(
            &case.params,
            metric,
            Engine::Simulation,
            Cell::Interval(est),
            if ok { "pass" } else { "fail" },
        ));
    }
    writeln!(report, "{passed}/{} cases covered by the 95% simulation interval", panel.len()).unwrap();
    stdout.write_all(report.as_bytes()).map_err(|e| Failure::Io(e.to_string()))?;
    if a.output.out.is_some() {
        emit(&a.output, stdout, &csv(&rows))?;
    }
    Ok(passed == panel.len())
}
