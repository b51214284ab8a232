//! Discrete-event simulation of the regulated queue.
//!
//! Handles every combination of buffer and reservoir capacity, and is the
//! only engine for finite reservoirs. Each replication is sequential;
//! replications run in parallel and are reduced in index order, so results
//! depend only on the configuration and seed.

mod engine;
mod reservoir;
mod stats;
mod trace;

use rayon::prelude::*;

pub use engine::{
    initial_level, next_service_completion, run_replication, stream_rng, ReplicationStats, ServiceSchedule,
};
pub use reservoir::SimState;
pub use stats::{t_quantile_975, Estimate};
pub use trace::{interdeparture_crosscheck, PacketRecord};

use crate::error::{Error, Result};
use crate::model::ModelParams;

pub const DEFAULT_HORIZON: f64 = 1e6;
pub const DEFAULT_REPLICATIONS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub params: ModelParams,
    /// Simulated time per replication.
    pub horizon: f64,
    /// Initial period excluded from every statistic.
    pub warmup: f64,
    pub replications: usize,
    pub seed: u64,
}

impl SimConfig {
    /// Default horizon 1e6, warmup 10% of the horizon, 20 replications.
    pub fn new(params: ModelParams) -> Self {
        Self {
            params,
            horizon: DEFAULT_HORIZON,
            warmup: DEFAULT_HORIZON / 10.0,
            replications: DEFAULT_REPLICATIONS,
            seed: 0,
        }
    }

    /// Sets the horizon and resets the warmup to 10% of it.
    pub fn horizon(mut self, horizon: f64) -> Self {
        self.horizon = horizon;
        self.warmup = horizon / 10.0;
        self
    }

    pub fn warmup(mut self, warmup: f64) -> Self {
        self.warmup = warmup;
        self
    }

    pub fn replications(mut self, replications: usize) -> Self {
        self.replications = replications;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::InvalidConfig(format!("horizon must be positive, got {}", self.horizon)));
        }
        if !(self.warmup >= 0.0 && self.warmup < self.horizon) {
            return Err(Error::InvalidConfig(format!(
                "warmup must lie in [0, horizon), got {} with horizon {}",
                self.warmup, self.horizon
            )));
        }
        if self.replications < 1 {
            return Err(Error::InvalidConfig("at least one replication is required".into()));
        }
        Ok(())
    }
}

/// Replication-mean estimates with Student-t 95% intervals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimEstimate {
    pub mean_aoi: Estimate,
    pub mean_peak_aoi: Estimate,
    pub mean_sojourn: Estimate,
    pub blocking_prob: Estimate,
    pub reservoir_empty_fraction: Estimate,
    pub replications_used: usize,
}

impl SimEstimate {
    pub fn from_replications(reps: &[ReplicationStats]) -> Self {
        let pick = |f: fn(&ReplicationStats) -> f64| Estimate::from_samples(&reps.iter().map(f).collect::<Vec<_>>());
        Self {
            mean_aoi: pick(|r| r.mean_aoi),
            mean_peak_aoi: pick(|r| r.mean_peak_aoi),
            mean_sojourn: pick(|r| r.mean_sojourn),
            blocking_prob: pick(|r| r.blocking_prob),
            reservoir_empty_fraction: pick(|r| r.reservoir_empty_fraction),
            replications_used: reps.len(),
        }
    }

    pub fn metric(&self, metric: crate::analytic::Metric) -> Estimate {
        use crate::analytic::Metric;
        match metric {
            Metric::MeanAoi => self.mean_aoi,
            Metric::PeakAoi => self.mean_peak_aoi,
            Metric::Sojourn => self.mean_sojourn,
            Metric::Blocking => self.blocking_prob,
        }
    }
}

/// Whether the simulated queue settles into a stationary regime.
///
/// This is weaker than the closed-form stability conditions, which also
/// require the reservoir to empty now and then. A finite buffer is always
/// stable. With an infinite buffer, a saturated server drains the reservoir
/// when `r- >= r+` and then works at `mu2`; otherwise energy accumulates and
/// it works at `mu1`.
pub fn has_stationary_regime(params: &ModelParams) -> bool {
    match params.buffer() {
        crate::model::Buffer::Finite(_) => true,
        crate::model::Buffer::Infinite => {
            let lambda = params.lambda();
            lambda < params.mu2() || (params.r_plus() > params.r_minus() && lambda < params.mu1())
        }
    }
}

/// Per-replication statistics, in replication order.
pub fn simulate_replications(config: &SimConfig) -> Result<Vec<ReplicationStats>> {
    config.validate()?;
    Ok((0..config.replications).into_par_iter().map(|rep| run_replication(config, rep, None)).collect())
}

/// Run all replications and aggregate them.
///
/// Stability is not checked: unstable parameters simply produce growing
/// ages.
pub fn simulate(config: &SimConfig) -> Result<SimEstimate> {
    Ok(SimEstimate::from_replications(&simulate_replications(config)?))
}

/// Like [`simulate`], also returning the packet trace of every replication.
pub fn simulate_with_traces(config: &SimConfig) -> Result<(SimEstimate, Vec<Vec<PacketRecord>>)> {
    config.validate()?;
    let runs: Vec<(ReplicationStats, Vec<PacketRecord>)> = (0..config.replications)
        .into_par_iter()
        .map(|rep| {
            let mut trace = Vec::new();
            let stats = run_replication(config, rep, Some(&mut trace));
            (stats, trace)
        })
        .collect();
    let (stats, traces): (Vec<_>, Vec<_>) = runs.into_iter().unzip();
    Ok((SimEstimate::from_replications(&stats), traces))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Buffer;

    #[test]
    fn stationary_regime() {
        let p = ModelParams::new(0.2, 1.0, 1.0, 1.0, 2.0).unwrap();
        assert!(has_stationary_regime(&p));
        let p = ModelParams::new(0.6, 1.0, 0.5, 1.0, 2.0).unwrap();
        assert!(!has_stationary_regime(&p));
        assert!(has_stationary_regime(&p.with_buffer(Buffer::Finite(1)).unwrap()));
        let p = ModelParams::new(0.6, 1.0, 0.5, 3.0, 2.0).unwrap();
        assert!(has_stationary_regime(&p));
    }

    #[test]
    fn config_validation() {
        let p = ModelParams::new(0.5, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert!(matches!(simulate(&SimConfig::new(p).warmup(2e6)), Err(Error::InvalidConfig(_))));
        assert!(matches!(simulate(&SimConfig::new(p).replications(0)), Err(Error::InvalidConfig(_))));
        assert!(matches!(simulate(&SimConfig::new(p).horizon(-1.0)), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn finite_buffer_never_overflows_and_blocks() {
        let p = ModelParams::new(2.0, 1.0, 0.5, 1.0, 2.0).unwrap().with_buffer(Buffer::Finite(2)).unwrap();
        let config = SimConfig::new(p).horizon(2_000.0).replications(1).seed(3);
        let mut trace = Vec::new();
        let stats = run_replication(&config, 0, Some(&mut trace));
        assert!(stats.blocked > 0);
        // Replay occupancy from the trace.
        let mut events: Vec<(f64, i32)> = Vec::new();
        for r in trace.iter().filter(|r| !r.dropped) {
            events.push((r.generation, 1));
            if let Some(d) = r.departure {
                events.push((d, -1));
            }
        }
        events.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut n = 0;
        for (_, delta) in events {
            n += delta;
            assert!((0..=2).contains(&n));
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let p = ModelParams::new(1.0, 2.0, 1.5, 1.0, 2.0).unwrap();
        let config = SimConfig::new(p).horizon(5_000.0).replications(4).seed(11);
        assert_eq!(simulate(&config).unwrap(), simulate(&config).unwrap());
        assert_ne!(simulate(&config).unwrap(), simulate(&config.seed(12)).unwrap());
    }
}
