//! Event loop of a single replication.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::model::{Buffer, ModelParams, Reservoir};
use crate::sim::reservoir::SimState;
use crate::sim::trace::PacketRecord;
use crate::sim::SimConfig;

const ARRIVAL_STREAM: u64 = 0;
const SERVICE_STREAM: u64 = 1;
const STREAMS_PER_REPLICATION: u64 = 2;

/// Independent random stream `stream` of replication `replication`.
pub fn stream_rng(seed: u64, replication: usize, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replication as u64 * STREAMS_PER_REPLICATION + stream);
    rng
}

/// Starting level: full for a finite reservoir, `10 / r-` otherwise.
pub fn initial_level(params: &ModelParams) -> f64 {
    match params.reservoir() {
        Reservoir::Finite(d) => d,
        Reservoir::Infinite => 10.0 / params.r_minus(),
    }
}

/// Pending end of the current service and the instant the reservoir would
/// run dry during it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ServiceSchedule {
    pub completion: f64,
    pub crossing: f64,
}

/// Draw the next service completion for a busy server at `state.clock`.
///
/// With energy left the completion is drawn at rate `mu1` and the dry-out
/// instant `level / r-` is returned alongside it; if the dry-out comes first
/// the caller discards the completion and calls again with an empty
/// reservoir, which draws afresh at rate `mu2`. Memorylessness makes this
/// exact.
pub fn next_service_completion(state: &SimState, params: &ModelParams, rng: &mut impl Rng) -> ServiceSchedule {
    let draw: f64 = rng.sample(Exp1);
    if state.reservoir_level > 0.0 {
        ServiceSchedule {
            completion: state.clock + draw / params.mu1(),
            crossing: state.clock + state.reservoir_level / params.r_minus(),
        }
    } else {
        ServiceSchedule { completion: state.clock + draw / params.mu2(), crossing: f64::INFINITY }
    }
}

/// Per-replication outputs. Time averages cover `[warmup, horizon]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplicationStats {
    pub mean_aoi: f64,
    pub mean_peak_aoi: f64,
    pub mean_sojourn: f64,
    pub blocking_prob: f64,
    pub reservoir_empty_fraction: f64,
    pub deliveries: u64,
    pub offered: u64,
    pub blocked: u64,
}

/// Area under the unit-slope age curve `t - u` over `[a, b]`.
fn age_area(a: f64, b: f64, u: f64) -> f64 {
    0.5 * (b - a) * ((b - u) + (a - u))
}

struct Accumulators {
    warmup: f64,
    area: f64,
    area_from: f64,
    peak_sum: f64,
    sojourn_sum: f64,
    deliveries: u64,
    offered: u64,
    blocked: u64,
    empty_time: f64,
    empty_since: Option<f64>,
}

impl Accumulators {
    fn close_empty(&mut self, t: f64) {
        if let Some(start) = self.empty_since.take() {
            let start = start.max(self.warmup);
            if t > start {
                self.empty_time += t - start;
            }
        }
    }
}

pub fn run_replication(
    config: &SimConfig,
    replication: usize,
    mut trace: Option<&mut Vec<PacketRecord>>,
) -> ReplicationStats {
    let params = &config.params;
    let (horizon, warmup) = (config.horizon, config.warmup);
    let capacity = match params.buffer() {
        Buffer::Infinite => usize::MAX,
        Buffer::Finite(n) => n,
    };
    let mut arrivals = stream_rng(config.seed, replication, ARRIVAL_STREAM);
    let mut services = stream_rng(config.seed, replication, SERVICE_STREAM);

    let mut state = SimState::new(initial_level(params));
    let mut acc = Accumulators {
        warmup,
        area: 0.0,
        area_from: warmup,
        peak_sum: 0.0,
        sojourn_sum: 0.0,
        deliveries: 0,
        offered: 0,
        blocked: 0,
        empty_time: 0.0,
        empty_since: None,
    };
    // Trace indices of accepted packets still in system (FCFS order).
    let mut in_system = std::collections::VecDeque::new();

    let mut next_arrival = arrivals.sample::<f64, _>(Exp1) / params.lambda();
    let mut schedule = ServiceSchedule { completion: f64::INFINITY, crossing: f64::INFINITY };

    loop {
        let t = next_arrival.min(schedule.completion).min(schedule.crossing);
        if t > horizon {
            break;
        }
        let busy = state.is_busy();
        state.advance_reservoir(t, busy, params);
        state.clock = t;

        if next_arrival <= schedule.completion && next_arrival <= schedule.crossing {
            if t >= warmup {
                acc.offered += 1;
            }
            let accepted = state.queue_len() < capacity;
            if let Some(tr) = trace.as_deref_mut() {
                if accepted {
                    in_system.push_back(tr.len());
                }
                tr.push(PacketRecord { generation: t, departure: None, dropped: !accepted });
            }
            if accepted {
                state.generation_times.push_back(t);
                if !busy {
                    schedule = next_service_completion(&state, params, &mut services);
                    if state.reservoir_level <= 0.0 {
                        acc.empty_since = Some(t);
                    }
                }
            } else if t >= warmup {
                acc.blocked += 1;
            }
            next_arrival = t + arrivals.sample::<f64, _>(Exp1) / params.lambda();
        } else if schedule.crossing <= schedule.completion {
            state.reservoir_level = 0.0;
            acc.empty_since = Some(t);
            schedule = next_service_completion(&state, params, &mut services);
        } else {
            let generation = state.generation_times.pop_front().expect("completion while idle");
            if let Some(tr) = trace.as_deref_mut() {
                let idx = in_system.pop_front().expect("trace out of sync");
                tr[idx].departure = Some(t);
            }
            if t >= warmup {
                acc.area += age_area(acc.area_from, t, state.last_delivered_generation);
                acc.area_from = t;
                acc.peak_sum += t - state.last_delivered_generation;
                acc.sojourn_sum += t - generation;
                acc.deliveries += 1;
            }
            state.last_delivered_generation = generation;
            if state.is_busy() {
                schedule = next_service_completion(&state, params, &mut services);
            } else {
                schedule = ServiceSchedule { completion: f64::INFINITY, crossing: f64::INFINITY };
                acc.close_empty(t);
            }
        }
    }

    acc.area += age_area(acc.area_from, horizon, state.last_delivered_generation);
    acc.close_empty(horizon);

    let window = horizon - warmup;
    let per_delivery = |sum: f64| if acc.deliveries > 0 { sum / acc.deliveries as f64 } else { f64::NAN };
    ReplicationStats {
        mean_aoi: acc.area / window,
        mean_peak_aoi: per_delivery(acc.peak_sum),
        mean_sojourn: per_delivery(acc.sojourn_sum),
        blocking_prob: if acc.offered > 0 { acc.blocked as f64 / acc.offered as f64 } else { 0.0 },
        reservoir_empty_fraction: acc.empty_time / window,
        deliveries: acc.deliveries,
        offered: acc.offered,
        blocked: acc.blocked,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ModelParams {
        ModelParams::new(1.0, 2.0, 1.5, 1.0, 2.0).unwrap()
    }

    #[test]
    fn full_reservoir_serves_at_mu1() {
        let mut state = SimState::new(1e12);
        let mut rng = stream_rng(7, 0, SERVICE_STREAM);
        let n = 200_000;
        let mut total = 0.0;
        for _ in 0..n {
            let s = next_service_completion(&state, &params(), &mut rng);
            assert!(s.crossing > s.completion);
            total += s.completion - state.clock;
            state.clock += 1.0;
        }
        // Exp(2): mean 0.5, sd 0.5; 5 standard errors
        assert!((total / n as f64 - 0.5).abs() < 5.0 * 0.5 / (n as f64).sqrt());
    }

    #[test]
    fn empty_reservoir_serves_at_mu2() {
        let state = SimState::new(0.0);
        let mut rng = stream_rng(7, 0, SERVICE_STREAM);
        let n = 200_000;
        let mut total = 0.0;
        for _ in 0..n {
            let s = next_service_completion(&state, &params(), &mut rng);
            assert!(s.crossing.is_infinite());
            total += s.completion;
        }
        let sd = 1.0 / 1.5;
        assert!((total / n as f64 - sd).abs() < 5.0 * sd / (n as f64).sqrt());
    }

    #[test]
    fn age_area_is_trapezoid() {
        // age rises from 2 to 5 over [3, 6] with u = 1
        assert_eq!(age_area(3.0, 6.0, 1.0), 10.5);
    }

    #[test]
    fn streams_differ() {
        let a: f64 = stream_rng(1, 0, ARRIVAL_STREAM).sample(Exp1);
        let b: f64 = stream_rng(1, 0, SERVICE_STREAM).sample(Exp1);
        let c: f64 = stream_rng(1, 1, ARRIVAL_STREAM).sample(Exp1);
        assert!(a != b && a != c);
    }
}
