use std::collections::VecDeque;

use crate::model::ModelParams;

/// Mutable state of one replication.
#[derive(Debug, Clone)]
pub struct SimState {
    pub clock: f64,
    /// Generation (= arrival) times of packets in system, head in service.
    pub generation_times: VecDeque<f64>,
    /// Energy at `level_timestamp`.
    pub reservoir_level: f64,
    pub level_timestamp: f64,
    pub last_delivered_generation: f64,
}

impl SimState {
    pub fn new(initial_level: f64) -> Self {
        Self {
            clock: 0.0,
            generation_times: VecDeque::new(),
            reservoir_level: initial_level,
            level_timestamp: 0.0,
            last_delivered_generation: 0.0,
        }
    }

    pub fn queue_len(&self) -> usize {
        self.generation_times.len()
    }

    pub fn is_busy(&self) -> bool {
        !self.generation_times.is_empty()
    }

    /// Bring the reservoir level forward to `to_time`: fill at `r+` up to the
    /// capacity while idle, drain at `r-` down to zero while busy.
    pub fn advance_reservoir(&mut self, to_time: f64, busy: bool, params: &ModelParams) -> f64 {
        debug_assert!(to_time >= self.level_timestamp);
        let dt = to_time - self.level_timestamp;
        self.reservoir_level = if busy {
            (self.reservoir_level - params.r_minus() * dt).max(0.0)
        } else {
            (self.reservoir_level + params.r_plus() * dt).min(params.reservoir().capacity())
        };
        self.level_timestamp = to_time;
        debug_assert!(self.reservoir_level >= 0.0 && self.reservoir_level <= params.reservoir().capacity());
        self.reservoir_level
    }
}
