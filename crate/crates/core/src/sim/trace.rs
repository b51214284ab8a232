use crate::error::{Error, Result};

/// One offered packet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketRecord {
    pub generation: f64,
    /// `None` for blocked packets and for packets still queued at the horizon.
    pub departure: Option<f64>,
    pub dropped: bool,
}

/// Mean peak AoI estimated two ways from a trace: `E[A] + E[S]` (gaps
/// between generations of delivered packets) and `E[D] + E[S]` (gaps
/// between deliveries, paired with the previous packet's sojourn).
///
/// Only deliveries at or after `warmup` with a delivered predecessor count.
pub fn interdeparture_crosscheck(trace: &[PacketRecord], warmup: f64) -> Result<(f64, f64)> {
    let delivered: Vec<(f64, f64)> =
        trace.iter().filter(|r| !r.dropped).filter_map(|r| r.departure.map(|d| (r.generation, d))).collect();

    let (mut gap_a, mut soj, mut gap_d, mut soj_prev, mut count) = (0.0, 0.0, 0.0, 0.0, 0usize);
    for w in delivered.windows(2) {
        let ((g0, d0), (g1, d1)) = (w[0], w[1]);
        if d1 < warmup {
            continue;
        }
        gap_a += g1 - g0;
        soj += d1 - g1;
        gap_d += d1 - d0;
        soj_prev += d0 - g0;
        count += 1;
    }
    if count == 0 {
        return Err(Error::InsufficientData(format!(
            "need at least two deliveries after warmup {warmup}, found {}",
            delivered.iter().filter(|(_, d)| *d >= warmup).count()
        )));
    }
    let n = count as f64;
    Ok(((gap_a + soj) / n, (gap_d + soj_prev) / n))
}
