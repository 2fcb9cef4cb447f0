use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::trace::TraceRecord;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Occupancy {
    /// Records whose tick fell inside the window.
    pub ticks: usize,
    pub mean: f64,
    /// Fraction of those records covering at least `target` nodes.
    pub fraction_at_target: f64,
}

/// Mean coverage and time at the target over the ticks in `window`
/// (inclusive on both ends).
pub fn occupancy_statistics(
    trace: &[TraceRecord],
    window: RangeInclusive<u64>,
    target: usize,
) -> Result<Occupancy> {
    let (mut ticks, mut sum, mut hits) = (0usize, 0u64, 0usize);
    for rec in trace.iter().filter(|r| window.contains(&r.tick)) {
        ticks += 1;
        sum += rec.covered as u64;
        hits += usize::from(rec.covered >= target);
    }
    if ticks == 0 {
        return Err(Error::input(format!(
            "no trace records in window {}..={}",
            window.start(),
            window.end()
        )));
    }
    Ok(Occupancy {
        ticks,
        mean: sum as f64 / ticks as f64,
        fraction_at_target: hits as f64 / ticks as f64,
    })
}
