use serde::Serialize;

use super::{time_to_x, Viewport};
use crate::timecode::{format_timecode, Timecode};

/// Minimum horizontal distance between ticks.
pub const MIN_TICK_SPACING_PX: u64 = 60;

const SECOND: u64 = 1_000;
const MINUTE: u64 = 60 * SECOND;
const HOUR: u64 = 60 * MINUTE;
const LADDER: [u64; 9] = [
    SECOND,
    5 * SECOND,
    10 * SECOND,
    30 * SECOND,
    MINUTE,
    5 * MINUTE,
    10 * MINUTE,
    30 * MINUTE,
    HOUR,
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tick {
    pub t: Timecode,
    pub x: u32,
    pub label: String,
}

fn spacing_ok(step: u64, vp: &Viewport) -> bool {
    u128::from(step) * u128::from(vp.width_px) >= u128::from(MIN_TICK_SPACING_PX) * u128::from(vp.span())
}

/// The smallest ladder step at least 60 px wide on screen; beyond the
/// ladder, hour steps keep doubling.
pub fn tick_step(vp: &Viewport) -> u64 {
    if let Some(&step) = LADDER.iter().find(|&&s| spacing_ok(s, vp)) {
        return step;
    }
    let mut step = 2 * HOUR;
    while !spacing_ok(step, vp) {
        step *= 2;
    }
    step
}

/// Ticks at every multiple of the step inside `[from, to]`.
pub fn choose_ticks(vp: &Viewport) -> Vec<Tick> {
    let step = tick_step(vp);
    let from = vp.from.millis();
    let to = vp.to.millis();
    let mut t = from.div_ceil(step) * step;
    let mut ticks = Vec::new();
    while t <= to {
        let tc = Timecode::from_millis(t);
        ticks.push(Tick {
            t: tc,
            x: time_to_x(tc, vp),
            label: format_timecode(tc),
        });
        match t.checked_add(step) {
            Some(next) => t = next,
            None => break,
        }
    }
    ticks
}
