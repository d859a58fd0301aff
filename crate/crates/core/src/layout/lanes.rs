use std::borrow::Borrow;
use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use super::LayoutError;
use crate::model::Annotation;

/// Greedy first-fit lane assignment over annotations sorted by
/// `(begin, end, id)`: each annotation takes the lowest lane whose last
/// occupant has ended (half-open) by its begin. For interval inputs this
/// uses the minimum possible number of lanes.
pub fn assign_lanes<A: Borrow<Annotation>>(annotations: &[A]) -> Result<Vec<u32>, LayoutError> {
    if let Some(i) = annotations
        .windows(2)
        .position(|w| w[0].borrow().sort_key() > w[1].borrow().sort_key())
    {
        return Err(LayoutError::UnsortedInput { index: i + 1 });
    }

    let mut lanes = Vec::with_capacity(annotations.len());
    // (effective end, lane) for lanes whose occupant may still be running.
    let mut busy: BinaryHeap<Reverse<(u64, u32)>> = BinaryHeap::new();
    let mut free: BTreeSet<u32> = BTreeSet::new();
    let mut opened = 0u32;
    for ann in annotations {
        let ann = ann.borrow();
        let begin = ann.begin.millis();
        while let Some(&Reverse((end, lane))) = busy.peek() {
            if end > begin {
                break;
            }
            busy.pop();
            free.insert(lane);
        }
        let lane = free.pop_first().unwrap_or_else(|| {
            opened += 1;
            opened - 1
        });
        busy.push(Reverse((ann.effective_end().millis(), lane)));
        lanes.push(lane);
    }
    Ok(lanes)
}

/// Number of lanes a packing uses; an empty track still occupies one row.
pub fn lane_count(lanes: &[u32]) -> u32 {
    lanes.iter().max().map_or(1, |&m| m + 1)
}
