//! Exhaustive enumeration of tilings by breadth-first search over flips.

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use thiserror::Error;

use super::construct::t_min;
use super::lattice::ZonogonSpec;
use super::tiling::Tiling;
use crate::forest::{all_flips, apply_move};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("cap exceeded: more than {0} tilings")]
    CapExceeded(usize),
}

/// All tilings of the zonogon, in breadth-first order from the minimal one.
pub fn enumerate_tilings(spec: &Arc<ZonogonSpec>, cap: usize) -> Result<Vec<Tiling>, EnumerateError> {
    let start = t_min(spec);
    let mut seen: HashSet<Tiling> = HashSet::from([start.clone()]);
    let mut order = vec![start.clone()];
    let mut queue = VecDeque::from([start]);
    if cap == 0 {
        return Err(EnumerateError::CapExceeded(cap));
    }
    while let Some(t) = queue.pop_front() {
        for mv in all_flips(&t) {
            let next = apply_move(&t, &mv).expect("fresh move applies");
            if seen.insert(next.clone()) {
                if seen.len() > cap {
                    return Err(EnumerateError::CapExceeded(cap));
                }
                order.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(order)
}
