use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::geom::{Point, PI};

use super::ContactGraph;

/// Whether all `dirs` fit strictly inside some open half-plane through the origin.
pub fn within_open_half_plane(dirs: &[Point]) -> bool {
    if dirs.is_empty() {
        return true;
    }
    let mut angles: Vec<f64> = dirs.iter().map(|d| d.angle()).collect();
    angles.sort_unstable_by(f64::total_cmp);
    let wrap = angles[0] + 2.0 * PI - angles[angles.len() - 1];
    let widest = angles.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max);
    widest > PI
}

/// Disks that cannot be locally blocked, removed to a fixed point: a disk goes when it
/// keeps fewer than three contacts (the wall counts as one) or its contact directions
/// fit in an open half-plane. Removal only weakens the remaining disks, so the fixed
/// point does not depend on the sweep order.
pub fn find_rattlers(g: &ContactGraph) -> BTreeSet<usize> {
    let order: Vec<usize> = (0..g.disk_count).collect();
    find_rattlers_in_order(g, &order)
}

/// [`find_rattlers`] with an explicit sweep order over the disks.
pub fn find_rattlers_in_order(g: &ContactGraph, order: &[usize]) -> BTreeSet<usize> {
    let dirs = g.contact_directions();
    let mut removed = alloc::vec![false; g.disk_count];
    loop {
        let mut changed = false;
        for &i in order {
            if removed[i] {
                continue;
            }
            let live: Vec<Point> = dirs[i]
                .iter()
                .filter(|(other, _)| other.map_or(true, |j| !removed[j]))
                .map(|&(_, d)| d)
                .collect();
            if live.len() < 3 || within_open_half_plane(&live) {
                removed[i] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    (0..g.disk_count).filter(|&i| removed[i]).collect()
}
