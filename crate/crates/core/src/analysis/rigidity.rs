use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::linalg::Matrix;
use crate::packing::Packing;

use super::{find_rattlers, ContactGraph};

/// Pivot magnitude below which a direction counts as a flex.
pub const RANK_TOL: f64 = 1e-8;

/// Outcome of the first-order rigidity test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Rigidity {
    pub rigid: bool,
    /// Infinitesimal flexes of the jammed subset beyond the rotation about the origin.
    pub flex_dimension: usize,
}

/// First-order rigidity of the jammed subset (rattlers removed). Each bond constrains
/// the relative normal velocity of its disks, each wall bond the radial velocity of its
/// disk; the packing is rigid when the only flex is the global rotation about the
/// container centre.
pub fn rigidity_test(p: &Packing, g: &ContactGraph) -> Rigidity {
    let rattlers = find_rattlers(g);
    rigidity_of_subset(p, g, &rattlers)
}

pub(crate) fn rigidity_of_subset(p: &Packing, g: &ContactGraph, rattlers: &BTreeSet<usize>) -> Rigidity {
    let mut column = alloc::vec![usize::MAX; g.disk_count];
    let mut jammed = Vec::new();
    for i in (0..g.disk_count).filter(|i| !rattlers.contains(i)) {
        column[i] = 2 * jammed.len();
        jammed.push(i);
    }
    if jammed.is_empty() {
        return Rigidity { rigid: false, flex_dimension: 0 };
    }

    let bonds: Vec<_> = g.bonds.iter().filter(|b| column[b.i] != usize::MAX && column[b.j] != usize::MAX).collect();
    let walls: Vec<_> = g.wall_bonds.iter().filter(|w| column[w.i] != usize::MAX).collect();
    let vars = 2 * jammed.len();
    let mut m = Matrix::zeros(bonds.len() + walls.len(), vars);
    for (r, b) in bonds.iter().enumerate() {
        let (ci, cj) = (column[b.i], column[b.j]);
        m.set(r, ci, -b.normal.x);
        m.set(r, ci + 1, -b.normal.y);
        m.set(r, cj, b.normal.x);
        m.set(r, cj + 1, b.normal.y);
    }
    for (r, w) in walls.iter().enumerate() {
        let c = column[w.i];
        m.set(bonds.len() + r, c, w.normal.x);
        m.set(bonds.len() + r, c + 1, w.normal.y);
    }

    let nullity = vars - m.rank(RANK_TOL);
    // the rotation about the origin satisfies every constraint; it is a genuine flex
    // unless every jammed disk sits at the origin
    let scale = p.disk_diameter();
    let rotation_moves = jammed.iter().any(|&i| p.centers[i].norm() > 1e-12 * scale);
    let flex_dimension = nullity.saturating_sub(rotation_moves as usize);
    Rigidity { rigid: flex_dimension == 0 && rotation_moves, flex_dimension }
}
