use alloc::vec::Vec;

use crate::geom::Point;
use crate::packing::Packing;

/// Bond threshold for converged simulator output, in diameters.
pub const SIMULATED_BOND_THRESHOLD: f64 = 1e-13;
/// Bond threshold for constructed packings, in diameters.
pub const CONSTRUCTED_BOND_THRESHOLD: f64 = 1e-9;
/// Gaps at or above this are treated as clearly open.
pub const DISTINCT_GAP: f64 = 1e-5;

/// Disk-disk contact. `normal` is the unit vector from `i` towards `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Bond {
    pub i: usize,
    pub j: usize,
    pub gap: f64,
    pub normal: Point,
}

/// Disk-wall contact. `normal` is the outward radial unit vector.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WallBond {
    pub i: usize,
    pub gap: f64,
    pub normal: Point,
}

/// Near-contact whose gap falls between the bond threshold and [`DISTINCT_GAP`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NearMiss {
    pub i: usize,
    /// `None` for the wall.
    pub j: Option<usize>,
    pub gap: f64,
}

/// Contacts of a packing with signed gaps in diameters.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ContactGraph {
    pub disk_count: usize,
    pub threshold: f64,
    pub bonds: Vec<Bond>,
    pub wall_bonds: Vec<WallBond>,
    pub ambiguous: Vec<NearMiss>,
    /// Smallest gap among disk-disk and disk-wall pairs that are not bonds.
    pub min_open_gap: Option<f64>,
}

impl ContactGraph {
    /// Neighbour lists, wall excluded.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = alloc::vec![Vec::new(); self.disk_count];
        for b in &self.bonds {
            adj[b.i].push(b.j);
            adj[b.j].push(b.i);
        }
        adj.iter_mut().for_each(|v| v.sort_unstable());
        adj
    }

    pub fn wall_flags(&self) -> Vec<bool> {
        let mut flags = alloc::vec![false; self.disk_count];
        self.wall_bonds.iter().for_each(|w| flags[w.i] = true);
        flags
    }

    /// Contact directions of every disk (towards the neighbour, or outward for the wall),
    /// tagged with the neighbour index (`None` for the wall).
    pub fn contact_directions(&self) -> Vec<Vec<(Option<usize>, Point)>> {
        let mut dirs = alloc::vec![Vec::new(); self.disk_count];
        for b in &self.bonds {
            dirs[b.i].push((Some(b.j), b.normal));
            dirs[b.j].push((Some(b.i), -b.normal));
        }
        for w in &self.wall_bonds {
            dirs[w.i].push((None, w.normal));
        }
        dirs
    }

    pub fn degree(&self, i: usize) -> usize {
        self.bonds.iter().filter(|b| b.i == i || b.j == i).count()
            + self.wall_bonds.iter().filter(|w| w.i == i).count()
    }
}

/// Bonds are pairs whose gap (in diameters) is below `threshold`.
pub fn contact_graph(p: &Packing, threshold: f64) -> ContactGraph {
    let n = p.len();
    let mut g = ContactGraph {
        disk_count: n,
        threshold,
        bonds: Vec::new(),
        wall_bonds: Vec::new(),
        ambiguous: Vec::new(),
        min_open_gap: None,
    };
    let note_open = |g: &mut ContactGraph, i: usize, j: Option<usize>, gap: f64| {
        g.min_open_gap = Some(g.min_open_gap.map_or(gap, |m: f64| m.min(gap)));
        if gap < DISTINCT_GAP {
            g.ambiguous.push(NearMiss { i, j, gap });
        }
    };
    for i in 0..n {
        let c = p.centers[i];
        let gap = p.wall_gap(i);
        if gap < threshold {
            let r = c.norm();
            let normal = if r > 0.0 { c * (1.0 / r) } else { Point::new(1.0, 0.0) };
            g.wall_bonds.push(WallBond { i, gap, normal });
        } else {
            note_open(&mut g, i, None, gap);
        }
        for j in i + 1..n {
            let gap = p.pair_gap(i, j);
            if gap < threshold {
                let d = p.centers[j] - c;
                let normal = d * (1.0 / d.norm());
                g.bonds.push(Bond { i, j, gap, normal });
            } else {
                note_open(&mut g, i, Some(j), gap);
            }
        }
    }
    g
}
