//! Contact graphs, rattlers, first-order rigidity, regularity and curved hexagonal
//! class matching.

mod contact;
mod rattlers;
mod rigidity;

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use thiserror::Error;

pub use contact::{
    contact_graph, Bond, ContactGraph, NearMiss, WallBond, CONSTRUCTED_BOND_THRESHOLD, DISTINCT_GAP,
    SIMULATED_BOND_THRESHOLD,
};
pub use rattlers::{find_rattlers, find_rattlers_in_order, within_open_half_plane};
pub use rigidity::{rigidity_test, Rigidity, RANK_TOL};

use crate::construct::{self, ConstructError, PathSpec};
use crate::fingerprint::{congruent, fingerprint, DEFAULT_QUANTUM};
use crate::formulas::{self, HexIndex};
use crate::packing::Packing;

/// Alignment tolerance (diameters) when matching simulator output to a class.
pub const SIMULATED_MATCH_TOL: f64 = 1e-6;
/// Alignment tolerance (diameters) when matching constructed packings.
pub const CONSTRUCTED_MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("tightness needs h(k)-1, h(k), h(k)+1 disks; got {minus}, {center}, {plus}")]
    TightnessCounts { minus: usize, center: usize, plus: usize },
    #[error("D/d does not increase from h(k) to h(k)+1 disks (difference {0:e})")]
    NonPositiveIncrease(f64),
}

/// Search for a centre-to-rim path of `k` bonds, each the side of a bond triangle, where
/// `k` is the layer count implied by the disk count. Returns the disk ids along the path
/// (central disk first) when one exists.
///
/// Layers advance by at most one per bond in a curved hexagonal packing, so such a path
/// visits each disk at its breadth-first depth; the search expands breadth-first over
/// triangle edges and accepts a wall-bonded disk first reached at depth `k`.
pub fn classify_regular(p: &Packing, g: &ContactGraph) -> Option<Vec<usize>> {
    let k = HexIndex::from_count(p.len() as u64)?.k() as usize;
    let center = (0..p.len()).min_by(|&a, &b| p.centers[a].norm().total_cmp(&p.centers[b].norm()))?;
    let adj = g.adjacency();
    let on_wall = g.wall_flags();
    let in_triangle = |a: usize, b: usize| {
        let (x, y) = (&adj[a], &adj[b]);
        let (mut i, mut j) = (0, 0);
        while i < x.len() && j < y.len() {
            match x[i].cmp(&y[j]) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => return true,
            }
        }
        false
    };

    let mut parent = alloc::vec![usize::MAX; p.len()];
    parent[center] = center;
    let mut frontier = alloc::vec![center];
    for _ in 0..k {
        let mut next = Vec::new();
        for &a in &frontier {
            for &b in &adj[a] {
                if parent[b] == usize::MAX && in_triangle(a, b) {
                    parent[b] = a;
                    next.push(b);
                }
            }
        }
        next.sort_unstable();
        frontier = next;
    }
    let end = frontier.into_iter().find(|&i| on_wall[i])?;
    let mut path = alloc::vec![end];
    while *path.last().unwrap() != center {
        path.push(parent[*path.last().unwrap()]);
    }
    path.reverse();
    Some(path)
}

/// All curved hexagonal classes for one `k`, kept for repeated matching.
#[derive(Debug, Clone)]
pub struct Catalogue {
    pub k: u32,
    pub classes: Vec<(PathSpec, Packing)>,
}

impl Catalogue {
    pub fn new(k: u32) -> Result<Self, ConstructError> {
        Ok(Catalogue { k, classes: construct::enumerate_all(k)? })
    }

    /// The class `p` is congruent to, with every disk matched within `tol` diameters.
    pub fn find(&self, p: &Packing, tol: f64) -> Option<&PathSpec> {
        if p.len() as u64 != formulas::hex_number(self.k).ok()? {
            return None;
        }
        // a congruent packing shares the container ratio up to the alignment slack
        if (p.ratio() - formulas::curved_hex_ratio(self.k)).abs() > 4.0 * tol.max(1e-12) {
            return None;
        }
        self.classes.iter().find(|(_, c)| congruent(p, c, tol)).map(|(s, _)| s)
    }
}

/// The canonical path spec of the curved hexagonal class `p` belongs to, if any.
pub fn match_curved_hex(p: &Packing, tol: f64) -> Option<PathSpec> {
    let k = HexIndex::from_count(p.len() as u64)?.k();
    if k > construct::MAX_ENUMERATE_K {
        return None;
    }
    if (p.ratio() - formulas::curved_hex_ratio(k)).abs() > 4.0 * tol.max(1e-12) {
        return None;
    }
    Catalogue::new(k).ok()?.find(p, tol).cloned()
}

/// (D/d(h) - D/d(h-1)) / (D/d(h+1) - D/d(h)).
pub fn tightness_ratio(minus: &Packing, center: &Packing, plus: &Packing) -> Result<f64, AnalysisError> {
    let counts_ok = HexIndex::from_count(center.len() as u64).is_some()
        && minus.len() + 1 == center.len()
        && plus.len() == center.len() + 1;
    if !counts_ok {
        return Err(AnalysisError::TightnessCounts { minus: minus.len(), center: center.len(), plus: plus.len() });
    }
    let increase = plus.ratio() - center.ratio();
    if !(increase > 0.0) {
        return Err(AnalysisError::NonPositiveIncrease(increase));
    }
    Ok((center.ratio() - minus.ratio()) / increase)
}

/// Thresholds for [`analyze`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AnalysisOptions {
    pub bond_threshold: f64,
    pub match_tol: f64,
}

impl AnalysisOptions {
    pub const CONSTRUCTED: AnalysisOptions =
        AnalysisOptions { bond_threshold: CONSTRUCTED_BOND_THRESHOLD, match_tol: CONSTRUCTED_MATCH_TOL };
    pub const SIMULATED: AnalysisOptions =
        AnalysisOptions { bond_threshold: SIMULATED_BOND_THRESHOLD, match_tol: SIMULATED_MATCH_TOL };
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions::CONSTRUCTED
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AnalysisReport {
    pub n: usize,
    pub density: f64,
    pub ratio: f64,
    pub bond_threshold: f64,
    pub bonds: usize,
    pub wall_bonds: usize,
    pub ambiguous: usize,
    pub min_open_gap: Option<f64>,
    pub rattlers: Vec<usize>,
    pub jammed: Vec<usize>,
    pub rigid: bool,
    pub flex_dimension: usize,
    pub regular: bool,
    pub witness: Option<Vec<usize>>,
    pub matched_class: Option<PathSpec>,
    pub fingerprint: u64,
}

pub fn analyze(p: &Packing, opts: AnalysisOptions) -> AnalysisReport {
    let g = contact_graph(p, opts.bond_threshold);
    let rattlers: BTreeSet<usize> = find_rattlers(&g);
    let rigidity = rigidity::rigidity_of_subset(p, &g, &rattlers);
    let witness = classify_regular(p, &g);
    AnalysisReport {
        n: p.len(),
        density: p.density(),
        ratio: p.ratio(),
        bond_threshold: opts.bond_threshold,
        bonds: g.bonds.len(),
        wall_bonds: g.wall_bonds.len(),
        ambiguous: g.ambiguous.len(),
        min_open_gap: g.min_open_gap,
        jammed: (0..p.len()).filter(|i| !rattlers.contains(i)).collect(),
        rattlers: rattlers.into_iter().collect(),
        rigid: rigidity.rigid,
        flex_dimension: rigidity.flex_dimension,
        regular: witness.is_some(),
        witness,
        matched_class: match_curved_hex(p, opts.match_tol),
        fingerprint: fingerprint(p, DEFAULT_QUANTUM).digest(),
    }
}
