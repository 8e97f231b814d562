//! Event-driven "billiards" packing: elastic disks in a circular container whose common
//! radius grows linearly in time until the configuration jams.
//!
//! [`Simulation`] is the production engine (cell lists, one pending event per disk,
//! epoch stamps for lazy invalidation). [`ReferenceSimulation`] re-predicts every pair
//! after every collision; it shares the kinetics and rebasing code and exists to
//! cross-check the fast engine.

mod engine;
pub mod kinetics;
mod reference;

use alloc::vec::Vec;

use crate::geom::{floor, sqrt, Point, PI};
use crate::packing::Packing;

pub use engine::Simulation;
pub use kinetics::{DiskState, Growth};
pub use reference::ReferenceSimulation;

/// Initial packing fraction of the random start.
pub const DEFAULT_INITIAL_FRACTION: f64 = 0.1;
/// Allowed overlap at committed events, in diameters.
pub const SIM_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct SimConfig {
    pub n: usize,
    pub container_radius: f64,
    /// Radius growth rate over the mean disk speed.
    pub growth_to_speed_ratio: f64,
    pub seed: u64,
    /// Collisions between two convergence checks.
    pub convergence_window: u64,
    /// Stop once D/d changes by less than this (relative) over one window.
    pub convergence_rel_tol: f64,
    pub max_collisions: u64,
    pub initial_fraction: f64,
    /// Collisions between rebases (all disks synchronised, time origin reset, mean
    /// speed renormalised to 1). `0` picks `20 n`.
    pub rebase_interval: u64,
    /// Check every gap after each committed collision (O(n^2) per event).
    pub check_invariants: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            n: 7,
            container_radius: 1.0,
            growth_to_speed_ratio: 1e-3,
            seed: 0,
            convergence_window: 1_000_000,
            convergence_rel_tol: 1e-15,
            max_collisions: 100_000_000,
            initial_fraction: DEFAULT_INITIAL_FRACTION,
            rebase_interval: 0,
            check_invariants: false,
        }
    }
}

impl SimConfig {
    pub fn new(n: usize, seed: u64) -> Self {
        SimConfig { n, seed, ..SimConfig::default() }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |what| Err(SimError::InvalidConfig(what));
        if self.n == 0 {
            return bad("n must be at least 1");
        }
        if !(self.container_radius > 0.0 && self.container_radius.is_finite()) {
            return bad("container_radius must be positive");
        }
        if !(self.growth_to_speed_ratio >= 0.0 && self.growth_to_speed_ratio.is_finite()) {
            return bad("growth_to_speed_ratio must be non-negative");
        }
        if !(self.convergence_rel_tol >= f64::EPSILON) {
            return bad("convergence_rel_tol must be at least machine epsilon");
        }
        if self.convergence_window == 0 {
            return bad("convergence_window must be positive");
        }
        if !(self.initial_fraction > 0.0 && self.initial_fraction < 0.5) {
            return bad("initial_fraction must lie in (0, 0.5)");
        }
        Ok(())
    }

    pub(crate) fn effective_rebase_interval(&self) -> u64 {
        if self.rebase_interval == 0 {
            20 * self.n as u64
        } else {
            self.rebase_interval
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("could not place {n} disks without overlap at the initial radius")]
    Placement { n: usize },
    #[error("non-finite state after {collisions} collisions (disk {disk})")]
    NonFinite { collisions: u64, disk: usize },
    #[error("event queue ran dry after {collisions} collisions")]
    Starved { collisions: u64 },
    #[error("overlap of {gap:e} diameters after {collisions} collisions")]
    Overlap { collisions: u64, gap: f64 },
}

/// What a committed collision touched.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Contact {
    Pair(usize, usize),
    Wall(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Committed {
    /// Time since the last rebase.
    pub time: f64,
    pub contact: Contact,
    pub collisions: u64,
}

/// Number of gaps in `[10^decade, 10^(decade+1))` diameters. Gaps below `1e-16`
/// (including slight overlaps) land in decade `-17`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GapBin {
    pub decade: i32,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RunStats {
    pub collisions: u64,
    pub events: u64,
    pub stale_events: u64,
    pub rebases: u64,
    pub sim_time: f64,
    pub final_ratio: f64,
    pub final_density: f64,
    pub converged: bool,
    /// Disk-disk and disk-wall gaps below 1e-2 diameters in the final packing.
    pub gap_histogram: Vec<GapBin>,
}

/// Decade histogram of the small gaps of `p`.
pub fn residual_gaps(p: &Packing) -> Vec<GapBin> {
    let mut counts = [0usize; 16];
    let mut add = |gap: f64| {
        if gap >= 1e-2 {
            return;
        }
        let decade = if gap < 1e-16 { -17 } else { (floor(libm::log10(gap)) as i32).clamp(-16, -3) };
        counts[(decade + 17) as usize] += 1;
    };
    for i in 0..p.len() {
        add(p.wall_gap(i));
        for j in i + 1..p.len() {
            add(p.pair_gap(i, j));
        }
    }
    counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(k, &count)| GapBin { decade: k as i32 - 17, count })
        .collect()
}

pub(crate) fn initial_radius(config: &SimConfig) -> f64 {
    config.container_radius * sqrt(config.initial_fraction / config.n as f64)
}

/// Uniform non-overlapping centres at radius `r0` and unit speeds in uniform directions.
pub(crate) fn random_start(config: &SimConfig) -> Result<Vec<DiskState>, SimError> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(config.seed);
    let r0 = initial_radius(config);
    let room = config.container_radius - r0;
    let mut centers: Vec<Point> = Vec::with_capacity(config.n);
    let mut attempts = 0u64;
    let budget = 1_000_000 * config.n as u64;
    while centers.len() < config.n {
        attempts += 1;
        if attempts > budget {
            return Err(SimError::Placement { n: config.n });
        }
        let c = Point::new(room * (2.0 * rng.gen::<f64>() - 1.0), room * (2.0 * rng.gen::<f64>() - 1.0));
        if c.norm_sq() > room * room {
            continue;
        }
        if centers.iter().all(|q| q.distance(c) >= 2.0 * r0) {
            centers.push(c);
        }
    }
    Ok(centers
        .into_iter()
        .map(|c| DiskState::new(c, Point::from_angle(2.0 * PI * rng.gen::<f64>())))
        .collect())
}

/// Largest common radius the positions admit, capped at `r`.
pub(crate) fn feasible_radius(centers: &[Point], container_radius: f64, r: f64) -> f64 {
    let mut best = r;
    for (i, &c) in centers.iter().enumerate() {
        best = best.min(container_radius - c.norm());
        for &d in &centers[i + 1..] {
            best = best.min(0.5 * c.distance(d));
        }
    }
    best
}

/// Smallest disk-disk or disk-wall gap in diameters at radius `r`.
pub(crate) fn min_gap(centers: &[Point], container_radius: f64, r: f64) -> f64 {
    let d = 2.0 * r;
    let mut worst = f64::INFINITY;
    for (i, &c) in centers.iter().enumerate() {
        worst = worst.min((container_radius - r - c.norm()) / d);
        for &e in &centers[i + 1..] {
            worst = worst.min((c.distance(e) - d) / d);
        }
    }
    worst
}

pub(crate) fn frozen_packing(
    config: &SimConfig,
    centers: Vec<Point>,
    r: f64,
    collisions: u64,
) -> Packing {
    let r = feasible_radius(&centers, config.container_radius, r);
    let mut meta = alloc::collections::BTreeMap::new();
    meta.insert("source".into(), "billiards".into());
    meta.insert("seed".into(), alloc::format!("{}", config.seed));
    meta.insert("collisions".into(), alloc::format!("{collisions}"));
    Packing { container_radius: config.container_radius, disk_radius: r, centers, metadata: meta }
}
