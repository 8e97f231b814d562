use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::geom::{floor, sqrt, Point};
use crate::packing::Packing;

use super::kinetics::{commit_pair, commit_wall, predict_disk_disk, predict_disk_wall, rebase, DiskState, Growth};
use super::{
    frozen_packing, initial_radius, min_gap, random_start, residual_gaps, Committed, Contact, RunStats, SimConfig,
    SimError, SIM_EPSILON,
};

/// Densest possible packing fraction in the plane, with a little slack; bounds the
/// final radius when sizing cells.
const CELL_SIZING_FRACTION: f64 = 0.9069 * 1.04;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Kind {
    Disk(u32),
    Wall,
    /// Centre crosses into the neighbouring cell along `axis` (0 = x, 1 = y).
    Cell { axis: u8, step: i8 },
}

/// Total order shared with the reference engine: time, then participant ids, then kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Key {
    pub time: f64,
    pub lo: u32,
    pub hi: u32,
    pub tag: u8,
}

impl Key {
    pub fn new(time: f64, owner: u32, kind: Kind) -> Self {
        match kind {
            Kind::Disk(j) => Key { time, lo: owner.min(j), hi: owner.max(j), tag: 0 },
            Kind::Wall => Key { time, lo: owner, hi: u32::MAX, tag: 1 },
            Kind::Cell { .. } => Key { time, lo: owner, hi: u32::MAX, tag: 2 },
        }
    }

    pub fn cmp(&self, other: &Key) -> Ordering {
        self.time
            .total_cmp(&other.time)
            .then(self.lo.cmp(&other.lo))
            .then(self.hi.cmp(&other.hi))
            .then(self.tag.cmp(&other.tag))
    }
}

#[derive(Debug, Clone, Copy)]
struct Event {
    key: Key,
    owner: u32,
    kind: Kind,
    owner_epoch: u64,
    partner_epoch: u64,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Event {}
impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Event {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other.key.cmp(&self.key).then(other.owner.cmp(&self.owner))
    }
}

/// Square cells over the container's bounding box, each at least one diameter wide.
#[derive(Debug, Clone)]
struct Grid {
    m: usize,
    side: f64,
    origin: f64,
    cell: Vec<(usize, usize)>,
    members: Vec<Vec<u32>>,
}

impl Grid {
    fn new(container_radius: f64, r_cap: f64, disks: &[DiskState], now: f64) -> Self {
        let span = 2.0 * container_radius;
        let m = (floor(span / (2.0 * r_cap)) as usize).clamp(1, 4096);
        let mut g = Grid {
            m,
            side: span / m as f64,
            origin: -container_radius,
            cell: Vec::with_capacity(disks.len()),
            members: alloc::vec![Vec::new(); m * m],
        };
        for (i, d) in disks.iter().enumerate() {
            let p = d.position_at(now);
            let c = (g.index(p.x), g.index(p.y));
            g.cell.push(c);
            g.members[c.1 * m + c.0].push(i as u32);
        }
        g
    }

    fn index(&self, x: f64) -> usize {
        let k = floor((x - self.origin) / self.side);
        if k < 0.0 {
            0
        } else {
            (k as usize).min(self.m - 1)
        }
    }

    fn shift(&mut self, i: usize, axis: u8, step: i8) {
        let (cx, cy) = self.cell[i];
        let m = self.m;
        let list = &mut self.members[cy * m + cx];
        if let Some(k) = list.iter().position(|&x| x as usize == i) {
            list.swap_remove(k);
        }
        let bump = |c: usize| if step > 0 { c + 1 } else { c - 1 };
        let next = if axis == 0 { (bump(cx), cy) } else { (cx, bump(cy)) };
        self.cell[i] = next;
        self.members[next.1 * m + next.0].push(i as u32);
    }

    /// Next time the centre of `d`, sitting in `cell`, leaves it through an inner face.
    fn crossing(&self, d: &DiskState, cell: (usize, usize)) -> Option<(f64, u8, i8)> {
        let mut best: Option<(f64, u8, i8)> = None;
        let coords = [(d.pos.x, d.vel.x, cell.0), (d.pos.y, d.vel.y, cell.1)];
        for (axis, &(x, v, c)) in coords.iter().enumerate() {
            let (face, step) = if v > 0.0 && c + 1 < self.m {
                (self.origin + (c + 1) as f64 * self.side, 1)
            } else if v < 0.0 && c > 0 {
                (self.origin + c as f64 * self.side, -1)
            } else {
                continue;
            };
            let t = d.time + (face - x) / v;
            if best.map_or(true, |(bt, _, _)| t < bt) {
                best = Some((t, axis as u8, step));
            }
        }
        best
    }
}

/// Production engine: cell lists, one pending event per disk, epoch stamps.
#[derive(Debug, Clone)]
pub struct Simulation {
    config: SimConfig,
    disks: Vec<DiskState>,
    epochs: Vec<u64>,
    growth: Growth,
    now: f64,
    /// Simulated time accumulated over previous rebases.
    elapsed: f64,
    grid: Grid,
    r_cap: f64,
    queue: BinaryHeap<Event>,
    collisions: u64,
    events: u64,
    stale: u64,
    rebases: u64,
    rebase_interval: u64,
    converged: bool,
    checkpoint_ratio: f64,
}

impl Simulation {
    /// Random start per the configuration.
    pub fn new(config: &SimConfig) -> Result<Self, SimError> {
        config.validate()?;
        let disks = random_start(config)?;
        Self::assemble(config, disks, initial_radius(config))
    }

    /// Explicit start: centres, velocities and radius at time zero.
    pub fn from_state(config: &SimConfig, disks: Vec<DiskState>, radius: f64) -> Result<Self, SimError> {
        let config = SimConfig { n: disks.len(), ..config.clone() };
        config.validate()?;
        if !(radius > 0.0 && radius < config.container_radius) {
            return Err(SimError::InvalidConfig("radius must lie in (0, container_radius)"));
        }
        let disks = disks.into_iter().map(|d| DiskState { time: 0.0, ..d }).collect();
        Self::assemble(&config, disks, radius)
    }

    fn assemble(config: &SimConfig, disks: Vec<DiskState>, radius: f64) -> Result<Self, SimError> {
        let n = disks.len();
        let r_cap = cell_radius_cap(config.container_radius, n).max(radius);
        let grid = Grid::new(config.container_radius, r_cap, &disks, 0.0);
        let mut sim = Simulation {
            config: config.clone(),
            epochs: alloc::vec![0; n],
            growth: Growth { r0: radius, rate: config.growth_to_speed_ratio },
            now: 0.0,
            elapsed: 0.0,
            grid,
            r_cap,
            queue: BinaryHeap::with_capacity(2 * n),
            collisions: 0,
            events: 0,
            stale: 0,
            rebases: 0,
            rebase_interval: config.effective_rebase_interval(),
            converged: false,
            checkpoint_ratio: f64::INFINITY,
            disks,
        };
        sim.repredict_all();
        Ok(sim)
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn disks(&self) -> &[DiskState] {
        &self.disks
    }

    pub fn collisions(&self) -> u64 {
        self.collisions
    }

    /// Time since the last rebase.
    pub fn now(&self) -> f64 {
        self.now
    }

    pub fn elapsed(&self) -> f64 {
        self.elapsed + self.now
    }

    pub fn growth(&self) -> Growth {
        self.growth
    }

    pub fn radius(&self) -> f64 {
        self.growth.radius(self.now)
    }

    /// Current container-to-disk diameter ratio.
    pub fn ratio(&self) -> f64 {
        self.config.container_radius / self.radius()
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    /// Centres at the current time.
    pub fn positions(&self) -> Vec<Point> {
        self.disks.iter().map(|d| d.position_at(self.now)).collect()
    }

    /// Smallest gap (diameters) at the current time; O(n^2).
    pub fn min_gap(&self) -> f64 {
        min_gap(&self.positions(), self.config.container_radius, self.radius())
    }

    /// Frozen configuration at the current time; the radius is trimmed to the largest
    /// value the positions admit.
    pub fn snapshot(&self) -> Packing {
        frozen_packing(&self.config, self.positions(), self.radius(), self.collisions)
    }

    pub fn stats(&self) -> RunStats {
        let p = self.snapshot();
        RunStats {
            collisions: self.collisions,
            events: self.events,
            stale_events: self.stale,
            rebases: self.rebases,
            sim_time: self.elapsed(),
            final_ratio: p.ratio(),
            final_density: p.density(),
            converged: self.converged,
            gap_histogram: residual_gaps(&p),
        }
    }

    /// Processes events until one collision is committed.
    pub fn step(&mut self) -> Result<Committed, SimError> {
        loop {
            let ev = self.queue.pop().ok_or(SimError::Starved { collisions: self.collisions })?;
            self.events += 1;
            let a = ev.owner as usize;
            if ev.owner_epoch != self.epochs[a] {
                self.stale += 1;
                continue;
            }
            if !ev.key.time.is_finite() {
                return Err(SimError::NonFinite { collisions: self.collisions, disk: a });
            }
            match ev.kind {
                Kind::Cell { axis, step } => {
                    self.grid.shift(a, axis, step);
                    self.predict(a);
                }
                Kind::Disk(b) => {
                    let b = b as usize;
                    if ev.partner_epoch != self.epochs[b] {
                        self.stale += 1;
                        self.predict(a);
                        continue;
                    }
                    self.now = self.now.max(ev.key.time);
                    commit_pair(&mut self.disks, a, b, self.now, self.growth.rate);
                    self.epochs[a] += 1;
                    self.epochs[b] += 1;
                    return self.after_collision(Contact::Pair(a.min(b), a.max(b)));
                }
                Kind::Wall => {
                    self.now = self.now.max(ev.key.time);
                    commit_wall(&mut self.disks[a], self.now, self.growth.rate);
                    self.epochs[a] += 1;
                    return self.after_collision(Contact::Wall(a));
                }
            }
        }
    }

    fn after_collision(&mut self, contact: Contact) -> Result<Committed, SimError> {
        self.collisions += 1;
        let committed = Committed { time: self.now, contact, collisions: self.collisions };
        let touched = match contact {
            Contact::Pair(a, b) => [a, b],
            Contact::Wall(a) => [a, a],
        };
        for &i in &touched {
            let d = &self.disks[i];
            if !(d.pos.is_finite() && d.vel.is_finite()) {
                return Err(SimError::NonFinite { collisions: self.collisions, disk: i });
            }
        }
        if self.config.check_invariants {
            let gap = self.min_gap();
            if gap < -SIM_EPSILON {
                return Err(SimError::Overlap { collisions: self.collisions, gap });
            }
        }
        let outgrown = 2.0 * self.radius() > self.grid.side * (1.0 - 1e-9) && self.grid.m > 1;
        if outgrown {
            self.r_cap = self.radius() * 1.05;
        }
        if self.collisions % self.rebase_interval == 0 {
            self.growth = rebase(&mut self.disks, self.now, self.growth, self.config.growth_to_speed_ratio);
            self.elapsed += self.now;
            self.now = 0.0;
            self.rebases += 1;
            self.regrid();
        } else if outgrown {
            self.regrid();
        } else {
            self.predict(touched[0]);
            if touched[1] != touched[0] {
                self.predict(touched[1]);
            }
        }
        Ok(committed)
    }

    /// Runs to convergence or the collision budget.
    pub fn run(&mut self) -> Result<RunStats, SimError> {
        while !self.converged && self.collisions < self.config.max_collisions {
            self.step()?;
            if self.collisions % self.config.convergence_window == 0 {
                let ratio = self.ratio();
                if ((self.checkpoint_ratio - ratio) / ratio).abs() < self.config.convergence_rel_tol {
                    self.converged = true;
                }
                self.checkpoint_ratio = ratio;
            }
        }
        Ok(self.stats())
    }

    /// Runs until the collision counter reaches `target` (or convergence).
    pub fn run_until(&mut self, target: u64) -> Result<(), SimError> {
        while self.collisions < target {
            self.step()?;
        }
        Ok(())
    }

    fn regrid(&mut self) {
        self.grid = Grid::new(self.config.container_radius, self.r_cap, &self.disks, self.now);
        self.repredict_all();
    }

    fn repredict_all(&mut self) {
        self.queue.clear();
        for e in self.epochs.iter_mut() {
            *e += 1;
        }
        for i in 0..self.disks.len() {
            self.predict(i);
        }
    }

    /// Pushes the earliest event of disk `i`.
    fn predict(&mut self, i: usize) {
        let d = self.disks[i];
        let owner = i as u32;
        let mut best: Option<(Key, Kind)> = None;
        let mut offer = |time: f64, kind: Kind| {
            let key = Key::new(time, owner, kind);
            if best.map_or(true, |(k, _)| key.cmp(&k) == Ordering::Less) {
                best = Some((key, kind));
            }
        };
        if let Some(t) = predict_disk_wall(&d, self.config.container_radius, self.growth) {
            offer(t, Kind::Wall);
        }
        let (cx, cy) = self.grid.cell[i];
        let m = self.grid.m;
        for y in cy.saturating_sub(1)..=(cy + 1).min(m - 1) {
            for x in cx.saturating_sub(1)..=(cx + 1).min(m - 1) {
                for &j in &self.grid.members[y * m + x] {
                    let j = j as usize;
                    if j == i {
                        continue;
                    }
                    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
                    if let Some(t) = predict_disk_disk(&self.disks[lo], &self.disks[hi], self.growth) {
                        offer(t, Kind::Disk(j as u32));
                    }
                }
            }
        }
        if let Some((t, axis, step)) = self.grid.crossing(&d, self.grid.cell[i]) {
            offer(t, Kind::Cell { axis, step });
        }
        if let Some((key, kind)) = best {
            let partner_epoch = match kind {
                Kind::Disk(j) => self.epochs[j as usize],
                _ => 0,
            };
            self.queue.push(Event { key, owner, kind, owner_epoch: self.epochs[i], partner_epoch });
        }
    }
}

fn cell_radius_cap(container_radius: f64, n: usize) -> f64 {
    match n {
        0 | 1 => container_radius,
        2 => 0.5 * container_radius,
        _ => container_radius * sqrt(CELL_SIZING_FRACTION / n as f64),
    }
}
