use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::geom::Point;
use crate::packing::Packing;

use super::engine::{Key, Kind};
use super::kinetics::{commit_pair, commit_wall, predict_disk_disk, predict_disk_wall, rebase, DiskState, Growth};
use super::{frozen_packing, initial_radius, random_start, Committed, Contact, SimConfig, SimError};

/// Naive engine: after every collision, re-predicts all pairs and walls and commits the
/// earliest event. O(n^2) per collision; for cross-checking [`super::Simulation`].
#[derive(Debug, Clone)]
pub struct ReferenceSimulation {
    config: SimConfig,
    disks: Vec<DiskState>,
    growth: Growth,
    now: f64,
    collisions: u64,
    rebase_interval: u64,
}

impl ReferenceSimulation {
    pub fn new(config: &SimConfig) -> Result<Self, SimError> {
        config.validate()?;
        let disks = random_start(config)?;
        Ok(Self::assemble(config, disks, initial_radius(config)))
    }

    pub fn from_state(config: &SimConfig, disks: Vec<DiskState>, radius: f64) -> Result<Self, SimError> {
        let config = SimConfig { n: disks.len(), ..config.clone() };
        config.validate()?;
        let disks = disks.into_iter().map(|d| DiskState { time: 0.0, ..d }).collect();
        Ok(Self::assemble(&config, disks, radius))
    }

    fn assemble(config: &SimConfig, disks: Vec<DiskState>, radius: f64) -> Self {
        ReferenceSimulation {
            config: config.clone(),
            disks,
            growth: Growth { r0: radius, rate: config.growth_to_speed_ratio },
            now: 0.0,
            collisions: 0,
            rebase_interval: config.effective_rebase_interval(),
        }
    }

    pub fn disks(&self) -> &[DiskState] {
        &self.disks
    }

    pub fn collisions(&self) -> u64 {
        self.collisions
    }

    pub fn radius(&self) -> f64 {
        self.growth.radius(self.now)
    }

    pub fn positions(&self) -> Vec<Point> {
        self.disks.iter().map(|d| d.position_at(self.now)).collect()
    }

    pub fn snapshot(&self) -> Packing {
        frozen_packing(&self.config, self.positions(), self.radius(), self.collisions)
    }

    pub fn step(&mut self) -> Result<Committed, SimError> {
        let mut best: Option<(Key, usize, Kind)> = None;
        let mut offer = |key: Key, owner: usize, kind: Kind| {
            if best.map_or(true, |(k, _, _)| key.cmp(&k) == Ordering::Less) {
                best = Some((key, owner, kind));
            }
        };
        for i in 0..self.disks.len() {
            if let Some(t) = predict_disk_wall(&self.disks[i], self.config.container_radius, self.growth) {
                offer(Key::new(t, i as u32, Kind::Wall), i, Kind::Wall);
            }
            for j in i + 1..self.disks.len() {
                if let Some(t) = predict_disk_disk(&self.disks[i], &self.disks[j], self.growth) {
                    let kind = Kind::Disk(j as u32);
                    offer(Key::new(t, i as u32, kind), i, kind);
                }
            }
        }
        let (key, i, kind) = best.ok_or(SimError::Starved { collisions: self.collisions })?;
        if !key.time.is_finite() {
            return Err(SimError::NonFinite { collisions: self.collisions, disk: i });
        }
        self.now = self.now.max(key.time);
        let contact = match kind {
            Kind::Disk(j) => {
                commit_pair(&mut self.disks, i, j as usize, self.now, self.growth.rate);
                Contact::Pair(i, j as usize)
            }
            _ => {
                commit_wall(&mut self.disks[i], self.now, self.growth.rate);
                Contact::Wall(i)
            }
        };
        self.collisions += 1;
        let committed = Committed { time: self.now, contact, collisions: self.collisions };
        if self.collisions % self.rebase_interval == 0 {
            self.growth = rebase(&mut self.disks, self.now, self.growth, self.config.growth_to_speed_ratio);
            self.now = 0.0;
        }
        Ok(committed)
    }
}
