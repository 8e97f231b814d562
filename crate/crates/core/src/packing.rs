//! The packing value type, validity checking and measurement.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::geom::Point;

/// Default overlap tolerance for constructed packings, in disk diameters.
pub const CONSTRUCTED_TOL: f64 = 1e-9;
/// Overlap tolerance for converged simulator output, in disk diameters.
pub const SIMULATED_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PackingError {
    #[error("disk radius must be positive and finite, got {0}")]
    BadDiskRadius(f64),
    #[error("container radius {container} must exceed disk radius {disk}")]
    BadContainerRadius { container: f64, disk: f64 },
    #[error("center {index} is not finite")]
    NonFiniteCenter { index: usize },
    #[error("packing has {count} violation(s); first: {first}")]
    Invalid { count: usize, first: Violation },
}

/// A broken packing invariant. Gaps are signed and measured in disk diameters.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum Violation {
    Overlap { i: usize, j: usize, gap: f64 },
    Wall { i: usize, gap: f64 },
}

impl core::fmt::Display for Violation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match *self {
            Violation::Overlap { i, j, gap } => write!(f, "disks {i} and {j} overlap (gap {gap:e} d)"),
            Violation::Wall { i, gap } => write!(f, "disk {i} crosses the container (gap {gap:e} d)"),
        }
    }
}

/// Covering density and D/d of a valid packing.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Measure {
    pub density: f64,
    pub ratio: f64,
}

/// `n` equal disks inside a circular container centred at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct Packing {
    pub container_radius: f64,
    pub disk_radius: f64,
    pub centers: Vec<Point>,
    pub metadata: BTreeMap<String, String>,
}

impl Packing {
    /// Checks the radii; geometric validity is left to [`Packing::validate`].
    pub fn new(container_radius: f64, disk_radius: f64, centers: Vec<Point>) -> Result<Self, PackingError> {
        if !(disk_radius > 0.0) || !disk_radius.is_finite() {
            return Err(PackingError::BadDiskRadius(disk_radius));
        }
        if !(container_radius > disk_radius) || !container_radius.is_finite() {
            return Err(PackingError::BadContainerRadius { container: container_radius, disk: disk_radius });
        }
        if let Some(index) = centers.iter().position(|c| !c.is_finite()) {
            return Err(PackingError::NonFiniteCenter { index });
        }
        Ok(Packing { container_radius, disk_radius, centers, metadata: BTreeMap::new() })
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<String>) -> Self {
        self.metadata.insert(key.into(), value.into());
        self
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn disk_diameter(&self) -> f64 {
        2.0 * self.disk_radius
    }

    /// D/d.
    pub fn ratio(&self) -> f64 {
        self.container_radius / self.disk_radius
    }

    pub fn density(&self) -> f64 {
        let q = self.disk_radius / self.container_radius;
        self.len() as f64 * q * q
    }

    /// Disk-disk gap in diameters.
    pub fn pair_gap(&self, i: usize, j: usize) -> f64 {
        let d = self.disk_diameter();
        (self.centers[i].distance(self.centers[j]) - d) / d
    }

    /// Disk-wall gap in diameters.
    pub fn wall_gap(&self, i: usize) -> f64 {
        (self.container_radius - self.disk_radius - self.centers[i].norm()) / self.disk_diameter()
    }

    /// Every broken invariant at tolerance `tol` (in disk diameters).
    pub fn validate(&self, tol: f64) -> Vec<Violation> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            let gap = self.wall_gap(i);
            if gap < -tol {
                out.push(Violation::Wall { i, gap });
            }
        }
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                let gap = self.pair_gap(i, j);
                if gap < -tol {
                    out.push(Violation::Overlap { i, j, gap });
                }
            }
        }
        out
    }

    /// Density and D/d after checking validity at `tol`.
    pub fn measure_with_tol(&self, tol: f64) -> Result<Measure, PackingError> {
        let violations = self.validate(tol);
        if let Some(&first) = violations.first() {
            return Err(PackingError::Invalid { count: violations.len(), first });
        }
        Ok(Measure { density: self.density(), ratio: self.ratio() })
    }

    /// Density and D/d, rejecting packings invalid at the constructed-packing tolerance.
    pub fn measure(&self) -> Result<Measure, PackingError> {
        self.measure_with_tol(CONSTRUCTED_TOL)
    }

    /// Same packing rescaled so disks have unit diameter.
    pub fn to_unit_diameter(&self) -> Packing {
        let s = 1.0 / self.disk_diameter();
        Packing {
            container_radius: self.container_radius * s,
            disk_radius: 0.5,
            centers: self.centers.iter().map(|&c| c * s).collect(),
            metadata: self.metadata.clone(),
        }
    }

    pub fn rotated(&self, angle: f64) -> Packing {
        let mut p = self.clone();
        p.centers.iter_mut().for_each(|c| *c = c.rotated(angle));
        p
    }

    pub fn reflected(&self) -> Packing {
        let mut p = self.clone();
        p.centers.iter_mut().for_each(|c| *c = c.reflected());
        p
    }
}
