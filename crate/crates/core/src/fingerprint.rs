//! Congruence fingerprints for packings under rotation about the origin and reflection.
//!
//! A fingerprint is computed on the centre set rescaled to unit disk diameter. Its
//! canonical coordinate list is the lexicographically smallest sorted, quantized
//! coordinate list over all alignments that put one outermost disk on the +x axis,
//! with and without a reflection. Two packings whose coordinates agree to well within
//! the quantum therefore produce equal fingerprints.
//!
//! Quantization can split values that straddle a bucket boundary; [`congruent`] is the
//! tolerance-based check to use for noisy (simulated) coordinates.

use alloc::vec::Vec;

use crate::geom::{round, Point};
use crate::packing::Packing;

pub const DEFAULT_QUANTUM: f64 = 1e-8;
/// Bond threshold used for the contact part of a fingerprint, in diameters.
pub const FINGERPRINT_BOND_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CongruenceFingerprint {
    /// Sorted centre-to-origin distances in units of the quantum.
    pub radial: Vec<i64>,
    /// Canonical aligned coordinates in units of the quantum, sorted.
    pub coords: Vec<(i64, i64)>,
    /// Contact edges relabelled by position in `coords`, sorted.
    pub contacts: Vec<(u32, u32)>,
}

impl CongruenceFingerprint {
    /// Short stable digest (FNV-1a) for display and file naming.
    pub fn digest(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |v: u64| {
            for b in v.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        };
        self.radial.iter().for_each(|&r| eat(r as u64));
        self.coords.iter().for_each(|&(x, y)| {
            eat(x as u64);
            eat(y as u64);
        });
        self.contacts.iter().for_each(|&(a, b)| eat(((a as u64) << 32) | b as u64));
        h
    }
}

fn quantize(v: f64, quantum: f64) -> i64 {
    round(v / quantum) as i64
}

fn unit_centers(p: &Packing) -> Vec<Point> {
    let s = 1.0 / p.disk_diameter();
    p.centers.iter().map(|&c| c * s).collect()
}

/// Indices of disks within `slack` of the largest centre distance.
fn outermost(points: &[Point], slack: f64) -> Vec<usize> {
    let rmax = points.iter().map(|c| c.norm()).fold(0.0, f64::max);
    (0..points.len()).filter(|&i| points[i].norm() >= rmax - slack).collect()
}

/// Rotate so `anchor` lands on the +x axis, then optionally mirror across it.
fn align(points: &[Point], anchor: Point, mirror: bool) -> impl Iterator<Item = Point> + '_ {
    let angle = if anchor.norm() > 0.0 { -anchor.angle() } else { 0.0 };
    points.iter().map(move |&c| {
        let r = c.rotated(angle);
        if mirror {
            r.reflected()
        } else {
            r
        }
    })
}

/// Canonical fingerprint of `p` at coordinate resolution `quantum` (in diameters).
pub fn fingerprint(p: &Packing, quantum: f64) -> CongruenceFingerprint {
    let pts = unit_centers(p);

    let mut radial: Vec<i64> = pts.iter().map(|c| quantize(c.norm(), quantum)).collect();
    radial.sort_unstable();

    let mut best: Option<Vec<(i64, i64, u32)>> = None;
    for a in outermost(&pts, 10.0 * quantum) {
        for mirror in [false, true] {
            let mut key: Vec<(i64, i64, u32)> = align(&pts, pts[a], mirror)
                .enumerate()
                .map(|(i, c)| (quantize(c.x, quantum), quantize(c.y, quantum), i as u32))
                .collect();
            key.sort_unstable();
            let better = match &best {
                None => true,
                Some(b) => key.iter().map(|t| (t.0, t.1)).lt(b.iter().map(|t| (t.0, t.1))),
            };
            if better {
                best = Some(key);
            }
        }
    }
    let best = best.unwrap_or_default();

    let mut label = alloc::vec![0u32; pts.len()];
    for (pos, &(_, _, i)) in best.iter().enumerate() {
        label[i as usize] = pos as u32;
    }
    let mut contacts = Vec::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if pts[i].distance(pts[j]) - 1.0 < FINGERPRINT_BOND_TOL {
                let (a, b) = (label[i], label[j]);
                contacts.push((a.min(b), a.max(b)));
            }
        }
    }
    contacts.sort_unstable();

    CongruenceFingerprint { radial, coords: best.into_iter().map(|(x, y, _)| (x, y)).collect(), contacts }
}

/// Whether the centre sets of `a` and `b` (each in its own unit-diameter frame) are
/// related by a rotation about the origin, possibly composed with a reflection,
/// with every disk matched to within `tol` diameters.
pub fn congruent(a: &Packing, b: &Packing, tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let pa = unit_centers(a);
    let pb = unit_centers(b);

    let mut ra: Vec<f64> = pa.iter().map(|c| c.norm()).collect();
    let mut rb: Vec<f64> = pb.iter().map(|c| c.norm()).collect();
    ra.sort_unstable_by(f64::total_cmp);
    rb.sort_unstable_by(f64::total_cmp);
    if ra.iter().zip(&rb).any(|(x, y)| (x - y).abs() > tol) {
        return false;
    }

    let anchor = (0..pa.len()).max_by(|&i, &j| pa[i].norm().total_cmp(&pa[j].norm())).unwrap();
    let anchor_r = pa[anchor].norm();
    let target: Vec<Point> = align(&pa, pa[anchor], false).collect();

    for candidate in 0..pb.len() {
        if (pb[candidate].norm() - anchor_r).abs() > tol {
            continue;
        }
        for mirror in [false, true] {
            let mut moved: Vec<Point> = align(&pb, pb[candidate], mirror).collect();
            moved.sort_unstable_by(|p, q| p.x.total_cmp(&q.x));
            if matches_all(&target, &moved, tol) {
                return true;
            }
        }
    }
    false
}

/// Every point of `target` has a distinct partner in `sorted_by_x` within `tol`.
fn matches_all(target: &[Point], sorted_by_x: &[Point], tol: f64) -> bool {
    let mut used = alloc::vec![false; sorted_by_x.len()];
    for t in target {
        let start = sorted_by_x.partition_point(|p| p.x < t.x - tol);
        let found = sorted_by_x[start..]
            .iter()
            .take_while(|p| p.x <= t.x + tol)
            .enumerate()
            .find(|&(off, p)| !used[start + off] && p.distance(*t) <= tol)
            .map(|(off, _)| start + off);
        match found {
            Some(idx) => used[idx] = true,
            None => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn sample() -> Packing {
        Packing::new(
            5.0,
            0.5,
            vec![Point::new(0.3, 0.1), Point::new(1.6, -0.4), Point::new(-2.0, 1.1), Point::new(0.2, 3.1)],
        )
        .unwrap()
    }

    #[test]
    fn invariant_under_rotation_and_reflection() {
        let p = sample();
        let f = fingerprint(&p, DEFAULT_QUANTUM);
        assert_eq!(f, fingerprint(&p.rotated(crate::geom::PI / 3.0), DEFAULT_QUANTUM));
        assert_eq!(f, fingerprint(&p.reflected(), DEFAULT_QUANTUM));
        assert_eq!(f, fingerprint(&p.reflected().rotated(1.234), DEFAULT_QUANTUM));
        assert!(congruent(&p, &p.reflected().rotated(2.0), 1e-9));
    }

    #[test]
    fn distinguishes_a_moved_disk() {
        let p = sample();
        let mut q = p.clone();
        q.centers[2].x += 0.01;
        assert_ne!(fingerprint(&p, DEFAULT_QUANTUM), fingerprint(&q, DEFAULT_QUANTUM));
        assert!(!congruent(&p, &q, 1e-6));
        assert!(congruent(&p, &q, 0.02));
    }

    #[test]
    fn scale_is_normalized_away() {
        let p = sample();
        let mut q = p.clone();
        q.disk_radius *= 3.0;
        q.container_radius *= 3.0;
        q.centers.iter_mut().for_each(|c| *c = *c * 3.0);
        assert_eq!(fingerprint(&p, DEFAULT_QUANTUM), fingerprint(&q, DEFAULT_QUANTUM));
    }

    #[test]
    fn single_centred_disk() {
        let p = Packing::new(2.0, 1.0, vec![Point::ORIGIN]).unwrap();
        assert!(congruent(&p, &p, 1e-9));
        assert_eq!(fingerprint(&p, 1e-8).coords, vec![(0, 0)]);
    }
}
