//! Collision prediction and resolution for disks with a common, linearly growing radius.
//!
//! Predictions are pure functions of the stored disk states: the result does not depend
//! on when the prediction is made, only on the disks' positions, velocities and
//! last-update times. Both engines rely on this to process identical event sequences.

use crate::geom::{sqrt, Point};

/// Position and velocity of one disk, with the position valid at `time`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiskState {
    pub pos: Point,
    pub vel: Point,
    pub time: f64,
}

impl DiskState {
    pub fn new(pos: Point, vel: Point) -> Self {
        DiskState { pos, vel, time: 0.0 }
    }

    #[inline]
    pub fn position_at(&self, t: f64) -> Point {
        if t == self.time {
            self.pos
        } else {
            self.pos + self.vel * (t - self.time)
        }
    }

    #[inline]
    pub fn advance(&mut self, t: f64) {
        self.pos = self.position_at(t);
        self.time = t;
    }
}

/// Common radius `r(t) = r0 + rate * t`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Growth {
    pub r0: f64,
    pub rate: f64,
}

impl Growth {
    #[inline]
    pub fn radius(&self, t: f64) -> f64 {
        self.r0 + self.rate * t
    }
}

/// Earliest time at which `a` and `b` touch, solving
/// `|dp + dv s|^2 = (2 r + 2 g s)^2` from the later of their update times.
pub fn predict_disk_disk(a: &DiskState, b: &DiskState, growth: Growth) -> Option<f64> {
    let base = a.time.max(b.time);
    let dp = b.position_at(base) - a.position_at(base);
    let dv = b.vel - a.vel;
    let g = growth.rate;
    let r = growth.radius(base);

    let qa = dv.dot(dv) - 4.0 * g * g;
    let qb = dp.dot(dv) - 4.0 * g * r;
    let qc = dp.dot(dp) - 4.0 * r * r;
    // B^2 - AC expanded so the 16 g^2 r^2 terms cancel symbolically
    let w = dv * (2.0 * r) - dp * (2.0 * g);
    let cross = dp.cross(dv);
    let disc = w.dot(w) - cross * cross;

    if qc <= 0.0 {
        // touching or overlapping by rounding
        if qb < 0.0 {
            return Some(base);
        }
        if qa < 0.0 {
            // separating now but growth wins eventually
            let s = if disc >= 0.0 { (-qb - sqrt(disc)) / qa } else { -qb / qa };
            return Some(base + s);
        }
        return None;
    }
    if qb >= 0.0 && qa >= 0.0 {
        return None;
    }
    if disc < 0.0 {
        return None;
    }
    Some(base + qc / (-qb + sqrt(disc)))
}

/// Earliest time at which `a` touches the container wall: `|p + v s| = R - r - g s`.
pub fn predict_disk_wall(a: &DiskState, container_radius: f64, growth: Growth) -> Option<f64> {
    let base = a.time;
    let p = a.pos;
    let v = a.vel;
    let g = growth.rate;
    let room = container_radius - growth.radius(base);

    let qa = v.dot(v) - g * g;
    let qb = p.dot(v) + g * room;
    let qc = p.dot(p) - room * room;
    // B^2 - AC expanded so the g^2 room^2 terms cancel symbolically
    let w = v * room + p * g;
    let cross = p.cross(v);
    let disc = w.dot(w) - cross * cross;

    if qc >= 0.0 {
        if qb > 0.0 {
            return Some(base);
        }
        if qa > 0.0 {
            if disc >= 0.0 {
                return Some(base + (-qb + sqrt(disc)) / qa);
            }
        }
        return None;
    }
    if qb <= 0.0 && qa <= 0.0 {
        return None;
    }
    if disc < 0.0 {
        return None;
    }
    let s = if qb > 0.0 { -qc / (qb + sqrt(disc)) } else { (-qb + sqrt(disc)) / qa };
    Some(base + s)
}

/// Elastic disk-disk collision in the frame of the growing contact: the normal rate of
/// change of the gap, `(v_b - v_a).n - 2g`, is reversed; tangential components are kept.
/// Returns false (and leaves the velocities alone) when the pair is not closing.
pub fn resolve_disk_disk(a: &mut DiskState, b: &mut DiskState, growth_rate: f64) -> bool {
    let d = b.pos - a.pos;
    let dist = d.norm();
    if !(dist > 0.0) {
        return false;
    }
    let n = d * (1.0 / dist);
    let closing = (b.vel - a.vel).dot(n) - 2.0 * growth_rate;
    if !(closing < 0.0) {
        return false;
    }
    a.vel += n * closing;
    b.vel -= n * closing;
    true
}

/// Elastic reflection off the wall in the frame of the growing contact.
pub fn resolve_disk_wall(a: &mut DiskState, growth_rate: f64) -> bool {
    let r = a.pos.norm();
    if !(r > 0.0) {
        return false;
    }
    let n = a.pos * (1.0 / r);
    let closing = a.vel.dot(n) + growth_rate;
    if !(closing > 0.0) {
        return false;
    }
    a.vel -= n * (2.0 * closing);
    true
}

/// Brings the pair to time `now` and resolves their contact (lower index first).
pub fn commit_pair(disks: &mut [DiskState], i: usize, j: usize, now: f64, growth_rate: f64) -> bool {
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    let (left, right) = disks.split_at_mut(hi);
    let (a, b) = (&mut left[lo], &mut right[0]);
    a.advance(now);
    b.advance(now);
    resolve_disk_disk(a, b, growth_rate)
}

pub fn commit_wall(disk: &mut DiskState, now: f64, growth_rate: f64) -> bool {
    disk.advance(now);
    resolve_disk_wall(disk, growth_rate)
}

/// Synchronises every disk at `now`, moves the time origin there and rescales the
/// velocities to unit mean speed. Returns the growth law in the new time frame.
pub fn rebase(disks: &mut [DiskState], now: f64, growth: Growth, growth_to_speed_ratio: f64) -> Growth {
    let r = growth.radius(now);
    let mut total = 0.0;
    for d in disks.iter_mut() {
        d.advance(now);
        d.time = 0.0;
        total += d.vel.norm();
    }
    let mean = total / disks.len() as f64;
    if mean > 0.0 {
        let scale = 1.0 / mean;
        disks.iter_mut().for_each(|d| d.vel = d.vel * scale);
    }
    Growth { r0: r, rate: growth_to_speed_ratio }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn still(x: f64, y: f64) -> DiskState {
        DiskState::new(Point::new(x, y), Point::ORIGIN)
    }

    #[test]
    fn static_pair_closes_at_twice_the_growth_rate() {
        let growth = Growth { r0: 0.1, rate: 0.001 };
        // gap 0.3 between surfaces
        let t = predict_disk_disk(&still(0.0, 0.0), &still(0.5, 0.0), growth).unwrap();
        assert!((t - 0.3 / 0.002).abs() < 1e-9);
    }

    #[test]
    fn head_on_without_growth() {
        let growth = Growth { r0: 0.1, rate: 0.0 };
        let a = DiskState::new(Point::new(0.0, 0.0), Point::new(0.7, 0.0));
        let b = DiskState::new(Point::new(1.0, 0.0), Point::new(-0.7, 0.0));
        let t = predict_disk_disk(&a, &b, growth).unwrap();
        assert!((t - 0.8 / 1.4).abs() < 1e-15);
        assert_eq!(predict_disk_disk(&b, &a, growth), Some(t));
        // receding pair never meets
        let c = DiskState::new(Point::new(1.0, 0.0), Point::new(0.7, 0.0));
        assert_eq!(predict_disk_disk(&a, &DiskState { vel: Point::new(0.8, 0.0), ..c }, growth), None);
    }

    #[test]
    fn later_update_time_is_the_base() {
        let growth = Growth { r0: 0.1, rate: 0.0 };
        let a = DiskState { pos: Point::new(-0.5, 0.0), vel: Point::new(1.0, 0.0), time: 0.0 };
        let b = DiskState { pos: Point::new(1.0, 0.0), vel: Point::ORIGIN, time: 0.5 };
        // at t=0.5, a is at 0: surface gap 0.8
        let t = predict_disk_disk(&a, &b, growth).unwrap();
        assert!((t - 1.3).abs() < 1e-15);
    }

    #[test]
    fn wall_hits() {
        let growth = Growth { r0: 0.1, rate: 0.001 };
        let centred = still(0.0, 0.0);
        let t = predict_disk_wall(&centred, 1.0, growth).unwrap();
        assert!((t - 0.9 / 0.001).abs() < 1e-6);

        let outward = DiskState::new(Point::new(0.2, 0.0), Point::new(1.0, 0.0));
        // 0.2 + s = 1 - 0.1 - 0.001 s
        let t = predict_disk_wall(&outward, 1.0, growth).unwrap();
        assert!((t - 0.7 / 1.001).abs() < 1e-14);

        let g0 = Growth { r0: 0.1, rate: 0.0 };
        let off = still(0.3, 0.0);
        assert_eq!(predict_disk_wall(&off, 1.0, g0), None);
    }

    #[test]
    fn elastic_exchange_and_reflection() {
        let mut a = DiskState::new(Point::new(0.0, 0.0), Point::new(0.6, 0.2));
        let mut b = DiskState::new(Point::new(0.2, 0.0), Point::new(-0.6, -0.1));
        assert!(resolve_disk_disk(&mut a, &mut b, 0.0));
        assert_eq!(a.vel, Point::new(-0.6, 0.2));
        assert_eq!(b.vel, Point::new(0.6, -0.1));

        let mut w = DiskState::new(Point::new(0.0, 0.8), Point::new(0.3, 0.5));
        assert!(resolve_disk_wall(&mut w, 0.0));
        assert_eq!(w.vel, Point::new(0.3, -0.5));
    }

    #[test]
    fn growth_compensated_pair_separates() {
        let g = 0.001;
        let growth = Growth { r0: 0.05, rate: g };
        // both at rest and touching: the contact closes only through growth
        let mut a = still(0.0, 0.0);
        let mut b = still(0.1, 0.0);
        assert_eq!(predict_disk_disk(&a, &b, growth), Some(0.0));
        assert!(resolve_disk_disk(&mut a, &mut b, g));
        assert!((b.vel - a.vel).x >= 2.0 * g);
        let next = predict_disk_disk(&a, &b, growth);
        assert!(next.map_or(true, |t| t > 0.0));
    }
}
