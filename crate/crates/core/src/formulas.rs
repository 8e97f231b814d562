//! Closed-form quantities of the curved hexagonal family.
//!
//! Lengths are in disk diameters. `k` is the number of layers around the central
//! disk; a `k`-layer packing holds `3k(k+1) + 1` disks.

use thiserror::Error;

use crate::geom::{sin, sqrt, Point, PI};

/// Limit of the curved hexagonal density as `k` grows: pi^2 / 12.
pub const LIMIT_DENSITY: f64 = PI * PI / 12.0;

/// Density of the hexagonal packing of the infinite plane, pi / (2 sqrt 3).
pub fn plane_hexagonal_density() -> f64 {
    PI / (2.0 * sqrt(3.0))
}

/// Largest `k` whose variant count fits in a `u64`.
pub const MAX_VARIANT_K: u32 = 21;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("layer count must be at least 1, got {0}")]
    ZeroLayers(u32),
    #[error("hexagonal number for k = {0} does not fit in 64 bits")]
    HexOverflow(u32),
    #[error("variant count for k = {k} overflows 64 bits (k must be <= {max})", max = MAX_VARIANT_K)]
    VariantOverflow { k: u32 },
}

/// A layer count together with its hexagonal disk count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HexIndex {
    k: u32,
    n: u64,
}

impl HexIndex {
    pub fn new(k: u32) -> Result<Self, FormulaError> {
        Ok(HexIndex { k, n: hex_number(k)? })
    }

    /// The index whose hexagonal number is exactly `n`, if any.
    pub fn from_count(n: u64) -> Option<Self> {
        // 3k^2 + 3k + 1 = n  =>  k = (-3 + sqrt(12n - 3)) / 6
        if n < 7 {
            return None;
        }
        let approx = (sqrt(12.0 * n as f64 - 3.0) - 3.0) / 6.0;
        let guess = approx as u64;
        for k in guess.saturating_sub(1)..=guess + 1 {
            if k >= 1 && k <= u32::MAX as u64 {
                if let Ok(h) = hex_number(k as u32) {
                    if h == n {
                        return Some(HexIndex { k: k as u32, n });
                    }
                }
            }
        }
        None
    }

    pub fn k(self) -> u32 {
        self.k
    }

    pub fn n(self) -> u64 {
        self.n
    }
}

/// h(k) = 3k(k+1) + 1.
pub fn hex_number(k: u32) -> Result<u64, FormulaError> {
    if k == 0 {
        return Err(FormulaError::ZeroLayers(k));
    }
    let k = k as u64;
    k.checked_add(1)
        .and_then(|k1| k.checked_mul(k1))
        .and_then(|p| p.checked_mul(3))
        .and_then(|p| p.checked_add(1))
        .ok_or(FormulaError::HexOverflow(k as u32))
}

/// m(k) = max((k-1)!/2, 1), the number of non-congruent curved hexagonal packings.
pub fn variant_count(k: u32) -> Result<u64, FormulaError> {
    if k == 0 {
        return Err(FormulaError::ZeroLayers(k));
    }
    let mut factorial: u128 = 1;
    for i in 2..k as u128 {
        factorial = factorial
            .checked_mul(i)
            .ok_or(FormulaError::VariantOverflow { k })?;
    }
    let half = (factorial / 2).max(1);
    u64::try_from(half).map_err(|_| FormulaError::VariantOverflow { k })
}

/// Per-segment turn angle of the path from the centre to the rim, pi / (3k).
pub fn turn_angle(k: u32) -> f64 {
    assert!(k >= 1, "layer count must be at least 1");
    PI / (3.0 * k as f64)
}

/// Distance from the central disk's centre to a rim disk's centre: 1 / (2 sin(pi/(6k))).
pub fn path_radius(k: u32) -> f64 {
    assert!(k >= 1, "layer count must be at least 1");
    1.0 / (2.0 * sin(PI / (6.0 * k as f64)))
}

/// Container-to-disk diameter ratio D/d = 1 + 1/sin(pi/(6k)).
pub fn curved_hex_ratio(k: u32) -> f64 {
    assert!(k >= 1, "layer count must be at least 1");
    1.0 + 1.0 / sin(PI / (6.0 * k as f64))
}

/// Covering fraction h(k) (d/D)^2.
pub fn curved_hex_density(k: u32) -> f64 {
    let n = hex_number(k).expect("k >= 1 with representable h(k)") as f64;
    let ratio = curved_hex_ratio(k);
    n / (ratio * ratio)
}

/// Modulus of the unit-step partial sum `1 + e^{i a o_1} + ... + e^{i a o_{k-1}}`
/// with `a = pi/(3k)`, evaluated term by term in the given order.
pub fn path_modulus(k: u32, order: &[u32]) -> f64 {
    let alpha = turn_angle(k);
    let mut end = Point::new(1.0, 0.0);
    for &o in order {
        end += Point::from_angle(o as f64 * alpha);
    }
    end.norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn hex_numbers() {
        assert_eq!(hex_number(1).unwrap(), 7);
        assert_eq!(hex_number(5).unwrap(), 91);
        assert_eq!(hex_number(8).unwrap(), 217);
        assert_eq!(hex_number(0), Err(FormulaError::ZeroLayers(0)));
        assert!(hex_number(1 << 31).is_ok());
        assert_eq!(hex_number(u32::MAX), Err(FormulaError::HexOverflow(u32::MAX)));
    }

    #[test]
    fn hex_index_round_trip() {
        for k in 1..200u32 {
            let idx = HexIndex::new(k).unwrap();
            assert_eq!(HexIndex::from_count(idx.n()), Some(idx));
            assert_eq!(HexIndex::from_count(idx.n() + 1), None);
        }
        assert_eq!(HexIndex::from_count(6), None);
        assert_eq!(HexIndex::from_count(0), None);
    }

    #[test]
    fn variant_counts() {
        assert_eq!(variant_count(1).unwrap(), 1);
        assert_eq!(variant_count(2).unwrap(), 1);
        assert_eq!(variant_count(3).unwrap(), 1);
        assert_eq!(variant_count(4).unwrap(), 3);
        assert_eq!(variant_count(5).unwrap(), 12);
        assert_eq!(variant_count(6).unwrap(), 60);
        assert_eq!(variant_count(21).unwrap(), 1_216_451_004_088_320_000);
        assert_eq!(variant_count(22), Err(FormulaError::VariantOverflow { k: 22 }));
        assert_eq!(variant_count(40), Err(FormulaError::VariantOverflow { k: 40 }));
        assert!(variant_count(0).is_err());
    }

    #[test]
    fn ratio_values() {
        assert!((curved_hex_ratio(1) - 3.0).abs() < 1e-15);
        // 40-digit evaluation of 1 + 1/sin(pi/12)
        assert!((curved_hex_ratio(2) - 4.863703305156273).abs() < 1e-14);
        assert!((curved_hex_ratio(6) / 12.473713245670 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn density_values() {
        assert!((curved_hex_density(1) - 7.0 / 9.0).abs() < 1e-15);
        assert!((curved_hex_density(6) / 0.81622935362082 - 1.0).abs() < 1e-12);
        assert!((LIMIT_DENSITY - 0.822467033).abs() < 1e-9);
        let plane = plane_hexagonal_density();
        assert!((plane - 0.906899682).abs() < 1e-9);
        assert!((plane * plane - LIMIT_DENSITY).abs() < 1e-15);
    }

    #[test]
    fn density_approaches_limit_from_below_at_rate_one_over_k() {
        // gap at k = 10^4 from a 40-digit evaluation
        let gap = LIMIT_DENSITY - curved_hex_density(10_000);
        assert!((gap - 3.881701422746706e-6).abs() < 1e-12, "gap {gap}");
        for k in [10u32, 100, 1000, 10_000] {
            let scaled = (LIMIT_DENSITY - curved_hex_density(k)) * k as f64;
            let leading = LIMIT_DENSITY * (PI / 3.0 - 1.0);
            assert!((scaled - leading).abs() < 0.1, "k={k}: {scaled} vs {leading}");
        }
    }

    #[test]
    fn path_radius_matches_ratio_and_partial_sum() {
        assert!((path_radius(1) - 1.0).abs() < 1e-15);
        assert!((path_radius(6) - 5.736856622835).abs() < 1e-11);
        for k in 1..=50u32 {
            assert_eq!(curved_hex_ratio(k), 1.0 + 2.0 * path_radius(k));
            let identity: Vec<u32> = (1..k).collect();
            assert!((path_modulus(k, &identity) - path_radius(k)).abs() < 1e-12);
        }
    }
}
