//! Builders for curved hexagonal packings of h(k) unit-diameter disks.
//!
//! Two routes produce the same family of packings:
//!
//! * **from a path**: a chain of `k + 1` disks runs from the central disk to the rim.
//!   Its first step points along +x and step `t + 1` is turned by `order[t] * pi/(3k)`
//!   (clockwise for [`Chirality::Clockwise`]). The rim layer is the ring of `6k` disks
//!   through the path's last disk, and every inner layer is grown as a tangent chain
//!   starting from the path disk of that layer.
//! * **outward-in**: the rim ring is laid first and each inner layer starts in a chosen
//!   notch of the layer outside it.
//!
//! Both routes use the same greedy tangent chain: each new disk touches the previous
//! one and the first disk of the outer layer, scanning clockwise from the last one
//! touched, that yields a non-overlapping position on the clockwise side.
//!
//! Packings are returned with the central disk first, followed by layers `1..=k` in
//! order; [`layer_labels`] gives the layer of every index.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::fingerprint::{fingerprint, CongruenceFingerprint, DEFAULT_QUANTUM};
use crate::formulas::{self, FormulaError};
use crate::geom::{unit_tangent_points, Point, PI};
use crate::packing::Packing;

/// Largest `k` accepted by the enumerators.
pub const MAX_ENUMERATE_K: u32 = 8;
/// Minimum gap (in diameters) a chain placement may have with any placed disk.
const PLACEMENT_TOL: f64 = 1e-12;
/// Largest acceptable distance error when the last chain disk meets the first.
pub const CLOSURE_TOL: f64 = 1e-9;
/// Outer-layer disks examined per placement, starting at the last one touched.
const SCAN_WIDTH: usize = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstructError {
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("order {order:?} is not a permutation of 1..{k}")]
    NotAPermutation { k: u32, order: Vec<u32> },
    #[error("layer {layer} cannot be flipped for k = {k} (only layers 2..k-1)")]
    BadFlipLayer { k: u32, layer: u32 },
    #[error("expected {expected} first-disk choices, got {got}")]
    WrongChoiceCount { expected: usize, got: usize },
    #[error("choice {choice} for layer {layer} is out of range 0..={max}")]
    BadChoice { layer: u32, choice: u32, max: u32 },
    #[error("no non-overlapping tangent position for disk {index} of layer {layer}")]
    Infeasible { layer: u32, index: usize },
    #[error("layer {layer} chain does not close (residual {residual:e} d)")]
    OpenChain { layer: u32, residual: f64 },
    #[error("path disk of layer {layer} touches no disk of the layer outside it")]
    DetachedStart { layer: u32 },
    #[error("enumeration is limited to k <= {max}, got {k}", max = MAX_ENUMERATE_K)]
    TooLarge { k: u32 },
    #[error("k = {k}: found {found} congruence classes, expected {expected}")]
    EnumerationMismatch { k: u32, expected: u64, found: u64 },
    #[error("cannot parse packing spec {0:?}")]
    Parse(String),
}

/// Sense of the path's turns and of the layer fill.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Chirality {
    #[default]
    Clockwise,
    Counterclockwise,
}

/// One curved hexagonal packing, identified by the order of the path's turn angles.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PathSpec {
    pub k: u32,
    pub order: Vec<u32>,
    pub chirality: Chirality,
}

fn is_permutation(k: u32, order: &[u32]) -> bool {
    let mut seen = alloc::vec![false; k as usize];
    order.len() + 1 == k as usize
        && order.iter().all(|&o| {
            let ok = o >= 1 && o < k && !seen[o as usize];
            if ok {
                seen[o as usize] = true;
            }
            ok
        })
}

impl PathSpec {
    pub fn new(k: u32, order: Vec<u32>, chirality: Chirality) -> Result<Self, ConstructError> {
        formulas::hex_number(k)?;
        if !is_permutation(k, &order) {
            return Err(ConstructError::NotAPermutation { k, order });
        }
        Ok(PathSpec { k, order, chirality })
    }

    /// The basic pattern, order `1, 2, ..., k-1`.
    pub fn identity(k: u32) -> Self {
        assert!(k >= 1);
        PathSpec { k, order: (1..k).collect(), chirality: Chirality::Clockwise }
    }

    /// Order `k - i_1, ..., k - i_{k-1}`, which builds the mirror image.
    pub fn reflection(&self) -> PathSpec {
        PathSpec { k: self.k, order: self.order.iter().map(|&o| self.k - o).collect(), chirality: self.chirality }
    }

    /// The lexicographically smaller of the order and its reflection.
    pub fn canonical(&self) -> PathSpec {
        let r = self.reflection();
        if r.order < self.order {
            r
        } else {
            self.clone()
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.reflection().order >= self.order
    }
}

fn join(values: impl IntoIterator<Item = u32>) -> String {
    values.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for PathSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={}", self.k)?;
        if !self.order.is_empty() {
            write!(f, ";order={}", join(self.order.iter().copied()))?;
        }
        if self.chirality == Chirality::Counterclockwise {
            write!(f, ";chirality=ccw")?;
        }
        Ok(())
    }
}

/// Regular curved hexagonal packing: the basic pattern with some middle layers mirrored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FlipSpec {
    pub k: u32,
    pub flipped_layers: BTreeSet<u32>,
}

impl FlipSpec {
    pub fn new(k: u32, flipped_layers: impl IntoIterator<Item = u32>) -> Result<Self, ConstructError> {
        formulas::hex_number(k)?;
        let flipped_layers: BTreeSet<u32> = flipped_layers.into_iter().collect();
        if let Some(&layer) = flipped_layers.iter().find(|&&l| l < 2 || l + 1 > k) {
            return Err(ConstructError::BadFlipLayer { k, layer });
        }
        Ok(FlipSpec { k, flipped_layers })
    }
}

impl fmt::Display for FlipSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={};flips={}", self.k, join(self.flipped_layers.iter().copied()))
    }
}

/// Notch choices for the outward-in construction: entry `j` picks the notch (in
/// `0..=layer`) of the first disk of layer `k - 2 - j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AttachmentSpec {
    pub k: u32,
    pub first_disk_choices: Vec<u32>,
}

impl AttachmentSpec {
    pub fn new(k: u32, first_disk_choices: Vec<u32>) -> Result<Self, ConstructError> {
        formulas::hex_number(k)?;
        let expected = k.saturating_sub(2) as usize;
        if first_disk_choices.len() != expected {
            return Err(ConstructError::WrongChoiceCount { expected, got: first_disk_choices.len() });
        }
        for (j, &choice) in first_disk_choices.iter().enumerate() {
            let layer = k - 2 - j as u32;
            if choice > layer {
                return Err(ConstructError::BadChoice { layer, choice, max: layer });
            }
        }
        Ok(AttachmentSpec { k, first_disk_choices })
    }

    /// Every valid choice vector for `k`, `(k-1)!` of them (one for `k <= 2`).
    pub fn all(k: u32) -> Vec<AttachmentSpec> {
        let mut out = alloc::vec![Vec::new()];
        for layer in (1..k.saturating_sub(1)).rev() {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<u32>| {
                    (0..=layer).map(move |c| {
                        let mut v = prefix.clone();
                        v.push(c);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(|first_disk_choices| AttachmentSpec { k, first_disk_choices }).collect()
    }
}

/// A parsed `k=<k>[;order=..|;flips=..][;chirality=cw|ccw]` string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecString {
    Path(PathSpec),
    Flips(FlipSpec),
}

impl SpecString {
    pub fn to_path(&self) -> PathSpec {
        match self {
            SpecString::Path(p) => p.clone(),
            SpecString::Flips(f) => flip_to_permutation(f),
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<u32>, ConstructError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|v| v.trim().parse::<u32>().map_err(|_| ConstructError::Parse(s.into()))).collect()
}

impl FromStr for SpecString {
    type Err = ConstructError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut fields: BTreeMap<&str, &str> = BTreeMap::new();
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part.split_once('=').ok_or_else(|| ConstructError::Parse(s.into()))?;
            if fields.insert(key.trim(), value.trim()).is_some() {
                return Err(ConstructError::Parse(s.into()));
            }
        }
        let k: u32 = fields
            .remove("k")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| ConstructError::Parse(s.into()))?;
        let chirality = match fields.remove("chirality") {
            None | Some("cw") => Chirality::Clockwise,
            Some("ccw") => Chirality::Counterclockwise,
            Some(_) => return Err(ConstructError::Parse(s.into())),
        };
        let order = fields.remove("order");
        let flips = fields.remove("flips");
        if !fields.is_empty() {
            return Err(ConstructError::Parse(s.into()));
        }
        match (order, flips) {
            (Some(_), Some(_)) => Err(ConstructError::Parse(s.into())),
            (None, Some(f)) => {
                if chirality != Chirality::Clockwise {
                    return Err(ConstructError::Parse(s.into()));
                }
                Ok(SpecString::Flips(FlipSpec::new(k, parse_list(f)?)?))
            }
            (Some(o), None) => Ok(SpecString::Path(PathSpec::new(k, parse_list(o)?, chirality)?)),
            (None, None) => {
                formulas::hex_number(k)?;
                let mut p = PathSpec::identity(k);
                p.chirality = chirality;
                Ok(SpecString::Path(p))
            }
        }
    }
}

/// Layer index of every disk in a layered curved hexagonal packing of `k` layers.
pub fn layer_labels(k: u32) -> Vec<u32> {
    let mut labels = alloc::vec![0u32];
    for layer in 1..=k {
        labels.extend(core::iter::repeat(layer).take(6 * layer as usize));
    }
    labels
}

/// Index of the first disk of `layer` in the layered ordering.
pub fn layer_start(layer: u32) -> usize {
    if layer == 0 {
        0
    } else {
        1 + 3 * (layer as usize - 1) * layer as usize
    }
}

/// Centres of the path disks `0..=k`, in disk diameters.
pub fn build_path(spec: &PathSpec) -> Vec<Point> {
    let alpha = formulas::turn_angle(spec.k);
    let sign = match spec.chirality {
        Chirality::Clockwise => -1.0,
        Chirality::Counterclockwise => 1.0,
    };
    let mut centers = Vec::with_capacity(spec.k as usize + 1);
    let mut at = Point::ORIGIN;
    centers.push(at);
    at += Point::new(1.0, 0.0);
    centers.push(at);
    for &o in &spec.order {
        at += Point::from_angle(sign * o as f64 * alpha);
        centers.push(at);
    }
    centers
}

fn rim_ring(k: u32, start_angle: f64) -> Vec<Point> {
    let radius = formulas::path_radius(k);
    let m = 6 * k as usize;
    let step = 2.0 * PI / m as f64;
    (0..m).map(|j| Point::polar(radius, start_angle - step * j as f64)).collect()
}

/// The `6k` rim disks, equally spaced clockwise from +x on the circle of radius
/// `path_radius(k)`.
pub fn build_outer_layer(k: u32) -> Vec<Point> {
    rim_ring(k, 0.0)
}

fn min_gap(c: Point, disks: impl IntoIterator<Item = Point>) -> f64 {
    disks.into_iter().map(|d| c.distance(d) - 1.0).fold(f64::INFINITY, f64::min)
}

/// Grow `count` disks clockwise inside `outer` starting from `start`, which touches
/// `outer[last]`.
fn tangent_chain(outer: &[Point], layer: u32, count: usize, start: Point, mut last: usize) -> Result<Vec<Point>, ConstructError> {
    let m = outer.len();
    let mut chain = Vec::with_capacity(count);
    chain.push(start);
    while chain.len() < count {
        let prev = *chain.last().unwrap();
        let placed = (0..SCAN_WIDTH).find_map(|step| {
            let o = (last + step) % m;
            let (_, right) = unit_tangent_points(prev, outer[o])?;
            let others = outer.iter().copied().chain(chain[..chain.len() - 1].iter().copied());
            (min_gap(right, others) >= -PLACEMENT_TOL).then_some((right, o))
        });
        match placed {
            Some((c, o)) => {
                chain.push(c);
                last = o;
            }
            None => return Err(ConstructError::Infeasible { layer, index: chain.len() }),
        }
    }
    if count > 1 {
        let residual = chain[count - 1].distance(chain[0]) - 1.0;
        if !(residual.abs() <= CLOSURE_TOL) {
            return Err(ConstructError::OpenChain { layer, residual });
        }
    }
    Ok(chain)
}

/// Fill layer `layer` (6 * layer disks) inside the completed layer `outer`, with the
/// first disk in the notch between `outer[first_choice]` and the next disk.
pub fn fill_layer_inward(outer: &[Point], layer: u32, first_choice: u32) -> Result<Vec<Point>, ConstructError> {
    let m = outer.len();
    let c = first_choice as usize % m;
    let next = (c + 1) % m;
    let (_, notch) = unit_tangent_points(outer[c], outer[next]).ok_or(ConstructError::Infeasible { layer, index: 0 })?;
    if min_gap(notch, outer.iter().copied()) < -PLACEMENT_TOL {
        return Err(ConstructError::Infeasible { layer, index: 0 });
    }
    tangent_chain(outer, layer, 6 * layer as usize, notch, next)
}

fn assemble(k: u32, inner_to_outer: Vec<Vec<Point>>) -> Packing {
    let mut centers = Vec::with_capacity(formulas::hex_number(k).unwrap() as usize);
    centers.push(Point::ORIGIN);
    for layer in inner_to_outer {
        centers.extend(layer);
    }
    Packing::new(formulas::curved_hex_ratio(k) / 2.0, 0.5, centers)
        .expect("curved hexagonal radii are valid")
        .with_meta("k", k.to_string())
}

/// Lay the rim, then fill inward using the notch choices of `spec`.
pub fn build_packing_outward_in(spec: &AttachmentSpec) -> Result<Packing, ConstructError> {
    let k = spec.k;
    let mut layers = alloc::vec![build_outer_layer(k)];
    for layer in (1..k).rev() {
        let choice = if layer + 1 == k { 0 } else { spec.first_disk_choices[(k - 2 - layer) as usize] };
        let filled = fill_layer_inward(layers.last().unwrap(), layer, choice)?;
        layers.push(filled);
    }
    layers.reverse();
    Ok(assemble(k, layers)
        .with_meta("source", "curved-hex/outward-in")
        .with_meta("choices", join(spec.first_disk_choices.iter().copied())))
}

/// Build the packing whose path follows `spec`.
pub fn build_packing_from_path(spec: &PathSpec) -> Result<Packing, ConstructError> {
    let k = spec.k;
    let clockwise = PathSpec { chirality: Chirality::Clockwise, ..spec.clone() };
    let path = build_path(&clockwise);

    let rim = rim_ring(k, path[k as usize].angle());
    let mut layers = alloc::vec![rim];
    for layer in (1..k).rev() {
        let outer = layers.last().unwrap();
        let start = path[layer as usize];
        let m = outer.len();
        let touching = |j: usize| (start.distance(outer[j]) - 1.0).abs() < CLOSURE_TOL;
        let last = (0..m)
            .find(|&j| touching(j) && !touching((j + 1) % m))
            .ok_or(ConstructError::DetachedStart { layer })?;
        let filled = tangent_chain(outer, layer, 6 * layer as usize, start, last)?;
        layers.push(filled);
    }
    layers.reverse();
    let mut packing = assemble(k, layers);
    if spec.chirality == Chirality::Counterclockwise {
        packing = packing.reflected();
    }
    Ok(packing
        .with_meta("source", "curved-hex/path")
        .with_meta("order", join(spec.order.iter().copied()))
        .with_meta(
            "chirality",
            match spec.chirality {
                Chirality::Clockwise => "cw",
                Chirality::Counterclockwise => "ccw",
            },
        ))
}

/// The path order of a regular packing: walking layers 2..k-1 outward, an unflipped
/// layer takes the smallest unused turn index and a flipped one the largest; layer
/// `k` takes the one left over.
pub fn flip_to_permutation(f: &FlipSpec) -> PathSpec {
    let k = f.k;
    let mut remaining: Vec<u32> = (1..k).collect();
    let mut order = Vec::with_capacity(remaining.len());
    for layer in 2..k {
        let pick = if f.flipped_layers.contains(&layer) { remaining.pop() } else { Some(remaining.remove(0)) };
        order.push(pick.expect("one index per layer"));
    }
    order.extend(remaining);
    PathSpec { k, order, chirality: Chirality::Clockwise }
}

/// Advance `v` to the next permutation in lexicographic order; false when `v` was last.
fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Every canonical path order for `k`, in lexicographic order.
pub fn canonical_orders(k: u32) -> Vec<PathSpec> {
    let mut order: Vec<u32> = (1..k).collect();
    let mut out = Vec::new();
    loop {
        let spec = PathSpec { k, order: order.clone(), chirality: Chirality::Clockwise };
        if spec.is_canonical() {
            out.push(spec);
        }
        if !next_permutation(&mut order) {
            break;
        }
    }
    out
}

fn check_enumerable(k: u32) -> Result<(), ConstructError> {
    formulas::hex_number(k)?;
    if k > MAX_ENUMERATE_K {
        return Err(ConstructError::TooLarge { k });
    }
    Ok(())
}

/// One representative per congruence class of curved hexagonal packings of `k`
/// layers, built by the path method; fails if the class count differs from
/// `variant_count(k)`.
pub fn enumerate_all(k: u32) -> Result<Vec<(PathSpec, Packing)>, ConstructError> {
    check_enumerable(k)?;
    let mut seen: BTreeSet<CongruenceFingerprint> = BTreeSet::new();
    let mut out = Vec::new();
    for spec in canonical_orders(k) {
        let packing = build_packing_from_path(&spec)?;
        if seen.insert(fingerprint(&packing, DEFAULT_QUANTUM)) {
            out.push((spec, packing));
        }
    }
    let expected = formulas::variant_count(k)?;
    if out.len() as u64 != expected {
        return Err(ConstructError::EnumerationMismatch { k, expected, found: out.len() as u64 });
    }
    Ok(out)
}

/// Distinct packings produced by the outward-in method over all choice vectors,
/// keyed by fingerprint.
pub fn enumerate_outward_in(k: u32) -> Result<BTreeMap<CongruenceFingerprint, (AttachmentSpec, Packing)>, ConstructError> {
    check_enumerable(k)?;
    let mut out = BTreeMap::new();
    for spec in AttachmentSpec::all(k) {
        let packing = build_packing_outward_in(&spec)?;
        out.entry(fingerprint(&packing, DEFAULT_QUANTUM)).or_insert((spec, packing));
    }
    Ok(out)
}

impl fmt::Display for AttachmentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={};choices={}", self.k, join(self.first_disk_choices.iter().copied()))
    }
}

/// Human-readable spec string for a path order.
pub fn spec_string(spec: &PathSpec) -> String {
    format!("{spec}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingerprint::congruent;
    use alloc::vec;

    fn fp(p: &Packing) -> CongruenceFingerprint {
        fingerprint(p, DEFAULT_QUANTUM)
    }

    #[test]
    fn path_for_single_layer() {
        let path = build_path(&PathSpec::identity(1));
        assert_eq!(path, vec![Point::ORIGIN, Point::new(1.0, 0.0)]);
    }

    #[test]
    fn path_endpoint_is_order_independent() {
        let target = 1.0 / (2.0 * crate::geom::sin(PI / 24.0));
        let mut order = vec![1, 2, 3];
        loop {
            for chirality in [Chirality::Clockwise, Chirality::Counterclockwise] {
                let path = build_path(&PathSpec::new(4, order.clone(), chirality).unwrap());
                assert!((path[4].norm() - target).abs() < 1e-12);
            }
            if !next_permutation(&mut order) {
                break;
            }
        }
    }

    #[test]
    fn rim_ring_is_tight() {
        for k in 1..=8 {
            let ring = build_outer_layer(k);
            assert_eq!(ring.len(), 6 * k as usize);
            for (i, c) in ring.iter().enumerate() {
                assert!((c.norm() - formulas::path_radius(k)).abs() < 1e-12);
                let next = ring[(i + 1) % ring.len()];
                assert!((c.distance(next) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn nineteen_disk_inner_layer() {
        let rim = build_outer_layer(2);
        let inner = fill_layer_inward(&rim, 1, 0).unwrap();
        assert_eq!(inner.len(), 6);
        for c in &inner {
            let double = rim.iter().filter(|o| (c.distance(**o) - 1.0).abs() < 1e-9).count();
            assert_eq!(double, 2);
            assert!((c.norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn inner_layer_has_six_double_contacts() {
        for k in 2..=6 {
            let rim = build_outer_layer(k);
            let inner = fill_layer_inward(&rim, k - 1, 0).unwrap();
            let doubles = inner
                .iter()
                .filter(|c| rim.iter().filter(|o| (c.distance(**o) - 1.0).abs() < 1e-9).count() == 2)
                .count();
            assert_eq!(doubles, 6, "k = {k}");
            for (i, c) in inner.iter().enumerate() {
                let next = inner[(i + 1) % inner.len()];
                assert!((c.distance(next) - 1.0).abs() < 1e-9);
                assert!(rim.iter().any(|o| (c.distance(*o) - 1.0).abs() < 1e-9));
            }
        }
    }

    #[test]
    fn both_choices_for_k3_are_congruent() {
        let a = build_packing_outward_in(&AttachmentSpec::new(3, vec![0]).unwrap()).unwrap();
        let b = build_packing_outward_in(&AttachmentSpec::new(3, vec![1]).unwrap()).unwrap();
        assert_eq!(fp(&a), fp(&b));
    }

    #[test]
    fn nineteen_disks_have_the_formula_ratio() {
        let p = build_packing_outward_in(&AttachmentSpec::new(2, vec![]).unwrap()).unwrap();
        assert_eq!(p.len(), 19);
        assert!(p.validate(1e-9).is_empty());
        assert!((p.measure().unwrap().ratio - 4.863703305156273).abs() < 1e-12);
    }

    #[test]
    fn choice_vectors_are_checked() {
        assert!(matches!(AttachmentSpec::new(4, vec![0]), Err(ConstructError::WrongChoiceCount { .. })));
        assert!(matches!(AttachmentSpec::new(4, vec![3, 0]), Err(ConstructError::BadChoice { layer: 2, .. })));
        assert_eq!(AttachmentSpec::all(5).len(), 24);
        assert_eq!(AttachmentSpec::all(2).len(), 1);
        assert_eq!(AttachmentSpec::all(1).len(), 1);
    }

    #[test]
    fn k4_orders_from_the_figures() {
        let build = |o: Vec<u32>| build_packing_from_path(&PathSpec::new(4, o, Chirality::Clockwise).unwrap()).unwrap();
        let basic = build(vec![1, 2, 3]);
        let left = build(vec![1, 3, 2]);
        let right = build(vec![2, 3, 1]);
        assert_ne!(fp(&left), fp(&right));
        assert_ne!(fp(&basic), fp(&left));
        assert_eq!(fp(&basic), fp(&build(vec![3, 2, 1])));
        assert_eq!(fp(&left), fp(&build(vec![3, 1, 2])));
        assert_eq!(fp(&right), fp(&build(vec![2, 1, 3])));
        // basic path packing equals the outward-in packing with the first notches
        let outward = build_packing_outward_in(&AttachmentSpec::new(4, vec![0, 0]).unwrap()).unwrap();
        let outward_fps: BTreeSet<_> = AttachmentSpec::all(4)
            .iter()
            .map(|s| fp(&build_packing_outward_in(s).unwrap()))
            .collect();
        assert!(outward_fps.contains(&fp(&basic)));
        assert_eq!(outward_fps.len(), 3);
        let _ = outward;
    }

    #[test]
    fn chirality_mirrors() {
        let cw = build_packing_from_path(&PathSpec::new(4, vec![2, 3, 1], Chirality::Clockwise).unwrap()).unwrap();
        let ccw = build_packing_from_path(&PathSpec::new(4, vec![2, 3, 1], Chirality::Counterclockwise).unwrap()).unwrap();
        assert!(congruent(&cw, &ccw, 1e-9));
        assert!(ccw.validate(1e-9).is_empty());
        let path = build_path(&PathSpec::new(4, vec![2, 3, 1], Chirality::Counterclockwise).unwrap());
        for (j, c) in path.iter().enumerate() {
            assert!(ccw.centers[layer_start(j as u32)].distance(*c) < 1e-12);
        }
    }

    #[test]
    fn flips_map_to_min_max_orders() {
        assert_eq!(flip_to_permutation(&FlipSpec::new(4, []).unwrap()).order, vec![1, 2, 3]);
        assert_eq!(flip_to_permutation(&FlipSpec::new(4, [2]).unwrap()).order, vec![3, 1, 2]);
        assert_eq!(flip_to_permutation(&FlipSpec::new(4, [3]).unwrap()).order, vec![1, 3, 2]);
        assert_eq!(flip_to_permutation(&FlipSpec::new(4, [2, 3]).unwrap()).order, vec![3, 2, 1]);
        assert_eq!(
            flip_to_permutation(&FlipSpec::new(13, [6, 7, 8, 9]).unwrap()).order,
            vec![1, 2, 3, 4, 12, 11, 10, 9, 5, 6, 7, 8]
        );
        assert_eq!(flip_to_permutation(&FlipSpec::new(1, []).unwrap()).order, Vec::<u32>::new());
        assert!(matches!(FlipSpec::new(5, [1]), Err(ConstructError::BadFlipLayer { layer: 1, .. })));
        assert!(matches!(FlipSpec::new(5, [5]), Err(ConstructError::BadFlipLayer { layer: 5, .. })));
    }

    #[test]
    fn spec_strings() {
        let s: SpecString = "k=5;order=1,2,3,4".parse().unwrap();
        assert_eq!(s, SpecString::Path(PathSpec::identity(5)));
        let s: SpecString = "k=2".parse().unwrap();
        assert_eq!(s.to_path(), PathSpec::identity(2));
        let s: SpecString = "k=13;flips=6,7,8,9".parse().unwrap();
        assert!(matches!(s, SpecString::Flips(_)));
        assert!(matches!(
            "k=4;order=1,1,3".parse::<SpecString>(),
            Err(ConstructError::NotAPermutation { .. })
        ));
        assert!("k=4;order=1,2".parse::<SpecString>().is_err());
        assert!("k=0".parse::<SpecString>().is_err());
        assert!("k=4;order=1,2,3;flips=2".parse::<SpecString>().is_err());
        assert!("order=1,2,3".parse::<SpecString>().is_err());
        let spec = PathSpec::new(4, vec![1, 3, 2], Chirality::Counterclockwise).unwrap();
        assert_eq!(spec_string(&spec).parse::<SpecString>().unwrap(), SpecString::Path(spec));
    }

    #[test]
    fn canonical_orders_count() {
        assert_eq!(canonical_orders(1).len(), 1);
        assert_eq!(canonical_orders(2).len(), 1);
        assert_eq!(canonical_orders(3).len(), 1);
        assert_eq!(canonical_orders(5).len(), 12);
        assert!(canonical_orders(6).iter().all(|s| s.is_canonical()));
    }

    #[test]
    fn enumeration_guard() {
        assert!(matches!(enumerate_all(9), Err(ConstructError::TooLarge { k: 9 })));
        assert!(enumerate_all(0).is_err());
    }

    #[test]
    fn layer_bookkeeping() {
        let labels = layer_labels(3);
        assert_eq!(labels.len(), 37);
        assert_eq!(layer_start(1), 1);
        assert_eq!(layer_start(2), 7);
        assert_eq!(layer_start(3), 19);
        assert_eq!(labels[layer_start(3)], 3);
        assert_eq!(labels[layer_start(3) - 1], 2);
    }
}
