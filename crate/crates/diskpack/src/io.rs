//! JSON interchange for packings.
//!
//! `{"container_radius": R, "disk_radius": r, "centers": [[x, y], ...], "metadata": {...}}`.
//! Floats are written in shortest round-trip form, so reading a file back reproduces
//! every coordinate bit for bit.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::Context;
use diskpack_core::{Packing, Point};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Serialize, Deserialize)]
struct PackingFile {
    container_radius: f64,
    disk_radius: f64,
    centers: Vec<[f64; 2]>,
    #[serde(default)]
    metadata: BTreeMap<String, Value>,
}

pub fn to_json(p: &Packing) -> String {
    let file = PackingFile {
        container_radius: p.container_radius,
        disk_radius: p.disk_radius,
        centers: p.centers.iter().map(|c| [c.x, c.y]).collect(),
        metadata: p.metadata.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect(),
    };
    serde_json::to_string_pretty(&file).expect("packings always serialise")
}

/// Parses a packing; non-string metadata values are kept as their JSON text.
pub fn from_json(text: &str) -> anyhow::Result<Packing> {
    let file: PackingFile = serde_json::from_str(text).context("malformed packing file")?;
    let centers = file.centers.into_iter().map(|[x, y]| Point::new(x, y)).collect();
    let mut p = Packing::new(file.container_radius, file.disk_radius, centers)?;
    p.metadata = file
        .metadata
        .into_iter()
        .map(|(k, v)| match v {
            Value::String(s) => (k, s),
            other => (k, other.to_string()),
        })
        .collect();
    Ok(p)
}

pub fn read_packing(path: &Path) -> anyhow::Result<Packing> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn write_packing(path: &Path, p: &Packing) -> anyhow::Result<()> {
    write_text(path, &to_json(p))
}

/// Writes `text`, creating parent directories.
pub fn write_text(path: &Path, text: &str) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// `x` with 14 significant digits.
pub fn sig14(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (13 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}
