//! Deterministic SVG drawings of packings and bond diagrams.

use std::collections::BTreeSet;
use std::fmt::Write;

use diskpack_core::analysis::{contact_graph, find_rattlers};
use diskpack_core::Packing;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderStyle {
    /// Draw a segment between the centres of every bonded pair.
    pub bonds: bool,
    /// Bond threshold in diameters; also decides which disks are rattlers.
    pub bond_threshold: f64,
    /// Output width and height in pixels.
    pub size: u32,
    pub labels: bool,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle { bonds: true, bond_threshold: 1e-9, size: 800, labels: false }
    }
}

const JAMMED_FILL: &str = "#b8c7d9";
const RATTLER_FILL: &str = "#ffffff";
const LINE: &str = "#1f2d3d";

/// Jammed disks are shaded, rattlers left white; y points up.
pub fn render(p: &Packing, style: &RenderStyle) -> String {
    let r_box = p.container_radius * 1.02;
    let stroke = p.container_radius * 0.002;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{s}" height="{s}" viewBox="{:.6} {:.6} {:.6} {:.6}">"#,
        -r_box,
        -r_box,
        2.0 * r_box,
        2.0 * r_box,
        s = style.size
    );
    let _ = writeln!(out, r#"<g transform="scale(1,-1)" stroke="{LINE}" stroke-width="{stroke:.6}">"#);
    let _ = writeln!(out, r#"<circle cx="0" cy="0" r="{:.6}" fill="none"/>"#, p.container_radius);

    if !p.is_empty() {
        let g = contact_graph(p, style.bond_threshold);
        let rattlers: BTreeSet<usize> = find_rattlers(&g);
        for (i, c) in p.centers.iter().enumerate() {
            let fill = if rattlers.contains(&i) { RATTLER_FILL } else { JAMMED_FILL };
            let _ = writeln!(out, r#"<circle cx="{:.6}" cy="{:.6}" r="{:.6}" fill="{fill}"/>"#, c.x, c.y, p.disk_radius);
        }
        if style.bonds {
            for b in &g.bonds {
                let (a, c) = (p.centers[b.i], p.centers[b.j]);
                let _ =
                    writeln!(out, r#"<line x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}"/>"#, a.x, a.y, c.x, c.y);
            }
        }
    }
    out.push_str("</g>\n");
    if style.labels {
        let font = p.disk_radius * 0.8;
        for (i, c) in p.centers.iter().enumerate() {
            let _ = writeln!(
                out,
                r#"<text x="{:.6}" y="{:.6}" font-size="{font:.6}" text-anchor="middle" dominant-baseline="middle">{i}</text>"#,
                c.x, -c.y
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
