use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{GeometryError, LatticePath};

const UNIT: i32 = 40;
const MARGIN: i32 = 40;
const ARC_COLORS: [&str; 6] = [
    "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// Optional decorations for [`render_svg`].
///
/// `markers` maps a label (`p`, `q`, `r`, `s`, ...) to a path parameter. When
/// `arc_cuts` is non-empty the loop is cut at `0` and at every listed parameter
/// and each arc gets its own colour.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotations {
    #[serde(flatten)]
    pub markers: BTreeMap<String, usize>,
    #[serde(skip)]
    pub arc_cuts: Vec<usize>,
}

impl Annotations {
    pub fn marker(mut self, label: &str, t: usize) -> Self {
        self.markers.insert(label.to_string(), t);
        self
    }
}

/// Deterministic SVG 1.1 drawing of a planar lattice path: unit grid, oriented
/// edges with arrowheads, a dot at the origin and labelled markers.
pub fn render_svg(path: &LatticePath, annotations: &Annotations) -> Result<String, GeometryError> {
    if path.dimension() != 2 {
        return Err(GeometryError::UnsupportedDimension(path.dimension()));
    }
    let m = path.len();
    for &t in annotations.markers.values().chain(&annotations.arc_cuts) {
        if t > m {
            return Err(GeometryError::CutOutOfRange { index: t, len: m });
        }
    }
    let xs = path.points().iter().map(|p| p[0]);
    let ys = path.points().iter().map(|p| p[1]);
    let (min_x, max_x) = (xs.clone().min().unwrap(), xs.max().unwrap());
    let (min_y, max_y) = (ys.clone().min().unwrap(), ys.max().unwrap());
    let width = (max_x - min_x) * UNIT + 2 * MARGIN;
    let height = (max_y - min_y) * UNIT + 2 * MARGIN;
    let sx = |x: i32| (x - min_x) * UNIT + MARGIN;
    let sy = |y: i32| (max_y - y) * UNIT + MARGIN;

    let mut cuts: Vec<usize> = annotations.arc_cuts.clone();
    cuts.sort_unstable();
    let arc_of = |step: usize| cuts.iter().filter(|&&c| c <= step).count();

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(out, "<defs>");
    let mut used_colors: Vec<&str> = vec!["#000000"];
    if !cuts.is_empty() {
        used_colors = ARC_COLORS.to_vec();
    }
    for (i, color) in used_colors.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<marker id="arrow{i}" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" markerHeight="6" orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="{color}"/></marker>"#
        );
    }
    let _ = writeln!(out, "</defs>");

    let _ = writeln!(out, r##"<g stroke="#dddddd" stroke-width="1">"##);
    for x in min_x..=max_x {
        let _ = writeln!(
            out,
            r#"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}"/>"#,
            sx(x),
            sy(max_y),
            sy(min_y)
        );
    }
    for y in min_y..=max_y {
        let _ = writeln!(
            out,
            r#"<line x1="{1}" y1="{0}" x2="{2}" y2="{0}"/>"#,
            sy(y),
            sx(min_x),
            sx(max_x)
        );
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r#"<g stroke-width="3" fill="none">"#);
    for t in 0..m {
        let (a, b) = (path.point(t), path.point(t + 1));
        let k = if cuts.is_empty() {
            0
        } else {
            arc_of(t) % used_colors.len()
        };
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" marker-end="url(#arrow{k})"/>"#,
            sx(a[0]),
            sy(a[1]),
            sx(b[0]),
            sy(b[1]),
            used_colors[k]
        );
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(
        out,
        r##"<circle cx="{}" cy="{}" r="6" fill="#000000"/>"##,
        sx(0),
        sy(0)
    );
    for (label, &t) in &annotations.markers {
        let at = path.point(t);
        let _ = writeln!(
            out,
            r##"<circle cx="{0}" cy="{1}" r="5" fill="#ffffff" stroke="#000000" stroke-width="2"/><text x="{2}" y="{3}" font-family="sans-serif" font-size="16">{4}</text>"##,
            sx(at[0]),
            sy(at[1]),
            sx(at[0]) + 8,
            sy(at[1]) - 8,
            escape(label)
        );
    }
    let _ = writeln!(out, "</svg>");
    Ok(out)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
