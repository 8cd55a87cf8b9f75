//! SVG pictures of tilings.

use std::fmt::Write;

use crate::forest::fundamental_forest;
use crate::zonogon::{PlanarPoint, Tiling};

#[derive(Debug, Clone, Copy)]
pub struct RenderOptions {
    /// Pixels per unit edge length.
    pub scale: f64,
    pub labels: bool,
    pub forest: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            scale: 40.0,
            labels: false,
            forest: true,
        }
    }
}

const MARGIN: f64 = 20.0;

/// Draws `t` under the projection, one `<path class="rhombus">` per tile and
/// one `<line class="forest">` per fundamental-forest edge. The output only
/// depends on the tiling and the options.
pub fn render_svg(t: &Tiling, opts: RenderOptions) -> String {
    let spec = t.spec();
    let unit = spec
        .directions()
        .iter()
        .map(|d| ((d.x * d.x + d.y * d.y) as f64).sqrt())
        .fold(1.0, f64::max);
    let pts = t.project_vertices();
    let (min_x, max_x) = bounds(pts.values().map(|p| p.x));
    let (min_y, max_y) = bounds(pts.values().map(|p| p.y));
    let k = opts.scale / unit;
    let width = (max_x - min_x) as f64 * k + 2.0 * MARGIN;
    let height = (max_y - min_y) as f64 * k + 2.0 * MARGIN;
    // y grows downwards in SVG
    let map = |p: PlanarPoint| ((p.x - min_x) as f64 * k + MARGIN, (max_y - p.y) as f64 * k + MARGIN);

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.2}" height="{height:.2}" viewBox="0 0 {width:.2} {height:.2}">"#
    );
    let _ = writeln!(out, r##"<g fill="#f4efe1" stroke="#333333" stroke-width="1.5" stroke-linejoin="round">"##);
    for r in t.rhombi() {
        let mut d = String::new();
        for (i, c) in r.corners().iter().enumerate() {
            let (x, y) = map(spec.project(c));
            let _ = write!(d, "{}{x:.2} {y:.2} ", if i == 0 { 'M' } else { 'L' });
        }
        d.push('Z');
        let _ = writeln!(
            out,
            r#"<path class="rhombus" data-dirs="{},{}" d="{d}"/>"#,
            r.lo + 1,
            r.hi + 1
        );
    }
    let _ = writeln!(out, "</g>");
    if opts.forest {
        let _ = writeln!(out, r##"<g stroke="#c0392b" stroke-width="4" stroke-linecap="round">"##);
        for e in fundamental_forest(t).edges() {
            let (x1, y1) = map(spec.project(&e.base));
            let (x2, y2) = map(spec.project(&e.top()));
            let _ = writeln!(
                out,
                r#"<line class="forest" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#
            );
        }
        let _ = writeln!(out, "</g>");
    }
    if opts.labels {
        let _ = writeln!(out, r##"<g font-family="monospace" font-size="10" fill="#1a5276">"##);
        for (v, p) in &pts {
            let (x, y) = map(*p);
            let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, x + 3.0, y - 3.0, v.key());
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    out
}

fn bounds(it: impl Iterator<Item = i64>) -> (i64, i64) {
    it.fold((i64::MAX, i64::MIN), |(lo, hi), x| (lo.min(x), hi.max(x)))
}
