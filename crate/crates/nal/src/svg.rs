//! SVG figures: convex-body overlays and colored Plateau meshes. Coordinates
//! are written at six decimals so output is byte-stable.

use std::f64::consts::PI;
use std::fmt::Write;

use crate::core_error;
use anyhow::Result;
use nal_core::convex::{loewner_ellipse, min_enclosing_parallelogram, polar_dual};
use nal_core::plateau::DiscMap;
use nal_core::{Polygon, Vec2};

const PANEL: f64 = 400.0;
const MARGIN: f64 = 0.05;

/// Maps a box `[-r, r]²` onto a square panel, `y` up.
struct Frame {
    x0: f64,
    r: f64,
    cx: f64,
    cy: f64,
}

impl Frame {
    fn centered(x0: f64, r: f64) -> Self {
        Frame { x0, r, cx: 0.0, cy: 0.0 }
    }

    fn fit(x0: f64, pts: impl Iterator<Item = Vec2>) -> Self {
        let (mut lo, mut hi) = (Vec2::new(f64::INFINITY, f64::INFINITY), Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
        for p in pts {
            lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let r = 0.5 * (hi.x - lo.x).max(hi.y - lo.y).max(1e-12);
        Frame { x0, r, cx: 0.5 * (lo.x + hi.x), cy: 0.5 * (lo.y + hi.y) }
    }

    fn point(&self, p: Vec2) -> (f64, f64) {
        let s = 0.5 * PANEL * (1.0 - 2.0 * MARGIN) / self.r;
        (self.x0 + 0.5 * PANEL + s * (p.x - self.cx), 0.5 * PANEL - s * (p.y - self.cy))
    }

    fn path(&self, pts: &[Vec2]) -> String {
        let mut d = String::new();
        for (i, &p) in pts.iter().enumerate() {
            let (x, y) = self.point(p);
            let _ = write!(d, "{}{x:.6},{y:.6} ", if i == 0 { 'M' } else { 'L' });
        }
        d.push('Z');
        d
    }
}

fn header(width: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{PANEL}\" viewBox=\"0 0 {width} {PANEL}\">\n<rect width=\"{width}\" height=\"{PANEL}\" fill=\"white\"/>\n"
    )
}

/// `B`, its Loewner ellipse, its minimal enclosing parallelogram and its
/// polar dual, scaled into one unit box.
pub fn convex_figure(b: &Polygon) -> Result<String> {
    let ellipse = loewner_ellipse(b).map_err(core_error)?;
    let par = min_enclosing_parallelogram(b);
    let dual = polar_dual(b);
    let circle: Vec<Vec2> = (0..256).map(|k| ellipse.boundary_point(Vec2::polar(2.0 * PI * k as f64 / 256.0))).collect();
    let layers: [(&str, Vec<Vec2>, &str); 4] = [
        ("parallelogram", par.vertices().to_vec(), "#999999"),
        ("loewner", circle, "#1f77b4"),
        ("dual", dual.vertices().to_vec(), "#2ca02c"),
        ("body", b.vertices().to_vec(), "#000000"),
    ];
    let r = layers.iter().flat_map(|l| l.1.iter()).fold(0.0f64, |m, p| m.max(p.x.abs()).max(p.y.abs()));
    let frame = Frame::centered(0.0, r);
    let mut s = header(PANEL);
    for (id, pts, color) in &layers {
        let _ = writeln!(s, "<path id=\"{id}\" d=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>", frame.path(pts));
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Blue at distortion 1, red at 3 and above, log-scaled in between; black
/// for collapsed triangles.
fn color(q: f64) -> String {
    if !q.is_finite() {
        return "#000000".into();
    }
    let t = (q.max(1.0).ln() / 3f64.ln()).min(1.0);
    let c = |a: f64, b: f64| (a + t * (b - a)).round() as u8;
    format!("#{:02x}{:02x}{:02x}", c(49.0, 214.0), c(104.0, 39.0), c(189.0, 40.0))
}

/// Domain mesh colored by per-triangle distortion `qc`; for planar targets
/// the image mesh is drawn in a second panel.
pub fn plateau_figure(u: &DiscMap, qc: &[f64]) -> String {
    let planar = u.dim() == 2;
    let mut s = header(if planar { 2.0 * PANEL } else { PANEL });
    let domain = Frame::centered(0.0, 1.0);
    let image = Frame::fit(PANEL, (0..u.mesh.vertices.len()).map(|v| Vec2::new(u.image(v)[0], u.image(v)[1])));
    for (t, tri) in u.mesh.triangles.iter().enumerate() {
        let fill = color(qc.get(t).copied().unwrap_or(f64::NAN));
        let dom: Vec<Vec2> = tri.iter().map(|&v| u.mesh.vertices[v]).collect();
        let _ = writeln!(s, "<path d=\"{}\" fill=\"{fill}\" stroke=\"#ffffff\" stroke-width=\"0.3\"/>", domain.path(&dom));
        if planar {
            let img: Vec<Vec2> = tri.iter().map(|&v| Vec2::new(u.image(v)[0], u.image(v)[1])).collect();
            let _ = writeln!(s, "<path d=\"{}\" fill=\"{fill}\" stroke=\"#ffffff\" stroke-width=\"0.3\"/>", image.path(&img));
        }
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use nal_core::polygon::shapes;

    #[test]
    fn figures_are_deterministic() {
        let a = convex_figure(&shapes::hexagon()).unwrap();
        assert_eq!(a, convex_figure(&shapes::hexagon()).unwrap());
        assert_eq!(a.matches("<path").count(), 4);
        assert_eq!(color(1.0), "#3168bd");
        assert_eq!(color(10.0), "#d62728");
    }
}
