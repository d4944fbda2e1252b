//! Structured triangulations of the closed unit disc.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // inherent once std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geom::Vec2;

/// Triangulated disc. The boundary loop runs counterclockwise from angle 0
/// and contains the level-0 vertices at `0, 2π/3, 4π/3`.
#[derive(Clone, Debug)]
pub struct DiscMesh {
    pub vertices: Vec<Vec2>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary: Vec<usize>,
    pub level: usize,
    /// Positions within `boundary` of the three gauge vertices.
    pub anchors: [usize; 3],
    areas: Vec<f64>,
    /// Inverse of the edge matrix `[p_b − p_a, p_c − p_a]`, row-major.
    edge_inverse: Vec<[f64; 4]>,
    incident: Vec<Vec<usize>>,
    boundary_slot: Vec<Option<usize>>,
    locator: Locator,
}

pub const MAX_LEVEL: usize = 8;

/// Fan of three triangles refined `level` times by edge midpoints; midpoints
/// of boundary edges are pushed onto the circle.
pub fn build_mesh(level: usize) -> Result<DiscMesh> {
    if level > MAX_LEVEL {
        return Err(Error::Parameter(alloc::format!("mesh level {level} exceeds {MAX_LEVEL}")));
    }
    let mut vertices = vec![Vec2::ZERO];
    for k in 0..3 {
        vertices.push(Vec2::polar(2.0 * PI * k as f64 / 3.0));
    }
    let mut triangles = vec![[0, 1, 2], [0, 2, 3], [0, 3, 1]];
    let mut on_boundary = vec![false, true, true, true];
    let mut boundary_edges: BTreeMap<(usize, usize), ()> = BTreeMap::new();
    for (a, b) in [(1, 2), (2, 3), (3, 1)] {
        boundary_edges.insert(key(a, b), ());
    }
    for _ in 0..level {
        let mut mids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut next_boundary = BTreeMap::new();
        let mut out = Vec::with_capacity(4 * triangles.len());
        for t in &triangles {
            let mut m = [0usize; 3];
            for (slot, (a, b)) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])].into_iter().enumerate() {
                let k = key(a, b);
                m[slot] = *mids.entry(k).or_insert_with(|| {
                    let mut p = (vertices[a] + vertices[b]).scale(0.5);
                    let boundary = boundary_edges.contains_key(&k);
                    if boundary {
                        p = p.scale(1.0 / p.norm());
                        next_boundary.insert(key(a, vertices.len()), ());
                        next_boundary.insert(key(vertices.len(), b), ());
                    }
                    vertices.push(p);
                    on_boundary.push(boundary);
                    vertices.len() - 1
                });
            }
            let [ab, bc, ca] = m;
            out.push([t[0], ab, ca]);
            out.push([ab, t[1], bc]);
            out.push([ca, bc, t[2]]);
            out.push([ab, bc, ca]);
        }
        triangles = out;
        boundary_edges = next_boundary;
    }
    let mut boundary: Vec<usize> = (0..vertices.len()).filter(|&i| on_boundary[i]).collect();
    let angle = |i: usize| {
        let a = vertices[i].angle();
        if a < -1e-12 {
            a + 2.0 * PI
        } else {
            a.max(0.0)
        }
    };
    boundary.sort_by(|&i, &j| angle(i).total_cmp(&angle(j)));
    let b = boundary.len();
    DiscMesh::assemble(vertices, triangles, boundary, level, [0, b / 3, 2 * b / 3])
}

fn key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl DiscMesh {
    fn assemble(vertices: Vec<Vec2>, triangles: Vec<[usize; 3]>, boundary: Vec<usize>, level: usize, anchors: [usize; 3]) -> Result<Self> {
        let mut areas = Vec::with_capacity(triangles.len());
        let mut edge_inverse = Vec::with_capacity(triangles.len());
        let mut incident = vec![Vec::new(); vertices.len()];
        for (k, t) in triangles.iter().enumerate() {
            let (pa, pb, pc) = (vertices[t[0]], vertices[t[1]], vertices[t[2]]);
            let (e1, e2) = (pb - pa, pc - pa);
            let det = e1.cross(e2);
            if !(det > 0.0) {
                return Err(Error::Structural(alloc::format!("triangle {k} is degenerate or clockwise")));
            }
            areas.push(0.5 * det);
            // inverse of [[e1.x, e2.x], [e1.y, e2.y]]
            edge_inverse.push([e2.y / det, -e2.x / det, -e1.y / det, e1.x / det]);
            for &v in t {
                incident[v].push(k);
            }
        }
        let mut boundary_slot = vec![None; vertices.len()];
        for (s, &v) in boundary.iter().enumerate() {
            boundary_slot[v] = Some(s);
        }
        let locator = Locator::new(&vertices, &triangles);
        Ok(Self { vertices, triangles, boundary, level, anchors, areas, edge_inverse, incident, boundary_slot, locator })
    }

    pub fn area(&self, t: usize) -> f64 {
        self.areas[t]
    }

    pub fn total_area(&self) -> f64 {
        self.areas.iter().sum()
    }

    pub fn edge_inverse(&self, t: usize) -> &[f64; 4] {
        &self.edge_inverse[t]
    }

    /// Triangles containing vertex `v`.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    /// Position of `v` in the boundary loop.
    pub fn boundary_slot(&self, v: usize) -> Option<usize> {
        self.boundary_slot[v]
    }

    /// Anchor vertices `p₁, p₂, p₃`.
    pub fn anchor_vertices(&self) -> [usize; 3] {
        self.anchors.map(|s| self.boundary[s])
    }

    /// Triangle containing `p` with barycentric weights; points outside the
    /// mesh snap to the nearest triangle with clamped weights.
    pub fn locate(&self, p: Vec2) -> (usize, [f64; 3]) {
        self.locator.locate(p, &self.vertices, &self.triangles)
    }
}

#[derive(Clone, Debug)]
struct Locator {
    cells: usize,
    buckets: Vec<Vec<usize>>,
}

const LOCATOR_EXTENT: f64 = 1.0 + 1e-9;

impl Locator {
    fn new(vertices: &[Vec2], triangles: &[[usize; 3]]) -> Self {
        let cells = ((triangles.len() as f64).sqrt() as usize).max(1);
        let mut buckets = vec![Vec::new(); cells * cells];
        for (k, t) in triangles.iter().enumerate() {
            let (mut lo, mut hi) = (Vec2::new(f64::MAX, f64::MAX), Vec2::new(f64::MIN, f64::MIN));
            for &v in t {
                let p = vertices[v];
                lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
                hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
            }
            let (i0, j0) = Self::cell_of(cells, lo);
            let (i1, j1) = Self::cell_of(cells, hi);
            for i in i0..=i1 {
                for j in j0..=j1 {
                    buckets[i * cells + j].push(k);
                }
            }
        }
        Self { cells, buckets }
    }

    fn cell_of(cells: usize, p: Vec2) -> (usize, usize) {
        let f = |x: f64| {
            let u = (x + LOCATOR_EXTENT) / (2.0 * LOCATOR_EXTENT) * cells as f64;
            (u.max(0.0) as usize).min(cells - 1)
        };
        (f(p.x), f(p.y))
    }

    fn locate(&self, p: Vec2, vertices: &[Vec2], triangles: &[[usize; 3]]) -> (usize, [f64; 3]) {
        let (i, j) = Self::cell_of(self.cells, p);
        let mut best = (usize::MAX, f64::NEG_INFINITY, [0.0; 3]);
        for &k in &self.buckets[i * self.cells + j] {
            let w = barycentric(p, triangles[k].map(|v| vertices[v]));
            let m = w[0].min(w[1]).min(w[2]);
            if m > best.1 {
                best = (k, m, w);
            }
        }
        if best.1 < -1e-12 {
            for (k, t) in triangles.iter().enumerate() {
                let w = barycentric(p, t.map(|v| vertices[v]));
                let m = w[0].min(w[1]).min(w[2]);
                if m > best.1 {
                    best = (k, m, w);
                }
            }
        }
        let (k, _, mut w) = best;
        if w.iter().any(|x| *x < 0.0) {
            for x in &mut w {
                *x = x.max(0.0);
            }
            let s: f64 = w.iter().sum();
            for x in &mut w {
                *x /= s;
            }
        }
        (k, w)
    }
}

fn barycentric(p: Vec2, t: [Vec2; 3]) -> [f64; 3] {
    let d = (t[1] - t[0]).cross(t[2] - t[0]);
    let w1 = (p - t[0]).cross(t[2] - t[0]) / d;
    let w2 = (t[1] - t[0]).cross(p - t[0]) / d;
    [1.0 - w1 - w2, w1, w2]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_follow_the_refinement_rule() {
        for level in 0..=5 {
            let m = build_mesh(level).unwrap();
            let f = 3 * 4usize.pow(level as u32);
            let b = 3 * 2usize.pow(level as u32);
            assert_eq!(m.triangles.len(), f);
            assert_eq!(m.boundary.len(), b);
            assert_eq!(m.vertices.len(), 1 + (f + b) / 2);
        }
        // frozen regression value
        assert_eq!(build_mesh(2).unwrap().triangles.len(), 48);
    }

    #[test]
    fn anchors_sit_at_thirds_of_the_circle() {
        for level in 0..5 {
            let m = build_mesh(level).unwrap();
            for (k, v) in m.anchor_vertices().into_iter().enumerate() {
                let expected = Vec2::polar(2.0 * PI * k as f64 / 3.0);
                assert!((m.vertices[v] - expected).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn boundary_is_on_the_circle_and_ordered() {
        let m = build_mesh(4).unwrap();
        let mut last = -1.0;
        for &v in &m.boundary {
            let p = m.vertices[v];
            assert!((p.norm() - 1.0).abs() < 1e-12);
            let a = if p.angle() < -1e-12 { p.angle() + 2.0 * PI } else { p.angle().max(0.0) };
            assert!(a > last);
            last = a;
        }
    }

    #[test]
    fn locate_recovers_barycentric_coordinates() {
        let m = build_mesh(3).unwrap();
        for k in [0, 17, 100, 191] {
            let t = m.triangles[k];
            let p = (m.vertices[t[0]] + m.vertices[t[1]] + m.vertices[t[2]]).scale(1.0 / 3.0);
            let (found, w) = m.locate(p);
            assert_eq!(found, k);
            assert!(w.iter().all(|x| (x - 1.0 / 3.0).abs() < 1e-12));
        }
        let (_, w) = m.locate(Vec2::new(2.0, 0.0));
        assert!(w.iter().all(|x| *x >= 0.0));
    }
}
