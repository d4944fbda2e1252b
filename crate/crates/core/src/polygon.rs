//! Centrally symmetric convex polygons.
//!
//! A polygon is the unit ball `conv{±v₁, …, ±v_m}` of a polygonal norm. The
//! half-list `v₁..v_m` is the first half of the counterclockwise vertex cycle;
//! the second half is its negation, so symmetry holds exactly.
//!
//! Every edge `(p_i, p_{i+1})` has a dual vertex `y_i` with
//! `⟨y_i, p_i⟩ = ⟨y_i, p_{i+1}⟩ = 1`. The dual vertices are the vertices of the
//! polar body, and the gauge is `s(x) = max_i ⟨y_i, x⟩`. They are computed at
//! construction, so a `Polygon` is immutable and freely shareable.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // inherent once std is linked
use num_traits::Float;

use crate::error::{structural, Result};
use crate::geom::{cross3, LinearMap2, Vec2};

/// Relative tolerance under which three hull points count as collinear.
const COLLINEAR_REL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct Polygon {
    /// Full CCW cycle, `full[i + m] = -full[i]`, starting at the vertex with
    /// the smallest polar angle in `(-π, π]`.
    full: Vec<Vec2>,
    /// `dual[i]` belongs to the edge `full[i] → full[i + 1]`.
    dual: Vec<Vec2>,
    /// Polar angles of `full`, strictly increasing.
    angles: Vec<f64>,
}

impl PartialEq for Polygon {
    fn eq(&self, other: &Self) -> bool {
        self.full == other.full
    }
}

impl Polygon {
    /// Builds a polygon from its half-list, validating every invariant: the
    /// vertices must turn strictly counterclockwise around the origin, span
    /// less than a half-turn, and form a strictly convex symmetric polygon.
    pub fn new(half: &[Vec2]) -> Result<Self> {
        if half.len() < 2 {
            return Err(structural("a symmetric polygon needs at least two half-vertices"));
        }
        if half.iter().any(|v| !v.x.is_finite() || !v.y.is_finite()) {
            return Err(structural("non-finite polygon vertex"));
        }
        let m = half.len();
        let mut full = Vec::with_capacity(2 * m);
        full.extend_from_slice(half);
        full.extend(half.iter().map(|&v| -v));
        let scale = full.iter().map(|v| v.norm_sq()).fold(0.0, f64::max);
        if scale == 0.0 {
            return Err(structural("all polygon vertices are zero"));
        }
        let n = full.len();
        let mut turn = 0.0;
        for i in 0..m {
            let (a, b) = (full[i], full[(i + 1) % n]);
            let c = a.cross(b);
            if c <= COLLINEAR_REL * scale {
                return Err(structural("origin is not interior: consecutive vertices do not turn strictly counterclockwise"));
            }
            turn += c.atan2(a.dot(b));
        }
        if (turn - PI).abs() > 1e-9 {
            return Err(structural("half-list must span exactly a half-turn of the full polygon"));
        }
        for i in 0..n {
            let (a, b, c) = (full[i], full[(i + 1) % n], full[(i + 2) % n]);
            if cross3(a, b, c) <= COLLINEAR_REL * scale {
                return Err(structural("polygon is not strictly convex"));
            }
        }
        Ok(Self::from_full_ccw(full))
    }

    /// Symmetric convex hull of `±points`. Interior and collinear points are
    /// discarded.
    pub fn hull(points: &[Vec2]) -> Result<Self> {
        let mut pts: Vec<Vec2> = Vec::with_capacity(2 * points.len());
        for &p in points {
            if !p.x.is_finite() || !p.y.is_finite() {
                return Err(structural("non-finite point in hull input"));
            }
            pts.push(p);
            pts.push(-p);
        }
        let full = convex_hull(pts);
        if full.len() < 4 {
            return Err(structural("symmetric hull is degenerate (zero area)"));
        }
        let area = shoelace(&full);
        let scale = full.iter().map(|v| v.norm_sq()).fold(0.0, f64::max);
        if area <= 1e-12 * scale {
            return Err(structural("symmetric hull is degenerate (zero area)"));
        }
        Ok(Self::from_full_ccw(full))
    }

    /// The polygon whose polar body is `conv{±points}`, i.e. the unit ball of
    /// `x ↦ max_j |⟨points_j, x⟩|`.
    pub fn from_dual_points(points: &[Vec2]) -> Result<Self> {
        Ok(Self::hull(points)?.polar())
    }

    /// Trusted constructor from a full symmetric CCW cycle.
    pub(crate) fn from_full_ccw(mut full: Vec<Vec2>) -> Self {
        let n = full.len();
        debug_assert!(n % 2 == 0 && n >= 4);
        let start = (0..n).min_by(|&i, &j| full[i].angle().partial_cmp(&full[j].angle()).unwrap()).unwrap();
        full.rotate_left(start);
        let angles: Vec<f64> = full.iter().map(|v| v.angle()).collect();
        let dual = (0..n)
            .map(|i| {
                let (a, b) = (full[i], full[(i + 1) % n]);
                let d = b - a;
                Vec2::new(d.y, -d.x).scale(1.0 / a.cross(b))
            })
            .collect();
        Self { full, dual, angles }
    }

    /// Number of half-vertices.
    pub fn half_len(&self) -> usize {
        self.full.len() / 2
    }

    /// The half-list `v₁..v_m`.
    pub fn half_vertices(&self) -> &[Vec2] {
        &self.full[..self.half_len()]
    }

    /// All `2m` vertices in CCW order.
    pub fn vertices(&self) -> &[Vec2] {
        &self.full
    }

    /// All `2m` vertices of the polar body in CCW order; `dual_vertices()[i]`
    /// is the outer normal of edge `i` scaled so that the edge lies on
    /// `⟨y, x⟩ = 1`.
    pub fn dual_vertices(&self) -> &[Vec2] {
        &self.dual
    }

    /// Polar angles of [`Self::vertices`].
    pub fn vertex_angles(&self) -> &[f64] {
        &self.angles
    }

    /// Minkowski functional, `max_i ⟨y_i, v⟩`, evaluated in `O(log m)` by
    /// locating the angular sector of `v`.
    pub fn gauge(&self, v: Vec2) -> f64 {
        if v.x == 0.0 && v.y == 0.0 {
            return 0.0;
        }
        let n = self.full.len();
        let theta = v.angle();
        let k = match self.angles.partition_point(|&a| a <= theta) {
            0 => n - 1,
            p => p - 1,
        };
        let a = self.dual[(k + n - 1) % n].dot(v);
        let b = self.dual[k].dot(v);
        let c = self.dual[(k + 1) % n].dot(v);
        a.max(b).max(c)
    }

    /// Support function `h_B(u) = max_i |⟨u, v_i⟩|`.
    pub fn support(&self, u: Vec2) -> f64 {
        self.half_vertices().iter().map(|v| v.dot(u).abs()).fold(0.0, f64::max)
    }

    /// Lebesgue area (shoelace over the full cycle).
    pub fn area(&self) -> f64 {
        shoelace(&self.full)
    }

    /// The polar body `B* = {y : ⟨y, x⟩ ≤ 1 ∀x ∈ B}`.
    pub fn polar(&self) -> Polygon {
        Polygon::from_full_ccw(self.dual.clone())
    }

    /// `T(B)` for invertible `T`.
    pub fn image(&self, t: &LinearMap2) -> Option<Polygon> {
        let d = t.det();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        let mut full: Vec<Vec2> = self.full.iter().map(|&v| t.apply(v)).collect();
        if d < 0.0 {
            // reversing keeps the cycle CCW and its second half the negated first half
            full.reverse();
        }
        Some(Polygon::from_full_ccw(full))
    }

    /// Unit ball of `s ∘ T`, i.e. `T⁻¹(B)`.
    pub fn preimage(&self, t: &LinearMap2) -> Option<Polygon> {
        t.inverse().and_then(|ti| self.image(&ti))
    }

    /// `k · B`.
    pub fn scaled(&self, k: f64) -> Polygon {
        debug_assert!(k > 0.0);
        Polygon::from_full_ccw(self.full.iter().map(|v| v.scale(k)).collect())
    }

    pub fn max_vertex_norm(&self) -> f64 {
        self.full.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest `r` with `r·D̄ ⊆ B`.
    pub fn inradius(&self) -> f64 {
        1.0 / self.dual.iter().map(|y| y.norm()).fold(0.0, f64::max)
    }

    /// Whether `x ∈ B` up to `slack` in gauge value.
    pub fn contains(&self, x: Vec2, slack: f64) -> bool {
        self.gauge(x) <= 1.0 + slack
    }
}

fn shoelace(full: &[Vec2]) -> f64 {
    let n = full.len();
    0.5 * (0..n).map(|i| full[i].cross(full[(i + 1) % n])).sum::<f64>()
}

/// Andrew's monotone chain; returns the strict hull in CCW order.
fn convex_hull(mut pts: Vec<Vec2>) -> Vec<Vec2> {
    pts.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap().then(a.y.partial_cmp(&b.y).unwrap()));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let scale = pts.iter().map(|v| v.norm_sq()).fold(0.0, f64::max);
    let eps = COLLINEAR_REL * scale;
    let mut hull: Vec<Vec2> = Vec::with_capacity(pts.len() + 1);
    for &p in pts.iter() {
        while hull.len() >= 2 && cross3(hull[hull.len() - 2], hull[hull.len() - 1], p) <= eps {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && cross3(hull[hull.len() - 2], hull[hull.len() - 1], p) <= eps {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Standard fixtures used across the crate and its tests.
pub mod shapes {
    use super::*;

    /// `[−1, 1]²`, the unit ball of the supremum norm.
    pub fn square() -> Polygon {
        Polygon::new(&[Vec2::new(1.0, -1.0), Vec2::new(1.0, 1.0)]).unwrap()
    }

    /// `conv{±e₁, ±e₂}`, the unit ball of ℓ¹.
    pub fn cross_polytope() -> Polygon {
        Polygon::new(&[Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)]).unwrap()
    }

    /// Regular `2m`-gon with circumradius `r`, first vertex at angle `phase`.
    pub fn regular(m: usize, r: f64, phase: f64) -> Polygon {
        let half: Vec<Vec2> = (0..m).map(|k| Vec2::polar(phase + PI * k as f64 / m as f64).scale(r)).collect();
        Polygon::new(&half).unwrap()
    }

    /// Regular hexagon with circumradius 1 and a vertex on the x-axis.
    pub fn hexagon() -> Polygon {
        regular(3, 1.0, 0.0)
    }

    /// Inscribed `2m`-gon approximating the unit disc.
    pub fn disc(m: usize) -> Polygon {
        regular(m, 1.0, 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::shapes::*;
    use super::*;

    #[test]
    fn square_area_and_gauge() {
        let s = square();
        assert!((s.area() - 4.0).abs() < 1e-15);
        assert!((s.gauge(Vec2::new(1.0, 1.0)) - 1.0).abs() < 1e-15);
        assert!((s.gauge(Vec2::new(0.3, -2.0)) - 2.0).abs() < 1e-15);
        assert_eq!(s.gauge(Vec2::ZERO), 0.0);
    }

    #[test]
    fn hexagon_area() {
        let want = 3.0 * 3f64.sqrt() / 2.0;
        assert!((hexagon().area() - want).abs() < 1e-14);
    }

    #[test]
    fn disc_256_area_close_to_pi() {
        assert!((disc(256).area() - PI).abs() < 1e-3);
    }

    #[test]
    fn polar_of_square_is_cross_polytope() {
        let p = square().polar();
        assert!((p.area() - 2.0).abs() < 1e-14);
        for v in p.vertices() {
            assert!((v.x.abs() + v.y.abs() - 1.0).abs() < 1e-14);
        }
        assert!(p == cross_polytope() || (p.area() - cross_polytope().area()).abs() < 1e-14);
    }

    #[test]
    fn double_polar_is_identity() {
        let h = regular(5, 1.3, 0.2);
        let hh = h.polar().polar();
        for (a, b) in h.vertices().iter().zip(hh.vertices()) {
            assert!((*a - *b).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_origin_on_boundary() {
        // (1,0) and (-1,0)+... : the half-list spans exactly a half-turn with a flat step
        let r = Polygon::new(&[Vec2::new(1.0, 0.0), Vec2::new(-1.0, 0.0)]);
        assert!(r.is_err());
        let r = Polygon::new(&[Vec2::new(1.0, 0.0), Vec2::new(2.0, 0.0)]);
        assert!(r.is_err());
    }

    #[test]
    fn rejects_nonconvex() {
        let r = Polygon::new(&[Vec2::new(1.0, 0.0), Vec2::new(0.1, 0.1), Vec2::new(0.0, 1.0)]);
        assert!(r.is_err());
    }

    #[test]
    fn hull_discards_interior_and_collinear_points() {
        let p = Polygon::hull(&[Vec2::new(1.0, 1.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, -1.0), Vec2::new(0.2, 0.3)]).unwrap();
        assert_eq!(p.half_len(), 2);
        assert!((p.area() - 4.0).abs() < 1e-14);
        assert!(Polygon::hull(&[Vec2::new(1.0, 2.0), Vec2::new(2.0, 4.0)]).is_err());
    }

    #[test]
    fn preimage_evaluates_composition() {
        let s = square();
        let t = LinearMap2::new(2.0, 0.3, -0.1, 0.5);
        let p = s.preimage(&t).unwrap();
        for k in 0..37 {
            let v = Vec2::polar(0.17 * k as f64).scale(1.3);
            assert!((p.gauge(v) - s.gauge(t.apply(v))).abs() < 1e-12);
        }
        let r = LinearMap2::new(0.0, 1.0, 1.0, 0.0);
        let q = s.preimage(&r.mul(&t)).unwrap();
        let v = Vec2::new(0.4, -0.9);
        assert!((q.gauge(v) - s.gauge(r.mul(&t).apply(v))).abs() < 1e-12);
    }

    #[test]
    fn gauge_matches_brute_force_max() {
        let h = regular(7, 0.8, 0.05);
        for k in 0..200 {
            let v = Vec2::polar(0.0317 * k as f64 - 3.0);
            let brute = h.dual_vertices().iter().map(|y| y.dot(v)).fold(f64::MIN, f64::max);
            assert!((h.gauge(v) - brute).abs() < 1e-14);
        }
    }

    #[test]
    fn from_dual_points_is_max_of_functionals() {
        let pts = [Vec2::new(1.0, 0.2), Vec2::new(-0.3, 0.9), Vec2::new(0.5, 0.5)];
        let p = Polygon::from_dual_points(&pts).unwrap();
        for k in 0..100 {
            let v = Vec2::polar(0.0631 * k as f64);
            let want = pts.iter().map(|a| a.dot(v).abs()).fold(0.0, f64::max);
            assert!((p.gauge(v) - want).abs() < 1e-12);
        }
    }
}
