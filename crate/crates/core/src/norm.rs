//! Seminorms on the plane.
//!
//! [`Norm2`] is the user-facing description of a seminorm. Every variant
//! reduces through [`Norm2::shape`] to one of a few exact representations:
//! the zero seminorm, a rank-one seminorm `|⟨w, ·⟩|`, a Euclidean (ellipse)
//! norm, a polygonal norm, or an analytic norm that is only available through
//! its gauge (ℓᵖ for `p ∉ {1, 2, ∞}` and its linear pullbacks).

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // inherent once std is linked
use num_traits::Float;

use crate::geom::{LinearMap2, Sym2, Vec2};
use crate::optim::periodic_extremum;
use crate::polygon::{shapes, Polygon};

/// Half-vertex count used when an analytic unit ball is replaced by a polygon.
pub const POLYGON_RESOLUTION: usize = 256;

/// Default number of equi-angular samples on S¹.
pub const CIRCLE_SAMPLES: usize = 4096;

/// A seminorm on R².
#[derive(Clone, Debug, PartialEq)]
pub enum Norm2 {
    Zero,
    /// `x ↦ scale · |⟨x, direction⟩|` with `direction` a unit vector.
    Degenerate {
        direction: Vec2,
        scale: f64,
    },
    Polygon(Polygon),
    /// `x ↦ sqrt(xᵀ M x)` for positive definite `M`.
    Ellipse(Sym2),
    /// ℓᵖ norm, `p ∈ [1, ∞]`.
    Lp(f64),
    /// `factor · base`.
    Scaled(Box<Norm2>, f64),
    /// `base ∘ map`.
    Composed(Box<Norm2>, LinearMap2),
}

/// Exact reduced form of a seminorm.
#[derive(Clone, Debug)]
pub enum Shape {
    Zero,
    /// `x ↦ |⟨w, x⟩|`, `w ≠ 0`.
    RankOne(Vec2),
    Ellipse(Sym2),
    Polygon(Polygon),
    /// A norm with a smooth or otherwise non-polygonal ball, known only via
    /// its gauge.
    Analytic(Norm2),
}

impl Shape {
    pub fn is_norm(&self) -> bool {
        matches!(self, Shape::Ellipse(_) | Shape::Polygon(_) | Shape::Analytic(_))
    }

    pub fn gauge(&self, v: Vec2) -> f64 {
        match self {
            Shape::Zero => 0.0,
            Shape::RankOne(w) => w.dot(v).abs(),
            Shape::Ellipse(m) => m.quad(v).max(0.0).sqrt(),
            Shape::Polygon(p) => p.gauge(v),
            Shape::Analytic(n) => n.gauge(v),
        }
    }

    /// The seminorm `s ∘ t`, kept in reduced form.
    pub fn compose(&self, t: &LinearMap2) -> Shape {
        let singular = is_singular(t);
        match self {
            Shape::Zero => Shape::Zero,
            Shape::RankOne(w) => rank_one(t.transpose().apply(*w)),
            Shape::Ellipse(m) if !singular => Shape::Ellipse(m.congruence(t)),
            Shape::Polygon(p) if !singular => match p.preimage(t) {
                Some(q) => Shape::Polygon(q),
                None => self.compose_singular(t),
            },
            Shape::Analytic(n) if !singular => Shape::Analytic(Norm2::Composed(Box::new(n.clone()), *t)),
            _ => self.compose_singular(t),
        }
    }

    fn compose_singular(&self, t: &LinearMap2) -> Shape {
        // t = σ u wᵀ  ⇒  s(t v) = σ s(u) |⟨w, v⟩|
        let g = Sym2::gram(t);
        let (l1, _l2, w) = g.eigen();
        if l1 <= 0.0 {
            return Shape::Zero;
        }
        let sigma = l1.sqrt();
        let u = t.apply(w).scale(1.0 / sigma);
        rank_one(w.scale(sigma * self.gauge(u)))
    }

    /// Polygonal unit ball, sampled at `resolution` half-vertices for
    /// non-polygonal balls; `None` for seminorms that are not norms.
    pub fn polygon(&self, resolution: usize) -> Option<Polygon> {
        match self {
            Shape::Polygon(p) => Some(p.clone()),
            Shape::Ellipse(_) => Some(sample_ball(|v| self.gauge(v), resolution)),
            Shape::Analytic(n) => n.polygon(resolution),
            _ => None,
        }
    }
}

fn rank_one(w: Vec2) -> Shape {
    if w.norm() == 0.0 {
        Shape::Zero
    } else {
        Shape::RankOne(w)
    }
}

fn is_singular(t: &LinearMap2) -> bool {
    let scale = t.m.iter().map(|v| v * v).sum::<f64>();
    t.det().abs() <= 1e-14 * scale
}

/// Inscribed polygon with vertices `v/s(v)` at `resolution` equi-angular
/// directions of a half-turn.
pub(crate) fn sample_ball(gauge: impl Fn(Vec2) -> f64, resolution: usize) -> Polygon {
    let m = resolution.max(2);
    let pts: Vec<Vec2> = (0..m)
        .map(|k| {
            let v = Vec2::polar(PI * k as f64 / m as f64);
            v.scale(1.0 / gauge(v))
        })
        .collect();
    Polygon::hull(&pts).expect("sampled unit ball of a norm is a proper polygon")
}

impl Norm2 {
    /// The Euclidean norm `s₀`.
    pub fn euclid() -> Self {
        Norm2::Ellipse(Sym2::IDENTITY)
    }

    /// The supremum norm `s_∞`, whose ball is `[−1, 1]²`.
    pub fn sup() -> Self {
        Norm2::Polygon(shapes::square())
    }

    pub fn lp(p: f64) -> Self {
        debug_assert!(p >= 1.0);
        Norm2::Lp(p)
    }

    /// `x ↦ sqrt(a x² + 2b xy + c y²)`.
    pub fn ellipse(a: f64, b: f64, c: f64) -> Self {
        Norm2::Ellipse(Sym2::new(a, b, c))
    }

    pub fn degenerate(direction: Vec2, scale: f64) -> Self {
        let n = direction.norm();
        Norm2::Degenerate { direction: direction.scale(1.0 / n), scale }
    }

    /// `s ∘ t` with `gauge(result, v) = gauge(self, t·v)`. Polygonal and
    /// Euclidean norms are materialized; singular maps give rank-one or
    /// zero seminorms.
    pub fn compose(&self, t: &LinearMap2) -> Norm2 {
        match self.shape().compose(t) {
            Shape::Zero => Norm2::Zero,
            Shape::RankOne(w) => Norm2::degenerate(w, w.norm()),
            Shape::Ellipse(m) => Norm2::Ellipse(m),
            Shape::Polygon(p) => Norm2::Polygon(p),
            Shape::Analytic(_) => match self {
                Norm2::Composed(base, t0) => Norm2::Composed(base.clone(), t0.mul(t)),
                _ => Norm2::Composed(Box::new(self.clone()), *t),
            },
        }
    }

    /// `factor · s`.
    pub fn scaled(&self, factor: f64) -> Norm2 {
        if factor == 0.0 {
            return Norm2::Zero;
        }
        match self {
            Norm2::Scaled(base, f) => Norm2::Scaled(base.clone(), f * factor),
            _ => Norm2::Scaled(Box::new(self.clone()), factor),
        }
    }

    /// Evaluates the seminorm at `v`.
    pub fn gauge(&self, v: Vec2) -> f64 {
        match self {
            Norm2::Zero => 0.0,
            Norm2::Degenerate { direction, scale } => scale * direction.dot(v).abs(),
            Norm2::Polygon(p) => p.gauge(v),
            Norm2::Ellipse(m) => m.quad(v).max(0.0).sqrt(),
            Norm2::Lp(p) => lp_gauge(*p, v),
            Norm2::Scaled(base, f) => f * base.gauge(v),
            Norm2::Composed(base, t) => base.gauge(t.apply(v)),
        }
    }

    /// Reduces to an exact shape.
    pub fn shape(&self) -> Shape {
        match self {
            Norm2::Zero => Shape::Zero,
            Norm2::Degenerate { direction, scale } => rank_one(direction.scale(*scale)),
            Norm2::Polygon(p) => Shape::Polygon(p.clone()),
            Norm2::Ellipse(m) => Shape::Ellipse(*m),
            Norm2::Lp(p) => {
                if *p == 1.0 {
                    Shape::Polygon(shapes::cross_polytope())
                } else if *p == 2.0 {
                    Shape::Ellipse(Sym2::IDENTITY)
                } else if p.is_infinite() {
                    Shape::Polygon(shapes::square())
                } else {
                    Shape::Analytic(self.clone())
                }
            }
            Norm2::Scaled(base, f) => {
                let f = f.abs();
                if f == 0.0 {
                    return Shape::Zero;
                }
                match base.shape() {
                    Shape::Zero => Shape::Zero,
                    Shape::RankOne(w) => Shape::RankOne(w.scale(f)),
                    Shape::Ellipse(m) => Shape::Ellipse(m.scale(f * f)),
                    Shape::Polygon(p) => Shape::Polygon(p.scaled(1.0 / f)),
                    Shape::Analytic(_) => Shape::Analytic(self.clone()),
                }
            }
            Norm2::Composed(base, t) => match base.shape() {
                Shape::Analytic(_) if !is_singular(t) => Shape::Analytic(self.clone()),
                s => s.compose(t),
            },
        }
    }

    pub fn is_norm(&self) -> bool {
        self.shape().is_norm()
    }

    /// Polygonal unit ball at the given resolution. Scalings and linear
    /// images of an analytic ball reuse the base sample points, so the
    /// polygonization commutes with `SL₂`.
    pub fn polygon(&self, resolution: usize) -> Option<Polygon> {
        match self {
            Norm2::Scaled(base, f) if *f != 0.0 => match base.shape() {
                Shape::Analytic(_) => base.polygon(resolution).map(|p| p.scaled(1.0 / f.abs())),
                _ => self.shape().polygon(resolution),
            },
            Norm2::Composed(base, t) if !is_singular(t) => match base.shape() {
                Shape::Analytic(_) => base.polygon(resolution).and_then(|p| p.preimage(t)),
                _ => self.shape().polygon(resolution),
            },
            Norm2::Lp(_) if matches!(self.shape(), Shape::Analytic(_)) => Some(sample_ball(|v| self.gauge(v), resolution)),
            _ => self.shape().polygon(resolution),
        }
    }
}

fn lp_gauge(p: f64, v: Vec2) -> f64 {
    let (ax, ay) = (v.x.abs(), v.y.abs());
    let m = ax.max(ay);
    if m == 0.0 {
        return 0.0;
    }
    if p.is_infinite() {
        return m;
    }
    if p == 1.0 {
        return ax + ay;
    }
    m * ((ax / m).powf(p) + (ay / m).powf(p)).powf(1.0 / p)
}

/// `max` over `samples` equi-angular unit vectors of `|a(v) − b(v)|`, refined
/// on the bracketing arc.
pub fn seminorm_distance(a: &Norm2, b: &Norm2, samples: usize) -> f64 {
    let (sa, sb) = (a.shape(), b.shape());
    seminorm_distance_shapes(&sa, &sb, samples)
}

pub fn seminorm_distance_shapes(a: &Shape, b: &Shape, samples: usize) -> f64 {
    let f = |t: f64| {
        let v = Vec2::polar(t);
        (a.gauge(v) - b.gauge(v)).abs()
    };
    periodic_extremum(f, samples.max(8), true).1
}

/// `max_{S¹} s / min_{S¹} s`; infinite for seminorms that are not norms.
pub fn quasiconformality(n: &Norm2, samples: usize) -> f64 {
    quasiconformality_shape(&n.shape(), samples)
}

pub fn quasiconformality_shape(s: &Shape, samples: usize) -> f64 {
    match s {
        _ if !s.is_norm() => return f64::INFINITY,
        Shape::Ellipse(m) => {
            let (l1, l2) = m.eigenvalues();
            return (l1 / l2).sqrt();
        }
        Shape::Polygon(p) => {
            // max of the gauge is the largest dual vertex, min the inverse circumradius
            let hi = p.dual_vertices().iter().map(|y| y.norm()).fold(0.0, f64::max);
            return hi * p.max_vertex_norm();
        }
        _ => {}
    }
    let f = |t: f64| s.gauge(Vec2::polar(t));
    let hi = periodic_extremum(f, samples.max(8), true).1;
    let lo = periodic_extremum(f, samples.max(8), false).1;
    hi / lo
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauge_examples() {
        assert!((Norm2::sup().gauge(Vec2::new(1.0, 1.0)) - 1.0).abs() < 1e-15);
        for k in 0..16 {
            let v = Vec2::polar(0.4 * k as f64);
            assert!((Norm2::euclid().gauge(v) - 1.0).abs() < 1e-15);
        }
        assert_eq!(Norm2::lp(1.0).gauge(Vec2::new(1.0, 1.0)), 2.0);
        assert!((Norm2::lp(3.0).gauge(Vec2::new(1.0, 1.0)) - 2f64.powf(1.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn compose_examples() {
        let r = LinearMap2::rotation(0.77);
        let e = Norm2::euclid().compose(&r);
        for k in 0..16 {
            let v = Vec2::polar(0.3 * k as f64).scale(2.0);
            assert!((e.gauge(v) - 2.0).abs() < 1e-14);
        }
        let d = Norm2::sup().compose(&LinearMap2::diag(2.0, 0.5));
        assert!((d.gauge(Vec2::new(1.0, 0.0)) - 2.0).abs() < 1e-15);
        let id = Norm2::lp(3.0).compose(&LinearMap2::IDENTITY);
        let v = Vec2::new(0.3, -0.8);
        assert!((id.gauge(v) - Norm2::lp(3.0).gauge(v)).abs() < 1e-15);
    }

    #[test]
    fn singular_compose_gives_rank_one_or_zero() {
        let t = LinearMap2::new(1.0, 2.0, 2.0, 4.0);
        let c = Norm2::sup().compose(&t);
        assert!(matches!(c, Norm2::Degenerate { .. }));
        for k in 0..20 {
            let v = Vec2::polar(0.31 * k as f64);
            assert!((c.gauge(v) - Norm2::sup().gauge(t.apply(v))).abs() < 1e-12);
        }
        assert_eq!(Norm2::euclid().compose(&LinearMap2::diag(0.0, 0.0)), Norm2::Zero);
        assert!(!c.is_norm());
    }

    #[test]
    fn distance_examples() {
        assert!(seminorm_distance(&Norm2::euclid(), &Norm2::euclid(), 256) < 1e-15);
        let two = Norm2::euclid().scaled(2.0);
        assert!((seminorm_distance(&Norm2::euclid(), &two, 256) - 1.0).abs() < 1e-12);
        // oracle: dense angular scan of 1 − max(|cos|, |sin|)
        let oracle = (0..200_000)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / 200_000.0;
                1.0 - t.cos().abs().max(t.sin().abs())
            })
            .fold(0.0, f64::max);
        let got = seminorm_distance(&Norm2::euclid(), &Norm2::sup(), 4096);
        assert!((got - oracle).abs() < 1e-9);
        assert!((got - (1.0 - 0.5f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn quasiconformality_examples() {
        assert!((quasiconformality(&Norm2::euclid(), 64) - 1.0).abs() < 1e-14);
        assert!((quasiconformality(&Norm2::sup(), 4096) - 2f64.sqrt()).abs() < 1e-3);
        // singular values of diag(2, 1) are the square roots of the eigenvalues of diag(4, 1)
        assert!((quasiconformality(&Norm2::ellipse(4.0, 0.0, 1.0), 4096) - 2.0).abs() < 1e-6);
        assert!(quasiconformality(&Norm2::Zero, 64).is_infinite());
    }

    #[test]
    fn scaled_shape_reduction() {
        let s = Norm2::sup().scaled(2.0);
        match s.shape() {
            Shape::Polygon(p) => assert!((p.area() - 1.0).abs() < 1e-14),
            other => panic!("unexpected {other:?}"),
        }
        match Norm2::euclid().scaled(3.0).shape() {
            Shape::Ellipse(m) => assert!((m.a - 9.0).abs() < 1e-14),
            other => panic!("unexpected {other:?}"),
        }
    }
}
