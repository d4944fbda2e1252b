//! Convex-geometry primitives on symmetric polygons: area, polar body,
//! Loewner ellipse and minimal enclosing parallelogram.

use crate::error::{Error, Result};
use crate::geom::{LinearMap2, Sym2, Vec2};
use crate::polygon::Polygon;
use core::f64::consts::PI;
#[allow(unused_imports)] // inherent once std is linked
use num_traits::Float;

/// The ellipse `A(D̄)` for a symmetric positive definite `A`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EllipseBody {
    pub spd: Sym2,
}

impl EllipseBody {
    pub fn area(&self) -> f64 {
        PI * self.spd.det()
    }

    /// Ratio of the principal semi-axes, `≥ 1`.
    pub fn aspect(&self) -> f64 {
        let (l1, l2) = self.spd.eigenvalues();
        l1 / l2
    }

    /// Point of the boundary in direction parameter `u ∈ S¹`, i.e. `A·u`.
    pub fn boundary_point(&self, u: Vec2) -> Vec2 {
        self.spd.apply(u)
    }

    /// Gauge of the ellipse body: `|A⁻¹ x|`.
    pub fn gauge(&self, x: Vec2) -> f64 {
        self.spd.inverse().map(|ai| ai.apply(x).norm()).unwrap_or(f64::INFINITY)
    }
}

/// The origin-symmetric parallelogram `{αu + βw : |α|, |β| ≤ 1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Parallelogram {
    pub u: Vec2,
    pub w: Vec2,
}

impl Parallelogram {
    pub fn area(&self) -> f64 {
        4.0 * self.u.cross(self.w).abs()
    }

    pub fn vertices(&self) -> [Vec2; 4] {
        [self.u + self.w, self.w - self.u, -self.u - self.w, self.u - self.w]
    }
}

/// Shoelace area of the full symmetric polygon.
pub fn polygon_area(b: &Polygon) -> f64 {
    b.area()
}

/// The polar body `B*`.
pub fn polar_dual(b: &Polygon) -> Polygon {
    b.polar()
}

/// Options for the barrier method behind [`loewner_ellipse`].
#[derive(Clone, Copy, Debug)]
pub struct BarrierOptions {
    /// Barrier parameter growth per outer iteration.
    pub mu: f64,
    /// Stop once the duality measure `m/t` falls below this.
    pub gap: f64,
    pub max_newton: usize,
}

impl Default for BarrierOptions {
    fn default() -> Self {
        Self { mu: 10.0, gap: 1e-10, max_newton: 400 }
    }
}

/// Largest-area ellipse `A(D̄) ⊆ B`.
pub fn loewner_ellipse(b: &Polygon) -> Result<EllipseBody> {
    loewner_ellipse_with(b, &BarrierOptions::default())
}

/// Max-det problem over SPD `A = [[a, b], [b, c]]` subject to `|A yⱼ| ≤ 1`
/// for the dual vertices `yⱼ`, solved with a log barrier and damped Newton
/// steps on the polygon rescaled to unit circumradius.
pub fn loewner_ellipse_with(body: &Polygon, opts: &BarrierOptions) -> Result<EllipseBody> {
    let k = 1.0 / body.max_vertex_norm();
    // dual vertices of k·B are y/k
    let ys: alloc::vec::Vec<Vec2> = body.dual_vertices()[..body.half_len()].iter().map(|y| y.scale(1.0 / k)).collect();
    let m = ys.len() as f64;
    let ymax = ys.iter().map(|y| y.norm()).fold(0.0, f64::max);
    let r0 = 0.5 / ymax;
    let mut x = [r0, 0.0, r0];
    let mut t = 1.0;
    let mut newton_steps;

    let feasible = |x: &[f64; 3]| -> bool {
        let a = Sym2::new(x[0], x[1], x[2]);
        a.is_positive_definite() && ys.iter().all(|y| a.apply(*y).norm_sq() < 1.0)
    };
    let value = |x: &[f64; 3], t: f64| -> f64 {
        let a = Sym2::new(x[0], x[1], x[2]);
        let mut f = -t * a.det().ln();
        for y in &ys {
            f -= (1.0 - a.apply(*y).norm_sq()).ln();
        }
        f
    };

    loop {
        newton_steps = 0;
        let mut last = f64::INFINITY;
        loop {
            let (g, h) = barrier_derivatives(&x, &ys, t);
            let dx = solve3(&h, &[-g[0], -g[1], -g[2]])
                .ok_or_else(|| Error::Numerical { what: "singular barrier Hessian in Loewner solver".into(), residual: f64::NAN })?;
            let decrement = -(g[0] * dx[0] + g[1] * dx[1] + g[2] * dx[2]);
            // decrement of the objective divided by t; stop at the roundoff floor
            let scaled = decrement / t;
            if scaled <= 1e-15 || (scaled < 1e-10 && decrement > 0.25 * last) {
                break;
            }
            last = decrement;
            newton_steps += 1;
            if newton_steps > opts.max_newton {
                return Err(Error::Numerical { what: "Loewner barrier method did not converge".into(), residual: decrement });
            }
            let full = [x[0] + dx[0], x[1] + dx[1], x[2] + dx[2]];
            if scaled < 1e-10 && feasible(&full) {
                x = full;
                continue;
            }
            let f0 = value(&x, t);
            let mut step = 1.0;
            loop {
                let xn = [x[0] + step * dx[0], x[1] + step * dx[1], x[2] + step * dx[2]];
                if feasible(&xn) && value(&xn, t) <= f0 - 0.25 * step * decrement {
                    x = xn;
                    break;
                }
                step *= 0.5;
                if step < 1e-20 && scaled < 1e-10 {
                    break;
                }
                if step < 1e-20 {
                    return Err(Error::Numerical { what: "Loewner line search stalled".into(), residual: decrement });
                }
            }
        }
        if m / t < opts.gap {
            break;
        }
        t *= opts.mu;
    }
    let a = Sym2::new(x[0], x[1], x[2]);
    let worst = ys.iter().map(|y| a.apply(*y).norm()).fold(0.0, f64::max);
    if worst > 1.0 + 1e-9 || worst < 1.0 - 1e-6 {
        return Err(Error::Numerical { what: "Loewner solution has no active constraint".into(), residual: 1.0 - worst });
    }
    Ok(EllipseBody { spd: a.scale(1.0 / k) })
}

/// Gradient and Hessian of `−t·log det A − Σ log(1 − |A y|²)`.
fn barrier_derivatives(x: &[f64; 3], ys: &[Vec2], t: f64) -> ([f64; 3], [[f64; 3]; 3]) {
    let (a, b, c) = (x[0], x[1], x[2]);
    let d = a * c - b * b;
    let d2 = d * d;
    let mut g = [-t * c / d, t * 2.0 * b / d, -t * a / d];
    let mut h = [
        [t * c * c / d2, -t * 2.0 * b * c / d2, t * b * b / d2],
        [0.0, t * (2.0 / d + 4.0 * b * b / d2), -t * 2.0 * a * b / d2],
        [0.0, 0.0, t * a * a / d2],
    ];
    for y in ys {
        let p = a * y.x + b * y.y;
        let q = b * y.x + c * y.y;
        let s = 1.0 - (p * p + q * q);
        let dg = [2.0 * p * y.x, 2.0 * (p * y.y + q * y.x), 2.0 * q * y.y];
        let hg =
            [[2.0 * y.x * y.x, 2.0 * y.x * y.y, 0.0], [0.0, 2.0 * (y.x * y.x + y.y * y.y), 2.0 * y.x * y.y], [0.0, 0.0, 2.0 * y.y * y.y]];
        for i in 0..3 {
            g[i] += dg[i] / s;
            for j in i..3 {
                h[i][j] += hg[i][j] / s + dg[i] * dg[j] / (s * s);
            }
        }
    }
    for i in 0..3 {
        for j in 0..i {
            h[i][j] = h[j][i];
        }
    }
    (g, h)
}

fn solve3(h: &[[f64; 3]; 3], r: &[f64; 3]) -> Option<[f64; 3]> {
    let det3 = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det3(h);
    if d == 0.0 || !d.is_finite() {
        return None;
    }
    let mut out = [0.0; 3];
    for k in 0..3 {
        let mut mk = *h;
        for i in 0..3 {
            mk[i][k] = r[i];
        }
        out[k] = det3(&mk) / d;
    }
    Some(out)
}

/// Minimal-area origin-symmetric parallelogram containing `B`.
///
/// A parallelogram `{|⟨f, x⟩| ≤ 1, |⟨g, x⟩| ≤ 1}` contains `B` iff `f, g ∈ B*`,
/// and its area is `4/|f × g|`. Some side of an optimal parallelogram is flush
/// with an edge of `B`, so `f` is a vertex of `B*`; for a fixed `f` the
/// conjugate functional maximizing `|f × g|` over `B*` is again a vertex.
/// Sweeping all flush edges therefore reduces to a maximum over vertex pairs.
pub fn min_enclosing_parallelogram(b: &Polygon) -> Parallelogram {
    let ys = &b.dual_vertices()[..b.half_len()];
    let mut best = (0.0, 0, 1);
    for i in 0..ys.len() {
        for j in (i + 1)..ys.len() {
            let c = ys[i].cross(ys[j]).abs();
            if c > best.0 {
                best = (c, i, j);
            }
        }
    }
    let (f, g) = (ys[best.1], ys[best.2]);
    let rows = LinearMap2::new(f.x, f.y, g.x, g.y);
    let inv = rows.inverse().expect("distinct dual vertices of a symmetric polygon are independent");
    Parallelogram { u: inv.col(0), w: inv.col(1) }
}

/// Map sending the Loewner ellipse of `b` to the unit disc, `A⁻¹`.
pub fn isotropic_map(b: &Polygon) -> Result<LinearMap2> {
    let l = loewner_ellipse(b)?;
    Ok(l.spd.inverse().expect("Loewner matrix is positive definite").as_map())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::shapes::*;

    #[test]
    fn barrier_hessian_matches_finite_differences() {
        let ys = [Vec2::new(1.2, 0.3), Vec2::new(-0.4, 0.9)];
        let x = [0.5, 0.1, 0.4];
        let t = 3.0;
        let f = |x: &[f64; 3]| {
            let a = Sym2::new(x[0], x[1], x[2]);
            -t * a.det().ln() - ys.iter().map(|y| (1.0 - a.apply(*y).norm_sq()).ln()).sum::<f64>()
        };
        let (g, h) = barrier_derivatives(&x, &ys, t);
        let eps = 1e-6;
        for i in 0..3 {
            let mut xp = x;
            let mut xm = x;
            xp[i] += eps;
            xm[i] -= eps;
            let fd = (f(&xp) - f(&xm)) / (2.0 * eps);
            assert!((fd - g[i]).abs() < 1e-6, "grad {i}: {fd} vs {}", g[i]);
            let (gp, _) = barrier_derivatives(&xp, &ys, t);
            let (gm, _) = barrier_derivatives(&xm, &ys, t);
            for j in 0..3 {
                let fd = (gp[j] - gm[j]) / (2.0 * eps);
                assert!((fd - h[i][j]).abs() < 1e-5 * (1.0 + h[i][j].abs()), "hess {i}{j}");
            }
        }
    }

    #[test]
    fn square_loewner_is_unit_disc() {
        let l = loewner_ellipse(&square()).unwrap();
        assert!((l.spd.a - 1.0).abs() < 1e-8 && l.spd.b.abs() < 1e-8 && (l.spd.c - 1.0).abs() < 1e-8);
        assert!((l.area() - PI).abs() < 1e-7);
    }

    #[test]
    fn hexagon_loewner_is_inscribed_disc() {
        let l = loewner_ellipse(&hexagon()).unwrap();
        let r = 3f64.sqrt() / 2.0;
        assert!((l.spd.a - r).abs() < 1e-8 && l.spd.b.abs() < 1e-8 && (l.spd.c - r).abs() < 1e-8);
        assert!((l.area() - 0.75 * PI).abs() < 1e-7);
    }

    #[test]
    fn ellipse_body_is_its_own_loewner_ellipse() {
        let a0 = Sym2::new(2.0, 0.6, 0.7);
        let poly = Polygon::hull(&(0..512).map(|k| a0.apply(Vec2::polar(PI * k as f64 / 512.0))).collect::<alloc::vec::Vec<_>>()).unwrap();
        let l = loewner_ellipse(&poly).unwrap();
        // inscribed 1024-gon: the Loewner ellipse is slightly smaller
        assert!((l.spd.det() - a0.det()).abs() / a0.det() < 1e-4);
    }

    #[test]
    fn parallelogram_examples() {
        assert!((min_enclosing_parallelogram(&square()).area() - 4.0).abs() < 1e-14);
        assert!((min_enclosing_parallelogram(&disc(256)).area() - 4.0).abs() < 1e-3);
        assert!((min_enclosing_parallelogram(&hexagon()).area() - 2.0 * 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn parallelogram_contains_body() {
        let p = regular(5, 1.0, 0.3);
        let par = min_enclosing_parallelogram(&p);
        let rows = LinearMap2::new(par.u.x, par.w.x, par.u.y, par.w.y).inverse().unwrap();
        for v in p.vertices() {
            let c = rows.apply(*v);
            assert!(c.x.abs() <= 1.0 + 1e-12 && c.y.abs() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn john_bound_for_square() {
        let l = loewner_ellipse(&square()).unwrap();
        for v in square().vertices() {
            assert!(l.gauge(*v) <= 2f64.sqrt() + 1e-6);
        }
    }
}
