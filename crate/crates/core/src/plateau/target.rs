//! Finite-dimensional normed targets and the seminorms of affine pieces.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // inherent once std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geom::{Sym2, Vec2};
use crate::norm::{sample_ball, Norm2, Shape};
use crate::polygon::Polygon;

/// Half-vertex count for sampling seminorms of `ℓᵖ` targets.
pub const TRIANGLE_RESOLUTION: usize = 128;

/// Differential of an affine piece: row `i` is the gradient of coordinate `i`.
pub type Diff = [[f64; 2]];

#[derive(Clone, Debug, PartialEq)]
pub enum TargetNorm {
    Euclidean,
    Lp(f64),
    /// `x ↦ max_j |⟨a_j, x⟩|`.
    Polyhedral(Vec<Vec<f64>>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormedTarget {
    pub dim: usize,
    pub norm: TargetNorm,
}

impl NormedTarget {
    pub fn euclidean(dim: usize) -> Result<Self> {
        Self::checked(dim, TargetNorm::Euclidean)
    }

    pub fn lp(dim: usize, p: f64) -> Result<Self> {
        if !(p >= 1.0) {
            return Err(Error::Parameter(alloc::format!("lp target needs p ≥ 1, got {p}")));
        }
        if p == 2.0 {
            return Self::euclidean(dim);
        }
        if p.is_infinite() {
            return Self::sup(dim);
        }
        Self::checked(dim, TargetNorm::Lp(p))
    }

    /// `ℓ^∞` as the polyhedral norm of the coordinate functionals.
    pub fn sup(dim: usize) -> Result<Self> {
        let f = (0..dim).map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        Self::polyhedral(dim, f)
    }

    pub fn polyhedral(dim: usize, functionals: Vec<Vec<f64>>) -> Result<Self> {
        if functionals.iter().any(|a| a.len() != dim || a.iter().any(|x| !x.is_finite())) {
            return Err(Error::Parameter("functional dimension mismatch".into()));
        }
        // the functionals must span the dual space for the gauge to be a norm
        if rank(&functionals, dim) < dim {
            return Err(Error::Parameter("polyhedral functionals do not span; gauge is not a norm".into()));
        }
        Self::checked(dim, TargetNorm::Polyhedral(functionals))
    }

    fn checked(dim: usize, norm: TargetNorm) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Parameter("target dimension must be at least 2".into()));
        }
        Ok(Self { dim, norm })
    }

    pub fn gauge(&self, x: &[f64]) -> f64 {
        match &self.norm {
            TargetNorm::Euclidean => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
            TargetNorm::Lp(p) => {
                let m = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                if m == 0.0 {
                    return 0.0;
                }
                m * x.iter().map(|v| (v.abs() / m).powf(*p)).sum::<f64>().powf(1.0 / p)
            }
            TargetNorm::Polyhedral(f) => f.iter().map(|a| dot(a, x).abs()).fold(0.0, f64::max),
        }
    }

    /// The target as a norm on R² when `dim = 2`.
    pub fn plane_norm(&self) -> Option<Norm2> {
        if self.dim != 2 {
            return None;
        }
        Some(match &self.norm {
            TargetNorm::Euclidean => Norm2::euclid(),
            TargetNorm::Lp(p) => Norm2::lp(*p),
            TargetNorm::Polyhedral(f) => {
                let pts: Vec<Vec2> = f.iter().map(|a| Vec2::new(a[0], a[1])).collect();
                Norm2::Polygon(Polygon::from_dual_points(&pts).expect("spanning functionals"))
            }
        })
    }

    /// Pulled-back dual points `Duᵀ a_j` of a polyhedral target.
    pub fn dual_points(&self, du: &Diff) -> Option<Vec<Vec2>> {
        match &self.norm {
            TargetNorm::Polyhedral(f) => Some(f.iter().map(|a| pull_back(a, du)).collect()),
            _ => None,
        }
    }

    /// The seminorm `v ↦ ‖Du·v‖` of an affine piece.
    pub fn seminorm(&self, du: &Diff) -> Shape {
        let g = gram(du);
        let scale = g.trace();
        if scale == 0.0 {
            return Shape::Zero;
        }
        if g.det() <= 1e-13 * scale * scale {
            let (_, _, e) = g.eigen();
            let w = self.gauge(&apply(du, e));
            return if w > 0.0 { Shape::RankOne(e.scale(w)) } else { Shape::Zero };
        }
        match &self.norm {
            TargetNorm::Euclidean => Shape::Ellipse(g),
            TargetNorm::Polyhedral(_) => {
                let pts = self.dual_points(du).expect("polyhedral");
                match Polygon::from_dual_points(&pts) {
                    Ok(p) => Shape::Polygon(p),
                    Err(_) => {
                        let (_, _, e) = g.eigen();
                        Shape::RankOne(e.scale(self.gauge(&apply(du, e))))
                    }
                }
            }
            TargetNorm::Lp(_) => Shape::Polygon(sample_ball(|v| self.gauge(&apply(du, v)), TRIANGLE_RESOLUTION)),
        }
    }

    /// Directions used for `ℓᵖ` targets, a half-turn at [`TRIANGLE_RESOLUTION`].
    pub fn sample_directions() -> impl Iterator<Item = Vec2> {
        (0..TRIANGLE_RESOLUTION).map(|k| Vec2::polar(PI * k as f64 / TRIANGLE_RESOLUTION as f64))
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn pull_back(a: &[f64], du: &Diff) -> Vec2 {
    let mut v = Vec2::ZERO;
    for (ai, row) in a.iter().zip(du) {
        v.x += ai * row[0];
        v.y += ai * row[1];
    }
    v
}

pub(crate) fn apply(du: &Diff, v: Vec2) -> Vec<f64> {
    du.iter().map(|r| r[0] * v.x + r[1] * v.y).collect()
}

/// `DuᵀDu`.
pub fn gram(du: &Diff) -> Sym2 {
    let mut g = Sym2::new(0.0, 0.0, 0.0);
    for r in du {
        g.a += r[0] * r[0];
        g.b += r[0] * r[1];
        g.c += r[1] * r[1];
    }
    g
}

fn rank(rows: &[Vec<f64>], dim: usize) -> usize {
    let mut m: Vec<Vec<f64>> = rows.to_vec();
    let scale = m.iter().flatten().fold(0.0f64, |s, v| s.max(v.abs())).max(f64::MIN_POSITIVE);
    let mut r = 0;
    for c in 0..dim {
        let Some(p) = (r..m.len()).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())) else { break };
        if m[p][c].abs() <= 1e-12 * scale {
            continue;
        }
        m.swap(r, p);
        for i in (r + 1)..m.len() {
            let f = m[i][c] / m[r][c];
            for k in c..dim {
                m[i][k] -= f * m[r][k];
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::{dirichlet, reshetnyak};

    #[test]
    fn seminorm_kinds() {
        let sup = NormedTarget::sup(2).unwrap();
        let du = [[2.0, 0.0], [0.0, 0.5]];
        let s = sup.seminorm(&du);
        assert!(matches!(s, Shape::Polygon(_)));
        assert!((reshetnyak(&s) - 4.0).abs() < 1e-12);
        let e = NormedTarget::euclidean(3).unwrap();
        let du3 = [[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]];
        assert!((dirichlet(&e.seminorm(&du3)).unwrap() - 2.0).abs() < 1e-14);
        let flat = [[1.0, 2.0], [2.0, 4.0]];
        assert!(matches!(sup.seminorm(&flat), Shape::RankOne(_)));
        assert!(matches!(sup.seminorm(&[[0.0, 0.0], [0.0, 0.0]]), Shape::Zero));
    }

    #[test]
    fn lp_seminorm_matches_gauge() {
        let t = NormedTarget::lp(3, 3.0).unwrap();
        let du = [[1.0, 0.2], [0.1, 0.9], [0.3, -0.4]];
        let s = t.seminorm(&du);
        for v in NormedTarget::sample_directions().take(5) {
            assert!((s.gauge(v) - t.gauge(&apply(&du, v))).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_spanning_functionals() {
        assert!(NormedTarget::polyhedral(2, alloc::vec![alloc::vec![1.0, 0.0], alloc::vec![2.0, 0.0]]).is_err());
    }
}
