//! Seeded families of norms used by the numerical searches.

use alloc::vec::Vec;
use core::f64::consts::PI;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::norm::Norm2;
use crate::polygon::{shapes, Polygon};

#[derive(Clone, Debug, PartialEq)]
pub enum NormFamily {
    /// Symmetric hulls of `k` random points and their negatives.
    RandomPolygons {
        k: usize,
    },
    /// `ℓᵖ` for `p` from 1 to ∞.
    LpSweep,
    PerturbedSquare,
    PerturbedHexagon,
}

/// Amplitude of the perturbations applied to the square and hexagon.
pub const PERTURBATION: f64 = 0.1;

impl NormFamily {
    pub fn name(&self) -> alloc::string::String {
        match self {
            NormFamily::RandomPolygons { k } => alloc::format!("random:{k}"),
            NormFamily::LpSweep => "lp".into(),
            NormFamily::PerturbedSquare => "square".into(),
            NormFamily::PerturbedHexagon => "hexagon".into(),
        }
    }

    /// Member `index` of a run of `count`, with its family parameter. Each
    /// index draws from its own ChaCha stream, so samples do not depend on
    /// evaluation order.
    pub fn sample(&self, index: usize, count: usize, seed: u64) -> Result<(f64, Norm2)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index as u64);
        match self {
            NormFamily::LpSweep => {
                let t = if count > 1 { index as f64 / (count - 1) as f64 } else { 0.0 };
                let p = if t >= 1.0 { f64::INFINITY } else { 1.0 / (1.0 - t) };
                Ok((p, Norm2::lp(p)))
            }
            NormFamily::RandomPolygons { k } => {
                if *k < 2 {
                    return Err(Error::Parameter("random polygons need k ≥ 2".into()));
                }
                for _ in 0..64 {
                    if let Ok(p) = random_polygon(&mut rng, *k) {
                        return Ok((index as f64, Norm2::Polygon(p)));
                    }
                }
                Err(Error::Numerical { what: "could not draw a nondegenerate polygon".into(), residual: 0.0 })
            }
            NormFamily::PerturbedSquare => {
                let base = [Vec2::new(1.0, 1.0), Vec2::new(-1.0, 1.0)];
                Ok((index as f64, Norm2::Polygon(perturbed(&mut rng, &base, index == 0)?)))
            }
            NormFamily::PerturbedHexagon => {
                let h = shapes::hexagon();
                Ok((index as f64, Norm2::Polygon(perturbed(&mut rng, h.half_vertices(), index == 0)?)))
            }
        }
    }
}

pub fn random_polygon(rng: &mut impl Rng, k: usize) -> Result<Polygon> {
    let mut pts = Vec::with_capacity(2 * k);
    for _ in 0..k {
        let t = rng.gen_range(0.0..PI);
        let r = rng.gen_range(0.4..1.0);
        let v = Vec2::polar(t).scale(r);
        pts.push(v);
        pts.push(-v);
    }
    Polygon::hull(&pts)
}

/// Jitters the corners of a base polygon and adds jittered edge midpoints;
/// `exact` returns the base itself.
fn perturbed(rng: &mut impl Rng, half: &[Vec2], exact: bool) -> Result<Polygon> {
    if exact {
        return Polygon::new(half);
    }
    let m = half.len();
    let mut pts = Vec::with_capacity(4 * m);
    for i in 0..m {
        let a = half[i];
        let b = if i + 1 < m { half[i + 1] } else { -half[0] };
        let c = a.scale(1.0 + PERTURBATION * rng.gen_range(-1.0..1.0))
            + Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)).scale(0.5 * PERTURBATION);
        let mid = (a + b).scale(0.5 * (1.0 + PERTURBATION * rng.gen_range(-1.0..1.0)));
        for v in [c, mid] {
            pts.push(v);
            pts.push(-v);
        }
    }
    Polygon::hull(&pts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_deterministic_per_index() {
        let f = NormFamily::RandomPolygons { k: 6 };
        let a = f.sample(5, 10, 42).unwrap().1;
        let b = f.sample(5, 99, 42).unwrap().1;
        assert_eq!(a, b);
        assert_ne!(a, f.sample(6, 10, 42).unwrap().1);
    }

    #[test]
    fn lp_sweep_endpoints() {
        let f = NormFamily::LpSweep;
        assert_eq!(f.sample(0, 5, 0).unwrap().0, 1.0);
        assert!(f.sample(4, 5, 0).unwrap().0.is_infinite());
    }

    #[test]
    fn perturbed_families_are_norms() {
        for f in [NormFamily::PerturbedSquare, NormFamily::PerturbedHexagon] {
            for i in 0..20 {
                assert!(f.sample(i, 20, 1).unwrap().1.is_norm());
            }
        }
    }
}
