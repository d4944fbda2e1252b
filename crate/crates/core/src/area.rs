//! Definitions of area via Jacobians of seminorms, and the comparison
//! constant `q(μ) = inf J^μ / J^i`.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // inherent once std is linked
use num_traits::Float;

use crate::convex::{loewner_ellipse, min_enclosing_parallelogram};
use crate::error::{Error, Result};
use crate::family::NormFamily;
use crate::induced::InducedArea;
use crate::norm::{Norm2, Shape, POLYGON_RESOLUTION};
use crate::polygon::Polygon;

/// A definition of area, represented by its Jacobian on seminorms.
#[derive(Clone, Debug, PartialEq)]
pub enum AreaDef {
    /// `π/|B|`.
    Busemann,
    /// `|B*|/π`.
    HolmesThompson,
    /// `4/|P|` with `P` the smallest parallelogram containing `B`.
    MassStar,
    /// `π/|L|` with `L` the Loewner ellipse of `B`.
    InscribedRiemannian,
    /// `λ_I · inf_{SL₂} I(s∘T)`.
    Induced(Box<InducedArea>),
    /// Convex combination of other areas.
    Combination(Vec<(f64, AreaDef)>),
}

impl AreaDef {
    pub const CLASSICAL: [AreaDef; 4] = [AreaDef::Busemann, AreaDef::HolmesThompson, AreaDef::MassStar, AreaDef::InscribedRiemannian];

    /// Convex combination; weights must be nonnegative and sum to 1.
    pub fn combination(parts: Vec<(f64, AreaDef)>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Parameter("empty area combination".into()));
        }
        if parts.iter().any(|(w, _)| !(*w >= 0.0 && w.is_finite())) {
            return Err(Error::Parameter("area combination weights must be nonnegative".into()));
        }
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Parameter(alloc::format!("area combination weights sum to {total}, not 1")));
        }
        Ok(AreaDef::Combination(parts))
    }

    pub fn name(&self) -> String {
        match self {
            AreaDef::Busemann => "busemann".into(),
            AreaDef::HolmesThompson => "ht".into(),
            AreaDef::MassStar => "mass-star".into(),
            AreaDef::InscribedRiemannian => "inscribed".into(),
            AreaDef::Induced(i) => alloc::format!("induced({:?})", i.energy()),
            AreaDef::Combination(parts) => {
                let items: Vec<String> = parts.iter().map(|(w, a)| alloc::format!("{w}*{}", a.name())).collect();
                items.join("+")
            }
        }
    }
}

/// `J^μ(s)`; zero when `s` is not a norm.
pub fn jacobian(a: &AreaDef, n: &Norm2) -> Result<f64> {
    jacobian_shape(a, &n.shape())
}

pub fn jacobian_shape(a: &AreaDef, s: &Shape) -> Result<f64> {
    if !s.is_norm() {
        return Ok(0.0);
    }
    match a {
        AreaDef::Induced(i) => i.jacobian_shape(s),
        AreaDef::Combination(parts) => {
            let mut total = 0.0;
            for (w, part) in parts {
                if *w > 0.0 {
                    total += w * jacobian_shape(part, s)?;
                }
            }
            Ok(total)
        }
        _ => match s {
            // every classical Jacobian equals sqrt(det M) on ellipses
            Shape::Ellipse(m) => Ok(m.det().sqrt()),
            Shape::Polygon(p) => polygon_jacobian(a, p),
            Shape::Analytic(_) => {
                let p = s.polygon(POLYGON_RESOLUTION).ok_or_else(|| Error::Domain("unit ball is unbounded".into()))?;
                polygon_jacobian(a, &p)
            }
            Shape::Zero | Shape::RankOne(_) => Ok(0.0),
        },
    }
}

/// Classical Jacobian of the norm with unit ball `p`.
pub fn polygon_jacobian(a: &AreaDef, p: &Polygon) -> Result<f64> {
    match a {
        AreaDef::Busemann => Ok(PI / p.area()),
        AreaDef::HolmesThompson => Ok(p.polar().area() / PI),
        AreaDef::MassStar => Ok(4.0 / min_enclosing_parallelogram(p).area()),
        AreaDef::InscribedRiemannian => Ok(PI / loewner_ellipse(p)?.area()),
        _ => jacobian_shape(a, &Shape::Polygon(p.clone())),
    }
}

/// `J^μ(s)/J^i(s)`.
pub fn q_ratio(a: &AreaDef, n: &Norm2) -> Result<f64> {
    q_ratio_shape(a, &n.shape())
}

pub fn q_ratio_shape(a: &AreaDef, s: &Shape) -> Result<f64> {
    if !s.is_norm() {
        return Err(Error::Domain("q ratio is only defined on norms".into()));
    }
    let ji = jacobian_shape(&AreaDef::InscribedRiemannian, s)?;
    Ok(jacobian_shape(a, s)? / ji)
}

/// One evaluated candidate of a q-search.
#[derive(Clone, Debug)]
pub struct QSample {
    pub index: usize,
    /// Family parameter (the exponent `p` for ℓᵖ sweeps, else the index).
    pub param: f64,
    pub ratio: f64,
    pub jacobian: f64,
    pub inscribed: f64,
    pub norm: Norm2,
}

#[derive(Clone, Debug)]
pub struct QSearch {
    pub ratio: f64,
    pub argmin: Norm2,
    pub samples: Vec<QSample>,
    pub refined_from: f64,
    pub evaluations: usize,
}

/// Number of family samples drawn for a total evaluation budget; the rest
/// goes into local refinement.
pub fn q_sample_count(family: &NormFamily, budget: usize) -> usize {
    match family {
        NormFamily::LpSweep => budget.max(2),
        _ => (budget / 2).max(1),
    }
}

/// Evaluates candidate `index` of `count`.
pub fn q_candidate(a: &AreaDef, family: &NormFamily, index: usize, count: usize, seed: u64) -> Result<QSample> {
    let (param, norm) = family.sample(index, count, seed)?;
    let s = norm.shape();
    let jacobian = jacobian_shape(a, &s)?;
    let inscribed = jacobian_shape(&AreaDef::InscribedRiemannian, &s)?;
    Ok(QSample { index, param, ratio: jacobian / inscribed, jacobian, inscribed, norm })
}

/// Deterministic reduction: smallest ratio, ties by index.
pub fn q_best(samples: &[QSample]) -> Option<&QSample> {
    samples.iter().min_by(|x, y| x.ratio.total_cmp(&y.ratio).then(x.index.cmp(&y.index)))
}

/// Coordinate descent on the half-vertices of `start`, renormalized to
/// Loewner-isotropic position after each sweep. Returns the best ratio, its
/// polygon and the number of evaluations spent.
pub fn q_refine(a: &AreaDef, start: &Polygon, budget: usize) -> Result<(f64, Polygon, usize)> {
    let ratio = |p: &Polygon| -> Result<f64> { q_ratio_shape(a, &Shape::Polygon(p.clone())) };
    let mut best = isotropic(start)?;
    let mut value = ratio(&best)?;
    let mut evals = 1;
    let mut step = 0.05;
    while step > 1e-7 && evals < budget {
        let mut improved = false;
        let half: Vec<_> = best.half_vertices().to_vec();
        'coords: for i in 0..half.len() {
            for axis in 0..2 {
                for sign in [1.0, -1.0] {
                    if evals >= budget {
                        break 'coords;
                    }
                    let mut trial = best.half_vertices().to_vec();
                    if axis == 0 {
                        trial[i].x += sign * step;
                    } else {
                        trial[i].y += sign * step;
                    }
                    let Ok(p) = Polygon::new(&trial) else { continue };
                    evals += 1;
                    let Ok(v) = ratio(&p) else { continue };
                    if v < value - 1e-15 {
                        value = v;
                        best = p;
                        improved = true;
                    }
                }
            }
        }
        if improved {
            best = isotropic(&best)?;
        } else {
            step *= 0.5;
        }
    }
    Ok((value, best, evals))
}

fn isotropic(p: &Polygon) -> Result<Polygon> {
    let l = loewner_ellipse(p)?;
    // det-normalized so that the SL₂ class is kept and the scale is fixed
    let a = l.spd.scale(1.0 / l.spd.det().sqrt()).as_map();
    p.preimage(&a).ok_or_else(|| Error::Numerical { what: "singular Loewner map".into(), residual: 0.0 })
}

/// Estimates `q(μ)` over a seeded family.
pub fn q_search(a: &AreaDef, family: &NormFamily, budget: usize, seed: u64) -> Result<QSearch> {
    let count = q_sample_count(family, budget);
    let mut samples = Vec::with_capacity(count);
    for i in 0..count {
        samples.push(q_candidate(a, family, i, count, seed)?);
    }
    q_finish(a, family, samples, budget)
}

/// Refines the best of already evaluated candidates.
pub fn q_finish(a: &AreaDef, family: &NormFamily, samples: Vec<QSample>, budget: usize) -> Result<QSearch> {
    let best = q_best(&samples).ok_or_else(|| Error::Parameter("q-search needs at least one sample".into()))?;
    let mut ratio = best.ratio;
    let mut argmin = best.norm.clone();
    let refined_from = ratio;
    let mut evaluations = samples.len();
    let rest = budget.saturating_sub(samples.len());
    if !matches!(family, NormFamily::LpSweep) && rest > 0 {
        if let Shape::Polygon(p) = best.norm.shape() {
            let (v, poly, used) = q_refine(a, &p, rest)?;
            evaluations += used;
            if v < ratio {
                ratio = v;
                argmin = Norm2::Polygon(poly);
            }
        }
    }
    Ok(QSearch { ratio, argmin, samples, refined_from, evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::shapes::*;

    fn j(a: AreaDef, n: &Norm2) -> f64 {
        jacobian(&a, n).unwrap()
    }

    #[test]
    fn spec_examples() {
        let sup = Norm2::sup();
        assert!((j(AreaDef::Busemann, &sup) - PI / 4.0).abs() < 1e-14);
        assert!((j(AreaDef::HolmesThompson, &sup) - 2.0 / PI).abs() < 1e-14);
        assert!((j(AreaDef::InscribedRiemannian, &sup) - 1.0).abs() < 1e-6);
        for a in AreaDef::CLASSICAL {
            assert!((j(a, &Norm2::euclid()) - 1.0).abs() < 1e-9);
        }
        let hex = Norm2::Polygon(hexagon());
        assert!((j(AreaDef::MassStar, &hex) - 2.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!((q_ratio(&AreaDef::MassStar, &hex).unwrap() - 3f64.sqrt() / 2.0).abs() < 1e-4);
        assert!((q_ratio(&AreaDef::Busemann, &sup).unwrap() - PI / 4.0).abs() < 1e-6);
    }

    #[test]
    fn non_norms() {
        let d = Norm2::degenerate(crate::geom::Vec2::new(1.0, 0.0), 1.0);
        assert_eq!(j(AreaDef::Busemann, &d), 0.0);
        assert!(q_ratio(&AreaDef::Busemann, &d).is_err());
    }

    #[test]
    fn lp_richardson() {
        // inscribed polygonization error shrinks under vertex doubling
        let n = Norm2::lp(3.0);
        let s = n.shape();
        let coarse = polygon_jacobian(&AreaDef::Busemann, &s.polygon(128).unwrap()).unwrap();
        let fine = polygon_jacobian(&AreaDef::Busemann, &s.polygon(256).unwrap()).unwrap();
        let finer = polygon_jacobian(&AreaDef::Busemann, &s.polygon(512).unwrap()).unwrap();
        assert!((fine - finer).abs() < 1e-4);
        assert!((fine - finer).abs() < (coarse - fine).abs());
    }

    #[test]
    fn combination_weights() {
        assert!(AreaDef::combination(alloc::vec![(0.5, AreaDef::Busemann)]).is_err());
        let c = AreaDef::combination(alloc::vec![(0.5, AreaDef::Busemann), (0.5, AreaDef::HolmesThompson)]).unwrap();
        let v = j(c, &Norm2::sup());
        assert!((v - 0.5 * (PI / 4.0 + 2.0 / PI)).abs() < 1e-14);
    }
}
