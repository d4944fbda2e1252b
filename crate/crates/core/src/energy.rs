//! Conformally invariant energies of seminorms.

use alloc::boxed::Box;
use core::f64::consts::PI;
#[allow(unused_imports)] // inherent once std is linked
use num_traits::Float;

use crate::area::AreaDef;
use crate::error::{Error, Result};
use crate::geom::{Sym2, Vec2};
use crate::norm::{Norm2, Shape, CIRCLE_SAMPLES};
use crate::optim::{adaptive_simpson, periodic_extremum};
use crate::polygon::Polygon;

/// An energy on seminorms of R².
#[derive(Clone, Debug, PartialEq)]
pub enum EnergyDef {
    /// `I²(s) = (1/π) ∫_{S¹} s(v)² dv`, normalized so that `I²(s₀) = 2`.
    KorevaarSchoen,
    /// `I₊²(s) = sup_{S¹} s²`.
    Reshetnyak,
    /// `a·I² + b·I₊² + c·J^μ`.
    Combo { a: f64, b: f64, c: f64, area: Box<AreaDef> },
}

impl EnergyDef {
    pub fn combo(a: f64, b: f64, c: f64, area: AreaDef) -> Result<Self> {
        for (name, w) in [("a", a), ("b", b), ("c", c)] {
            if !(w >= 0.0 && w.is_finite()) {
                return Err(Error::Parameter(alloc::format!("combo weight {name} = {w} must be finite and nonnegative")));
            }
        }
        if a + b <= 0.0 {
            return Err(Error::Parameter("combo energy needs a + b > 0; an area alone is not an energy".into()));
        }
        Ok(EnergyDef::Combo { a, b, c, area: Box::new(area) })
    }

    /// The energy `k·I`.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::Parameter(alloc::format!("energy scale {k} must be positive")));
        }
        match self {
            EnergyDef::KorevaarSchoen => EnergyDef::combo(k, 0.0, 0.0, AreaDef::Busemann),
            EnergyDef::Reshetnyak => EnergyDef::combo(0.0, k, 0.0, AreaDef::Busemann),
            EnergyDef::Combo { a, b, c, area } => EnergyDef::combo(k * a, k * b, k * c, (**area).clone()),
        }
    }

    /// Weights `(a, b)` of `I²` and `I₊²`.
    pub fn weights(&self) -> (f64, f64) {
        match self {
            EnergyDef::KorevaarSchoen => (1.0, 0.0),
            EnergyDef::Reshetnyak => (0.0, 1.0),
            EnergyDef::Combo { a, b, .. } => (*a, *b),
        }
    }

    /// The area term `c·J^μ`, if present.
    pub fn area_term(&self) -> Option<(f64, &AreaDef)> {
        match self {
            EnergyDef::Combo { c, area, .. } if *c > 0.0 => Some((*c, area)),
            _ => None,
        }
    }
}

/// Evaluates the energy of a seminorm.
pub fn energy(e: &EnergyDef, n: &Norm2) -> Result<f64> {
    energy_shape(e, &n.shape())
}

pub fn energy_shape(e: &EnergyDef, s: &Shape) -> Result<f64> {
    let (a, b) = e.weights();
    let mut total = 0.0;
    if a > 0.0 {
        total += a * dirichlet(s)?;
    }
    if b > 0.0 {
        total += b * reshetnyak(s);
    }
    if let Some((c, area)) = e.area_term() {
        total += c * crate::area::jacobian_shape(area, s)?;
    }
    Ok(total)
}

/// `∫_a^b v vᵀ dθ` for `v = (cos θ, sin θ)`.
pub fn sector_moment(a: f64, b: f64) -> Sym2 {
    let d = b - a;
    let s = ((2.0 * b).sin() - (2.0 * a).sin()) / 4.0;
    let m = ((2.0 * a).cos() - (2.0 * b).cos()) / 4.0;
    Sym2::new(d / 2.0 + s, m, d / 2.0 - s)
}

/// Angular span of every edge of `p` paired with its dual vertex: on the cone
/// over edge `i` the gauge is `⟨yᵢ, ·⟩`.
pub fn polygon_sectors(p: &Polygon) -> impl Iterator<Item = (f64, f64, Vec2)> + '_ {
    let ang = p.vertex_angles();
    let n = ang.len();
    p.dual_vertices().iter().enumerate().map(move |(i, y)| {
        let a = ang[i];
        let b = if i + 1 < n { ang[i + 1] } else { ang[0] + 2.0 * PI };
        (a, b, *y)
    })
}

fn polygon_dirichlet(p: &Polygon) -> f64 {
    polygon_sectors(p).map(|(a, b, y)| sector_moment(a, b).quad(y)).sum::<f64>() / PI
}

/// `I²` of a seminorm shape.
pub fn dirichlet(s: &Shape) -> Result<f64> {
    Ok(match s {
        Shape::Zero => 0.0,
        Shape::RankOne(w) => w.norm_sq(),
        Shape::Ellipse(m) => m.trace(),
        Shape::Polygon(p) => polygon_dirichlet(p),
        Shape::Analytic(n) => {
            let f = |t: f64| {
                let g = n.gauge(Vec2::polar(t));
                g * g
            };
            let (v, ok) = adaptive_simpson(f, 0.0, PI, 1e-11);
            if !ok {
                return Err(Error::Numerical { what: "Dirichlet quadrature did not converge".into(), residual: 1e-11 });
            }
            2.0 * v / PI
        }
    })
}

/// `I₊²` of a seminorm shape.
pub fn reshetnyak(s: &Shape) -> f64 {
    match s {
        Shape::Zero => 0.0,
        Shape::RankOne(w) => w.norm_sq(),
        Shape::Ellipse(m) => m.eigenvalues().0,
        Shape::Polygon(p) => p.dual_vertices().iter().map(|y| y.norm_sq()).fold(0.0, f64::max),
        Shape::Analytic(n) => {
            let (_, v) = periodic_extremum(|t| n.gauge(Vec2::polar(t)), CIRCLE_SAMPLES, true);
            v * v
        }
    }
}

/// Smallest `k` with `I/k ≤ I₊² ≤ k·I` on every sample.
pub fn comparability_constant(e: &EnergyDef, samples: &[Norm2]) -> Result<f64> {
    let mut k: f64 = 1.0;
    for n in samples {
        let s = n.shape();
        let i = energy_shape(e, &s)?;
        let r = reshetnyak(&s);
        if i > 0.0 && r > 0.0 {
            k = k.max(i / r).max(r / i);
        }
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::LinearMap2;

    fn ks(n: &Norm2) -> f64 {
        energy(&EnergyDef::KorevaarSchoen, n).unwrap()
    }

    #[test]
    fn spec_examples() {
        assert!((ks(&Norm2::euclid()) - 2.0).abs() < 1e-14);
        assert!((energy(&EnergyDef::Reshetnyak, &Norm2::sup()).unwrap() - 1.0).abs() < 1e-14);
        assert!((ks(&Norm2::sup()) - (1.0 + 2.0 / PI)).abs() < 1e-12);
        let d = Norm2::euclid().compose(&LinearMap2::diag(1.5, 0.25));
        assert!((ks(&d) - (2.25 + 0.0625)).abs() < 1e-12);
    }

    #[test]
    fn polygon_sectors_agree_with_quadrature() {
        let p = crate::polygon::shapes::regular(5, 1.3, 0.2);
        let n = Norm2::Polygon(p.clone());
        let (q, ok) = adaptive_simpson(|t| n.gauge(Vec2::polar(t)).powi(2), 0.0, 2.0 * PI, 1e-12);
        assert!(ok);
        assert!((polygon_dirichlet(&p) - q / PI).abs() < 1e-9);
    }

    #[test]
    fn analytic_matches_polygon_path_for_l1() {
        // p just above 1 goes through quadrature
        let near = ks(&Norm2::lp(1.0 + 1e-9));
        assert!((near - ks(&Norm2::lp(1.0))).abs() < 1e-6);
    }

    #[test]
    fn comparability_examples() {
        let s0 = [Norm2::euclid()];
        assert_eq!(comparability_constant(&EnergyDef::Reshetnyak, &[Norm2::sup()]).unwrap(), 1.0);
        assert!((comparability_constant(&EnergyDef::KorevaarSchoen, &s0).unwrap() - 2.0).abs() < 1e-14);
        let e = EnergyDef::combo(0.0, 2.0, 0.0, AreaDef::Busemann).unwrap();
        assert!((comparability_constant(&e, &[Norm2::sup()]).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn combo_validation() {
        assert!(EnergyDef::combo(0.0, 0.0, 1.0, AreaDef::Busemann).is_err());
        assert!(EnergyDef::combo(-1.0, 1.0, 0.0, AreaDef::Busemann).is_err());
    }
}
