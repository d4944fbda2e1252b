//! Areas induced by energies: minimizing over the `SL₂`-orbit of a seminorm.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // inherent once std is linked
use num_traits::Float;

use crate::area::jacobian_shape;
use crate::convex::loewner_ellipse;
use crate::energy::{dirichlet, energy_shape, reshetnyak, EnergyDef};
use crate::error::{Error, Result};
use crate::family::NormFamily;
use crate::geom::LinearMap2;
use crate::norm::{quasiconformality_shape, Norm2, Shape, CIRCLE_SAMPLES, POLYGON_RESOLUTION};
use crate::optim::nelder_mead_restarted;

/// Default coarse grid size per axis.
pub const ORBIT_RESOLUTION: usize = 64;
/// Default stretch bound; doubled once when the minimizer lands near it.
pub const LAMBDA_MAX: f64 = 32.0;
/// Simplex diameter at which the refinement from the grid stops.
pub const SIMPLEX_TOL: f64 = 1e-6;
/// Diameter for the final polish of the best refined point. Max-type energies
/// have cone-shaped kinks, so the value error is linear in the diameter.
pub const POLISH_TOL: f64 = 1e-11;

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitDiagnostics {
    pub resolution: usize,
    pub lambda_max: f64,
    pub evaluations: usize,
    /// Drop from the best grid value to the refined value.
    pub bracket: f64,
    /// The minimizer sits within 5% of `lambda_max` even after doubling.
    pub at_boundary: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitResult {
    /// `Ĵ(s) = inf_{SL₂} I(s∘T)`.
    pub value: f64,
    /// The symmetric minimizer `R_θ diag(λ, 1/λ) R_θᵀ`.
    pub minimizer: LinearMap2,
    pub theta: f64,
    pub lambda: f64,
    /// `λ_I·Ĵ(s)` when computed through an [`InducedArea`], else `NaN`.
    pub induced: f64,
    pub minimal_norm: Norm2,
    pub diagnostics: OrbitDiagnostics,
}

/// `(x, y) = log λ · (cos 2θ, sin 2θ)`.
fn chart_to_params(x: f64, y: f64) -> (f64, f64) {
    let r = x.hypot(y);
    if r == 0.0 {
        return (0.0, 1.0);
    }
    let mut theta = 0.5 * y.atan2(x);
    if theta < 0.0 {
        theta += PI;
    }
    if theta >= PI {
        theta -= PI;
    }
    (theta, r.exp())
}

/// Minimizes the energy over the orbit `{s∘T : T ∈ SL₂}`.
pub fn orbit_minimize(e: &EnergyDef, n: &Norm2, resolution: usize) -> Result<OrbitResult> {
    orbit_minimize_shape(e, &n.shape(), n, resolution)
}

pub fn orbit_minimize_shape(e: &EnergyDef, s: &Shape, n: &Norm2, resolution: usize) -> Result<OrbitResult> {
    if resolution < 16 {
        return Err(Error::Parameter(alloc::format!("orbit resolution {resolution} is below 16")));
    }
    let identity = || OrbitResult {
        value: 0.0,
        minimizer: LinearMap2::IDENTITY,
        theta: 0.0,
        lambda: 1.0,
        induced: f64::NAN,
        minimal_norm: n.clone(),
        diagnostics: OrbitDiagnostics { resolution, lambda_max: LAMBDA_MAX, evaluations: 0, bracket: 0.0, at_boundary: false },
    };
    if !s.is_norm() {
        return Ok(identity());
    }
    let (a, b) = e.weights();
    // the area term is SL₂-invariant, hence constant on the orbit
    let constant = match e.area_term() {
        Some((c, area)) => c * jacobian_shape(area, s)?,
        None => 0.0,
    };
    let mut failure: Option<Error> = None;
    let mut evaluations = 0usize;
    let mut objective = |x: f64, y: f64| -> f64 {
        evaluations += 1;
        let t = LinearMap2::exp_traceless(x, y);
        let c = s.compose(&t);
        let mut v = constant;
        if a > 0.0 {
            match dirichlet(&c) {
                Ok(d) => v += a * d,
                Err(err) => {
                    failure.get_or_insert(err);
                    return f64::INFINITY;
                }
            }
        }
        if b > 0.0 {
            v += b * reshetnyak(&c);
        }
        v
    };

    let mut lambda_max = LAMBDA_MAX;
    let mut doubled = false;
    let (best_x, best_v, grid_best) = loop {
        let log_max = lambda_max.ln();
        let m = resolution;
        let mut cells: Vec<(f64, usize, f64, f64)> = Vec::with_capacity(m * m);
        for i in 0..m {
            let theta = PI * i as f64 / m as f64;
            for j in 0..m {
                let r = log_max * j as f64 / (m - 1) as f64;
                let (x, y) = (r * (2.0 * theta).cos(), r * (2.0 * theta).sin());
                cells.push((objective(x, y), i * m + j, x, y));
            }
        }
        cells.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)));
        let grid_best = cells[0].0;
        let step = log_max / (m - 1) as f64;
        let mut best: Option<(Vec<f64>, f64)> = None;
        for cell in cells.iter().take(3) {
            let res = nelder_mead_restarted(|p| objective(p[0], p[1]), &[cell.2, cell.3], step, SIMPLEX_TOL, 4000);
            if best.as_ref().map_or(true, |(_, v)| res.value < *v) {
                best = Some((res.x, res.value));
            }
        }
        let (x, v) = best.expect("three refinement starts");
        let polished = nelder_mead_restarted(|p| objective(p[0], p[1]), &x, 1e-4, POLISH_TOL, 4000);
        let (x, v) = if polished.value <= v { (polished.x, polished.value) } else { (x, v) };
        let r = x[0].hypot(x[1]);
        if !doubled && r >= 0.95 * log_max {
            lambda_max *= 2.0;
            doubled = true;
            continue;
        }
        break (x, v, grid_best);
    };
    if let Some(err) = failure {
        return Err(err);
    }
    let (theta, lambda) = chart_to_params(best_x[0], best_x[1]);
    let at_boundary = lambda.ln() >= 0.95 * lambda_max.ln();
    if at_boundary {
        log::warn!("orbit minimizer at λ = {lambda:.3} is close to the bound {lambda_max}");
    }
    let minimizer = LinearMap2::exp_traceless(best_x[0], best_x[1]);
    Ok(OrbitResult {
        value: best_v,
        minimizer,
        theta,
        lambda,
        induced: f64::NAN,
        minimal_norm: n.compose(&minimizer),
        diagnostics: OrbitDiagnostics { resolution, lambda_max, evaluations, bracket: (grid_best - best_v).max(0.0), at_boundary },
    })
}

/// The area `μ^I` induced by an energy, with `λ_I = 1/Ĵ(s₀)` computed once.
#[derive(Clone, Debug, PartialEq)]
pub struct InducedArea {
    energy: EnergyDef,
    lambda: f64,
    resolution: usize,
}

impl InducedArea {
    pub fn new(energy: EnergyDef) -> Result<Self> {
        Self::with_resolution(energy, ORBIT_RESOLUTION)
    }

    pub fn with_resolution(energy: EnergyDef, resolution: usize) -> Result<Self> {
        let s0 = Norm2::euclid();
        let r = orbit_minimize(&energy, &s0, resolution)?;
        Ok(Self { energy, lambda: 1.0 / r.value, resolution })
    }

    pub fn energy(&self) -> &EnergyDef {
        &self.energy
    }

    /// `λ_I`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn orbit(&self, n: &Norm2) -> Result<OrbitResult> {
        let mut r = orbit_minimize(&self.energy, n, self.resolution)?;
        r.induced = self.lambda * r.value;
        Ok(r)
    }

    pub fn jacobian(&self, n: &Norm2) -> Result<f64> {
        self.jacobian_shape(&n.shape())
    }

    pub fn jacobian_shape(&self, s: &Shape) -> Result<f64> {
        if !s.is_norm() {
            return Ok(0.0);
        }
        let n = shape_norm(s);
        Ok(self.lambda * orbit_minimize_shape(&self.energy, s, &n, self.resolution)?.value)
    }
}

pub(crate) fn shape_norm(s: &Shape) -> Norm2 {
    match s {
        Shape::Zero => Norm2::Zero,
        Shape::RankOne(w) => Norm2::degenerate(*w, 1.0),
        Shape::Ellipse(m) => Norm2::Ellipse(*m),
        Shape::Polygon(p) => Norm2::Polygon(p.clone()),
        Shape::Analytic(n) => n.clone(),
    }
}

/// `J^I(s) = λ_I · Ĵ(s)`; prefer [`InducedArea`] when evaluating many norms.
pub fn induced_jacobian(e: &EnergyDef, n: &Norm2) -> Result<f64> {
    InducedArea::new(e.clone())?.jacobian(n)
}

/// Whether `I(s) ≤ Ĵ(s)·(1 + tol)`, with the violation `I(s) − Ĵ(s)`.
pub fn is_minimal(e: &EnergyDef, n: &Norm2, tol: f64) -> Result<(bool, f64)> {
    if !(tol > 0.0) {
        return Err(Error::Parameter("minimality tolerance must be positive".into()));
    }
    let s = n.shape();
    let own = energy_shape(e, &s)?;
    let jhat = orbit_minimize_shape(e, &s, n, ORBIT_RESOLUTION)?.value;
    Ok((own <= jhat * (1.0 + tol), own - jhat))
}

#[derive(Clone, Debug)]
pub struct QiEstimate {
    pub max: f64,
    pub argmax: Norm2,
    pub samples: usize,
}

/// Largest quasiconformality constant among the `I`-minimal representatives
/// of a seeded family.
pub fn estimate_qi(e: &EnergyDef, family: &NormFamily, budget: usize, seed: u64) -> Result<QiEstimate> {
    let count = budget.max(1);
    let mut best = QiEstimate { max: 1.0, argmax: Norm2::euclid(), samples: 0 };
    for i in 0..count {
        let (_, n) = family.sample(i, count, seed)?;
        let q = minimal_quasiconformality(e, &n)?;
        best.samples += 1;
        if q > best.max {
            best.max = q;
            best.argmax = n;
        }
    }
    Ok(best)
}

/// Quasiconformality of the orbit minimizer of `n`.
pub fn minimal_quasiconformality(e: &EnergyDef, n: &Norm2) -> Result<f64> {
    let r = orbit_minimize(e, n, ORBIT_RESOLUTION)?;
    Ok(quasiconformality_shape(&r.minimal_norm.shape(), CIRCLE_SAMPLES))
}

/// Tolerance on the Loewner aspect ratio for isotropy.
pub const ISOTROPY_TOL: f64 = 1e-6;

/// Loewner aspect ratio of the unit ball, and whether it is within
/// [`ISOTROPY_TOL`] of 1.
pub fn isotropy_check(n: &Norm2) -> Result<(bool, f64)> {
    let aspect = loewner_aspect(&n.shape())?;
    Ok((aspect <= 1.0 + ISOTROPY_TOL, aspect))
}

pub fn loewner_aspect(s: &Shape) -> Result<f64> {
    match s {
        Shape::Ellipse(m) => {
            let (l1, l2) = m.eigenvalues();
            Ok((l1 / l2).sqrt())
        }
        Shape::Polygon(p) => Ok(loewner_ellipse(p)?.aspect()),
        Shape::Analytic(_) => {
            let p = s.polygon(POLYGON_RESOLUTION).ok_or_else(|| Error::Domain("unit ball is unbounded".into()))?;
            Ok(loewner_ellipse(&p)?.aspect())
        }
        Shape::Zero | Shape::RankOne(_) => Err(Error::Domain("isotropy is only defined for norms".into())),
    }
}
