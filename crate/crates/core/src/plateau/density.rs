//! Per-triangle integrands of the discrete functionals and their gradients
//! with respect to the differential.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // inherent once std is linked
use num_traits::Float;

use super::target::{gram, pull_back, Diff, NormedTarget, TargetNorm, TRIANGLE_RESOLUTION};
use crate::area::{jacobian, jacobian_shape, AreaDef};
use crate::energy::{polygon_sectors, sector_moment, EnergyDef};
use crate::error::Result;
use crate::geom::Vec2;
use crate::polygon::Polygon;

/// `a·I² + b·I₊² + c·J^μ` on the seminorm of each affine piece.
#[derive(Clone, Debug)]
pub struct Integrand {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub area: Option<AreaDef>,
    /// `J^μ` of the target plane, for `dim = 2`.
    plane_jacobian: Option<f64>,
}

impl Integrand {
    pub fn energy(target: &NormedTarget, e: &EnergyDef) -> Result<Self> {
        let (a, b) = e.weights();
        match e.area_term() {
            Some((c, area)) => Self::build(target, a, b, c, Some(area.clone())),
            None => Self::build(target, a, b, 0.0, None),
        }
    }

    /// `J^μ + tie·I₊²`.
    pub fn area(target: &NormedTarget, area: AreaDef, tie: f64) -> Result<Self> {
        Self::build(target, 0.0, tie, 1.0, Some(area))
    }

    fn build(target: &NormedTarget, a: f64, b: f64, c: f64, area: Option<AreaDef>) -> Result<Self> {
        let plane_jacobian = match (&area, target.plane_norm()) {
            (Some(def), Some(n)) if c > 0.0 => Some(jacobian(def, &n)?),
            _ => None,
        };
        Ok(Self { a, b, c, area, plane_jacobian })
    }

    /// Whether the integrand has a max-type term that needs smoothing. The
    /// Dirichlet term is `C¹` for every target kind.
    pub fn is_nonsmooth(&self) -> bool {
        self.b > 0.0
    }

    /// Value on a piece with differential `du`. With `smoothing = Some(p)`
    /// every maximum is replaced by a `p`-norm. The gradient with respect to
    /// `du` is accumulated into `grad` when given.
    pub fn eval(&self, target: &NormedTarget, du: &Diff, smoothing: Option<f64>, mut grad: Option<&mut [[f64; 2]]>) -> Result<f64> {
        let mut v = 0.0;
        if self.a > 0.0 {
            v += self.a * dirichlet_term(target, du, self.a, grad.as_deref_mut());
        }
        if self.b > 0.0 {
            v += self.b * reshetnyak_term(target, du, smoothing, self.b, grad.as_deref_mut());
        }
        if self.c > 0.0 {
            v += self.c * self.area_term(target, du, self.c, grad.as_deref_mut())?;
        }
        Ok(v)
    }

    fn area_term(&self, target: &NormedTarget, du: &Diff, w: f64, grad: Option<&mut [[f64; 2]]>) -> Result<f64> {
        let def = self.area.as_ref().expect("area term without definition");
        if let Some(j) = self.plane_jacobian {
            let det = du[0][0] * du[1][1] - du[0][1] * du[1][0];
            if let Some(g) = grad {
                let s = w * j * det.signum();
                g[0][0] += s * du[1][1];
                g[0][1] -= s * du[1][0];
                g[1][0] -= s * du[0][1];
                g[1][1] += s * du[0][0];
            }
            return Ok(j * det.abs());
        }
        let value = jacobian_shape(def, &target.seminorm(du))?;
        if let Some(g) = grad {
            let scale = du.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-12);
            let h = 1e-6 * scale;
            let mut work: Vec<[f64; 2]> = du.to_vec();
            for i in 0..du.len() {
                for k in 0..2 {
                    work[i][k] = du[i][k] + h;
                    let up = jacobian_shape(def, &target.seminorm(&work))?;
                    work[i][k] = du[i][k] - h;
                    let down = jacobian_shape(def, &target.seminorm(&work))?;
                    work[i][k] = du[i][k];
                    g[i][k] += w * (up - down) / (2.0 * h);
                }
            }
        }
        Ok(value)
    }
}

fn lp_grad_sq(x: &[f64], p: f64, out: &mut [f64]) -> f64 {
    // ∂‖x‖²/∂x_i = 2‖x‖^{2−p} |x_i|^{p−1} sgn x_i
    let m = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if m == 0.0 {
        out.iter_mut().for_each(|o| *o = 0.0);
        return 0.0;
    }
    let s: f64 = x.iter().map(|v| (v.abs() / m).powf(p)).sum();
    let norm = m * s.powf(1.0 / p);
    for (o, v) in out.iter_mut().zip(x) {
        *o = 2.0 * norm * (v.abs() / norm).powf(p - 1.0) * v.signum();
    }
    norm * norm
}

fn dirichlet_term(target: &NormedTarget, du: &Diff, w: f64, grad: Option<&mut [[f64; 2]]>) -> f64 {
    match &target.norm {
        TargetNorm::Euclidean => {
            if let Some(g) = grad {
                for (gi, r) in g.iter_mut().zip(du) {
                    gi[0] += w * 2.0 * r[0];
                    gi[1] += w * 2.0 * r[1];
                }
            }
            gram(du).trace()
        }
        TargetNorm::Polyhedral(f) => {
            let pts: Vec<Vec2> = f.iter().map(|a| pull_back(a, du)).collect();
            let (value, gp) = polyhedral_dirichlet(&pts);
            if let Some(g) = grad {
                for (a, gj) in f.iter().zip(&gp) {
                    for (gi, ai) in g.iter_mut().zip(a) {
                        gi[0] += w * ai * gj.x;
                        gi[1] += w * ai * gj.y;
                    }
                }
            }
            value
        }
        TargetNorm::Lp(p) => {
            let k = TRIANGLE_RESOLUTION;
            let mut x = vec![0.0; du.len()];
            let mut gx = vec![0.0; du.len()];
            let mut total = 0.0;
            let mut grad = grad;
            for u in NormedTarget::sample_directions() {
                for (xi, r) in x.iter_mut().zip(du) {
                    *xi = r[0] * u.x + r[1] * u.y;
                }
                total += lp_grad_sq(&x, *p, &mut gx);
                if let Some(g) = grad.as_deref_mut() {
                    for (gi, d) in g.iter_mut().zip(&gx) {
                        gi[0] += w * 2.0 / k as f64 * d * u.x;
                        gi[1] += w * 2.0 / k as f64 * d * u.y;
                    }
                }
            }
            2.0 * total / k as f64
        }
    }
}

/// `I²` of `v ↦ max_j |⟨b_j, v⟩|` and its gradient in each `b_j`. The
/// integrand is continuous across sector boundaries, so only the moment of
/// each sector contributes: `∂/∂y_k = (2/π) M_k y_k`.
pub fn polyhedral_dirichlet(pts: &[Vec2]) -> (f64, Vec<Vec2>) {
    let mut grads = vec![Vec2::ZERO; pts.len()];
    match Polygon::from_dual_points(pts) {
        Ok(poly) => {
            let mut value = 0.0;
            for (a, b, y) in polygon_sectors(&poly) {
                let m = sector_moment(a, b);
                value += m.quad(y);
                let gy = m.apply(y).scale(2.0 / PI);
                // attribute to the closest generator up to sign
                let mut best = (f64::INFINITY, 0, 1.0);
                for (j, p) in pts.iter().enumerate() {
                    for sign in [1.0, -1.0] {
                        let d = (y - p.scale(sign)).norm_sq();
                        if d < best.0 {
                            best = (d, j, sign);
                        }
                    }
                }
                grads[best.1] = grads[best.1] + gy.scale(best.2);
            }
            (value / PI, grads)
        }
        Err(_) => {
            let (j, n) = pts.iter().enumerate().fold((0, 0.0), |acc, (j, p)| if p.norm_sq() > acc.1 { (j, p.norm_sq()) } else { acc });
            if n > 0.0 {
                grads[j] = pts[j].scale(2.0);
            }
            (n, grads)
        }
    }
}

/// `max_j q_j` or its `p`-smoothing `(Σ q_j^p)^{1/p}` for `q_j ≥ 0`, with
/// the weights `∂/∂q_j`.
fn soft_max(q: &[f64], smoothing: Option<f64>, weights: &mut [f64]) -> f64 {
    let (jmax, m) = q.iter().enumerate().fold((0, 0.0), |acc, (j, v)| if *v > acc.1 { (j, *v) } else { acc });
    weights.iter_mut().for_each(|w| *w = 0.0);
    if m == 0.0 {
        return 0.0;
    }
    match smoothing {
        None => {
            weights[jmax] = 1.0;
            m
        }
        Some(p) => {
            let s: f64 = q.iter().map(|v| (v / m).powf(p)).sum();
            let k = s.powf(1.0 / p - 1.0);
            for (w, v) in weights.iter_mut().zip(q) {
                *w = k * (v / m).powf(p - 1.0);
            }
            m * s.powf(1.0 / p)
        }
    }
}

fn reshetnyak_term(target: &NormedTarget, du: &Diff, smoothing: Option<f64>, w: f64, grad: Option<&mut [[f64; 2]]>) -> f64 {
    match &target.norm {
        TargetNorm::Euclidean => {
            let gm = gram(du);
            let (l1, l2, e1) = gm.eigen();
            let e2 = e1.perp();
            let mut weights = [0.0; 2];
            let v = soft_max(&[l1, l2.max(0.0)], smoothing, &mut weights);
            if let Some(g) = grad {
                // ∂/∂Du = 2 Du (w₁ e₁e₁ᵀ + w₂ e₂e₂ᵀ)
                for (gi, r) in g.iter_mut().zip(du) {
                    let (p1, p2) = (r[0] * e1.x + r[1] * e1.y, r[0] * e2.x + r[1] * e2.y);
                    let c1 = 2.0 * w * weights[0] * p1;
                    let c2 = 2.0 * w * weights[1] * p2;
                    gi[0] += c1 * e1.x + c2 * e2.x;
                    gi[1] += c1 * e1.y + c2 * e2.y;
                }
            }
            v
        }
        TargetNorm::Polyhedral(f) => {
            let pts: Vec<Vec2> = f.iter().map(|a| pull_back(a, du)).collect();
            let q: Vec<f64> = pts.iter().map(|p| p.norm_sq()).collect();
            let mut weights = vec![0.0; q.len()];
            let v = soft_max(&q, smoothing, &mut weights);
            if let Some(g) = grad {
                for ((a, p), wj) in f.iter().zip(&pts).zip(&weights) {
                    if *wj == 0.0 {
                        continue;
                    }
                    for (gi, ai) in g.iter_mut().zip(a) {
                        gi[0] += w * wj * ai * 2.0 * p.x;
                        gi[1] += w * wj * ai * 2.0 * p.y;
                    }
                }
            }
            v
        }
        TargetNorm::Lp(p) => {
            let dirs: Vec<Vec2> = NormedTarget::sample_directions().collect();
            let mut x = vec![0.0; du.len()];
            let mut gx: Vec<Vec<f64>> = Vec::with_capacity(dirs.len());
            let mut q = Vec::with_capacity(dirs.len());
            for u in &dirs {
                for (xi, r) in x.iter_mut().zip(du) {
                    *xi = r[0] * u.x + r[1] * u.y;
                }
                let mut gk = vec![0.0; du.len()];
                q.push(lp_grad_sq(&x, *p, &mut gk));
                gx.push(gk);
            }
            let mut weights = vec![0.0; q.len()];
            let v = soft_max(&q, smoothing, &mut weights);
            if let Some(g) = grad {
                for ((u, gk), wk) in dirs.iter().zip(&gx).zip(&weights) {
                    if *wk == 0.0 {
                        continue;
                    }
                    for (gi, d) in g.iter_mut().zip(gk) {
                        gi[0] += w * wk * d * u.x;
                        gi[1] += w * wk * d * u.y;
                    }
                }
            }
            v
        }
    }
}
