//! Inner variations `u ↦ u∘ψ` by a linear stretch on a small disc glued to
//! its conformal extension.

use core::f64::consts::PI;
#[allow(unused_imports)] // inherent once std is linked
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{interpolate_param, map_energy, wrap, DiscMap};
use crate::energy::EnergyDef;
use crate::error::{Error, Result};
use crate::geom::Vec2;

/// Trials whose disc reaches beyond this radius are skipped.
pub const VARIATION_REACH: f64 = 0.95;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Trial {
    pub center: Vec2,
    pub radius: f64,
    /// Direction of stretch.
    pub theta: f64,
    /// Stretch factor `λ ≥ 1`.
    pub lambda: f64,
}

impl Trial {
    fn coefficients(&self) -> (f64, f64) {
        let l = self.lambda;
        (0.5 * (l + 1.0 / l), 0.5 * (l - 1.0 / l))
    }

    /// `ψ(z) = z₀ + (c·w + d·e^{2iθ}·w̄)/c` for `|w| ≤ r`, and
    /// `z₀ + (c·w + d·e^{2iθ}·r²/w)/c` outside, with `w = z − z₀`.
    pub fn apply(&self, z: Vec2) -> Vec2 {
        let (c, d) = self.coefficients();
        if d == 0.0 {
            return z;
        }
        let w = z - self.center;
        let r2 = self.radius * self.radius;
        let n2 = w.norm_sq();
        // w̄ and r²/w = r²·w̄/|w|² share a direction
        let k = if n2 <= r2 { 1.0 } else { r2 / n2 };
        let conj = Vec2::new(w.x, -w.y).scale(k);
        let (s, co) = (2.0 * self.theta).sin_cos();
        let rot = Vec2::new(co * conj.x - s * conj.y, s * conj.x + co * conj.y);
        self.center + w + rot.scale(d / c)
    }
}

#[derive(Clone, Debug)]
pub struct VariationReport {
    /// `max E(u) − E(u∘ψ)` over the trials run.
    pub worst_decrease: f64,
    pub worst_trial: Option<Trial>,
    pub energy: f64,
    pub trials: usize,
    pub skipped: usize,
    pub seed: u64,
}

/// `u∘ψ` for the trial map; anchors and pinned corners keep their
/// parameters.
pub fn compose(u: &DiscMap, trial: &Trial) -> DiscMap {
    precompose(u, |z| trial.apply(z), false)
}

/// `u∘ψ` resampled at the mesh vertices, for `ψ` mapping the closed disc to
/// itself. Boundary slots take the parameter at the polar angle of their
/// image; frozen slots move too only when `move_frozen` is set. Vertices
/// that `ψ` fixes exactly keep their images exactly.
pub fn precompose(u: &DiscMap, psi: impl Fn(Vec2) -> Vec2, move_frozen: bool) -> DiscMap {
    let mesh = &u.mesh;
    let n = u.dim();
    let l = u.curve.length();
    let mut out = u.clone();
    for (v, &p) in mesh.vertices.iter().enumerate() {
        let q = psi(p);
        if q == p {
            continue;
        }
        match mesh.boundary_slot(v) {
            Some(s) => {
                if move_frozen || !u.frozen[s] {
                    out.params[s] = interpolate_param(mesh, &u.params, l, q.angle());
                }
            }
            None => {
                let (t, w) = mesh.locate(q);
                let tri = mesh.triangles[t];
                for k in 0..n {
                    out.images[v * n + k] = (0..3).map(|i| w[i] * u.images[tri[i] * n + k]).sum();
                }
            }
        }
    }
    let before = out.params.clone();
    if move_frozen {
        // unwrap so the parameters increase along the loop
        for s in 1..out.params.len() {
            let prev = out.params[s - 1];
            out.params[s] = prev + wrap(out.params[s] - prev, l);
        }
    } else {
        super::minimize::project_params(&mut out.params, &out.frozen, l);
    }
    for (s, &v) in mesh.boundary.iter().enumerate() {
        if out.params[s] != u.params[s] || before[s] != u.params[s] {
            let (g, _) = u.curve.eval(out.params[s]);
            out.images[v * n..(v + 1) * n].copy_from_slice(&g);
        }
    }
    out
}

/// `E(u) − E(u∘ψ)` for one trial.
pub fn variation_decrease(u: &DiscMap, e: &EnergyDef, trial: &Trial) -> Result<f64> {
    Ok(map_energy(u, e)? - map_energy(&compose(u, trial), e)?)
}

pub fn inner_variation_test(u: &DiscMap, e: &EnergyDef, trials: usize, seed: u64) -> Result<VariationReport> {
    if trials == 0 {
        return Err(Error::Parameter("at least one trial is needed".into()));
    }
    let energy = map_energy(u, e)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VariationReport { worst_decrease: f64::NEG_INFINITY, worst_trial: None, energy, trials: 0, skipped: 0, seed };
    for _ in 0..trials {
        let rho = 0.8 * rng.gen::<f64>().sqrt();
        let phi = 2.0 * PI * rng.gen::<f64>();
        let trial = Trial {
            center: Vec2::polar(phi).scale(rho),
            radius: rng.gen_range(0.05..0.3),
            theta: PI * rng.gen::<f64>(),
            lambda: rng.gen_range(1.0..2.0),
        };
        if trial.center.norm() + 2.0 * trial.radius > VARIATION_REACH {
            log::debug!("skipping inner variation trial {trial:?}: disc too large");
            report.skipped += 1;
            continue;
        }
        let decrease = energy - map_energy(&compose(u, &trial), e)?;
        report.trials += 1;
        if decrease > report.worst_decrease {
            report.worst_decrease = decrease;
            report.worst_trial = Some(trial);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plateau::{build_mesh, NormedTarget};
    use alloc::sync::Arc;

    #[test]
    fn psi_is_continuous_across_the_circle() {
        let t = Trial { center: Vec2::new(0.1, -0.2), radius: 0.3, theta: 0.7, lambda: 1.8 };
        for k in 0..12 {
            let dir = Vec2::polar(0.5 * k as f64);
            let a = t.apply(t.center + dir.scale(0.3 * (1.0 - 1e-12)));
            let b = t.apply(t.center + dir.scale(0.3 * (1.0 + 1e-12)));
            assert!((a - b).norm() < 1e-11);
        }
    }

    #[test]
    fn unit_stretch_changes_nothing() {
        let mesh = Arc::new(build_mesh(3).unwrap());
        let u = DiscMap::linear(mesh, NormedTarget::sup(2).unwrap(), &[[1.0, 0.3], [0.0, 1.0]]).unwrap();
        let t = Trial { center: Vec2::new(0.2, 0.1), radius: 0.2, theta: 1.0, lambda: 1.0 };
        assert_eq!(variation_decrease(&u, &EnergyDef::Reshetnyak, &t).unwrap(), 0.0);
    }

    #[test]
    fn stretched_map_admits_a_decrease() {
        let mesh = Arc::new(build_mesh(4).unwrap());
        let u = DiscMap::linear(mesh, NormedTarget::euclidean(2).unwrap(), &[[2.0, 0.0], [0.0, 0.5]]).unwrap();
        let r = inner_variation_test(&u, &EnergyDef::Reshetnyak, 32, 7).unwrap();
        assert!(r.worst_decrease > 1e-3 * r.energy, "{r:?}");
    }
}
