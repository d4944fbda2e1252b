//! Per-triangle diagnostics of minimality and the energy/area comparison.

use alloc::boxed::Box;
use alloc::vec::Vec;
#[allow(unused_imports)] // inherent once std is linked
use num_traits::Float;

use super::minimize::{minimize_energy, minimize_integrand, MinimizeOptions, Minimized};
use super::{map_area, map_energy, DiscMap, Integrand};
use crate::area::AreaDef;
use crate::energy::{energy_shape, EnergyDef};
use crate::error::Result;
use crate::induced::{loewner_aspect, orbit_minimize_shape, shape_norm, InducedArea, ORBIT_RESOLUTION};
use crate::norm::{quasiconformality_shape, CIRCLE_SAMPLES};

/// Relative tolerance of the per-triangle minimality test.
pub const MINIMALITY_TOL: f64 = 1e-3;
/// Loewner aspect up to which a triangle counts as isotropic.
pub const ASPECT_TOL: f64 = 1.05;
/// Area fraction excluded from the essential supremum of the distortion.
pub const QC_EXCLUDED_AREA: f64 = 0.05;

#[derive(Clone, Debug)]
pub struct MainLemmaReport {
    pub energy: f64,
    /// `Area_{μ^I}(u)`.
    pub area: f64,
    pub lambda: f64,
    /// `λ_I·E_I(u) − Area_{μ^I}(u)`.
    pub gap: f64,
    /// Area-weighted fraction of triangles whose seminorm is `I`-minimal.
    pub minimal_fraction: f64,
    /// Area-weighted fraction of triangles with Loewner aspect at most
    /// [`ASPECT_TOL`].
    pub isotropy_fraction: f64,
    pub mean_aspect: f64,
    /// Smallest `Q` such that triangles of distortion above `Q` cover at most
    /// [`QC_EXCLUDED_AREA`] of the disc.
    pub qc_max: f64,
    pub qc_raw_max: f64,
    /// Area fraction of triangles with rank-deficient differential.
    pub collapsed_fraction: f64,
}

pub fn verify_main_lemma(u: &DiscMap, e: &EnergyDef) -> Result<MainLemmaReport> {
    let induced = InducedArea::new(e.clone())?;
    let lambda = induced.lambda();
    let energy = map_energy(u, e)?;
    let area = map_area(u, &AreaDef::Induced(Box::new(induced)))?;
    let total = u.mesh.total_area();
    let (mut minimal, mut isotropic, mut aspect_sum, mut collapsed) = (0.0, 0.0, 0.0, 0.0);
    let mut qc: Vec<(f64, f64)> = Vec::with_capacity(u.mesh.triangles.len());
    for t in 0..u.mesh.triangles.len() {
        let w = u.mesh.area(t);
        let s = u.seminorm(t);
        if !s.is_norm() {
            collapsed += w;
            qc.push((f64::INFINITY, w));
            continue;
        }
        let own = energy_shape(e, &s)?;
        let jhat = orbit_minimize_shape(e, &s, &shape_norm(&s), ORBIT_RESOLUTION)?.value;
        if own <= jhat * (1.0 + MINIMALITY_TOL) {
            minimal += w;
        }
        let aspect = loewner_aspect(&s)?;
        aspect_sum += w * aspect;
        if aspect <= ASPECT_TOL {
            isotropic += w;
        }
        qc.push((quasiconformality_shape(&s, CIRCLE_SAMPLES), w));
    }
    qc.sort_by(|a, b| a.0.total_cmp(&b.0));
    let qc_raw_max = qc.last().map_or(1.0, |q| q.0);
    let mut covered = 0.0;
    let mut qc_max = qc_raw_max;
    for &(q, w) in &qc {
        covered += w;
        if covered >= (1.0 - QC_EXCLUDED_AREA) * total {
            qc_max = q;
            break;
        }
    }
    let live = total - collapsed;
    Ok(MainLemmaReport {
        energy,
        area,
        lambda,
        gap: lambda * energy - area,
        minimal_fraction: minimal / total,
        isotropy_fraction: isotropic / total,
        mean_aspect: if live > 0.0 { aspect_sum / live } else { f64::INFINITY },
        qc_max,
        qc_raw_max,
        collapsed_fraction: collapsed / total,
    })
}

#[derive(Clone, Debug)]
pub struct CompareReport {
    pub seeds: Vec<u64>,
    /// One energy minimization per seed.
    pub energy_runs: Vec<Minimized>,
    /// `Area_{μ^I}` of each energy minimizer.
    pub energy_areas: Vec<f64>,
    /// Index of the lowest-energy run.
    pub best: usize,
    pub area_run: Minimized,
    /// `Area_{μ^I}` of the direct area minimizer.
    pub area_minimum: f64,
    /// `Area_{μ^I}(best energy minimizer) − area_minimum`.
    pub difference: f64,
    pub relative: f64,
    pub converged: bool,
}

/// Weight of the Reshetnyak tie-breaker in the direct area objective.
pub const AREA_TIE: f64 = 1e-6;

/// Amplitude of the interior jitter of seeded inits, relative to the curve
/// length.
pub const INIT_JITTER: f64 = 5e-3;

/// Minimizes `E_I` from the jittered inits `init.jittered(seed)` and the
/// tie-broken `Area_{μ^I}` from `init` itself, then compares `μ^I`-areas.
pub fn compare_energy_vs_area_minimizer(init: &DiscMap, e: &EnergyDef, seeds: &[u64], opts: &MinimizeOptions) -> Result<CompareReport> {
    let induced = AreaDef::Induced(Box::new(InducedArea::new(e.clone())?));
    let amplitude = INIT_JITTER * init.curve.length();
    let mut energy_runs = Vec::with_capacity(seeds.len());
    let mut energy_areas = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let start = if seeds.len() == 1 { init.clone() } else { init.jittered(amplitude, seed) };
        let run = minimize_energy(&start, e, opts)?;
        energy_areas.push(map_area(&run.map, &induced)?);
        energy_runs.push(run);
    }
    let best = (0..energy_runs.len()).min_by(|&i, &j| energy_runs[i].energy.total_cmp(&energy_runs[j].energy)).unwrap_or(0);
    let objective = Integrand::area(&init.target, induced.clone(), AREA_TIE)?;
    let area_run = minimize_integrand(init, &objective, opts)?;
    let area_minimum = map_area(&area_run.map, &induced)?;
    let reference = energy_areas.get(best).copied().unwrap_or(f64::NAN);
    let converged = area_run.converged && energy_runs.iter().all(|r| r.converged);
    Ok(CompareReport {
        seeds: seeds.to_vec(),
        energy_runs,
        energy_areas,
        best,
        area_run,
        area_minimum,
        difference: reference - area_minimum,
        relative: (reference - area_minimum) / area_minimum,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plateau::{build_mesh, NormedTarget};
    use alloc::sync::Arc;

    #[test]
    fn isotropic_linear_map_is_minimal() {
        let mesh = Arc::new(build_mesh(3).unwrap());
        let u = DiscMap::linear(mesh, NormedTarget::sup(2).unwrap(), &[[0.8, -0.6], [0.6, 0.8]]).unwrap();
        let r = verify_main_lemma(&u, &EnergyDef::Reshetnyak).unwrap();
        assert_eq!(r.minimal_fraction, 1.0);
        assert_eq!(r.isotropy_fraction, 1.0);
        assert!(r.gap.abs() < 1e-6 * r.energy, "{r:?}");
        assert!((r.qc_max - 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn stretched_linear_map_has_a_gap() {
        let mesh = Arc::new(build_mesh(3).unwrap());
        let u = DiscMap::linear(mesh, NormedTarget::sup(2).unwrap(), &[[2.0, 0.0], [0.0, 0.5]]).unwrap();
        let r = verify_main_lemma(&u, &EnergyDef::Reshetnyak).unwrap();
        assert!(r.gap > 0.5 * r.energy);
        assert_eq!(r.minimal_fraction, 0.0);
        assert_eq!(r.isotropy_fraction, 0.0);
    }
}
