//! The `plateau` command: minimize, check the minimizer, probe it with inner
//! variations.

use std::path::PathBuf;
use std::sync::Arc;

use crate::core_error;
use anyhow::{anyhow, Result};
use nal_core::norm::{quasiconformality_shape, CIRCLE_SAMPLES};
use nal_core::plateau::verify::INIT_JITTER;
use nal_core::plateau::*;
use nal_core::{AreaDef, InducedArea};
use rayon::prelude::*;
use serde_json::Value;

use crate::boundary::{circle, read_boundary, unit_square};
use crate::output::{num, object};
use crate::spec::{parse_energy, parse_target};

#[derive(Clone, Debug)]
pub struct PlateauArgs {
    pub target: String,
    /// `square`, `circle[:M]` or a boundary file. `circle` alone places one
    /// point per boundary slot of the mesh.
    pub boundary: String,
    pub energy: String,
    pub mesh_level: usize,
    /// `0` starts from the radial extension itself, other seeds from a
    /// jittered copy. Also seeds the inner-variation trials.
    pub seed: u64,
    pub trials: usize,
    pub max_iterations: Option<usize>,
    pub svg: Option<PathBuf>,
}

pub struct PlateauRun {
    pub report: Value,
    /// Minimizer converged and the mesh resolves every sharp corner of the
    /// boundary curve.
    pub converged: bool,
}

fn curve_points(spec: &str, dim: usize, slots: usize) -> Result<Vec<Vec<f64>>> {
    let pad = |pts: Vec<Vec<f64>>| {
        pts.into_iter()
            .map(|mut p| {
                p.resize(dim, 0.0);
                p
            })
            .collect()
    };
    match spec.split_once(':').map_or((spec, None), |(h, a)| (h, Some(a))) {
        ("square", None) => Ok(pad(unit_square())),
        ("circle", m) => {
            let m = m.map_or(Ok(slots), |m| m.parse::<usize>()).map_err(|_| anyhow!("circle:M needs an integer"))?;
            if m < 3 {
                return Err(anyhow!("circle:M needs M ≥ 3"));
            }
            Ok(circle(m, dim))
        }
        _ => read_boundary(std::path::Path::new(spec)),
    }
}

pub fn plateau_cmd(args: &PlateauArgs) -> Result<PlateauRun> {
    let target = parse_target(&args.target)?;
    let e = parse_energy(&args.energy)?;
    let mesh = Arc::new(build_mesh(args.mesh_level).map_err(core_error)?);
    let curve = Arc::new(Curve::new(curve_points(&args.boundary, target.dim, mesh.boundary.len())?).map_err(core_error)?);
    if curve.points()[0].len() != target.dim {
        return Err(anyhow!("boundary points have {} coordinates, target has {}", curve.points()[0].len(), target.dim));
    }
    let resolved = curve.corners(CORNER_ANGLE).len() <= mesh.boundary.len();
    if !resolved {
        log::warn!("{} sharp corners but only {} boundary slots", curve.corners(CORNER_ANGLE).len(), mesh.boundary.len());
    }
    let mut init = DiscMap::radial(mesh.clone(), target.clone(), curve.clone()).map_err(core_error)?;
    if args.seed != 0 {
        init = init.jittered(INIT_JITTER * curve.length(), args.seed);
    }
    let mut opts = MinimizeOptions::default();
    if let Some(m) = args.max_iterations {
        opts.max_iterations = m;
    }
    let run = minimize_energy(&init, &e, &opts).map_err(core_error)?;
    let u = &run.map;
    let lemma = verify_main_lemma(u, &e).map_err(core_error)?;
    let iv = inner_variation_test(u, &e, args.trials, args.seed).map_err(core_error)?;
    let induced = AreaDef::Induced(Box::new(InducedArea::new(e.clone()).map_err(core_error)?));
    let defs = [
        ("busemann", AreaDef::Busemann),
        ("ht", AreaDef::HolmesThompson),
        ("mass-star", AreaDef::MassStar),
        ("inscribed", AreaDef::InscribedRiemannian),
        ("induced", induced),
    ];
    let areas =
        defs.par_iter().map(|(name, a)| map_area(u, a).map(|v| (*name, num(v)))).collect::<Result<Vec<_>, _>>().map_err(core_error)?;
    if let Some(path) = &args.svg {
        let qc: Vec<f64> = (0..u.mesh.triangles.len())
            .into_par_iter()
            .map(|t| {
                let s = u.seminorm(t);
                if s.is_norm() {
                    quasiconformality_shape(&s, CIRCLE_SAMPLES)
                } else {
                    f64::INFINITY
                }
            })
            .collect();
        std::fs::write(path, crate::svg::plateau_figure(u, &qc))?;
    }
    let converged = run.converged && resolved;
    let report = object([
        ("energy_def", Value::from(args.energy.as_str())),
        ("target", Value::from(args.target.as_str())),
        ("boundary", Value::from(args.boundary.as_str())),
        ("mesh_level", Value::from(args.mesh_level)),
        ("seed", Value::from(args.seed)),
        ("energy", num(run.energy)),
        ("initial_energy", num(run.initial_energy)),
        ("area_by_def", object(areas)),
        ("lambda", num(lemma.lambda)),
        ("gap", num(lemma.gap)),
        ("minimal_fraction", num(lemma.minimal_fraction)),
        ("isotropy_fraction", num(lemma.isotropy_fraction)),
        ("mean_aspect", num(lemma.mean_aspect)),
        ("qc_max", num(lemma.qc_max)),
        ("qc_raw_max", num(lemma.qc_raw_max)),
        ("collapsed_fraction", num(lemma.collapsed_fraction)),
        (
            "inner_variation",
            object([("worst_decrease", num(iv.worst_decrease)), ("trials", Value::from(iv.trials)), ("skipped", Value::from(iv.skipped))]),
        ),
        ("iterations", Value::from(run.iterations)),
        ("boundary_resolved", Value::from(resolved)),
        ("converged", Value::from(converged)),
    ]);
    Ok(PlateauRun { report, converged })
}
