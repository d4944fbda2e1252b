//! The single-shot commands. Each returns the JSON report that `main`
//! prints.

use std::path::Path;

use crate::core_error;
use anyhow::{anyhow, Context, Result};
use nal_core::area::{jacobian, q_candidate, q_finish, q_sample_count};
use nal_core::norm::POLYGON_RESOLUTION;
use nal_core::{InducedArea, Norm2};
use rayon::prelude::*;
use serde_json::Value;

use crate::output::{num, nums, object};
use crate::spec::{parse_area, parse_energy, parse_family, parse_norm};

/// `n` polygonized at `resolution` half-vertices when it is analytic.
fn at_resolution(n: Norm2, resolution: Option<usize>) -> Result<Norm2> {
    match (resolution, &n) {
        (Some(r), Norm2::Lp(_) | Norm2::Composed(..) | Norm2::Scaled(..)) => {
            let p = n.polygon(r).ok_or_else(|| anyhow!("cannot polygonize a degenerate seminorm"))?;
            Ok(Norm2::Polygon(p))
        }
        _ => Ok(n),
    }
}

pub fn norm_json(n: &Norm2) -> Value {
    match n {
        Norm2::Polygon(p) => object([("half_vertices", Value::Array(p.half_vertices().iter().map(|v| nums(&[v.x, v.y])).collect()))]),
        _ => Value::String(format!("{n:?}")),
    }
}

pub fn jacobian_cmd(norm: &str, area: &str, resolution: Option<usize>) -> Result<Value> {
    let n = at_resolution(parse_norm(norm)?, resolution)?;
    let a = parse_area(area)?;
    let j = jacobian(&a, &n).map_err(core_error)?;
    Ok(object([
        ("norm", Value::from(norm)),
        ("area", Value::from(a.name())),
        ("jacobian", num(j)),
        ("resolution", Value::from(resolution.unwrap_or(POLYGON_RESOLUTION))),
    ]))
}

pub fn induced_cmd(norm: &str, energy: &str, resolution: usize) -> Result<Value> {
    let n = parse_norm(norm)?;
    let ind = InducedArea::with_resolution(parse_energy(energy)?, resolution).map_err(core_error)?;
    let o = ind.orbit(&n).map_err(core_error)?;
    Ok(object([
        ("energy", Value::from(energy)),
        ("norm", Value::from(norm)),
        ("jhat", num(o.value)),
        ("lambda", num(ind.lambda())),
        ("induced", num(o.induced)),
        ("minimizer", nums(&o.minimizer.m)),
        ("theta", num(o.theta)),
        ("lam", num(o.lambda)),
        ("certified_bracket", num(o.diagnostics.bracket)),
        ("resolution", Value::from(o.diagnostics.resolution)),
        ("lambda_max", num(o.diagnostics.lambda_max)),
        ("evaluations", Value::from(o.diagnostics.evaluations)),
        ("at_boundary", Value::from(o.diagnostics.at_boundary)),
        ("minimal_norm", norm_json(&o.minimal_norm)),
    ]))
}

/// Candidates are evaluated in parallel; the reduction is by value, ties by
/// index. With `csv` set, every candidate is written there.
pub fn qmu_cmd(area: &str, family: &str, budget: usize, seed: u64, csv: Option<&Path>) -> Result<Value> {
    let a = parse_area(area)?;
    let fam = parse_family(family)?;
    let count = q_sample_count(&fam, budget);
    let samples =
        (0..count).into_par_iter().map(|i| q_candidate(&a, &fam, i, count, seed)).collect::<Result<Vec<_>, _>>().map_err(core_error)?;
    let search = q_finish(&a, &fam, samples, budget).map_err(core_error)?;
    if let Some(path) = csv {
        let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
        w.write_record(["parameter", "q_ratio", "jacobian", "inscribed"])?;
        for s in &search.samples {
            w.write_record([s.param, s.ratio, s.jacobian, s.inscribed].map(|x| format!("{:.11e}", x)))?;
        }
        w.flush()?;
    }
    Ok(object([
        ("area", Value::from(a.name())),
        ("family", Value::from(fam.name())),
        ("budget", Value::from(budget)),
        ("seed", Value::from(seed)),
        ("samples", Value::from(search.samples.len())),
        ("evaluations", Value::from(search.evaluations)),
        ("sampled_min", num(search.refined_from)),
        ("inf", num(search.ratio)),
        ("argmin", norm_json(&search.argmin)),
    ]))
}

/// Convex-body overlay of a polygonized norm ball.
pub fn figure_cmd(norm: &str, resolution: Option<usize>) -> Result<String> {
    let n = parse_norm(norm)?;
    let p = n.polygon(resolution.unwrap_or(POLYGON_RESOLUTION)).ok_or_else(|| anyhow!("{norm} is not a norm"))?;
    crate::svg::convex_figure(&p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(v: &Value, k: &str) -> f64 {
        v[k].as_f64().unwrap()
    }

    #[test]
    fn jacobian_examples() {
        assert!((field(&jacobian_cmd("sup", "busemann", None).unwrap(), "jacobian") - std::f64::consts::FRAC_PI_4).abs() < 1e-4);
        assert!((field(&jacobian_cmd("euclid", "mass-star", None).unwrap(), "jacobian") - 1.0).abs() < 1e-4);
        assert!((field(&jacobian_cmd("ellipse:1,0,1", "inscribed", None).unwrap(), "jacobian") - 1.0).abs() < 1e-6);
        let coarse = field(&jacobian_cmd("lp:3", "ht", Some(16)).unwrap(), "jacobian");
        let fine = field(&jacobian_cmd("lp:3", "ht", None).unwrap(), "jacobian");
        assert!(coarse != fine && (coarse - fine).abs() < 1e-2);
    }

    #[test]
    fn induced_examples() {
        let v = induced_cmd("euclid", "dirichlet", 64).unwrap();
        assert!((field(&v, "induced") - 1.0).abs() < 1e-9 && field(&v, "lambda") == 0.5);
        let v = induced_cmd("sup", "reshetnyak", 64).unwrap();
        assert!((field(&v, "induced") - 1.0).abs() < 1e-4);
        assert_eq!(v["minimizer"].as_array().unwrap().len(), 4);
    }
}
