//! The `verify` suite: the closed-form constants of the theory, each checked
//! numerically at pinned default resolutions.

use std::f64::consts::PI;
use std::fmt::Write;
use std::time::Instant;

use crate::core_error;
use anyhow::{anyhow, Result};
use nal_core::area::{q_ratio, q_search};
use nal_core::induced::{minimal_quasiconformality, ORBIT_RESOLUTION};
use nal_core::polygon::shapes;
use nal_core::{AreaDef, EnergyDef, InducedArea, Norm2, NormFamily};
use rayon::prelude::*;
use serde_json::Value;

use crate::output::{num, object};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `|computed − expected| ≤ tolerance`
    Equal,
    /// `computed ≥ expected − tolerance`
    AtLeast,
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub group: &'static str,
    pub claim: &'static str,
    pub relation: Relation,
    pub expected: f64,
    pub computed: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub runtime: f64,
    pub details: Value,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Runtimes break byte-identical output, so they are opt-in.
    pub fn to_json(&self, timings: bool) -> Value {
        let checks = self
            .checks
            .iter()
            .map(|c| {
                let mut v = object([
                    ("name", Value::from(c.name)),
                    ("group", Value::from(c.group)),
                    ("claim", Value::from(c.claim)),
                    ("relation", Value::from(if c.relation == Relation::Equal { "equal" } else { "at-least" })),
                    ("expected", num(c.expected)),
                    ("computed", num(c.computed)),
                    ("tolerance", num(c.tolerance)),
                    ("pass", Value::from(c.pass)),
                    ("details", c.details.clone()),
                ]);
                if timings {
                    v["runtime_s"] = num(c.runtime);
                }
                v
            })
            .collect();
        object([("pass", Value::from(self.all_pass())), ("checks", Value::Array(checks))])
    }

    pub fn table(&self) -> String {
        let mut s = format!("{:<28} {:>16} {:>16} {:>9} {:>8}  result\n", "check", "expected", "computed", "tol", "time/s");
        for c in &self.checks {
            let rel = if c.relation == Relation::AtLeast { "≥" } else { " " };
            let _ = writeln!(
                s,
                "{:<28} {rel}{:>15.10} {:>16.10} {:>9.1e} {:>8.2}  {}",
                c.name,
                c.expected,
                c.computed,
                c.tolerance,
                c.runtime,
                if c.pass { "ok" } else { "FAIL" }
            );
        }
        s
    }
}

/// Seed of every randomized check.
pub const SUITE_SEED: u64 = 20240917;

struct Spec {
    name: &'static str,
    group: &'static str,
    claim: &'static str,
    relation: Relation,
    tolerance: f64,
    /// `(expected, computed, details)`
    run: fn() -> Result<(f64, f64, Value)>,
}

fn core<T>(r: nal_core::Result<T>) -> Result<T> {
    r.map_err(core_error)
}

fn eq(name: &'static str, group: &'static str, claim: &'static str, tolerance: f64, run: fn() -> Result<(f64, f64, Value)>) -> Spec {
    Spec { name, group, claim, relation: Relation::Equal, tolerance, run }
}

fn specs() -> Vec<Spec> {
    vec![
        eq("lambda-dirichlet", "lambda", "the Dirichlet energy induces area with factor 1/2", 1e-6, || {
            Ok((0.5, core(InducedArea::new(EnergyDef::KorevaarSchoen))?.lambda(), Value::Null))
        }),
        eq("lambda-reshetnyak", "lambda", "the Reshetnyak energy induces area with factor 1", 1e-6, || {
            Ok((1.0, core(InducedArea::new(EnergyDef::Reshetnyak))?.lambda(), Value::Null))
        }),
        eq("induced-sup-reshetnyak", "induced", "the Reshetnyak-induced Jacobian of the sup norm is 1", 1e-4, || {
            Ok((1.0, core(core(InducedArea::new(EnergyDef::Reshetnyak))?.jacobian(&Norm2::sup()))?, Value::Null))
        }),
        eq("induced-is-inscribed", "induced", "the Reshetnyak-induced area is the inscribed Riemannian area", 2e-4, || {
            let ind = core(InducedArea::new(EnergyDef::Reshetnyak))?;
            let family = NormFamily::RandomPolygons { k: 12 };
            let worst = (0..20)
                .into_par_iter()
                .map(|i| -> Result<f64> {
                    let (_, n) = core(family.sample(i, 20, SUITE_SEED))?;
                    let ji = core(nal_core::area::jacobian(&AreaDef::InscribedRiemannian, &n))?;
                    Ok((core(ind.jacobian(&n))? - ji).abs() / ji.max(1.0))
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            Ok((0.0, worst, object([("norms", Value::from(20))])))
        }),
        eq("q-busemann-square", "q", "q of the Busemann area is π/4, attained by the square", 1e-6, || {
            Ok((PI / 4.0, core(q_ratio(&AreaDef::Busemann, &Norm2::Polygon(shapes::square())))?, Value::Null))
        }),
        eq("q-ht-square", "q", "q of the Holmes-Thompson area is 2/π, attained by the square", 1e-4, || {
            Ok((2.0 / PI, core(q_ratio(&AreaDef::HolmesThompson, &Norm2::Polygon(shapes::square())))?, Value::Null))
        }),
        eq("q-mass-star-hexagon", "q", "q of the mass* area is √3/2, attained by the regular hexagon", 1e-4, || {
            Ok((3f64.sqrt() / 2.0, core(q_ratio(&AreaDef::MassStar, &Norm2::Polygon(shapes::hexagon())))?, Value::Null))
        }),
        eq("q-inscribed", "q", "q of the inscribed Riemannian area is 1", 1e-9, || {
            let s = core(q_search(&AreaDef::InscribedRiemannian, &NormFamily::RandomPolygons { k: 8 }, 40, SUITE_SEED))?;
            Ok((1.0, s.ratio, Value::Null))
        }),
        Spec {
            name: "q-search-busemann",
            group: "q",
            claim: "no sampled norm beats π/4 for the Busemann area",
            relation: Relation::AtLeast,
            tolerance: 1e-3,
            run: || {
                let s = core(q_search(&AreaDef::Busemann, &NormFamily::PerturbedSquare, 200, SUITE_SEED))?;
                Ok((PI / 4.0, s.ratio, object([("evaluations", Value::from(s.evaluations))])))
            },
        },
        eq("qc-square-minimal", "qc", "the Reshetnyak-minimal square is √2-quasiconformal", 1e-3, || {
            Ok((2f64.sqrt(), core(minimal_quasiconformality(&EnergyDef::Reshetnyak, &Norm2::sup()))?, Value::Null))
        }),
        Spec {
            name: "jd-sup-distinct",
            group: "jd",
            claim: "the Dirichlet-induced Jacobian of the sup norm differs from Busemann and Holmes-Thompson",
            relation: Relation::AtLeast,
            tolerance: 0.0,
            run: || {
                let ind = core(InducedArea::with_resolution(EnergyDef::KorevaarSchoen, ORBIT_RESOLUTION))?;
                let o = core(ind.orbit(&Norm2::sup()))?;
                let bracket = ind.lambda() * o.diagnostics.bracket;
                let distance = (o.induced - PI / 4.0).abs().min((o.induced - 2.0 / PI).abs());
                let details = object([("value", num(o.induced)), ("bracket", num(bracket))]);
                Ok((10.0 * bracket, distance, details))
            },
        },
    ]
}

pub fn check_names() -> Vec<&'static str> {
    specs().iter().map(|s| s.name).collect()
}

/// Runs the checks whose group or name equals `only`, or all of them.
pub fn run_suite(only: Option<&str>) -> Result<VerifyReport> {
    let selected: Vec<Spec> = specs().into_iter().filter(|s| only.is_none_or(|f| s.group == f || s.name == f)).collect();
    if selected.is_empty() {
        return Err(anyhow!("no check matches {:?}", only.unwrap_or("")));
    }
    let checks = selected
        .into_par_iter()
        .map(|s| {
            let start = Instant::now();
            let (expected, computed, details) = (s.run)()?;
            let pass = match s.relation {
                Relation::Equal => (computed - expected).abs() <= s.tolerance,
                Relation::AtLeast => computed >= expected - s.tolerance,
            };
            Ok(Check {
                name: s.name,
                group: s.group,
                claim: s.claim,
                relation: s.relation,
                expected,
                computed,
                tolerance: s.tolerance,
                pass,
                runtime: start.elapsed().as_secs_f64(),
                details,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filter_selects_a_group() {
        let r = run_suite(Some("lambda")).unwrap();
        assert_eq!(r.checks.len(), 2);
        assert!(r.all_pass(), "{}", r.table());
        assert!(run_suite(Some("nothing")).is_err());
    }
}
