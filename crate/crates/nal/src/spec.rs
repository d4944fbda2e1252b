//! Parsers for the textual norm, area, energy, target and family specs.

use anyhow::{anyhow, bail, Context, Result};
use nal_core::plateau::NormedTarget;
use nal_core::polygon::shapes;
use nal_core::{AreaDef, EnergyDef, InducedArea, LinearMap2, Norm2, NormFamily, Polygon, Vec2};

fn number(s: &str) -> Result<f64> {
    let s = s.trim();
    match s {
        "inf" | "infinity" | "∞" => Ok(f64::INFINITY),
        _ => s.parse::<f64>().with_context(|| format!("not a number: {s:?}")),
    }
}

fn numbers(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(number).collect()
}

/// `x1,y1;x2,y2;...`
fn points(s: &str) -> Result<Vec<Vec2>> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| match numbers(p)?.as_slice() {
            [x, y] => Ok(Vec2::new(*x, *y)),
            _ => bail!("expected a point x,y, got {p:?}"),
        })
        .collect()
}

/// Norm specs:
/// `euclid`, `sup`, `l1`, `lp:P`, `ellipse:a,b,c` (matrix `[[a,b],[b,c]]`),
/// `square`, `hexagon`, `regular:M` (regular 2M-gon), `polygon:x,y;...`
/// (symmetric hull of the points and their negatives) and `dual:x,y;...`
/// (`max |⟨y_j,·⟩|`), plus `compose:SPEC|m11,m12,m21,m22` and
/// `scale:SPEC|k`.
pub fn parse_norm(s: &str) -> Result<Norm2> {
    if let Some((inner, tail)) = s.trim().rsplit_once('|') {
        let (head, base) = split(inner);
        let base = parse_norm(base.ok_or_else(|| anyhow!("{head} needs a base norm"))?)?;
        return match (head, numbers(tail)?.as_slice()) {
            ("compose", [a, b, c, d]) => Ok(base.compose(&LinearMap2::new(*a, *b, *c, *d))),
            ("scale", [k]) if *k > 0.0 => Ok(base.scaled(*k)),
            ("scale", [_]) => bail!("scale factor must be positive"),
            _ => bail!("unknown norm spec {s:?}"),
        };
    }
    let (head, arg) = split(s);
    let n = match (head, arg) {
        ("euclid" | "euclidean" | "l2", None) => Norm2::euclid(),
        ("sup" | "linf", None) => Norm2::sup(),
        ("l1", None) => Norm2::lp(1.0),
        ("lp", Some(p)) => {
            let p = number(p)?;
            if !(p >= 1.0) {
                bail!("lp needs p ≥ 1, got {p}");
            }
            Norm2::lp(p)
        }
        ("ellipse", Some(a)) => match numbers(a)?.as_slice() {
            [a, b, c] if *a > 0.0 && a * c - b * b > 0.0 => Norm2::ellipse(*a, *b, *c),
            [_, _, _] => bail!("ellipse matrix must be positive definite"),
            _ => bail!("ellipse needs three entries a,b,c"),
        },
        ("square", None) => Norm2::Polygon(shapes::square()),
        ("hexagon", None) => Norm2::Polygon(shapes::hexagon()),
        ("regular", Some(m)) => {
            let m: usize = m.trim().parse().context("regular:M needs an integer")?;
            if m < 2 {
                bail!("regular:M needs M ≥ 2");
            }
            Norm2::Polygon(shapes::regular(m, 1.0, 0.0))
        }
        ("polygon", Some(p)) => {
            let mut pts = points(p)?;
            let neg: Vec<Vec2> = pts.iter().map(|&v| -v).collect();
            pts.extend(neg);
            Norm2::Polygon(Polygon::hull(&pts).map_err(|e| anyhow!("{e}"))?)
        }
        ("dual", Some(p)) => Norm2::Polygon(Polygon::from_dual_points(&points(p)?).map_err(|e| anyhow!("{e}"))?),
        _ => bail!("unknown norm spec {s:?}"),
    };
    Ok(n)
}

/// Area specs: `busemann`, `ht`, `mass-star`, `inscribed`, `induced:ENERGY`,
/// or a convex combination `w*AREA+w*AREA`.
pub fn parse_area(s: &str) -> Result<AreaDef> {
    let s = s.trim();
    if s.contains('+') && !s.starts_with("induced:") {
        let parts = s
            .split('+')
            .map(|part| {
                let (w, a) = part.split_once('*').ok_or_else(|| anyhow!("combination terms look like w*area, got {part:?}"))?;
                Ok((number(w)?, parse_area(a)?))
            })
            .collect::<Result<Vec<_>>>()?;
        return AreaDef::combination(parts).map_err(|e| anyhow!("{e}"));
    }
    let (head, arg) = split(s);
    Ok(match (head, arg) {
        ("busemann", None) => AreaDef::Busemann,
        ("ht" | "holmes-thompson", None) => AreaDef::HolmesThompson,
        ("mass-star" | "mass*", None) => AreaDef::MassStar,
        ("inscribed" | "inscribed-riemannian", None) => AreaDef::InscribedRiemannian,
        ("induced", Some(e)) => AreaDef::Induced(Box::new(InducedArea::new(parse_energy(e)?).map_err(|e| anyhow!("{e}"))?)),
        _ => bail!("unknown area spec {s:?}"),
    })
}

/// Energy specs: `dirichlet` (also `ks`), `reshetnyak`, `combo:a,b,c,AREA`.
pub fn parse_energy(s: &str) -> Result<EnergyDef> {
    let (head, arg) = split(s.trim());
    Ok(match (head, arg) {
        ("dirichlet" | "ks" | "korevaar-schoen", None) => EnergyDef::KorevaarSchoen,
        ("reshetnyak", None) => EnergyDef::Reshetnyak,
        ("combo", Some(rest)) => {
            let mut it = rest.splitn(4, ',');
            let mut w = [0.0; 3];
            for x in &mut w {
                *x = number(it.next().ok_or_else(|| anyhow!("combo needs a,b,c,area"))?)?;
            }
            let area = parse_area(it.next().unwrap_or("inscribed"))?;
            EnergyDef::combo(w[0], w[1], w[2], area).map_err(|e| anyhow!("{e}"))?
        }
        _ => bail!("unknown energy spec {s:?}"),
    })
}

/// Target specs: `euclid[:N]`, `sup[:N]`, `lp:P[:N]`,
/// `poly:a11,...,a1N;a21,...` (functionals, dimension from their length).
pub fn parse_target(s: &str) -> Result<NormedTarget> {
    let (head, arg) = split(s.trim());
    let dim = |a: Option<&str>| -> Result<usize> {
        a.map_or(Ok(2), |d| d.trim().parse::<usize>().context("target dimension must be an integer"))
    };
    let t = match (head, arg) {
        ("euclid" | "euclidean", a) => NormedTarget::euclidean(dim(a)?),
        ("sup" | "linf", a) => NormedTarget::sup(dim(a)?),
        ("lp", Some(rest)) => {
            let (p, d) = match rest.split_once(':') {
                Some((p, d)) => (p, Some(d)),
                None => (rest, None),
            };
            NormedTarget::lp(dim(d)?, number(p)?)
        }
        ("poly", Some(rest)) => {
            let f = rest.split(';').filter(|r| !r.trim().is_empty()).map(numbers).collect::<Result<Vec<_>>>()?;
            let n = f.first().map_or(0, |a| a.len());
            NormedTarget::polyhedral(n, f)
        }
        _ => bail!("unknown target spec {s:?}"),
    };
    t.map_err(|e| anyhow!("{e}"))
}

/// Family specs: `random[:K]`, `lp`, `square` (`perturbed-square`),
/// `hexagon` (`perturbed-hexagon`); `any` is `random:8`.
pub fn parse_family(s: &str) -> Result<NormFamily> {
    let (head, arg) = split(s.trim());
    Ok(match (head, arg) {
        ("random", k) => {
            let k = k.map_or(Ok(8), |k| k.trim().parse::<usize>()).context("random:K needs an integer")?;
            if k < 2 {
                bail!("random polygons need K ≥ 2 half-vertices");
            }
            NormFamily::RandomPolygons { k }
        }
        ("any", None) => NormFamily::RandomPolygons { k: 8 },
        ("lp" | "lp-sweep", None) => NormFamily::LpSweep,
        ("square" | "perturbed-square", None) => NormFamily::PerturbedSquare,
        ("hexagon" | "perturbed-hexagon", None) => NormFamily::PerturbedHexagon,
        _ => bail!("unknown family spec {s:?}"),
    })
}

fn split(s: &str) -> (&str, Option<&str>) {
    match s.split_once(':') {
        Some((h, a)) => (h.trim(), Some(a)),
        None => (s.trim(), None),
    }
}
