//! Boundary-curve files: one target point per line, coordinates separated by
//! whitespace or commas, `#` starts a comment. The polygon is closed
//! implicitly; a repeated first point at the end is dropped.

use std::path::Path;

use anyhow::{bail, Context, Result};

pub fn parse_boundary(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut points: Vec<Vec<f64>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let p = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<f64>().with_context(|| format!("line {}: bad coordinate {t:?}", i + 1)))
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = points.first() {
            if first.len() != p.len() {
                bail!("line {}: expected {} coordinates, found {}", i + 1, first.len(), p.len());
            }
        }
        points.push(p);
    }
    if points.len() > 1 && points.first() == points.last() {
        points.pop();
    }
    if points.len() < 3 {
        bail!("a boundary curve needs at least three points");
    }
    Ok(points)
}

pub fn read_boundary(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_boundary(&text).with_context(|| format!("parsing {}", path.display()))
}

/// `[-1,1]²` traversed counterclockwise from `(1,1)`.
pub fn unit_square() -> Vec<Vec<f64>> {
    vec![vec![1.0, 1.0], vec![-1.0, 1.0], vec![-1.0, -1.0], vec![1.0, -1.0]]
}

/// Regular `m`-gon inscribed in the unit circle of the first two coordinates
/// of `Rⁿ`.
pub fn circle(m: usize, n: usize) -> Vec<Vec<f64>> {
    (0..m)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
            let mut p = vec![0.0; n];
            p[0] = t.cos();
            p[1] = t.sin();
            p
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_commas_and_closing_point() {
        let pts = parse_boundary("# square\n1 1\n-1, 1\n\n-1 -1\n1 -1\n1 1\n").unwrap();
        assert_eq!(pts, unit_square());
        assert!(parse_boundary("1 1\n2 2 2\n3 3").is_err());
        assert!(parse_boundary("1 1\n2 x").is_err());
        assert!(parse_boundary("1 1\n2 2").is_err());
    }
}
