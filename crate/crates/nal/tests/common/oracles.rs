//! Independent slow algorithms the fast solvers are checked against.

use std::f64::consts::PI;

use nal_core::convex::polar_dual;
use nal_core::{Polygon, Vec2};

/// `det A` for the largest ellipse `A(D̄)` inside `b`: Khachiyan's algorithm
/// with Todd–Yildirim away steps for the origin-centred minimum-volume
/// ellipse `{x : xᵀMx ≤ 1}` around the polar dual, then the polar
/// `M^{1/2}(D̄)`.
pub fn loewner_det_by_khachiyan(b: &Polygon) -> f64 {
    let pts: Vec<Vec2> = polar_dual(b).vertices().to_vec();
    let m = pts.len();
    let d = 2.0;
    let mut u = vec![1.0 / m as f64; m];
    for _ in 0..1_000_000 {
        // X = Σ uᵢ xᵢxᵢᵀ, κᵢ = xᵢᵀX⁻¹xᵢ
        let (mut a, mut bb, mut c) = (0.0, 0.0, 0.0);
        for (p, w) in pts.iter().zip(&u) {
            a += w * p.x * p.x;
            bb += w * p.x * p.y;
            c += w * p.y * p.y;
        }
        let det = a * c - bb * bb;
        let kappa: Vec<f64> = pts.iter().map(|p| (c * p.x * p.x - 2.0 * bb * p.x * p.y + a * p.y * p.y) / det).collect();
        let (j, kmax) = kappa.iter().copied().enumerate().fold((0, f64::MIN), |m, (i, k)| if k > m.1 { (i, k) } else { m });
        let (l, kmin) =
            kappa
                .iter()
                .copied()
                .enumerate()
                .filter(|&(i, _)| u[i] > 0.0)
                .fold((0, f64::MAX), |m, (i, k)| if k < m.1 { (i, k) } else { m });
        if kmax <= d * (1.0 + 1e-12) && kmin >= d * (1.0 - 1e-12) {
            // M = X⁻¹/d, det A = sqrt(det M)
            return (1.0 / (det * d * d)).sqrt();
        }
        if kmax - d >= d - kmin {
            let step = (kmax / d - 1.0) / (kmax - 1.0);
            u.iter_mut().for_each(|w| *w *= 1.0 - step);
            u[j] += step;
        } else {
            let step = ((1.0 - kmin / d) / (kmin - 1.0)).min(u[l] / (1.0 - u[l]));
            u.iter_mut().for_each(|w| *w *= 1.0 + step);
            u[l] -= step;
            u[l] = u[l].max(0.0);
        }
    }
    panic!("Khachiyan did not converge");
}

/// Smallest area of a centred parallelogram around `b`. The first normal
/// runs over a 3600-step grid of `[0, π)` and the second over the edge
/// normals of `b`, which contain the best one once the first is fixed. A
/// golden-section search then refines the first normal around the best
/// cells.
pub fn min_parallelogram_area_by_rotation(b: &Polygon) -> f64 {
    const STEPS: usize = 3600;
    let h = |t: f64| b.support(Vec2::polar(t));
    let support: Vec<f64> = (0..STEPS).map(|k| h(PI * k as f64 / STEPS as f64)).collect();
    // for a fixed first normal the best second normal is an edge normal of b
    let normals: Vec<f64> = polar_dual(b).vertices().iter().map(|v| v.angle()).collect();
    let area = |t1: f64, h1: f64| {
        normals
            .iter()
            .map(|&t2| {
                let s = (t2 - t1).sin().abs();
                if s < 1e-12 {
                    f64::INFINITY
                } else {
                    4.0 * h1 * h(t2) / s
                }
            })
            .fold(f64::INFINITY, f64::min)
    };
    let grid: Vec<f64> = (0..STEPS).map(|k| area(PI * k as f64 / STEPS as f64, support[k])).collect();
    let mut cells: Vec<usize> = (0..STEPS).collect();
    cells.sort_by(|&x, &y| grid[x].total_cmp(&grid[y]));
    let step = PI / STEPS as f64;
    let mut best = grid[cells[0]];
    for &k in cells.iter().take(8) {
        let f = |t: f64| area(t, h(t));
        let (mut lo, mut hi) = (k as f64 * step - step, k as f64 * step + step);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let (mut x1, mut x2) = (hi - g * (hi - lo), lo + g * (hi - lo));
        let (mut f1, mut f2) = (f(x1), f(x2));
        while hi - lo > 1e-13 {
            if f1 < f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = f(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = f(x2);
            }
        }
        best = best.min(f1).min(f2);
    }
    best
}
