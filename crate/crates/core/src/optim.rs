//! Small dense optimizers and quadrature used throughout the crate.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // inherent once std is linked
use num_traits::Float;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a minimum of `f` on `[a, b]`; returns `(x, f(x))`.
pub fn golden_min(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Golden-section search for a maximum.
pub fn golden_max(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (x, v) = golden_min(|t| -f(t), a, b, tol);
    (x, -v)
}

/// Extremum of a `2π`-periodic function: dense equi-angular scan, then
/// golden-section refinement on the arc bracketing the best sample. The
/// result is never worse than the best sample.
pub fn periodic_extremum(f: impl Fn(f64) -> f64, samples: usize, maximize: bool) -> (f64, f64) {
    let n = samples.max(3);
    let h = 2.0 * core::f64::consts::PI / n as f64;
    let sign = if maximize { 1.0 } else { -1.0 };
    let mut best = (0.0, f64::NEG_INFINITY);
    for k in 0..n {
        let t = h * k as f64;
        let v = sign * f(t);
        if v > best.1 {
            best = (t, v);
        }
    }
    let (t, v) = golden_max(|t| sign * f(t), best.0 - h, best.0 + h, 1e-13);
    if v > best.1 {
        best = (t, v);
    }
    (best.0, sign * best.1)
}

/// Outcome of a Nelder–Mead run.
#[derive(Clone, Debug)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Nelder–Mead with standard coefficients. Stops when the simplex diameter
/// drops below `xtol` or after `max_evals` evaluations.
pub fn nelder_mead(mut f: impl FnMut(&[f64]) -> f64, x0: &[f64], step: f64, xtol: f64, max_evals: usize) -> SimplexResult {
    let n = x0.len();
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    pts.push(x0.to_vec());
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += step;
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| f(p)).collect();
    let mut evals = n + 1;
    let mut converged = false;
    let mut order: Vec<usize> = (0..=n).collect();
    while evals < max_evals {
        order.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap_or(core::cmp::Ordering::Equal));
        let best = order[0];
        let worst = order[n];
        let second = order[n - 1];
        let diam = pts.iter().map(|p| p.iter().zip(&pts[best]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)).fold(0.0, f64::max);
        if diam < xtol {
            converged = true;
            break;
        }
        let mut centroid = vec![0.0; n];
        for &i in order.iter().take(n) {
            for k in 0..n {
                centroid[k] += pts[i][k] / n as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> { (0..n).map(|k| centroid[k] + t * (pts[worst][k] - centroid[k])).collect() };
        let xr = along(-1.0);
        let fr = f(&xr);
        evals += 1;
        if fr < vals[best] {
            let xe = along(-2.0);
            let fe = f(&xe);
            evals += 1;
            if fe < fr {
                pts[worst] = xe;
                vals[worst] = fe;
            } else {
                pts[worst] = xr;
                vals[worst] = fr;
            }
        } else if fr < vals[second] {
            pts[worst] = xr;
            vals[worst] = fr;
        } else {
            let (xc, fc) = if fr < vals[worst] {
                let xc = along(-0.5);
                let fc = f(&xc);
                (xc, fc)
            } else {
                let xc = along(0.5);
                let fc = f(&xc);
                (xc, fc)
            };
            evals += 1;
            if fc < vals[worst].min(fr) {
                pts[worst] = xc;
                vals[worst] = fc;
            } else {
                let xb = pts[best].clone();
                for &i in order.iter().skip(1) {
                    for k in 0..n {
                        pts[i][k] = xb[k] + 0.5 * (pts[i][k] - xb[k]);
                    }
                    vals[i] = f(&pts[i]);
                    evals += 1;
                }
            }
        }
    }
    let best = (0..=n).min_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap_or(core::cmp::Ordering::Equal)).unwrap();
    SimplexResult { x: pts[best].clone(), value: vals[best], evaluations: evals, converged }
}

/// Nelder–Mead restarted from its own optimum with a fresh simplex until a
/// restart no longer improves the value. Restarts unstick the simplex on the
/// kinks of max-type objectives.
pub fn nelder_mead_restarted(mut f: impl FnMut(&[f64]) -> f64, x0: &[f64], step: f64, xtol: f64, max_evals: usize) -> SimplexResult {
    let mut res = nelder_mead(&mut f, x0, step, xtol, max_evals);
    let mut total = res.evaluations;
    let mut restart_step = step;
    for _ in 0..12 {
        if total >= max_evals {
            break;
        }
        restart_step = (restart_step * 0.5).max(10.0 * xtol);
        let again = nelder_mead(&mut f, &res.x, restart_step, xtol, max_evals - total);
        total += again.evaluations;
        let improved = again.value < res.value - 1e-15 * res.value.abs().max(1e-300);
        if again.value <= res.value {
            res = SimplexResult { evaluations: total, ..again };
        }
        if !improved {
            break;
        }
    }
    res.evaluations = total;
    res
}

/// Adaptive Simpson quadrature to absolute tolerance `tol`. Returns the
/// estimate and whether every panel met its tolerance.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, bool) {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32, ok: &mut bool) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        if depth == 0 {
            *ok = false;
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, ok) + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, ok)
    }
    // split into panels first so that narrow features are not skipped
    let panels = 16;
    let h = (b - a) / panels as f64;
    let mut ok = true;
    let mut total = 0.0;
    for k in 0..panels {
        let (x0, x1) = (a + h * k as f64, a + h * (k + 1) as f64);
        let xm = 0.5 * (x0 + x1);
        let (f0, fm, f1) = (f(x0), f(xm), f(x1));
        let whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        total += rec(&f, x0, x1, f0, fm, f1, whole, tol / panels as f64, 40, &mut ok);
    }
    (total, ok)
}

/// Settings for [`lbfgs`].
#[derive(Clone, Debug)]
pub struct LbfgsOptions {
    pub memory: usize,
    pub max_iters: usize,
    /// Stop when the relative decrease over `window` iterations is below this.
    pub rel_decrease: f64,
    pub window: usize,
    pub grad_tol: f64,
}

impl Default for LbfgsOptions {
    fn default() -> Self {
        Self { memory: 12, max_iters: 5000, rel_decrease: 1e-10, window: 50, grad_tol: 1e-12 }
    }
}

#[derive(Clone, Debug)]
pub struct LbfgsResult {
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub line_search_failed: bool,
}

/// Limited-memory BFGS with Armijo backtracking. `project` is applied after
/// every accepted step; when it moves the iterate the curvature memory is
/// discarded. The best iterate is left in `x`.
pub fn lbfgs(
    mut fg: impl FnMut(&[f64], &mut [f64]) -> f64,
    mut project: impl FnMut(&mut [f64]) -> bool,
    x: &mut [f64],
    opts: &LbfgsOptions,
) -> LbfgsResult {
    let n = x.len();
    project(x);
    let mut g = vec![0.0; n];
    let mut fx = fg(x, &mut g);
    let mut s_hist: Vec<Vec<f64>> = Vec::new();
    let mut y_hist: Vec<Vec<f64>> = Vec::new();
    let mut rho_hist: Vec<f64> = Vec::new();
    let mut history: Vec<f64> = vec![fx];
    let mut d = vec![0.0; n];
    let mut xn = vec![0.0; n];
    let mut gn = vec![0.0; n];
    let mut alpha_buf = Vec::new();
    let mut converged = false;
    let mut ls_failed = false;
    let mut iters = 0;
    while iters < opts.max_iters {
        iters += 1;
        let gnorm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if gnorm <= opts.grad_tol {
            converged = true;
            break;
        }
        // two-loop recursion
        d.copy_from_slice(&g);
        alpha_buf.clear();
        for i in (0..s_hist.len()).rev() {
            let a = rho_hist[i] * dot(&s_hist[i], &d);
            alpha_buf.push(a);
            axpy(-a, &y_hist[i], &mut d);
        }
        if let (Some(s), Some(y)) = (s_hist.last(), y_hist.last()) {
            let gamma = dot(s, y) / dot(y, y);
            d.iter_mut().for_each(|v| *v *= gamma);
        } else {
            let k = 1.0 / gnorm.max(1e-300);
            d.iter_mut().for_each(|v| *v *= k * 1e-2);
        }
        for (j, i) in (0..s_hist.len()).enumerate() {
            let a = alpha_buf[s_hist.len() - 1 - j];
            let b = rho_hist[i] * dot(&y_hist[i], &d);
            axpy(a - b, &s_hist[i], &mut d);
        }
        d.iter_mut().for_each(|v| *v = -*v);
        let mut slope = dot(&g, &d);
        if slope >= 0.0 {
            for (di, gi) in d.iter_mut().zip(&g) {
                *di = -*gi * 1e-2 / gnorm.max(1e-300);
            }
            slope = dot(&g, &d);
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
        }
        let mut step = 1.0;
        let mut accepted = false;
        let mut fn_ = fx;
        let mut projected = false;
        for _ in 0..50 {
            for i in 0..n {
                xn[i] = x[i] + step * d[i];
            }
            projected = project(&mut xn);
            fn_ = fg(&xn, &mut gn);
            if fn_.is_finite() && fn_ <= fx + 1e-4 * step * slope {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            ls_failed = true;
            break;
        }
        let mut s = vec![0.0; n];
        let mut y = vec![0.0; n];
        for i in 0..n {
            s[i] = xn[i] - x[i];
            y[i] = gn[i] - g[i];
        }
        x.copy_from_slice(&xn);
        g.copy_from_slice(&gn);
        fx = fn_;
        if projected {
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
        } else {
            let sy = dot(&s, &y);
            if sy > 1e-14 * dot(&y, &y).sqrt() * dot(&s, &s).sqrt() {
                if s_hist.len() == opts.memory {
                    s_hist.remove(0);
                    y_hist.remove(0);
                    rho_hist.remove(0);
                }
                s_hist.push(s);
                y_hist.push(y);
                rho_hist.push(1.0 / sy);
            }
        }
        history.push(fx);
        if history.len() > opts.window {
            let old = history[history.len() - 1 - opts.window];
            if (old - fx) <= opts.rel_decrease * fx.abs().max(1e-300) {
                converged = true;
                break;
            }
        }
    }
    LbfgsResult { value: fx, iterations: iters, converged, line_search_failed: ls_failed }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}
