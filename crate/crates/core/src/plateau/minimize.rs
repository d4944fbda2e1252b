//! Descent for the discrete functionals over interior vertex images and
//! sliding boundary parameters.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // inherent once std is linked
use num_traits::Float;

use super::density::Integrand;
use super::DiscMap;
use crate::energy::EnergyDef;
use crate::error::{Error, Result};
use crate::norm::Shape;

#[derive(Clone, Debug, PartialEq)]
pub struct MinimizeOptions {
    /// Quasi-Newton iterations per smoothing stage.
    pub max_iterations: usize,
    /// Stop once the energy drops by less than `rel_tol·E` over this many
    /// iterations.
    pub window: usize,
    pub rel_tol: f64,
    /// `p`-norm exponents replacing each maximum, used in order when the
    /// integrand is nonsmooth.
    pub smoothing: Vec<f64>,
    pub memory: usize,
    /// Exact pattern search after the smoothed stages.
    pub polish: bool,
    /// Pattern steps, relative to the curve length, halved from `polish_start`
    /// down to `polish_end`.
    pub polish_start: f64,
    pub polish_end: f64,
    pub polish_sweeps: usize,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            max_iterations: 4000,
            window: 50,
            rel_tol: 1e-10,
            smoothing: vec![8.0, 16.0, 32.0, 64.0],
            memory: 8,
            polish: true,
            polish_start: 1e-3,
            polish_end: 1e-9,
            polish_sweeps: 8,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Minimized {
    pub map: DiscMap,
    /// Unsmoothed value of the objective at `map`.
    pub energy: f64,
    pub initial_energy: f64,
    pub converged: bool,
    pub iterations: usize,
    pub evaluations: usize,
    /// Triangles whose differential has rank below 2.
    pub collapsed: usize,
}

pub fn minimize_energy(init: &DiscMap, e: &EnergyDef, opts: &MinimizeOptions) -> Result<Minimized> {
    minimize_integrand(init, &Integrand::energy(&init.target, e)?, opts)
}

/// Local minimizer of `Σ_T |T|·f(Du_T)` starting from `init`. The mesh,
/// target, curve and frozen slots are taken from `init`.
pub fn minimize_integrand(init: &DiscMap, f: &Integrand, opts: &MinimizeOptions) -> Result<Minimized> {
    init.check_boundary()?;
    let mut u = init.clone();
    let layout = Layout::new(&u);
    let mut stats = Stats::default();
    let initial_energy = objective(&u, f, None, &layout, None, &mut stats)?;
    let mut converged = true;
    if f.is_nonsmooth() {
        for &p in &opts.smoothing {
            converged = descend(&mut u, f, Some(p), &layout, opts, &mut stats)?;
        }
    } else {
        converged = descend(&mut u, f, None, &layout, opts, &mut stats)?;
    }
    if opts.polish {
        polish(&mut u, f, &layout, opts, &mut stats)?;
    }
    let mut energy = objective(&u, f, None, &layout, None, &mut stats)?;
    if !(energy <= initial_energy) {
        log::warn!("descent ended above the initial energy ({energy} > {initial_energy}); keeping init");
        u = init.clone();
        energy = initial_energy;
        converged = false;
    }
    let collapsed = (0..u.mesh.triangles.len()).filter(|&t| matches!(u.seminorm(t), Shape::RankOne(_) | Shape::Zero)).count();
    if collapsed > 0 {
        log::info!("{collapsed} triangles collapsed to rank ≤ 1");
    }
    Ok(Minimized { map: u, energy, initial_energy, converged, iterations: stats.iterations, evaluations: stats.evaluations, collapsed })
}

#[derive(Default)]
struct Stats {
    iterations: usize,
    evaluations: usize,
}

/// Free variables: images of interior vertices, then parameters of unfrozen
/// boundary slots.
struct Layout {
    interior: Vec<usize>,
    free_slots: Vec<usize>,
    dim: usize,
}

impl Layout {
    fn new(u: &DiscMap) -> Self {
        let interior = (0..u.mesh.vertices.len()).filter(|&v| u.mesh.boundary_slot(v).is_none()).collect();
        let free_slots = (0..u.params.len()).filter(|&s| !u.frozen[s]).collect();
        Self { interior, free_slots, dim: u.dim() }
    }

    fn len(&self) -> usize {
        self.interior.len() * self.dim + self.free_slots.len()
    }

    fn read(&self, u: &DiscMap) -> Vec<f64> {
        let n = self.dim;
        let mut x = Vec::with_capacity(self.len());
        for &v in &self.interior {
            x.extend_from_slice(&u.images[v * n..(v + 1) * n]);
        }
        x.extend(self.free_slots.iter().map(|&s| u.params[s]));
        x
    }

    /// Writes `x` into `u`, projects the parameters and returns the projected
    /// point.
    fn place(&self, u: &mut DiscMap, x: &[f64]) -> Vec<f64> {
        let n = self.dim;
        for (i, &v) in self.interior.iter().enumerate() {
            u.images[v * n..(v + 1) * n].copy_from_slice(&x[i * n..(i + 1) * n]);
        }
        let off = self.interior.len() * n;
        for (i, &s) in self.free_slots.iter().enumerate() {
            u.params[s] = x[off + i];
        }
        let l = u.curve.length();
        project_params(&mut u.params, &u.frozen, l);
        u.sync_boundary();
        self.read(u)
    }
}

/// Projects boundary parameters onto the monotone set between consecutive
/// frozen slots: isotonic regression per gap, then clamping.
pub(crate) fn project_params(params: &mut [f64], frozen: &[bool], length: f64) {
    let b = params.len();
    let fixed: Vec<usize> = (0..b).filter(|&s| frozen[s]).collect();
    if fixed.is_empty() {
        return;
    }
    for k in 0..fixed.len() {
        let (lo, hi) = (fixed[k], fixed[(k + 1) % fixed.len()]);
        let wrap = hi <= lo;
        let slots: Vec<usize> = if wrap { ((lo + 1)..b).chain(0..hi).collect() } else { ((lo + 1)..hi).collect() };
        if slots.is_empty() {
            continue;
        }
        let lift = |s: usize| if wrap && s < hi { length } else { 0.0 };
        let mut v: Vec<f64> = slots.iter().map(|&s| params[s] + lift(s)).collect();
        isotonic(&mut v);
        let (a, z) = (params[lo], params[hi] + if wrap { length } else { 0.0 });
        for (&s, x) in slots.iter().zip(v) {
            params[s] = x.clamp(a, z) - lift(s);
        }
    }
}

/// Pool-adjacent-violators for equal weights.
fn isotonic(v: &mut [f64]) {
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(v.len());
    for &x in v.iter() {
        blocks.push((x, 1));
        while blocks.len() >= 2 {
            let (s1, c1) = blocks[blocks.len() - 1];
            let (s0, c0) = blocks[blocks.len() - 2];
            if s0 / c0 as f64 <= s1 / c1 as f64 {
                break;
            }
            blocks.pop();
            *blocks.last_mut().expect("two blocks") = (s0 + s1, c0 + c1);
        }
    }
    let mut i = 0;
    for (s, c) in blocks {
        for _ in 0..c {
            v[i] = s / c as f64;
            i += 1;
        }
    }
}

fn objective(u: &DiscMap, f: &Integrand, p: Option<f64>, layout: &Layout, grad: Option<&mut Vec<f64>>, stats: &mut Stats) -> Result<f64> {
    stats.evaluations += 1;
    let n = u.dim();
    let mut total = 0.0;
    let Some(out) = grad else {
        for t in 0..u.mesh.triangles.len() {
            total += u.mesh.area(t) * f.eval(&u.target, &u.diff(t), p, None)?;
        }
        return Ok(total);
    };
    let mut vg = vec![0.0; u.images.len()];
    let mut g = vec![[0.0; 2]; n];
    for t in 0..u.mesh.triangles.len() {
        let w = u.mesh.area(t);
        g.iter_mut().for_each(|r| *r = [0.0; 2]);
        total += w * f.eval(&u.target, &u.diff(t), p, Some(&mut g))?;
        let [a, b, c] = u.mesh.triangles[t];
        let e = u.mesh.edge_inverse(t);
        for (i, gi) in g.iter().enumerate() {
            let d0 = w * (gi[0] * e[0] + gi[1] * e[1]);
            let d1 = w * (gi[0] * e[2] + gi[1] * e[3]);
            vg[b * n + i] += d0;
            vg[c * n + i] += d1;
            vg[a * n + i] -= d0 + d1;
        }
    }
    out.clear();
    for &v in &layout.interior {
        out.extend_from_slice(&vg[v * n..(v + 1) * n]);
    }
    for &s in &layout.free_slots {
        let v = u.mesh.boundary[s];
        let (_, tangent) = u.curve.eval(u.params[s]);
        out.push(tangent.iter().zip(&vg[v * n..(v + 1) * n]).map(|(t, g)| t * g).sum());
    }
    if !total.is_finite() {
        return Err(Error::Numerical { what: "discrete objective".into(), residual: total });
    }
    Ok(total)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// L-BFGS two-loop recursion.
fn direction(g: &[f64], memory: &VecDeque<(Vec<f64>, Vec<f64>, f64)>) -> Vec<f64> {
    let mut q: Vec<f64> = g.iter().map(|x| -x).collect();
    let mut alphas = Vec::with_capacity(memory.len());
    for (s, y, rho) in memory.iter().rev() {
        let a = rho * dot(s, &q);
        q.iter_mut().zip(y).for_each(|(qi, yi)| *qi -= a * yi);
        alphas.push(a);
    }
    if let Some((s, y, _)) = memory.back() {
        let gamma = dot(s, y) / dot(y, y);
        q.iter_mut().for_each(|x| *x *= gamma);
    }
    for ((s, y, rho), a) in memory.iter().zip(alphas.into_iter().rev()) {
        let b = rho * dot(y, &q);
        q.iter_mut().zip(s).for_each(|(qi, si)| *qi += (a - b) * si);
    }
    q
}

/// One smoothing stage. Returns whether the stopping window was reached.
fn descend(u: &mut DiscMap, f: &Integrand, p: Option<f64>, layout: &Layout, opts: &MinimizeOptions, stats: &mut Stats) -> Result<bool> {
    if layout.len() == 0 {
        return Ok(true);
    }
    let length = u.curve.length();
    let mut x = layout.read(u);
    let mut g = Vec::new();
    let mut value = objective(u, f, p, layout, Some(&mut g), stats)?;
    let mut history = vec![value];
    let mut memory: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();
    let mut gt = Vec::new();
    for _ in 0..opts.max_iterations {
        stats.iterations += 1;
        let mut d = direction(&g, &memory);
        let mut slope = dot(&g, &d);
        if !(slope < 0.0) {
            memory.clear();
            d = g.iter().map(|x| -x).collect();
            slope = -dot(&g, &g);
        }
        if slope == 0.0 {
            return Ok(true);
        }
        let mut alpha = if memory.is_empty() {
            let gmax = g.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            (1e-2 * length / gmax).min(1.0)
        } else {
            1.0
        };
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + alpha * di).collect();
            let xt = layout.place(u, &trial);
            let ft = objective(u, f, p, layout, Some(&mut gt), stats)?;
            let step: Vec<f64> = xt.iter().zip(&x).map(|(a, b)| a - b).collect();
            if ft <= value + 1e-4 * dot(&g, &step).min(0.0) {
                accepted = Some((xt, ft, step));
                break;
            }
            alpha *= 0.5;
        }
        let Some((xt, ft, s)) = accepted else {
            layout.place(u, &x);
            if !memory.is_empty() {
                memory.clear();
                continue;
            }
            log::debug!("line search failed at energy {value}");
            return Ok(-slope <= 1e-12 * (1.0 + value.abs()));
        };
        let y: Vec<f64> = gt.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * (dot(&s, &s) * dot(&y, &y)).sqrt() {
            if memory.len() == opts.memory {
                memory.pop_front();
            }
            memory.push_back((s, y, 1.0 / sy));
        }
        x = xt;
        core::mem::swap(&mut g, &mut gt);
        value = ft;
        history.push(value);
        if history.len() > opts.window {
            let old = history[history.len() - 1 - opts.window];
            if old - value < opts.rel_tol * value.abs() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

fn local(u: &DiscMap, f: &Integrand, tris: &[usize]) -> Result<f64> {
    let mut s = 0.0;
    for &t in tris {
        s += u.mesh.area(t) * f.eval(&u.target, &u.diff(t), None, None)?;
    }
    Ok(s)
}

/// Coordinate pattern search on the exact objective; each move is judged by
/// the change over the triangles it touches.
fn polish(u: &mut DiscMap, f: &Integrand, layout: &Layout, opts: &MinimizeOptions, stats: &mut Stats) -> Result<()> {
    let n = u.dim();
    let length = u.curve.length();
    let mesh = u.mesh.clone();
    let b = u.params.len();
    let mut h = opts.polish_start;
    while h >= opts.polish_end {
        for _ in 0..opts.polish_sweeps {
            stats.iterations += 1;
            let mut improved = false;
            for &v in &layout.interior {
                let tris = mesh.incident(v);
                let mut before = local(u, f, tris)?;
                for k in 0..n {
                    let old = u.images[v * n + k];
                    for sign in [1.0, -1.0] {
                        u.images[v * n + k] = old + sign * h * length;
                        let after = local(u, f, tris)?;
                        if after < before {
                            before = after;
                            improved = true;
                            break;
                        }
                        u.images[v * n + k] = old;
                    }
                }
            }
            for &s in &layout.free_slots {
                let v = mesh.boundary[s];
                let tris = mesh.incident(v);
                let before = local(u, f, tris)?;
                let prev = if s > 0 { u.params[s - 1] } else { u.params[b - 1] - length };
                let next = if s + 1 < b { u.params[s + 1] } else { u.params[0] + length };
                let old = u.params[s];
                let old_image = u.images[v * n..(v + 1) * n].to_vec();
                for sign in [1.0, -1.0] {
                    let t = old + sign * h * length;
                    if t < prev || t > next {
                        continue;
                    }
                    u.params[s] = t;
                    let (g, _) = u.curve.eval(t);
                    u.images[v * n..(v + 1) * n].copy_from_slice(&g);
                    if local(u, f, tris)? < before {
                        improved = true;
                        break;
                    }
                    u.params[s] = old;
                    u.images[v * n..(v + 1) * n].copy_from_slice(&old_image);
                }
            }
            if !improved {
                break;
            }
        }
        h *= 0.5;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isotonic_pools_violators() {
        let mut v = [1.0, 3.0, 2.0, 4.0, 0.0];
        isotonic(&mut v);
        assert_eq!(v, [1.0, 2.25, 2.25, 2.25, 2.25]);
    }

    #[test]
    fn projection_respects_frozen_slots_and_wrap() {
        let mut p = [0.0, 0.5, 0.2, 3.0, 2.5, 9.5, -0.5];
        let frozen = [true, false, false, true, false, false, false];
        project_params(&mut p, &frozen, 8.0);
        assert_eq!(p[0], 0.0);
        assert_eq!(p[3], 3.0);
        assert!((p[1] - 0.35).abs() < 1e-15 && (p[2] - 0.35).abs() < 1e-15);
        // wrap gap after slot 3: 2.5, 9.5, -0.5 pooled, clamped into [3, 8]
        assert_eq!(p[4], 3.0);
        assert_eq!(p[5], 4.5);
        assert_eq!(p[6], 4.5);
    }
}
