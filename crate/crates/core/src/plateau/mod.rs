//! Piecewise-linear discs spanning a polygonal Jordan curve in a
//! finite-dimensional normed space.

pub mod density;
pub mod mesh;
pub mod minimize;
pub mod target;
pub mod variation;
pub mod verify;

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // inherent once std is linked
use num_traits::Float;

use crate::area::AreaDef;
use crate::energy::EnergyDef;
use crate::error::{Error, Result};
use crate::norm::Shape;

pub use density::Integrand;
pub use mesh::{build_mesh, DiscMesh};
pub use minimize::{minimize_energy, minimize_integrand, MinimizeOptions, Minimized};
pub use target::{NormedTarget, TargetNorm};
pub use variation::Trial;
pub use variation::{inner_variation_test, VariationReport};
pub use verify::{compare_energy_vs_area_minimizer, verify_main_lemma, CompareReport, MainLemmaReport};

/// Exterior turning angle from which a corner of the boundary curve is pinned
/// to a mesh vertex when not every vertex of the curve can be.
pub const CORNER_ANGLE: f64 = PI / 8.0;

/// Turning angle below which a curve vertex counts as straight.
pub const PIN_ANGLE: f64 = 1e-9;

/// Closed polygonal curve in Rⁿ parametrized by Euclidean arclength.
#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    pub dim: usize,
    points: Vec<Vec<f64>>,
    /// `cumulative[i]` is the parameter of `points[i]`; the last entry is the
    /// total length.
    cumulative: Vec<f64>,
}

impl Curve {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::Structural("boundary curve needs at least three points".into()));
        }
        let dim = points[0].len();
        if dim < 2 || points.iter().any(|p| p.len() != dim || p.iter().any(|x| !x.is_finite())) {
            return Err(Error::Structural("boundary points must share a dimension ≥ 2".into()));
        }
        let mut cumulative = vec![0.0];
        for i in 0..points.len() {
            let d = dist(&points[i], &points[(i + 1) % points.len()]);
            if d == 0.0 {
                return Err(Error::Structural(alloc::format!("repeated boundary point at index {i}")));
            }
            cumulative.push(cumulative[i] + d);
        }
        Ok(Self { dim, points, cumulative })
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn length(&self) -> f64 {
        *self.cumulative.last().expect("nonempty")
    }

    fn segment(&self, t: f64) -> (usize, f64) {
        let l = self.length();
        let mut s = t - l * (t / l).floor();
        if s >= l {
            s -= l;
        }
        let i = self.cumulative.partition_point(|&c| c <= s).saturating_sub(1).min(self.points.len() - 1);
        (i, s - self.cumulative[i])
    }

    /// Point and unit tangent at parameter `t` (taken modulo the length).
    pub fn eval(&self, t: f64) -> (Vec<f64>, Vec<f64>) {
        let (i, off) = self.segment(t);
        let a = &self.points[i];
        let b = &self.points[(i + 1) % self.points.len()];
        let len = self.cumulative[i + 1] - self.cumulative[i];
        let dir: Vec<f64> = a.iter().zip(b).map(|(x, y)| (y - x) / len).collect();
        let p = a.iter().zip(&dir).map(|(x, d)| x + off * d).collect();
        (p, dir)
    }

    /// Parameters of the vertices whose exterior turning angle is at least
    /// `min_angle`.
    pub fn corners(&self, min_angle: f64) -> Vec<f64> {
        let n = self.points.len();
        let dir = |i: usize| {
            let (a, b) = (&self.points[i % n], &self.points[(i + 1) % n]);
            let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
            let l = d.iter().map(|v| v * v).sum::<f64>().sqrt();
            d.into_iter().map(|v| v / l).collect::<Vec<f64>>()
        };
        (0..n)
            .filter(|&i| {
                let (u, w) = (dir(i + n - 1), dir(i));
                let c: f64 = u.iter().zip(&w).map(|(x, y)| x * y).sum();
                c.clamp(-1.0, 1.0).acos() >= min_angle
            })
            .map(|i| self.cumulative[i])
            .collect()
    }

    /// Parameters of the vertices pinned to boundary slots, given `slots`
    /// available: every vertex where the curve turns if they fit, otherwise
    /// only those turning by at least [`CORNER_ANGLE`]. Hitting every turning
    /// vertex makes the inscribed image polygon equal to the curve.
    pub fn pins(&self, slots: usize) -> Vec<f64> {
        let all = self.corners(PIN_ANGLE);
        if all.len() <= slots {
            return all;
        }
        let mut sharp = self.corners(CORNER_ANGLE);
        sharp.truncate(slots);
        sharp
    }

    /// Length-weighted centroid.
    pub fn centroid(&self) -> Vec<f64> {
        let n = self.points.len();
        let mut c = vec![0.0; self.dim];
        for i in 0..n {
            let (a, b) = (&self.points[i], &self.points[(i + 1) % n]);
            let w = dist(a, b) / self.length();
            for k in 0..self.dim {
                c[k] += w * 0.5 * (a[k] + b[k]);
            }
        }
        c
    }
}

fn wrap(x: f64, period: f64) -> f64 {
    let r = x - period * (x / period).floor();
    if r >= period {
        0.0
    } else {
        r
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Piecewise-linear map from a triangulated disc whose boundary vertices
/// slide along a curve.
#[derive(Clone, Debug)]
pub struct DiscMap {
    pub mesh: Arc<DiscMesh>,
    pub target: NormedTarget,
    pub curve: Arc<Curve>,
    /// Vertex images, `dim` coordinates per mesh vertex.
    pub images: Vec<f64>,
    /// Curve parameter per boundary slot; nondecreasing with total increase
    /// at most the curve length.
    pub params: Vec<f64>,
    /// Boundary slots whose parameter is fixed: the three gauge anchors and
    /// any pinned corners.
    pub frozen: Vec<bool>,
    /// The three gauge anchors as boundary slots.
    pub anchors: [usize; 3],
}

impl DiscMap {
    /// Radial extension about the centroid of the curve. Boundary vertex at
    /// angle `φ` starts at parameter `L·φ/2π`; the vertices of
    /// [`Curve::pins`] are then frozen at nearby slots in order. With three
    /// or more pins the first three serve as anchors, otherwise the mesh
    /// anchors are frozen as well.
    pub fn radial(mesh: Arc<DiscMesh>, target: NormedTarget, curve: Arc<Curve>) -> Result<Self> {
        if curve.dim != target.dim {
            return Err(Error::Parameter("curve and target dimensions differ".into()));
        }
        let b = mesh.boundary.len();
        let l = curve.length();
        let angle = |s: usize| {
            let a = mesh.vertices[mesh.boundary[s]].angle();
            if a < -1e-12 {
                a + 2.0 * PI
            } else {
                a.max(0.0)
            }
        };
        let mut params: Vec<f64> = (0..b).map(|s| l * angle(s) / (2.0 * PI)).collect();
        let mut frozen = vec![false; b];
        let corners = curve.pins(b);
        let mut pins: Vec<usize> = Vec::with_capacity(corners.len());
        for (k, &c) in corners.iter().enumerate() {
            // strictly increasing slots, leaving room for the remaining corners
            let lo = pins.last().map_or(0, |p| p + 1);
            let hi = b - (corners.len() - k);
            let s = ((c / l * b as f64).round() as usize).clamp(lo, hi);
            params[s] = c;
            frozen[s] = true;
            pins.push(s);
        }
        pins.sort_unstable();
        let anchors = if pins.len() >= 3 {
            [pins[0], pins[1], pins[2]]
        } else {
            for s in mesh.anchors {
                frozen[s] = true;
            }
            mesh.anchors
        };
        minimize::project_params(&mut params, &frozen, l);
        let centroid = curve.centroid();
        let n = target.dim;
        let mut images = vec![0.0; mesh.vertices.len() * n];
        for (v, p) in mesh.vertices.iter().enumerate() {
            let r = p.norm();
            let t = if r == 0.0 { 0.0 } else { interpolate_param(&mesh, &params, l, p.angle()) };
            let (g, _) = curve.eval(t);
            for k in 0..n {
                images[v * n + k] = centroid[k] + r * (g[k] - centroid[k]);
            }
        }
        let mut map = Self { mesh, target, curve, images, params, frozen, anchors };
        map.sync_boundary();
        Ok(map)
    }

    /// The map with the given vertex images; the curve is the closed polygon
    /// through the boundary images and the gauge anchors are frozen.
    pub fn from_images(mesh: Arc<DiscMesh>, target: NormedTarget, images: Vec<f64>) -> Result<Self> {
        let n = target.dim;
        if images.len() != mesh.vertices.len() * n {
            return Err(Error::Parameter("image count does not match mesh".into()));
        }
        let pts: Vec<Vec<f64>> = mesh.boundary.iter().map(|&v| images[v * n..(v + 1) * n].to_vec()).collect();
        let curve = Curve::new(pts)?;
        let params = curve.cumulative[..mesh.boundary.len()].to_vec();
        let mut frozen = vec![false; params.len()];
        for s in mesh.anchors {
            frozen[s] = true;
        }
        let anchors = mesh.anchors;
        Ok(Self { mesh, target, curve: Arc::new(curve), images, params, frozen, anchors })
    }

    /// Restriction of a linear map `L` (row `i` maps to coordinate `i`) to
    /// the mesh.
    pub fn linear(mesh: Arc<DiscMesh>, target: NormedTarget, l: &[[f64; 2]]) -> Result<Self> {
        let n = target.dim;
        if l.len() != n {
            return Err(Error::Parameter("linear map rows must match the target dimension".into()));
        }
        let mut images = vec![0.0; mesh.vertices.len() * n];
        for (v, p) in mesh.vertices.iter().enumerate() {
            for k in 0..n {
                images[v * n + k] = l[k][0] * p.x + l[k][1] * p.y;
            }
        }
        Self::from_images(mesh, target, images)
    }

    /// Copy with interior images moved by seeded uniform noise of the given
    /// amplitude, damped towards the boundary.
    pub fn jittered(&self, amplitude: f64, seed: u64) -> Self {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = self.dim();
        let mut out = self.clone();
        for (v, p) in self.mesh.vertices.iter().enumerate() {
            if self.mesh.boundary_slot(v).is_some() {
                continue;
            }
            let damp = 1.0 - p.norm();
            for k in 0..n {
                out.images[v * n + k] += amplitude * damp * rng.gen_range(-1.0..1.0);
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.target.dim
    }

    pub fn image(&self, v: usize) -> &[f64] {
        let n = self.dim();
        &self.images[v * n..(v + 1) * n]
    }

    /// Recomputes boundary images from the parameters.
    pub fn sync_boundary(&mut self) {
        let n = self.dim();
        for (s, &v) in self.mesh.boundary.iter().enumerate() {
            let (g, _) = self.curve.eval(self.params[s]);
            self.images[v * n..(v + 1) * n].copy_from_slice(&g);
        }
    }

    /// Differential of triangle `t`; row `i` is the gradient of coordinate `i`.
    pub fn diff(&self, t: usize) -> Vec<[f64; 2]> {
        let tri = self.mesh.triangles[t];
        let e = self.mesh.edge_inverse(t);
        let (a, b, c) = (self.image(tri[0]), self.image(tri[1]), self.image(tri[2]));
        (0..self.dim())
            .map(|i| {
                let (u0, u1) = (b[i] - a[i], c[i] - a[i]);
                [u0 * e[0] + u1 * e[2], u0 * e[1] + u1 * e[3]]
            })
            .collect()
    }

    pub fn seminorm(&self, t: usize) -> Shape {
        self.target.seminorm(&self.diff(t))
    }

    /// Checks that boundary images lie on the curve and parameters are
    /// cyclically monotone.
    pub fn check_boundary(&self) -> Result<()> {
        let l = self.curve.length();
        let b = self.params.len();
        for s in 1..b {
            if self.params[s] < self.params[s - 1] - 1e-12 {
                return Err(Error::Structural(alloc::format!("boundary parameters decrease at slot {s}")));
            }
        }
        if self.params[b - 1] > self.params[0] + l + 1e-12 {
            return Err(Error::Structural("boundary parameters wind more than once".into()));
        }
        for (s, &v) in self.mesh.boundary.iter().enumerate() {
            let (g, _) = self.curve.eval(self.params[s]);
            if dist(&g, self.image(v)) > 1e-9 * (1.0 + l) {
                return Err(Error::Structural(alloc::format!("boundary vertex {v} is off the curve")));
            }
        }
        Ok(())
    }
}

/// Parameter at polar angle `phi` by linear interpolation between boundary
/// slots.
pub(crate) fn interpolate_param(mesh: &DiscMesh, params: &[f64], length: f64, phi: f64) -> f64 {
    let b = params.len();
    let angle = |s: usize| {
        let a = mesh.vertices[mesh.boundary[s]].angle();
        if a < -1e-12 {
            a + 2.0 * PI
        } else {
            a.max(0.0)
        }
    };
    let phi = wrap(phi, 2.0 * PI);
    let hi = (0..b).find(|&s| angle(s) > phi).unwrap_or(b);
    let lo = hi - 1;
    let (a0, t0) = (angle(lo), params[lo]);
    let (a1, t1) = if hi < b { (angle(hi), params[hi]) } else { (2.0 * PI, params[0] + length) };
    t0 + (t1 - t0) * (phi - a0) / (a1 - a0)
}

/// `Σ_T |T|·f(Du_T)`.
pub fn map_integral(u: &DiscMap, f: &Integrand) -> Result<f64> {
    let mut total = 0.0;
    for t in 0..u.mesh.triangles.len() {
        total += u.mesh.area(t) * f.eval(&u.target, &u.diff(t), None, None)?;
    }
    Ok(total)
}

/// `E_I(u)`, evaluated without smoothing.
pub fn map_energy(u: &DiscMap, e: &EnergyDef) -> Result<f64> {
    map_integral(u, &Integrand::energy(&u.target, e)?)
}

/// `Area_μ(u)`. Planar targets use `J(s∘Du) = |det Du|·J(s)`.
pub fn map_area(u: &DiscMap, a: &AreaDef) -> Result<f64> {
    map_integral(u, &Integrand::area(&u.target, a.clone(), 0.0)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inclusion(level: usize) -> DiscMap {
        let mesh = Arc::new(build_mesh(level).unwrap());
        DiscMap::linear(mesh, NormedTarget::euclidean(2).unwrap(), &[[1.0, 0.0], [0.0, 1.0]]).unwrap()
    }

    #[test]
    fn inclusion_energies() {
        let u = inclusion(4);
        let area = u.mesh.total_area();
        assert!((area - PI).abs() < 2e-2 * PI);
        let r = map_energy(&u, &EnergyDef::Reshetnyak).unwrap();
        assert!((r - area).abs() < 1e-9);
        let ks = map_energy(&u, &EnergyDef::KorevaarSchoen).unwrap();
        assert!((ks - 2.0 * area).abs() < 1e-9);
        let ai = map_area(&u, &AreaDef::InscribedRiemannian).unwrap();
        assert!((ai - area).abs() < 1e-9);
        u.check_boundary().unwrap();
    }

    #[test]
    fn stretched_map_into_sup_plane() {
        let mesh = Arc::new(build_mesh(4).unwrap());
        let u = DiscMap::linear(mesh.clone(), NormedTarget::sup(2).unwrap(), &[[2.0, 0.0], [0.0, 0.5]]).unwrap();
        let r = map_energy(&u, &EnergyDef::Reshetnyak).unwrap();
        assert!((r - 4.0 * mesh.total_area()).abs() < 1e-9);
    }

    #[test]
    fn curve_evaluation_and_corners() {
        let c = Curve::new(alloc::vec![alloc::vec![1.0, 1.0], alloc::vec![-1.0, 1.0], alloc::vec![-1.0, -1.0], alloc::vec![1.0, -1.0],])
            .unwrap();
        assert_eq!(c.length(), 8.0);
        assert_eq!(c.corners(CORNER_ANGLE), alloc::vec![0.0, 2.0, 4.0, 6.0]);
        let (p, d) = c.eval(9.0);
        assert_eq!(p, alloc::vec![0.0, 1.0]);
        assert_eq!(d, alloc::vec![-1.0, 0.0]);
    }

    #[test]
    fn radial_init_pins_square_corners() {
        let mesh = Arc::new(build_mesh(3).unwrap());
        let c = Arc::new(
            Curve::new(alloc::vec![alloc::vec![1.0, 1.0], alloc::vec![-1.0, 1.0], alloc::vec![-1.0, -1.0], alloc::vec![1.0, -1.0],])
                .unwrap(),
        );
        let u = DiscMap::radial(mesh.clone(), NormedTarget::sup(2).unwrap(), c).unwrap();
        u.check_boundary().unwrap();
        let b = mesh.boundary.len();
        assert_eq!(u.anchors, [0, b / 4, b / 2]);
        assert_eq!(u.frozen.iter().filter(|f| **f).count(), 4);
        // the image is the square itself
        assert!((map_area(&u, &AreaDef::Busemann).unwrap() - 4.0 * PI / 4.0).abs() < 1e-9);
    }
}
