//! Plane vectors, 2×2 linear maps and symmetric 2×2 matrices.

use core::ops::{Add, AddAssign, Mul, Neg, Sub};
#[allow(unused_imports)] // inherent once std is linked
use num_traits::Float;

/// A vector in the plane.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit vector at angle `theta`.
    #[inline]
    pub fn polar(theta: f64) -> Self {
        Self::new(theta.cos(), theta.sin())
    }

    #[inline]
    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    /// Counterclockwise rotation by a quarter turn.
    #[inline]
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    #[inline]
    pub fn scale(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    #[inline]
    fn mul(self, v: Vec2) -> Vec2 {
        v.scale(self)
    }
}

/// A real 2×2 matrix acting on column vectors, stored row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearMap2 {
    pub m: [f64; 4],
}

impl LinearMap2 {
    pub const IDENTITY: LinearMap2 = LinearMap2 { m: [1.0, 0.0, 0.0, 1.0] };

    #[inline]
    pub const fn new(m11: f64, m12: f64, m21: f64, m22: f64) -> Self {
        Self { m: [m11, m12, m21, m22] }
    }

    #[inline]
    pub const fn diag(a: f64, b: f64) -> Self {
        Self::new(a, 0.0, 0.0, b)
    }

    /// Counterclockwise rotation `R_θ`.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c, -s, s, c)
    }

    /// `R_θ · diag(λ, 1/λ) · R_θᵀ`, the symmetric positive element of SL₂
    /// stretching direction `θ` by `λ`.
    pub fn symmetric_stretch(theta: f64, lambda: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let (l1, l2) = (lambda, 1.0 / lambda);
        Self::new(l1 * c * c + l2 * s * s, (l1 - l2) * c * s, (l1 - l2) * c * s, l1 * s * s + l2 * c * c)
    }

    /// `exp(H)` for the traceless symmetric `H = [[x, y], [y, -x]]`.
    ///
    /// This is a global chart of the symmetric positive part of SL₂.
    pub fn exp_traceless(x: f64, y: f64) -> Self {
        let r = x.hypot(y);
        let ch = r.cosh();
        let sh_r = if r < 1e-8 { 1.0 + r * r / 6.0 } else { r.sinh() / r };
        Self::new(ch + sh_r * x, sh_r * y, sh_r * y, ch - sh_r * x)
    }

    #[inline]
    pub fn det(&self) -> f64 {
        self.m[0] * self.m[3] - self.m[1] * self.m[2]
    }

    #[inline]
    pub fn apply(&self, v: Vec2) -> Vec2 {
        Vec2::new(self.m[0] * v.x + self.m[1] * v.y, self.m[2] * v.x + self.m[3] * v.y)
    }

    #[inline]
    pub fn transpose(&self) -> Self {
        Self::new(self.m[0], self.m[2], self.m[1], self.m[3])
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        Some(Self::new(self.m[3] / d, -self.m[1] / d, -self.m[2] / d, self.m[0] / d))
    }

    /// Matrix product `self · o`.
    pub fn mul(&self, o: &LinearMap2) -> Self {
        let a = &self.m;
        let b = &o.m;
        Self::new(a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3])
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::new(self.m[0] * k, self.m[1] * k, self.m[2] * k, self.m[3] * k)
    }

    #[inline]
    pub fn col(&self, j: usize) -> Vec2 {
        Vec2::new(self.m[j], self.m[2 + j])
    }

    #[inline]
    pub fn row(&self, i: usize) -> Vec2 {
        Vec2::new(self.m[2 * i], self.m[2 * i + 1])
    }

    /// Spectral norm.
    pub fn operator_norm(&self) -> f64 {
        self.singular_values().0
    }

    /// Singular values `(σ₁ ≥ σ₂ ≥ 0)`.
    pub fn singular_values(&self) -> (f64, f64) {
        let g = Sym2::gram(self);
        let (l1, l2) = g.eigenvalues();
        (l1.max(0.0).sqrt(), l2.max(0.0).sqrt())
    }

    /// Whether `|det − 1| ≤ 1e−12`, the SL₂ membership test.
    pub fn is_sl2(&self) -> bool {
        (self.det() - 1.0).abs() <= 1e-12
    }

    pub fn max_abs_diff(&self, o: &LinearMap2) -> f64 {
        self.m.iter().zip(o.m.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// A symmetric 2×2 matrix `[[a, b], [b, c]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sym2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Sym2 {
    pub const IDENTITY: Sym2 = Sym2 { a: 1.0, b: 0.0, c: 1.0 };

    #[inline]
    pub const fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    /// `Tᵀ T`.
    pub fn gram(t: &LinearMap2) -> Self {
        let c0 = t.col(0);
        let c1 = t.col(1);
        Self::new(c0.norm_sq(), c0.dot(c1), c1.norm_sq())
    }

    /// `Tᵀ S T`.
    pub fn congruence(&self, t: &LinearMap2) -> Self {
        let c0 = t.col(0);
        let c1 = t.col(1);
        Self::new(self.quad(c0), self.bilinear(c0, c1), self.quad(c1))
    }

    #[inline]
    pub fn det(&self) -> f64 {
        self.a * self.c - self.b * self.b
    }

    #[inline]
    pub fn trace(&self) -> f64 {
        self.a + self.c
    }

    #[inline]
    pub fn apply(&self, v: Vec2) -> Vec2 {
        Vec2::new(self.a * v.x + self.b * v.y, self.b * v.x + self.c * v.y)
    }

    #[inline]
    pub fn quad(&self, v: Vec2) -> f64 {
        self.a * v.x * v.x + 2.0 * self.b * v.x * v.y + self.c * v.y * v.y
    }

    #[inline]
    pub fn bilinear(&self, u: Vec2, v: Vec2) -> f64 {
        self.a * u.x * v.x + self.b * (u.x * v.y + u.y * v.x) + self.c * u.y * v.y
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a > 0.0 && self.det() > 0.0
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::new(self.a * k, self.b * k, self.c * k)
    }

    pub fn as_map(&self) -> LinearMap2 {
        LinearMap2::new(self.a, self.b, self.b, self.c)
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        Some(Self::new(self.c / d, -self.b / d, self.a / d))
    }

    /// Eigenvalues `(λ₁ ≥ λ₂)`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let m = 0.5 * (self.a + self.c);
        let h = (0.5 * (self.a - self.c)).hypot(self.b);
        (m + h, m - h)
    }

    /// Eigenvalues `(λ₁ ≥ λ₂)` and the unit eigenvector of `λ₁`.
    pub fn eigen(&self) -> (f64, f64, Vec2) {
        let (l1, l2) = self.eigenvalues();
        let phi = 0.5 * (2.0 * self.b).atan2(self.a - self.c);
        (l1, l2, Vec2::polar(phi))
    }

    /// Principal square root of a positive semidefinite matrix.
    pub fn sqrt(&self) -> Self {
        let (l1, l2, e) = self.eigen();
        let (s1, s2) = (l1.max(0.0).sqrt(), l2.max(0.0).sqrt());
        Self::from_eigen(s1, s2, e)
    }

    /// `λ₁ e eᵀ + λ₂ e⊥ e⊥ᵀ`.
    pub fn from_eigen(l1: f64, l2: f64, e: Vec2) -> Self {
        let f = e.perp();
        Self::new(l1 * e.x * e.x + l2 * f.x * f.x, l1 * e.x * e.y + l2 * f.x * f.y, l1 * e.y * e.y + l2 * f.y * f.y)
    }

    /// `λ₁/λ₂` for a positive definite matrix.
    pub fn condition(&self) -> f64 {
        let (l1, l2) = self.eigenvalues();
        if l2 <= 0.0 {
            f64::INFINITY
        } else {
            l1 / l2
        }
    }
}

#[inline]
pub(crate) fn cross3(o: Vec2, a: Vec2, b: Vec2) -> f64 {
    (a - o).cross(b - o)
}
