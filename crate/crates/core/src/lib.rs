//! Areas, energies and their induced relationships on two-dimensional normed
//! planes, together with a discrete Plateau harness for piecewise-linear
//! discs in finite-dimensional normed spaces.
//!
//! The crate is `no_std` and only needs `alloc`. Floating-point math goes
//! through `libm`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod area;
pub mod convex;
pub mod energy;
pub mod error;
pub mod family;
pub mod geom;
pub mod induced;
pub mod norm;
pub mod optim;
pub mod plateau;
pub mod polygon;

pub use area::AreaDef;
pub use energy::EnergyDef;
pub use error::{Error, Result};
pub use family::NormFamily;
pub use geom::{LinearMap2, Sym2, Vec2};
pub use induced::{InducedArea, OrbitResult};
pub use norm::{Norm2, Shape};
pub use polygon::Polygon;
