//! Gelfand-Cetlin fibers on coadjoint orbits of the unitary group.
//!
//! A point of the orbit is a Hermitian matrix `A` with fixed spectrum `λ`; its
//! momentum is the triangle of eigenvalues of the leading blocks `A_1, ..., A_n`.
//! This crate computes fiber dimensions from the equality pattern of a
//! triangle, builds and samples matrices in a prescribed fiber, and checks
//! the dimension and isotropy claims numerically. It needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod error;
pub mod fiber;
pub mod fixtures;
pub mod linalg;
pub mod pattern;
pub mod seed;
pub mod symplectic;
pub mod synth;
mod tolerance;
pub mod triangle;

pub use error::{Error, Result};
pub use seed::Seed;
pub use tolerance::ToleranceConfig;
pub use triangle::{GcTriangle, TrianglePosition};
