//! Cyclic projective t-designs: dense complex linear algebra, frame-potential
//! certification, difference sets, simplex-design bases, cyclic-design
//! assembly, approximate designs from random eigenphases, linear tomography
//! and the associated no-go computations.
//!
//! The crate is `no_std` (with `alloc`); all IO, file formats and the command
//! line front end live in the companion `cycdes-cli` crate.
//!
//! All operations are pure functions of immutable inputs and are
//! deterministic: seeded runs reproduce bit-identical results.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod approx;
pub mod basisgen;
pub mod cyclic;
pub mod designlib;
pub mod diffsets;
pub mod error;
pub mod matcore;
pub mod nogo;
pub mod optim;
pub mod rng;
pub mod search;
pub mod tomo;

pub use error::{Error, Result};
pub use matcore::{Complex64, ComplexMatrix, HermitianCoeffs, PhaseList};

/// Default tolerance for unitarity / orthonormality / design checks.
///
/// Everything downstream that takes an explicit `tol` defaults to this value.
pub const DEFAULT_TOL: f64 = 1e-10;
