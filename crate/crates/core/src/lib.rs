//! Lattices from linear codes through generalized reductions.
//!
//! The crate is organised bottom-up:
//!
//! * [`galois`]: prime fields, code canonicalisation, sampling and enumeration of
//!   linear codes, and codes over the matrix ring `M2(F_p)`.
//! * [`lattice`]: exact integer-Gram lattices with LLL, Fincke-Pohst enumeration,
//!   point counting, theta series and density functionals.
//! * [`reduction`]: surjections `Λ -> F_p^n`, kernel lattices and code lifts.
//! * [`cyclotomic`]: prime-conductor cyclotomic trace forms, Craig lattices and
//!   split-prime ideal reductions.
//! * [`quaternion`]: Lipschitz and Hurwitz orders and their reductions to `M2(F_p)`.
//! * [`ensemble`]: ensemble averages over codes and Minkowski-Hlawka searches.
//! * [`effective`]: explicit alphabet-size planning and point-count bounds.

pub mod arith;
pub mod config;
pub mod cyclotomic;
pub mod effective;
pub mod ensemble;
pub mod error;
pub mod galois;
pub mod lattice;
pub mod quaternion;
pub mod reduction;
pub mod special;

pub use config::Caps;
pub use error::{Error, Result};
pub use galois::{LinearCode, PrimeField};
pub use lattice::{IntLattice, LatticePoint, TestFunction};
pub use reduction::Reduction;

/// Integer matrix stored row-major as nested vectors.
pub type IntMat = Vec<Vec<i64>>;
