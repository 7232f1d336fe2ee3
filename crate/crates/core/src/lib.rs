//! Exact intersection theory on complete simplicial fans in dimension 2 and 3.
//!
//! The crate builds the face fan of a Fano polytope from its generator list,
//! computes triple intersection numbers `D_i . D_j . S` against torus
//! invariant surfaces with exact rational arithmetic, and classifies
//! varieties by the sign behaviour of `gamma_2 = D_1^2 + ... + D_n^2`:
//! positive on every surface, non-negative (nef), or neither.
//!
//! Entry points:
//! - [`fan::Fan::face_fan`] builds a fan from lattice generators;
//! - [`classify::verdict`] produces a full per-surface report;
//! - [`classify::sweep`] runs a whole dataset;
//! - [`classify::enumerate_reflexive_polygons`] independently enumerates the
//!   16 reflexive polygon classes used as a cross-check for the surface
//!   classification;
//! - [`dataset`] parses and formats the plain-text record format and holds
//!   the bundled classification tables.

pub mod classify;
pub mod dataset;
pub mod error;
pub mod fan;
pub mod hull;
pub mod intersection;
pub mod linalg;
pub mod props;
pub mod report;

pub use error::{Error, Result};
pub use fan::{Cone, Fan, LatticeVector};
pub use intersection::Surface;
pub use linalg::Rational;
