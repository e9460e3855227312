//! Hyperboloidal foliation toolkit: slice geometry, vector-field algebra,
//! energies, null-condition checks and a radial wave–Klein-Gordon solver.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod config;
pub mod energy;
pub mod fields;
pub mod geometry;
pub mod jet;
pub mod nullcond;
pub mod report;
pub mod solver;

pub use fields::{FieldError, FieldOperator, MultiIndex, ScalarField};
pub use geometry::{GeometryError, HyperboloidSlice, Region, SliceRegion, SpacetimePoint};
