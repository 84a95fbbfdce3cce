//! Boundary calculus for CAT(-1) model spaces.
//!
//! Two concrete spaces are provided behind the [`ModelSpace`] trait: the
//! hyperbolic disk of curvature `-k²` and the regular tree of valence `q`.
//! On top of them sit visual metrics, Busemann functions and cross-ratios,
//! the space of antipodal Moebius metrics with its distance `d_M`, the
//! geodesic flow conjugacy induced by a Moebius boundary map, asymptotic
//! circumcenters and the circumcenter extension of a boundary map.
//!
//! The crate is `no_std` (with `alloc`) when built without the `std`
//! feature. All floating point transcendental functions go through `libm`
//! so results do not depend on the platform math library.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod boundary_calculus;
pub mod circumcenter;
pub mod disk;
mod error;
pub mod extension;
pub mod flow_conjugacy;
pub mod lorentz;
pub mod moebius_metrics;
pub mod optimize;
pub mod space;
pub mod tree;

pub use error::{Error, Result};
pub use space::{GeodesicLine, ModelSpace};
