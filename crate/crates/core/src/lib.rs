//! Spectral toolkit for the Neumann problem of the Gaussian-weighted
//! Laplacian (the Hermite operator) on intervals and convex planar domains.
//!
//! The crate solves the 1D Sturm-Liouville problem and the 2D generalized
//! eigenproblem with piecewise-linear finite elements, models convex domains
//! with Gaussian-measure geometry (equal-area bisections, truncation of
//! unbounded sets), and drives thin-channel sweeps that exhibit the collapse
//! of the planar spectrum onto the half-line spectrum.

pub mod error;
pub mod fem2d;
pub mod geometry;
pub mod linalg;
pub mod quad;
pub mod sl1d;
pub mod thinlimit;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
pub use geometry::{Domain, Profile};
pub use weights::WeightSpec;

/// Build identifier stamped into every report row.
pub const BUILD_ID: &str = concat!("gauss-neumann-", env!("CARGO_PKG_VERSION"));
