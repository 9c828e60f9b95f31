//! Convex planar domains and intervals: construction and validation,
//! diameters, Gaussian measures, equal-area bisections, and truncation of
//! unbounded sets.

mod bisect;
mod domain;
pub mod measure;
mod polygon;
mod profile;
mod truncate;

pub use bisect::{
    bisect_equal_area, bisect_polygon, find_zero_mean_direction, Bracket, ScalarField,
    ZeroMeanDirection,
};
pub(crate) use bisect::zero_mean_search;
pub use domain::Domain;
pub use measure::{gaussian_measure, integrate_over_polygon, measure_polygon};
pub use polygon::ConvexPolygon;
pub use profile::{Profile, ProfileForm};
pub use truncate::{truncate, Truncated};
