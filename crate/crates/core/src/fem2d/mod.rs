//! Gaussian-weighted P1 finite elements on triangulated convex domains:
//! meshing, assembly of the stiffness/mass pair, and the Neumann eigensolve.

mod assemble;
mod delaunay;
pub mod fields;
pub mod mesh;
mod solve;

pub use assemble::{assemble, assemble_with, DiscretePair};
pub(crate) use assemble::p1_gradients as p1_gradients_pub;
pub use fields::{export_vtk, MeshField};
pub use mesh::{mesh_convex_polygon, mesh_domain, mesh_profile, mesh_rectangle, MeshInfo, MeshOpts, TriMesh};
pub use solve::{rayleigh_quotient, solve_neumann_2d, solve_pair, weighted_mean, Opts2D, Spectrum2D};
