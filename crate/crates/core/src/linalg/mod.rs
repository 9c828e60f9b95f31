//! Minimal dense-free linear algebra: CSR matrices, RCM reordering, an
//! envelope LDL^T direct solver, tridiagonal pencil eigensolvers and a
//! shift-invert Lanczos driver.

pub mod csr;
pub mod envelope;
pub mod lanczos;
pub mod rcm;
pub mod tridiag;

pub use csr::{Csr, TripletBuilder};
pub use lanczos::{smallest_eigenpairs, EigenPairs, LanczosOptions};
pub use tridiag::SymTridiag;
