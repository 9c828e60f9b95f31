//! Thin-domain machinery: the layer map onto the reference strip, the
//! transformed quadratic form, transverse defects, and eps-sweeps tracking
//! the collapse of channel eigenvalues onto the half-line spectrum.

mod href;
mod map;
mod sweep;

pub use href::{assemble_h_eps, reference_strip_mesh, RefStripOpts};
pub use map::{compute_a_eps, Inlet, ThinMap};
pub use sweep::{
    solve_channel, sweep, transverse_defect, SweepOpts, SweepReport, SweepRow,
};
