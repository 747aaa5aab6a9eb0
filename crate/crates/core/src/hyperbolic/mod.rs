//! Explicit kernels on hyperbolic space.

mod context;
mod descent;
mod dyadic;
mod kernels;
mod plancherel;
mod scan;

pub use context::HyperbolicContext;
pub use descent::{descend_even, jet_descend_odd};
pub use dyadic::{dyadic_reconstruction, s0_kernel, sk_kernel, sk_sup, DescentKernel, Piece, ReconstructionReport};
pub use kernels::{band_projector_kernel, h3_resolvent_kernel, plancherel_density, spherical_function, BandProjector, H3Resolvent};
pub use plancherel::{
    plancherel_consistency, plancherel_resolvent, plancherel_synthesis, small_band_probe, PlancherelRecord, SmallBandProbe,
};
pub use scan::{h3_full_resolvent_scan, H3ScanParams};
