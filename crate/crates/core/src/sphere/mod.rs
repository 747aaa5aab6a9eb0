//! Spectral calculus on round spheres: projector kernels, multiplier
//! kernels, wave and resolvent representations.

mod algebra;
mod asymptotics;
mod context;
mod kernel;
mod scaling;
mod wave;

pub use algebra::{projector_algebra_check, ProjectorAlgebraReport};
pub use scaling::{resolvent_scaling_factor, scaling_transport, TransportReport, TransportedSamples};
pub use asymptotics::{projector_asymptotics_check, AsymptoticFit, AsymptoticSample};
pub use context::{SpectralParamZeta, SphereContext};
pub use kernel::{
    default_truncation, kernel_from_values, multiplier_kernel, resolvent_kernel, wave_kernel, wave_multiplier,
    zonal_projector, DegreeWindow, KernelMeta, ZonalKernel,
};
pub use wave::{
    local_multiplier, local_resolvent_check, local_resolvent_exact_s3, resolvent_via_wave, tail_decay_report,
    tail_multiplier, LocalResolventReport, LocalSample, TailDecayRecord, TailDecayReport, TimeQuadrature,
};
