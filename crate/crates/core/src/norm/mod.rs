//! Mixed-norm lower bounds for discretized integral operators.

mod fit;
mod lp;
mod operator;
mod power;
mod scans;
mod zonal;

pub use fit::{slope_fit, SlopeFit};
pub use lp::{conjugate, duality_map, lp_norm, lp_norm_rule, MixedNormSpec, INFINITY_PROXY};
pub use operator::{DiagonalPolicy, DiscretizedOperator, OperatorDescriptor};
pub use power::{mixed_norm_power_iterate, mixed_norm_power_iterate_with, NormEstimate, PowerOptions};
pub use zonal::{ball_zonal_operator, sphere_zonal_generic, sphere_zonal_operator, PolarGrid, RadialGrid, RadialKernel};
pub use scans::{
    dyadic_decay_scan, oscillatory_amplitude, oscillatory_operator_check, polar_nodes_for, projector_norm_scan,
    projector_sup_scan, radial_panel_for, resolvent_scaling_check, resolvent_uniformity_scan, stein_tomas_scan,
    SteinTomasParams,
};
