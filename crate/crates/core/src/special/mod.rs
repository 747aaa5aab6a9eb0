//! Gegenbauer polynomials, Gauss-Jacobi rules and sphere/ball grids.

mod gegenbauer;
mod grids;
mod jacobi;
mod rule;

pub use gegenbauer::{
    gegenbauer_at_one, gegenbauer_eval, gegenbauer_sequence, normalized_gegenbauer_sequence,
    GegenbauerParams,
};
pub use grids::{ball_grid, sinh_power_integral, sphere_area, sphere_grid};
pub use jacobi::{composite_legendre, gauss_jacobi_rule, gauss_legendre, jacobi_mass, legendre_on};
pub use rule::{QuadratureRule, RuleKind};
