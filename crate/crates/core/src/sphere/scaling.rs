//! Transport between the unit sphere and the sphere of curvature `kappa`.
//!
//! Geodesic distances shrink by `kappa^{-1/2}` and volumes by
//! `kappa^{-n/2}`; samples are carried over unchanged.

use num_complex::Complex64;
use serde::Serialize;

use super::context::SphereContext;
use crate::error::{Error, Result};
use crate::norm::{lp_norm, PolarGrid};

/// Polar samples on the sphere of curvature `kappa`.
#[derive(Debug, Clone)]
pub struct TransportedSamples {
    pub kappa: f64,
    /// Geodesic distance from the pole.
    pub radii: Vec<f64>,
    pub weights: Vec<f64>,
    pub values: Vec<Complex64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TransportReport {
    pub kappa: f64,
    pub s: f64,
    pub norm_unit: f64,
    pub norm_kappa: f64,
    /// `kappa^{-n/(2s)}`.
    pub predicted_ratio: f64,
    pub relative_error: f64,
    /// Largest relative mismatch between transported radii and `theta / sqrt(kappa)`.
    pub radius_error: f64,
}

/// Carries zonal samples `u` on the unit-sphere polar grid to curvature
/// `kappa`, so that `u_kappa(r) = u(sqrt(kappa) r)`, and checks the
/// `L^s` volume identity.
pub fn scaling_transport(
    ctx: &SphereContext,
    grid: &PolarGrid,
    u: &[Complex64],
    kappa: f64,
    s: f64,
) -> Result<(TransportedSamples, TransportReport)> {
    if ctx.kappa() != 1.0 {
        return Err(Error::Domain("transport starts from the unit sphere".into()));
    }
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::Domain(format!("curvature must be positive, got {kappa}")));
    }
    if u.len() != grid.len() {
        return Err(Error::Domain(format!("{} samples for {} nodes", u.len(), grid.len())));
    }
    let n = ctx.n() as f64;
    let root = kappa.sqrt();
    let vol = kappa.powf(-n / 2.0);
    let radii: Vec<f64> = (0..grid.len()).map(|i| grid.theta(i) / root).collect();
    let weights: Vec<f64> = grid.weights.iter().map(|w| w * vol).collect();
    let out = TransportedSamples { kappa, radii, weights, values: u.to_vec() };

    let norm_unit = lp_norm(u, &grid.weights, s);
    let norm_kappa = lp_norm(&out.values, &out.weights, s);
    let predicted_ratio = if s.is_infinite() { 1.0 } else { kappa.powf(-n / (2.0 * s)) };
    let relative_error = ((norm_kappa / norm_unit) - predicted_ratio).abs() / predicted_ratio;
    let radius_error = (0..grid.len())
        .map(|i| {
            let back = (out.radii[i] * root).cos();
            (back - grid.cos[i]).abs()
        })
        .fold(0.0, f64::max);
    let report = TransportReport { kappa, s, norm_unit, norm_kappa, predicted_ratio, relative_error, radius_error };
    Ok((out, report))
}

/// `kappa^{-1} kappa^{n/2 (1/r - 1/s)}`: the factor relating the
/// `L^r -> L^s` norm of the curvature-`kappa` resolvent at `zeta` to the
/// unit-sphere norm at `zeta / kappa`. Equal to one for admissible pairs.
pub fn resolvent_scaling_factor(n: usize, kappa: f64, r: f64, s: f64) -> f64 {
    let inv_s = if s.is_infinite() { 0.0 } else { 1.0 / s };
    kappa.powf(-1.0 + n as f64 / 2.0 * (1.0 / r - inv_s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_function_volume_ratio() {
        let ctx = SphereContext::unit(3).unwrap();
        let grid = PolarGrid::new(3, 40).unwrap();
        let u = vec![Complex64::new(1.0, 0.0); grid.len()];
        let (_, rep) = scaling_transport(&ctx, &grid, &u, 4.0, 6.0).unwrap();
        assert!((rep.norm_kappa / rep.norm_unit - 4f64.powf(-0.25)).abs() < 1e-14);
        assert!(rep.relative_error < 1e-12);
        let area = 2.0 * std::f64::consts::PI.powi(2);
        assert!((rep.norm_unit - area.powf(1.0 / 6.0)).abs() < 1e-12);
    }

    #[test]
    fn identity_at_unit_curvature() {
        let ctx = SphereContext::unit(2).unwrap();
        let grid = PolarGrid::new(2, 16).unwrap();
        let u: Vec<Complex64> = (0..grid.len()).map(|i| Complex64::new(i as f64, 1.0)).collect();
        let (t, rep) = scaling_transport(&ctx, &grid, &u, 1.0, 3.0).unwrap();
        assert_eq!(t.weights, grid.weights);
        assert_eq!(rep.norm_unit, rep.norm_kappa);
        assert!(rep.radius_error < 1e-15);
    }

    #[test]
    fn admissible_pairs_are_scale_invariant() {
        assert!((resolvent_scaling_factor(3, 4.0, 1.2, 6.0) - 1.0).abs() < 1e-15);
        assert!((resolvent_scaling_factor(3, 4.0, 2.0, 2.0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        let grid = PolarGrid::new(3, 8).unwrap();
        let u = vec![Complex64::new(1.0, 0.0); grid.len()];
        let ctx = SphereContext::unit(3).unwrap();
        assert!(scaling_transport(&ctx, &grid, &u, -1.0, 2.0).is_err());
        assert!(scaling_transport(&ctx, &grid, &u[1..], 2.0, 2.0).is_err());
        let c4 = SphereContext::new(3, 4.0).unwrap();
        assert!(scaling_transport(&c4, &grid, &u, 2.0, 2.0).is_err());
    }
}
