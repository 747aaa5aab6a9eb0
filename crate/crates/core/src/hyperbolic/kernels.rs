//! Closed-form kernels on `H^3`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::norm::RadialKernel;
use crate::special::gauss_legendre;

/// `e^{-z r} / (4 pi sinh r)`, the kernel of `(P^2 + z^2)^{-1}` on `H^3`
/// for `Re z > 0`.
pub fn h3_resolvent_kernel(z: Complex64, r: f64) -> Result<Complex64> {
    if !(z.re > 0.0) {
        return Err(Error::Domain(format!("need Re z > 0, got {z}")));
    }
    if !(r > 0.0) {
        return Err(Error::Domain(format!("need r > 0, got {r}")));
    }
    Ok((-z * r).exp() / (4.0 * PI * r.sinh()))
}

/// `sin(mu r) / (mu sinh r)`, the radial eigenfunction of `P` on `H^3`
/// normalized to 1 at the origin.
pub fn spherical_function(mu: f64, r: f64) -> f64 {
    if r == 0.0 {
        return 1.0;
    }
    let ratio = if r.abs() < 1e-8 { 1.0 } else { r / r.sinh() };
    if mu == 0.0 {
        return ratio;
    }
    let x = mu * r;
    let sinc = if x.abs() < 1e-8 { 1.0 - x * x / 6.0 } else { x.sin() / x };
    sinc * ratio
}

/// Plancherel density `mu^2 / (2 pi^2)` of `H^3`.
pub fn plancherel_density(n: usize, mu: f64) -> Result<f64> {
    if n != 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    if mu < 0.0 {
        return Err(Error::Domain(format!("need mu >= 0, got {mu}")));
    }
    Ok(mu * mu / (2.0 * PI * PI))
}

/// `int_lo^hi f(mu) d mu` by 64-point Gauss-Legendre per unit length,
/// doubling until successive values agree to `1e-10`.
fn spectral_integral<F: Fn(f64) -> f64>(lo: f64, hi: f64, f: F) -> f64 {
    let base = gauss_legendre(64);
    let eval = |panels: usize| -> f64 {
        let h = (hi - lo) / panels as f64;
        (0..panels)
            .map(|p| {
                let mid = lo + h * (p as f64 + 0.5);
                base.0.iter().zip(base.1.iter()).map(|(x, w)| f(mid + 0.5 * h * x) * w * 0.5 * h).sum::<f64>()
            })
            .sum()
    };
    let mut panels = ((hi - lo).ceil() as usize).max(1);
    let mut prev = eval(panels);
    for _ in 0..12 {
        panels *= 2;
        let next = eval(panels);
        if (next - prev).abs() <= 1e-10 * next.abs().max(1e-300) {
            return next;
        }
        prev = next;
    }
    prev
}

/// Kernel of `1_{[lambda, lambda + 1/T]}(P)` on `H^3` at distance `r`.
pub fn band_projector_kernel(lambda: f64, t: f64, r: f64) -> Result<f64> {
    if lambda < 0.0 || t < 1.0 {
        return Err(Error::Domain(format!("need lambda >= 0 and T >= 1, got ({lambda}, {t})")));
    }
    Ok(spectral_integral(lambda, lambda + 1.0 / t, |mu| spherical_function(mu, r) * mu * mu / (2.0 * PI * PI)))
}

/// The ball resolvent `(P^2 + z^2)^{-1}` as a radial kernel.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct H3Resolvent {
    pub z: Complex64,
}

impl H3Resolvent {
    pub fn new(z: Complex64) -> Result<Self> {
        if !(z.re > 0.0) {
            return Err(Error::Domain(format!("need Re z > 0, got {z}")));
        }
        Ok(Self { z })
    }

    /// Resolvent at `zeta`: `(P^2 + z^2)^{-1}` with `z = sqrt(-zeta)` on
    /// the principal branch, defined for `zeta` off `[0, inf)`.
    pub fn at_zeta(zeta: Complex64) -> Result<Self> {
        Self::new((-zeta).sqrt())
    }
}

impl RadialKernel for H3Resolvent {
    fn eval(&self, r: f64) -> Complex64 {
        (-self.z * r).exp() / (4.0 * PI * r.sinh())
    }

    fn shell_integral(&self, a: f64, b: f64) -> Complex64 {
        ((-self.z * a).exp() - (-self.z * b).exp()) / (4.0 * PI * self.z)
    }
}

/// `1_{[lambda, lambda + 1/T]}(P)` as a radial kernel.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BandProjector {
    pub lambda: f64,
    pub t: f64,
}

impl RadialKernel for BandProjector {
    fn eval(&self, r: f64) -> Complex64 {
        let (a, b) = (self.lambda, self.lambda + 1.0 / self.t);
        // int mu sin(mu r) d mu = sin(mu r)/r^2 - mu cos(mu r)/r
        let prim = |mu: f64| (mu * r).sin() / (r * r) - mu * (mu * r).cos() / r;
        let v = if b * r < 0.5 {
            spectral_integral(a, b, |mu| spherical_function(mu, r) * mu * mu)
        } else {
            (prim(b) - prim(a)) / r.sinh()
        };
        Complex64::new(v / (2.0 * PI * PI), 0.0)
    }

    fn shell_integral(&self, a: f64, b: f64) -> Complex64 {
        // (1/2pi^2) int_band (cos(mu a) - cos(mu b)) d mu
        let (lo, hi) = (self.lambda, self.lambda + 1.0 / self.t);
        let sinc_int = |d: f64| if d == 0.0 { hi - lo } else { ((hi * d).sin() - (lo * d).sin()) / d };
        Complex64::new((sinc_int(a) - sinc_int(b)) / (2.0 * PI * PI), 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Jet;

    #[test]
    fn resolvent_examples() {
        let v = h3_resolvent_kernel(Complex64::new(1.0, 0.0), 1.0).unwrap();
        assert!((v.re - (-1f64).exp() / (4.0 * PI * 1f64.sinh())).abs() < 1e-16);
        assert!((v.re - 0.02490).abs() < 5e-5);
        let r = 1e-6;
        let v = h3_resolvent_kernel(Complex64::new(2.0, 1.0), r).unwrap();
        assert!((v.re * 4.0 * PI * r - 1.0).abs() < 1e-5);
        assert!(h3_resolvent_kernel(Complex64::new(0.0, 1.0), 1.0).is_err());
    }

    #[test]
    fn spherical_function_limits_and_eigen_relation() {
        assert!((spherical_function(3.0, 1e-12) - 1.0).abs() < 1e-12);
        assert!(spherical_function(PI, 1.0).abs() < 1e-16);
        // radial part of Delta + 1 applied to phi: phi'' + 2 coth r phi' + phi = -mu^2 phi
        let (mu, r0) = (2.3, 0.8);
        let t = Jet::variable(r0, 2);
        let phi = &t.scale(mu).sin() * &t.sinh().recip().scale(1.0 / mu);
        let (p0, p1, p2) = (phi.derivative_at(0), phi.derivative_at(1), phi.derivative_at(2));
        let lhs = p2 + p1 * (2.0 / r0.tanh()) + p0;
        assert!((lhs + p0 * mu * mu).norm() < 1e-8);
    }

    #[test]
    fn band_projector_diagonal_limit() {
        let (l, t) = (3.0f64, 2.0f64);
        let b = l + 1.0 / t;
        let want = (b.powi(3) - l.powi(3)) / 3.0 / (2.0 * PI * PI);
        let v = band_projector_kernel(l, t, 1e-9).unwrap();
        assert!((v - want).abs() < 1e-10 * want);
        assert!(v > 0.0);
        assert!((BandProjector { lambda: l, t }.eval(1e-4).re - want).abs() < 1e-6 * want);
    }

    #[test]
    fn band_projector_quadrature_matches_closed_form() {
        let bp = BandProjector { lambda: 0.0, t: 1.0 };
        for &r in &[0.01, 1.0, 4.0] {
            let q = band_projector_kernel(0.0, 1.0, r).unwrap();
            assert!((q - bp.eval(r).re).abs() < 1e-12 * q.abs().max(1e-2), "r={r}");
        }
    }

    #[test]
    fn closed_form_shell_integrals() {
        struct Numeric<K>(K);
        impl<K: RadialKernel> RadialKernel for Numeric<K> {
            fn eval(&self, r: f64) -> Complex64 {
                self.0.eval(r)
            }
        }
        let res = H3Resolvent::new(Complex64::new(0.7, -3.0)).unwrap();
        let band = BandProjector { lambda: 5.0, t: 2.0 };
        for &(a, b) in &[(0.3, 1.7), (1.0, 2.5)] {
            assert!((res.shell_integral(a, b) - Numeric(res).shell_integral(a, b)).norm() < 1e-10);
            assert!((band.shell_integral(a, b) - Numeric(band).shell_integral(a, b)).norm() < 1e-10);
        }
    }
}
