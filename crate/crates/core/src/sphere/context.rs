use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::sphere_area;

/// Round sphere `S^n` of curvature `kappa`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphereContext {
    n: usize,
    kappa: f64,
}

impl SphereContext {
    pub fn new(n: usize, kappa: f64) -> Result<Self> {
        if !(2..=4).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::Domain(format!("curvature must be positive, got {kappa}")));
        }
        Ok(Self { n, kappa })
    }

    /// Unit sphere.
    pub fn unit(n: usize) -> Result<Self> {
        Self::new(n, 1.0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// `(n - 1) / 2`, also the Gegenbauer index of the zonal harmonics.
    pub fn half_dim(&self) -> f64 {
        (self.n as f64 - 1.0) / 2.0
    }

    /// `lambda_k = k + (n - 1)/2` for curvature one.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        k as f64 + self.half_dim()
    }

    /// Eigenvalues of `sqrt(-Delta_kappa + kappa ((n-1)/2)^2)`.
    pub fn scaled_eigenvalue(&self, k: usize) -> f64 {
        self.kappa.sqrt() * self.eigenvalue(k)
    }

    pub fn shift(&self) -> f64 {
        self.kappa * self.half_dim().powi(2)
    }

    /// Dimension of degree-`k` spherical harmonics on `S^n`.
    pub fn harmonic_dim(&self, k: usize) -> u64 {
        let n = self.n as u64;
        let k = k as u64;
        let hi = binom(n + k, n);
        let lo = if k >= 2 { binom(n + k - 2, n) } else { 0 };
        hi - lo
    }

    /// Volume of the unit sphere `S^n`.
    pub fn area(&self) -> f64 {
        sphere_area(self.n)
    }
}

fn binom(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Spectral parameter `zeta = (lambda + i mu)^2` with the principal root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralParamZeta {
    pub zeta: Complex64,
    pub lambda: f64,
    pub mu: f64,
}

impl SpectralParamZeta {
    pub fn new(zeta: Complex64) -> Self {
        let w = zeta.sqrt();
        Self { zeta, lambda: w.re, mu: w.im }
    }

    /// From `(lambda, mu)` with `lambda >= 0`.
    pub fn from_lambda_mu(lambda: f64, mu: f64) -> Result<Self> {
        if lambda < 0.0 {
            return Err(Error::Domain(format!("lambda must be nonnegative, got {lambda}")));
        }
        let w = Complex64::new(lambda, mu);
        Ok(Self { zeta: w * w, lambda, mu })
    }

    pub fn root(&self) -> Complex64 {
        Complex64::new(self.lambda, self.mu)
    }

    /// Membership in the uniformity region `Re zeta <= (Im zeta)^2`.
    pub fn in_region(&self) -> bool {
        self.zeta.re <= self.zeta.im * self.zeta.im
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalues() {
        let s3 = SphereContext::unit(3).unwrap();
        assert_eq!(s3.eigenvalue(0), 1.0);
        assert_eq!(s3.eigenvalue(5), 6.0);
        assert_eq!(SphereContext::unit(4).unwrap().eigenvalue(2), 3.5);
        let s = SphereContext::new(3, 4.0).unwrap();
        assert_eq!(s.scaled_eigenvalue(1), 4.0);
        assert_eq!(s.shift(), 4.0);
    }

    #[test]
    fn harmonic_dimensions() {
        let s3 = SphereContext::unit(3).unwrap();
        assert_eq!(s3.harmonic_dim(0), 1);
        assert_eq!(s3.harmonic_dim(1), 4);
        for k in 0..40 {
            assert_eq!(s3.harmonic_dim(k), ((k + 1) * (k + 1)) as u64);
        }
        let s2 = SphereContext::unit(2).unwrap();
        for k in 0..40 {
            assert_eq!(s2.harmonic_dim(k), (2 * k + 1) as u64);
        }
    }

    #[test]
    fn region_membership() {
        assert!(SpectralParamZeta::new(Complex64::new(100.0, 21.0)).in_region());
        assert!(SpectralParamZeta::new(Complex64::new(25.0, 5.0)).in_region());
        assert!(!SpectralParamZeta::new(Complex64::new(441.0, 1e-4)).in_region());
        let z = SpectralParamZeta::new(Complex64::new(-4.0, 0.0));
        assert_eq!(z.lambda, 0.0);
        assert!((z.mu - 2.0).abs() < 1e-15);
        let z = SpectralParamZeta::from_lambda_mu(2.0, 3.0).unwrap();
        let back = SpectralParamZeta::new(z.zeta);
        assert!((back.lambda - 2.0).abs() < 1e-14 && (back.mu - 3.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_context() {
        assert!(SphereContext::unit(5).is_err());
        assert!(SphereContext::new(3, 0.0).is_err());
    }
}
