use serde::Serialize;

use crate::error::{Error, Result};

/// Hyperbolic space `H^n` of curvature `-kappa`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HyperbolicContext {
    n: usize,
    kappa: f64,
}

impl HyperbolicContext {
    pub fn new(n: usize, kappa: f64) -> Result<Self> {
        if !(2..=4).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::Domain(format!("curvature magnitude must be positive, got {kappa}")));
        }
        Ok(Self { n, kappa })
    }

    pub fn unit(n: usize) -> Result<Self> {
        Self::new(n, 1.0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// `kappa ((n - 1)/2)^2`, the bottom of the spectrum of `-Delta`.
    pub fn shift(&self) -> f64 {
        self.kappa * ((self.n as f64 - 1.0) / 2.0).powi(2)
    }

    /// Constant `c_n` in the kernel of `int a(t) cos(tP) dt`: for odd `n`
    /// it multiplies `(sinh^{-1} d/dr)^{(n-1)/2} a`, for even `n` the
    /// descent integral of `(sinh^{-1} d/ds)^{n/2} a`.
    pub fn descent_constant(&self) -> f64 {
        use std::f64::consts::{PI, SQRT_2};
        match self.n {
            2 => -1.0 / (2.0 * SQRT_2 * PI),
            3 => -1.0 / (4.0 * PI),
            4 => 1.0 / (4.0 * SQRT_2 * PI * PI),
            _ => unreachable!("dimension checked at construction"),
        }
    }
}
