//! Oscillatory structure of the projector kernels away from the diagonal
//! and the antipode.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::context::SphereContext;
use super::kernel::zonal_projector;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticSample {
    pub d: f64,
    pub residual: f64,
    pub a_plus: [f64; 2],
    pub a_minus: [f64; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticFit {
    pub k: usize,
    pub lambda: f64,
    /// `sup_d |H_k| / (1 + k)^{n-1}`.
    pub sup_ratio: f64,
    /// Per-distance relative residual of the two-wave representation.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    /// `max_d |d^j a_pm / dr^j| r^{j + (n-1)/2}` for `j = 0, 1, 2`.
    pub derivative_constants: [f64; 3],
    /// Relative residual of the antipodal representation.
    pub antipodal_residual: f64,
    /// Distances whose quarter-period partner left the admissible range.
    pub ill_conditioned: Vec<f64>,
    pub samples: Vec<AsymptoticSample>,
}

/// Amplitudes `(A, B)` with `g(d) = A + B`, where `A ~ a_+ e^{i lambda d}`,
/// from values at `d` and `d + pi/(2 lambda)`.
fn split(g0: f64, g1: f64) -> (Complex64, Complex64) {
    let i = Complex64::i();
    ((g0 - i * g1) * 0.5, (g0 + i * g1) * 0.5)
}

struct Extractor<'a> {
    ctx: &'a SphereContext,
    k: usize,
    lambda: f64,
    half: f64,
}

impl Extractor<'_> {
    /// `H_k(d) (sin d)^{(n-1)/2} / lambda^{(n-1)/2}`: a two-wave signal with
    /// slowly varying coefficients.
    fn normalized(&self, d: f64) -> f64 {
        zonal_projector(self.ctx, self.k, d.cos()) * d.sin().powf(self.half) / self.lambda.powf(self.half)
    }

    fn waves(&self, d: f64) -> (Complex64, Complex64) {
        split(self.normalized(d), self.normalized(d + PI / (2.0 * self.lambda)))
    }

    /// `a_pm(d)` in `H_k = lambda^{(n-1)/2} sum a_pm e^{+- i lambda d}`.
    fn amplitudes(&self, d: f64) -> (Complex64, Complex64) {
        let (a, b) = self.waves(d);
        let env = d.sin().powf(self.half);
        let ph = Complex64::from_polar(1.0, self.lambda * d);
        (a / ph / env, b * ph / env)
    }
}

/// Checks the two-wave representation of `H_k` on `[1/lambda_k, 3pi/4]`,
/// its amplitude derivative bounds and the antipodal identity.
pub fn projector_asymptotics_check(ctx: &SphereContext, k: usize, distances: &[f64]) -> Result<AsymptoticFit> {
    let lambda = ctx.eigenvalue(k);
    // The quarter-period partner of d = 1/lambda must stay below 3pi/4.
    if (1.0 + PI / 2.0) / lambda > 0.75 * PI {
        return Err(Error::Domain(format!("degree {k} below asymptotic threshold")));
    }
    let ex = Extractor { ctx, k, lambda, half: ctx.half_dim() };
    let q = PI / (2.0 * lambda);
    let (lo, hi) = (1.0 / lambda, 0.75 * PI);

    let mut fit = AsymptoticFit {
        k,
        lambda,
        sup_ratio: 0.0,
        residuals: Vec::new(),
        max_residual: 0.0,
        derivative_constants: [0.0; 3],
        antipodal_residual: 0.0,
        ill_conditioned: Vec::new(),
        samples: Vec::new(),
    };

    let mut sup = zonal_projector(ctx, k, 1.0).abs();
    for i in 0..=4096 {
        let d = PI * i as f64 / 4096.0;
        sup = sup.max(zonal_projector(ctx, k, d.cos()).abs());
    }
    fit.sup_ratio = sup / (1.0 + k as f64).powi(ctx.n() as i32 - 1);

    for &d in distances {
        if d < lo || d > hi {
            continue;
        }
        if d + q > hi {
            fit.ill_conditioned.push(d);
            continue;
        }
        let (a, b) = ex.waves(d);
        let rot = Complex64::from_polar(1.0, PI / 4.0);
        let predicted = a * rot + b / rot;
        let actual = ex.normalized(d + q / 2.0);
        let residual = (predicted - actual).norm() / (a.norm() + b.norm()).max(f64::MIN_POSITIVE);
        fit.residuals.push(residual);
        fit.max_residual = fit.max_residual.max(residual);

        let (ap, am) = ex.amplitudes(d);
        let h = 1e-3 * d;
        if d - h >= lo && d + h + q <= hi {
            let (pp, pm) = ex.amplitudes(d + h);
            let (mp, mm) = ex.amplitudes(d - h);
            let w = d.powf(ex.half);
            let first = ((pp - mp).norm().max((pm - mm).norm())) / (2.0 * h);
            let second = ((pp - ap * 2.0 + mp).norm().max((pm - am * 2.0 + mm).norm())) / (h * h);
            let c = &mut fit.derivative_constants;
            c[0] = c[0].max(ap.norm().max(am.norm()) * w);
            c[1] = c[1].max(first * d * w);
            c[2] = c[2].max(second * d * d * w);
        }
        fit.samples.push(AsymptoticSample { d, residual, a_plus: [ap.re, ap.im], a_minus: [am.re, am.im] });
    }

    // H_k(d) = (-1)^k lambda^{(n-1)/2} sum a_pm(d*) e^{+- i lambda d*}, d* = pi - d.
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for &d in distances {
        if d < PI / 4.0 || d > PI - lo {
            continue;
        }
        let ds = PI - d;
        if ds + q > PI {
            continue;
        }
        let (a, b) = ex.waves(ds);
        let rebuilt = sign * (a + b).re * lambda.powf(ex.half) / ds.sin().powf(ex.half);
        let exact = zonal_projector(ctx, k, d.cos());
        worst = worst.max((rebuilt - exact).abs());
        scale = scale.max(exact.abs());
    }
    fit.antipodal_residual = if scale > 0.0 { worst / scale } else { 0.0 };
    Ok(fit)
}
