//! Resolvents built from the half-wave group: the damped time integral of
//! `cos tP`, its tail multiplier and the local piece near the diagonal.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::context::{SphereContext, SpectralParamZeta};
use super::kernel::{kernel_from_values, DegreeWindow, ZonalKernel};
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::special::{composite_legendre, gauss_legendre};
use crate::windows::WindowFamily;

/// Composite Gauss-Legendre rule on `[0, T_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeQuadrature {
    /// Upper bound on the panel length; shortened automatically so each
    /// panel sees at most ~20 radians of oscillation.
    pub panel_length: f64,
    pub nodes_per_panel: usize,
}

impl Default for TimeQuadrature {
    fn default() -> Self {
        Self { panel_length: 0.25, nodes_per_panel: 32 }
    }
}

impl TimeQuadrature {
    fn nodes(&self, t_max: f64, max_frequency: f64) -> (Vec<f64>, Vec<f64>) {
        let len = self.panel_length.min(20.0 / max_frequency.max(1e-300));
        let panels = (t_max / len).ceil().max(1.0) as usize;
        let h = t_max / panels as f64;
        let base = gauss_legendre(self.nodes_per_panel);
        let mut ts = Vec::with_capacity(panels * base.0.len());
        let mut ws = Vec::with_capacity(panels * base.0.len());
        for p in 0..panels {
            let mid = h * (p as f64 + 0.5);
            for (x, w) in base.0.iter().zip(base.1.iter()) {
                ts.push(mid + 0.5 * h * x);
                ws.push(0.5 * h * w);
            }
        }
        (ts, ws)
    }
}

/// `sgn(mu) / (i (lambda + i mu))` and the exponent `i sgn(mu) lambda - |mu|`.
fn damped_profile(lambda: f64, mu: f64) -> (Complex64, Complex64) {
    let sgn = mu.signum();
    let w = Complex64::new(lambda, mu);
    (Complex64::new(sgn, 0.0) / (Complex64::i() * w), Complex64::new(-mu.abs(), sgn * lambda))
}

/// Resolvent kernel obtained by integrating the windowed wave kernel
/// against `sgn(mu)/(i(lambda+i mu)) e^{i sgn(mu) lambda t - |mu| t}` over
/// `[0, T_max]`.
///
/// The time integral is applied to each degree of `cos tP`, which is the
/// same linear functional of the wave kernel.
pub fn resolvent_via_wave(
    ctx: &SphereContext,
    zeta: &SpectralParamZeta,
    t_max: f64,
    quad: TimeQuadrature,
    k_max: usize,
    window: DegreeWindow,
) -> Result<ZonalKernel> {
    let mu = zeta.mu;
    if mu == 0.0 {
        return Err(Error::Domain("wave representation needs mu != 0".into()));
    }
    let required = 30.0 / mu.abs();
    if t_max < required {
        return Err(Error::InsufficientDamping { mu, t_max, required });
    }
    let (pref, expo) = damped_profile(zeta.lambda, mu);
    let top = ctx.eigenvalue(k_max) + zeta.lambda;
    let (ts, ws) = quad.nodes(t_max, top);
    let g: Vec<Complex64> = ts.iter().zip(&ws).map(|(&t, &w)| pref * (expo * t).exp() * w).collect();
    let values: Vec<Complex64> = (0..=k_max)
        .into_par_iter()
        .map(|k| {
            let l = ctx.eigenvalue(k);
            ts.iter().zip(&g).map(|(&t, &gj)| gj * (t * l).cos()).sum()
        })
        .collect();
    kernel_from_values(ctx, &values, window, "resolvent_via_wave")
}

/// `int_a^inf e^{c t} dt` for `Re c < 0`.
fn exp_tail(c: Complex64, a: f64) -> Complex64 {
    -(c * a).exp() / c
}

/// `int_a^b e^{c t} dt`.
fn exp_segment(c: Complex64, a: f64, b: f64) -> Complex64 {
    if c.norm() < 1e-12 {
        return Complex64::from(b - a);
    }
    ((c * b).exp() - (c * a).exp()) / c
}

/// `m(tau) = sgn(mu)/(i(lambda + i mu)) int_0^inf (1 - rho(t)) e^{i sgn(mu) lambda t - |mu| t} cos(t tau) dt`.
pub fn tail_multiplier(lambda: f64, mu: f64, tau: f64, windows: &WindowFamily) -> Result<Complex64> {
    if mu == 0.0 {
        return Err(Error::Domain("tail multiplier needs mu != 0".into()));
    }
    let (pref, a) = damped_profile(lambda, mu);
    let freq = lambda.abs() + tau.abs();
    let panels = ((freq * 0.5 / 10.0).ceil() as usize).max(4);
    let ramp = composite_legendre(0.5, 1.0, panels, 32, |t| (a * t).exp() * ((1.0 - windows.rho(t)) * (tau * t).cos()));
    let iv = Complex64::new(0.0, tau);
    let far = 0.5 * (exp_tail(a + iv, 1.0) + exp_tail(a - iv, 1.0));
    Ok(pref * (ramp + far))
}

/// Multiplier of the local resolvent piece (cutoff `rho`).
pub fn local_multiplier(lambda: f64, mu: f64, tau: f64, windows: &WindowFamily) -> Complex64 {
    let (pref, a) = damped_profile(lambda, mu);
    let freq = lambda.abs() + tau.abs();
    let panels = ((freq * 0.5 / 10.0).ceil() as usize).max(4);
    let ramp = composite_legendre(0.5, 1.0, panels, 32, |t| (a * t).exp() * (windows.rho(t) * (tau * t).cos()));
    let iv = Complex64::new(0.0, tau);
    let flat = 0.5 * (exp_segment(a + iv, 0.0, 0.5) + exp_segment(a - iv, 0.0, 0.5));
    pref * (ramp + flat)
}

#[derive(Debug, Clone, Serialize)]
pub struct TailDecayRecord {
    pub tau: f64,
    pub scaled_modulus: f64,
    /// `lambda |m(tau)| (1 + |lambda - tau|)^N / peak`.
    pub decay_constant: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TailDecayReport {
    pub lambda: f64,
    pub mu: f64,
    pub order: i32,
    pub peak: f64,
    pub max_constant: f64,
    pub records: Vec<TailDecayRecord>,
}

/// Tabulates `lambda |m(tau)|` and the constant needed in
/// `lambda |m(tau)| <= C peak (1 + |lambda - tau|)^{-N}`.
pub fn tail_decay_report(lambda: f64, mu: f64, taus: &[f64], order: i32, windows: &WindowFamily) -> Result<TailDecayReport> {
    let peak = lambda * tail_multiplier(lambda, mu, lambda, windows)?.norm();
    let records = taus
        .iter()
        .map(|&tau| {
            let v = lambda * tail_multiplier(lambda, mu, tau, windows)?.norm();
            Ok(TailDecayRecord {
                tau,
                scaled_modulus: v,
                decay_constant: v * (1.0 + (lambda - tau).abs()).powi(order) / peak,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_constant = records.iter().map(|r| r.decay_constant).fold(0.0, f64::max);
    Ok(TailDecayReport { lambda, mu, order, peak, max_constant, records })
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalSample {
    pub d: f64,
    pub re: f64,
    pub im: f64,
    pub a_plus: f64,
    pub a_minus: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalResolventReport {
    pub n: usize,
    pub lambda: f64,
    pub mu: f64,
    pub truncation: usize,
    /// `max |a_pm| d^{(n-1)/2} lambda^{-(n-3)/2}` over `d >= 1/lambda`.
    pub far_constant: f64,
    /// `max |K(d)| d^{n-2}` over `d <= 1/lambda`.
    pub near_constant: f64,
    /// Largest amplitude on `[pi - 1/2, pi - 1/lambda]`.
    pub antipodal_amplitude: f64,
    /// Relative deviation from the exact `S^3` descent formula.
    pub exact_deviation: Option<f64>,
    pub flagged: Vec<f64>,
    pub samples: Vec<LocalSample>,
}

/// Exact kernel of the local piece on `S^3`:
/// `-A'(d) / (4 pi sin d)` with `A(t) = sgn/(i w) rho(t) e^{(i sgn lambda - |mu|) t}`.
pub fn local_resolvent_exact_s3(lambda: f64, mu: f64, d: f64, windows: &WindowFamily) -> Complex64 {
    let (pref, a) = damped_profile(lambda, mu);
    let t = Jet::variable(d, 1);
    let amp = &windows.rho_jet(&t) * &t.scale(a).exp();
    -pref * amp.derivative_at(1) / (4.0 * PI * d.sin())
}

/// Builds the local resolvent kernel from its spectral sum and measures the
/// oscillatory amplitudes against `e^{+- i lambda d}`.
pub fn local_resolvent_check(
    ctx: &SphereContext,
    lambda: f64,
    mu: f64,
    windows: &WindowFamily,
    distances: &[f64],
) -> Result<LocalResolventReport> {
    let n = ctx.n();
    if n < 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    if lambda < 1.0 || mu == 0.0 {
        return Err(Error::Domain(format!("need lambda >= 1 and mu != 0, got ({lambda}, {mu})")));
    }
    let k_max = ((32.0 * lambda).ceil() as usize).max(512);
    let values: Vec<Complex64> =
        (0..=k_max).into_par_iter().map(|k| local_multiplier(lambda, mu, ctx.eigenvalue(k), windows)).collect();
    let kernel = kernel_from_values(ctx, &values, DegreeWindow::gaussian_for(k_max), "local_resolvent")?;
    let q = PI / (2.0 * lambda);
    let half = (n as f64 - 1.0) / 2.0;
    let mut report = LocalResolventReport {
        n,
        lambda,
        mu,
        truncation: k_max,
        far_constant: 0.0,
        near_constant: 0.0,
        antipodal_amplitude: 0.0,
        exact_deviation: None,
        flagged: Vec::new(),
        samples: Vec::new(),
    };
    let mut dev: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for &d in distances {
        if !(d > 0.0 && d < PI) {
            return Err(Error::Domain(format!("distance {d} outside (0, pi)")));
        }
        let v = kernel.eval_distance(d);
        let (mut ap, mut am) = (f64::NAN, f64::NAN);
        if d <= 1.0 / lambda {
            report.near_constant = report.near_constant.max(v.norm() * d.powi(n as i32 - 2));
        } else if d + q < PI {
            let v2 = kernel.eval_distance(d + q);
            ap = ((v - Complex64::i() * v2) * 0.5).norm();
            am = ((v + Complex64::i() * v2) * 0.5).norm();
            let c = ap.max(am) * d.powf(half) * lambda.powf(-(n as f64 - 3.0) / 2.0);
            report.far_constant = report.far_constant.max(c);
            if d >= PI - 0.5 {
                report.antipodal_amplitude = report.antipodal_amplitude.max(ap.max(am));
            }
        } else {
            report.flagged.push(d);
        }
        if n == 3 && d >= 1.0 / lambda && d <= 1.2 {
            let exact = local_resolvent_exact_s3(lambda, mu, d, windows);
            dev = dev.max((v - exact).norm());
            scale = scale.max(exact.norm());
        }
        report.samples.push(LocalSample { d, re: v.re, im: v.im, a_plus: ap, a_minus: am });
    }
    if n == 3 && scale > 0.0 {
        report.exact_deviation = Some(dev / scale);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::kernel::resolvent_kernel;

    fn s3() -> SphereContext {
        SphereContext::unit(3).unwrap()
    }

    #[test]
    fn wave_identity_matches_spectral_sum() {
        let c = s3();
        let z = SpectralParamZeta::from_lambda_mu(2.0, 3.0).unwrap();
        let k_max = 64;
        let w = DegreeWindow::gaussian_for(k_max);
        let via = resolvent_via_wave(&c, &z, 30.0 / 3.0, TimeQuadrature::default(), k_max, w).unwrap();
        let direct = resolvent_kernel(&c, &z, Some(k_max), w).unwrap();
        let a = via.eval_distance(1.0);
        let b = direct.eval_distance(1.0);
        assert!((a - b).norm() <= 1e-4 * b.norm(), "{a} vs {b}");
    }

    #[test]
    fn negative_real_zeta_branch() {
        let c = s3();
        let z = SpectralParamZeta::new(Complex64::new(-4.0, 0.0));
        let w = DegreeWindow::gaussian_for(64);
        let via = resolvent_via_wave(&c, &z, 15.0, TimeQuadrature::default(), 64, w).unwrap();
        let direct = resolvent_kernel(&c, &z, Some(64), w).unwrap();
        for &d in &[0.3, 1.5, 2.8] {
            let b = direct.eval_distance(d);
            assert!((via.eval_distance(d) - b).norm() <= 1e-4 * b.norm());
        }
    }

    #[test]
    fn conjugate_symmetry_in_mu() {
        let c = s3();
        let w = DegreeWindow::gaussian_for(64);
        let zp = SpectralParamZeta::from_lambda_mu(3.0, 1.5).unwrap();
        let zm = SpectralParamZeta::from_lambda_mu(3.0, -1.5).unwrap();
        let a = resolvent_via_wave(&c, &zp, 20.0, TimeQuadrature::default(), 64, w).unwrap();
        let b = resolvent_via_wave(&c, &zm, 20.0, TimeQuadrature::default(), 64, w).unwrap();
        for &d in &[0.4, 2.0] {
            assert!((a.eval_distance(d) - b.eval_distance(d).conj()).norm() < 1e-10);
        }
    }

    #[test]
    fn refuses_weak_damping() {
        let c = s3();
        let z = SpectralParamZeta::from_lambda_mu(3.0, 0.1).unwrap();
        let err = resolvent_via_wave(&c, &z, 10.0, TimeQuadrature::default(), 64, DegreeWindow::None).unwrap_err();
        assert!(matches!(err, Error::InsufficientDamping { required, .. } if (required - 300.0).abs() < 1e-9));
    }

    #[test]
    fn tail_multiplier_splits_the_full_multiplier() {
        // local + tail = (zeta - tau^2)^{-1}
        let w = WindowFamily;
        let (l, m) = (7.0, 1.3);
        let zeta = Complex64::new(l, m).powu(2);
        for &tau in &[0.0, 3.0, 7.0, 20.0] {
            let total = tail_multiplier(l, m, tau, &w).unwrap() + local_multiplier(l, m, tau, &w);
            let want = 1.0 / (zeta - tau * tau);
            assert!((total - want).norm() < 1e-12 * want.norm().max(1.0), "tau={tau}");
        }
    }

    #[test]
    fn tail_multiplier_conjugation() {
        let w = WindowFamily;
        let a = tail_multiplier(50.0, 1.0, 100.0, &w).unwrap();
        let b = tail_multiplier(50.0, -1.0, 100.0, &w).unwrap();
        assert!((a.norm() - b.norm()).abs() < 1e-15 * a.norm().max(1e-300) + 1e-18);
    }

    #[test]
    fn local_piece_matches_exact_s3_formula() {
        let c = s3();
        let ds: Vec<f64> = (1..40).map(|i| 0.03 * i as f64).collect();
        let r = local_resolvent_check(&c, 10.0, 1.0, &WindowFamily, &ds).unwrap();
        assert!(r.exact_deviation.unwrap() < 1e-2, "{:?}", r.exact_deviation);
    }

    #[test]
    fn exact_local_kernel_vanishes_beyond_unit_time() {
        let w = WindowFamily;
        assert_eq!(local_resolvent_exact_s3(10.0, 1.0, 1.5, &w).norm(), 0.0);
        // Near the diagonal it behaves like -1/(4 pi d).
        let d = 1e-4;
        let v = local_resolvent_exact_s3(10.0, 1.0, d, &w);
        assert!((v.re * 4.0 * PI * d + 1.0).abs() < 1e-2);
    }
}
