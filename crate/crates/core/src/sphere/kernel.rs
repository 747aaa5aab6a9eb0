//! Zonal kernels on `S^n` given by spectral multipliers.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use super::context::{SphereContext, SpectralParamZeta};
use crate::error::{Error, Result};

/// Smoothing applied to the degree sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DegreeWindow {
    None,
    /// Multiplies degree `k` by `exp(-(k / width)^2)`.
    Gaussian { width: f64 },
}

impl DegreeWindow {
    /// The default smoothing for a truncation `k_max`: Gaussian of width `k_max / 3`.
    pub fn gaussian_for(k_max: usize) -> Self {
        Self::Gaussian { width: k_max as f64 / 3.0 }
    }

    pub fn weight(&self, k: usize) -> f64 {
        match *self {
            Self::None => 1.0,
            Self::Gaussian { width } => (-(k as f64 / width).powi(2)).exp(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelMeta {
    pub label: String,
    pub truncation: usize,
    pub window: DegreeWindow,
    /// `min_k |zeta - lambda_k^2|` over the retained degrees.
    pub distance_to_spectrum: Option<f64>,
    pub in_region: Option<bool>,
    /// Size of the next block of degrees relative to the kernel at `d = pi/2`.
    pub tail_estimate: f64,
    pub warnings: Vec<String>,
}

/// `K(cos d) = sum_{k <= K} m_k w_k H_k(cos d)` with multiplier values
/// `m_k`, window weights `w_k`.
#[derive(Debug, Clone)]
pub struct ZonalKernel {
    ctx: SphereContext,
    spectral: Vec<Complex64>,
    scale: Vec<f64>,
    meta: KernelMeta,
}

impl ZonalKernel {
    fn build(ctx: SphereContext, spectral: Vec<Complex64>, window: DegreeWindow, label: &str) -> Self {
        let omega = ctx.area();
        let scale = (0..spectral.len()).map(|k| ctx.harmonic_dim(k) as f64 / omega).collect();
        let meta = KernelMeta {
            label: label.to_string(),
            truncation: spectral.len() - 1,
            window,
            distance_to_spectrum: None,
            in_region: None,
            tail_estimate: 0.0,
            warnings: Vec::new(),
        };
        Self { ctx, spectral, scale, meta }
    }

    pub fn context(&self) -> &SphereContext {
        &self.ctx
    }

    pub fn meta(&self) -> &KernelMeta {
        &self.meta
    }

    pub fn truncation(&self) -> usize {
        self.spectral.len() - 1
    }

    /// Windowed multiplier values `m_k w_k`, the eigenvalues of the
    /// operator on degree-`k` harmonics.
    pub fn spectral_values(&self) -> &[Complex64] {
        &self.spectral
    }

    pub fn eval(&self, cosd: f64) -> Complex64 {
        let t = cosd.clamp(-1.0, 1.0);
        let alpha = self.ctx.half_dim();
        let mut acc = self.spectral[0] * self.scale[0];
        let kmax = self.truncation();
        if kmax == 0 {
            return acc;
        }
        let (mut p2, mut p1) = (1.0, t);
        acc += self.spectral[1] * (self.scale[1] * p1);
        for k in 2..=kmax {
            let p = next_normalized(k, alpha, t, p1, p2);
            acc += self.spectral[k] * (self.scale[k] * p);
            p2 = p1;
            p1 = p;
        }
        acc
    }

    pub fn eval_distance(&self, d: f64) -> Complex64 {
        self.eval(d.cos())
    }

    /// Average of `K(x . y)` over `y` in the latitude sphere at polar angle
    /// `theta2`, with `x` at polar angle `theta1` (product formula).
    pub fn latitude_mean(&self, cos1: f64, cos2: f64) -> Complex64 {
        let alpha = self.ctx.half_dim();
        let mut acc = self.spectral[0] * self.scale[0];
        let kmax = self.truncation();
        if kmax == 0 {
            return acc;
        }
        let (mut a2, mut a1, mut b2, mut b1) = (1.0, cos1, 1.0, cos2);
        acc += self.spectral[1] * (self.scale[1] * a1 * b1);
        for k in 2..=kmax {
            let a = next_normalized(k, alpha, cos1, a1, a2);
            let b = next_normalized(k, alpha, cos2, b1, b2);
            acc += self.spectral[k] * (self.scale[k] * a * b);
            a2 = a1;
            a1 = a;
            b2 = b1;
            b1 = b;
        }
        acc
    }

    /// Rows `d, Re K, Im K`.
    pub fn profile_csv(&self, distances: &[f64]) -> String {
        let mut out = String::from("d,re,im\n");
        for &d in distances {
            let v = self.eval_distance(d);
            let _ = writeln!(out, "{d:.17e},{:.17e},{:.17e}", v.re, v.im);
        }
        out
    }
}

/// One step of the normalized Gegenbauer recurrence `p_k = C_k / C_k(1)`.
#[inline]
fn next_normalized(k: usize, alpha: f64, t: f64, p1: f64, p2: f64) -> f64 {
    let kf = k as f64;
    (2.0 * (kf + alpha - 1.0) * t * p1 - (kf - 1.0) * p2) / (kf + 2.0 * alpha - 1.0)
}

/// Kernel of the projection onto degree-`k` harmonics at `cos d`, by the
/// addition theorem.
pub fn zonal_projector(ctx: &SphereContext, k: usize, cosd: f64) -> f64 {
    let t = cosd.clamp(-1.0, 1.0);
    let alpha = ctx.half_dim();
    let (mut p2, mut p1) = (1.0, t);
    let p = match k {
        0 => 1.0,
        1 => t,
        _ => {
            let mut p = p1;
            for j in 2..=k {
                p = next_normalized(j, alpha, t, p1, p2);
                p2 = p1;
                p1 = p;
            }
            p
        }
    };
    ctx.harmonic_dim(k) as f64 / ctx.area() * p
}

fn tail_estimate(ctx: &SphereContext, m: &dyn Fn(f64) -> Complex64, k_max: usize, window: DegreeWindow) -> f64 {
    let head: Complex64 = (0..=k_max)
        .map(|k| m(ctx.eigenvalue(k)) * window.weight(k) * zonal_projector(ctx, k, 0.0))
        .sum();
    let tail: f64 = (k_max + 1..=2 * k_max + 1)
        .map(|k| (m(ctx.eigenvalue(k)) * window.weight(k)).norm() * zonal_projector(ctx, k, 0.0).abs())
        .sum();
    tail / head.norm().max(f64::MIN_POSITIVE)
}

/// `sum_{k <= K} m(lambda_k) w_k H_k`.
pub fn multiplier_kernel<F>(ctx: &SphereContext, m: F, k_max: usize, window: DegreeWindow) -> Result<ZonalKernel>
where
    F: Fn(f64) -> Complex64,
{
    if k_max < 1 {
        return Err(Error::Domain("truncation must be at least 1".into()));
    }
    let spectral: Vec<Complex64> = (0..=k_max).map(|k| m(ctx.eigenvalue(k)) * window.weight(k)).collect();
    if spectral.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("multiplier value".into()));
    }
    let mut kernel = ZonalKernel::build(*ctx, spectral, window, "multiplier");
    let tail = tail_estimate(ctx, &m, k_max, window);
    kernel.meta.tail_estimate = tail;
    if tail > 1e-8 {
        kernel.meta.warnings.push(format!("truncation tail estimate {tail:.3e} exceeds 1e-8"));
    }
    Ok(kernel)
}

/// Kernel from precomputed multiplier values `m_0..m_K` (no tail estimate).
pub fn kernel_from_values(ctx: &SphereContext, values: &[Complex64], window: DegreeWindow, label: &str) -> Result<ZonalKernel> {
    if values.len() < 2 {
        return Err(Error::Domain("truncation must be at least 1".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("multiplier value".into()));
    }
    let spectral = values.iter().enumerate().map(|(k, v)| v * window.weight(k)).collect();
    Ok(ZonalKernel::build(*ctx, spectral, window, label))
}

/// Default truncation for the resolvent at `zeta`: `max(4 Re sqrt(zeta), 64)`.
pub fn default_truncation(zeta: &SpectralParamZeta) -> usize {
    ((4.0 * zeta.lambda).ceil() as usize).max(64)
}

/// Kernel of `(Delta - ((n-1)/2)^2 + zeta)^{-1} = sum (zeta - lambda_k^2)^{-1} H_k`.
pub fn resolvent_kernel(
    ctx: &SphereContext,
    zeta: &SpectralParamZeta,
    k_max: Option<usize>,
    window: DegreeWindow,
) -> Result<ZonalKernel> {
    let k_max = k_max.unwrap_or_else(|| default_truncation(zeta));
    let mut dist = f64::INFINITY;
    for k in 0..=k_max {
        let gap = (zeta.zeta - ctx.eigenvalue(k).powi(2)).norm();
        if gap < 1e-12 {
            return Err(Error::SpectrumHit { k, distance: gap });
        }
        dist = dist.min(gap);
    }
    let z = zeta.zeta;
    let mut kernel = multiplier_kernel(ctx, move |l| 1.0 / (z - l * l), k_max, window)?;
    kernel.meta.label = "resolvent".into();
    kernel.meta.distance_to_spectrum = Some(dist);
    kernel.meta.in_region = Some(zeta.in_region());
    if dist < 1e-3 {
        kernel.meta.warnings.push(format!("spectral parameter within {dist:.3e} of the spectrum"));
    }
    Ok(kernel)
}

/// Multiplier of `cos tP` at eigenvalue `lambda`.
pub fn wave_multiplier(t: f64, lambda: f64) -> f64 {
    (t * lambda).cos()
}

/// Windowed kernel of `cos tP`.
pub fn wave_kernel(ctx: &SphereContext, t: f64, k_max: usize, window: DegreeWindow) -> Result<ZonalKernel> {
    let mut kernel = multiplier_kernel(ctx, |l| Complex64::from(wave_multiplier(t, l)), k_max, window)?;
    kernel.meta.label = "wave".into();
    Ok(kernel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::sphere_grid;
    use std::f64::consts::PI;

    fn s3() -> SphereContext {
        SphereContext::unit(3).unwrap()
    }

    /// Closed form of the S^3 projector kernel.
    fn h_s3(k: usize, theta: f64) -> f64 {
        let l = k as f64 + 1.0;
        l * (l * theta).sin() / (2.0 * PI * PI * theta.sin())
    }

    #[test]
    fn projector_examples() {
        let c = s3();
        for &t in &[-0.7, 0.0, 0.4, 1.0] {
            assert!((zonal_projector(&c, 0, t) - 1.0 / (2.0 * PI * PI)).abs() < 1e-15);
        }
        assert!(zonal_projector(&c, 1, 0.0).abs() < 1e-15);
        for k in [2usize, 7, 31, 120] {
            for &th in &[0.3, 1.1, 2.0, 2.9] {
                let want = h_s3(k, th);
                let got = zonal_projector(&c, k, th.cos());
                assert!((got - want).abs() <= 1e-10 * (1.0 + want.abs()), "k={k} th={th}");
            }
        }
    }

    #[test]
    fn projector_parity_is_exact() {
        for n in 2..=4 {
            let c = SphereContext::unit(n).unwrap();
            for k in 0..60 {
                for &t in &[0.13, 0.5, 0.91] {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    assert_eq!(zonal_projector(&c, k, -t), sign * zonal_projector(&c, k, t));
                }
            }
        }
    }

    #[test]
    fn indicator_multiplier_is_projector() {
        let c = s3();
        let j = 5;
        let lj = c.eigenvalue(j);
        let kern = multiplier_kernel(
            &c,
            |l| Complex64::from(if (l - lj).abs() < 1e-9 { 1.0 } else { 0.0 }),
            20,
            DegreeWindow::None,
        )
        .unwrap();
        for &t in &[-0.9, 0.2, 0.77] {
            assert!((kern.eval(t).re - zonal_projector(&c, j, t)).abs() < 1e-14);
        }
    }

    #[test]
    fn identity_multiplier_reproduces_polynomials() {
        // f(x) = x_0^2 has degree 2; the degree-<=K identity kernel reproduces it.
        let c = s3();
        let kern = multiplier_kernel(&c, |_| Complex64::from(1.0), 4, DegreeWindow::None).unwrap();
        let g = sphere_grid::<f64>(3, 10).unwrap();
        let x = [0.6, 0.0, 0.8, 0.0];
        let v: f64 = g
            .nodes()
            .zip(g.weights())
            .map(|(y, w)| {
                let dot: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
                kern.eval(dot).re * y[0] * y[0] * w
            })
            .sum();
        assert!((v - 0.36).abs() < 1e-12);
    }

    #[test]
    fn negative_zeta_resolvent_is_positive_decreasing() {
        // zeta = -1: kernel of -(P^2 + 1)^{-1}, so the negated kernel is
        // positive and decreasing in d.
        let c = s3();
        let z = SpectralParamZeta::new(Complex64::new(-1.0, 0.0));
        let k = resolvent_kernel(&c, &z, Some(400), DegreeWindow::gaussian_for(400)).unwrap();
        let mut prev = f64::INFINITY;
        for i in 1..60 {
            let d = 0.1 + (PI - 0.2) * i as f64 / 60.0;
            let v = -k.eval_distance(d);
            assert!(v.im.abs() < 1e-14);
            assert!(v.re > 0.0);
            assert!(v.re < prev);
            prev = v.re;
        }
    }

    #[test]
    fn spectrum_hit_and_near_pole() {
        let c = s3();
        let z = SpectralParamZeta::new(Complex64::new(36.0, 0.0));
        assert!(matches!(resolvent_kernel(&c, &z, None, DegreeWindow::None), Err(Error::SpectrumHit { k: 5, .. })));
        let near = SpectralParamZeta::new(Complex64::new(36.0 + 1e-6, 0.0));
        let base = SpectralParamZeta::new(Complex64::new(-1.0, 0.0));
        let kn = resolvent_kernel(&c, &near, Some(64), DegreeWindow::None).unwrap();
        let kb = resolvent_kernel(&c, &base, Some(64), DegreeWindow::None).unwrap();
        assert!(!kn.meta().warnings.is_empty());
        assert!(kn.eval(1.0).norm() > 1e5 * kb.eval(1.0).norm());
        let arc = SpectralParamZeta::new(Complex64::new(100.0, 21.0));
        let k = resolvent_kernel(&c, &arc, None, DegreeWindow::None).unwrap();
        assert_eq!(k.meta().in_region, Some(true));
        assert!(k.eval(0.3).is_finite());
    }

    #[test]
    fn wave_at_zero_is_windowed_identity() {
        let c = s3();
        let w = DegreeWindow::gaussian_for(48);
        let wave = wave_kernel(&c, 0.0, 48, w).unwrap();
        let id = multiplier_kernel(&c, |_| Complex64::from(1.0), 48, w).unwrap();
        for &t in &[-0.5, 0.1, 0.9] {
            assert!((wave.eval(t) - id.eval(t)).norm() < 1e-12);
        }
    }

    #[test]
    fn latitude_mean_matches_direct_average() {
        let c = SphereContext::unit(2).unwrap();
        let kern = multiplier_kernel(&c, |l| Complex64::new(1.0 / (1.0 + l * l), 0.3 / (1.0 + l)), 30, DegreeWindow::None).unwrap();
        let (t1, t2) = (0.7f64, 2.1f64);
        let m = 4000;
        let direct: Complex64 = (0..m)
            .map(|j| {
                let phi = 2.0 * PI * j as f64 / m as f64;
                kern.eval(t1.cos() * t2.cos() + t1.sin() * t2.sin() * phi.cos())
            })
            .sum::<Complex64>()
            / m as f64;
        assert!((direct - kern.latitude_mean(t1.cos(), t2.cos())).norm() < 1e-12);
    }
}
