//! Parameter scans producing mixed-norm lower bounds and slope fits.

use num_complex::Complex64;
use serde_json::json;

use super::fit::slope_fit;
use super::lp::MixedNormSpec;
use super::operator::DiscretizedOperator;
use super::power::{mixed_norm_power_iterate, NormEstimate, PowerOptions};
use super::zonal::{ball_zonal_operator, sphere_zonal_generic, sphere_zonal_operator, PolarGrid, RadialGrid};
use crate::error::{Error, Result};
use crate::hyperbolic::{sk_sup, BandProjector, DescentKernel, HyperbolicContext, Piece};
use crate::report::{ScanRecord, ScanReport};
use crate::special::sphere_grid;
use crate::sphere::{
    default_truncation, kernel_from_values, resolvent_kernel, resolvent_scaling_factor, DegreeWindow,
    SpectralParamZeta, SphereContext,
};
use crate::windows::smooth_step;

fn estimate(op: &DiscretizedOperator, spec: &MixedNormSpec, opts: &PowerOptions) -> Result<NormEstimate> {
    mixed_norm_power_iterate(op, spec, opts)
}

fn band_ratio(values: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = values.fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    hi / lo
}

/// Polar node count resolving frequency `freq` on `S^n`.
pub fn polar_nodes_for(freq: f64) -> usize {
    (4.0 * freq).ceil() as usize + 64
}

/// Radial panel length resolving frequency `freq` with 8-node panels.
pub fn radial_panel_for(freq: f64) -> f64 {
    (3.0 / freq.max(1e-9)).min(0.25)
}

/// `sup |H_k| = d_k / omega_n` over `k in ks`, with the log-log slope.
pub fn projector_sup_scan(ctx: &SphereContext, ks: &[usize]) -> Result<ScanReport> {
    let mut rep = ScanReport::new("projector_sup", json!({ "n": ctx.n(), "k": ks }));
    let mut pairs = Vec::new();
    for &k in ks {
        // Sample the profile; the maximum sits at d = 0.
        let sup = (0..=512)
            .map(|i| crate::sphere::zonal_projector(ctx, k, (std::f64::consts::PI * i as f64 / 512.0).cos()).abs())
            .fold(0.0, f64::max);
        rep.records.push(ScanRecord::value(&[("k", k as f64)], sup));
        pairs.push((k as f64, sup));
    }
    let fit = slope_fit(&pairs)?;
    rep.summary.insert("slope".into(), fit.slope);
    rep.fit = Some(fit);
    Ok(rep)
}

/// `||H_k||_{L^r -> L^s}` lower bounds on zonal functions, with the
/// log-log slope in `k`.
pub fn projector_norm_scan(ctx: &SphereContext, ks: &[usize], spec: &MixedNormSpec, opts: &PowerOptions) -> Result<ScanReport> {
    let mut rep = ScanReport::new(
        "projector_norm",
        json!({ "n": ctx.n(), "k": ks, "r": spec.r, "s": spec.s, "s_used": spec.s_used() }),
    );
    let mut pairs = Vec::new();
    for &k in ks {
        let mut values = vec![Complex64::new(0.0, 0.0); k.max(1) + 1];
        values[k] = Complex64::new(1.0, 0.0);
        let kernel = kernel_from_values(ctx, &values, DegreeWindow::None, "projector")?;
        let grid = PolarGrid::new(ctx.n(), polar_nodes_for(k as f64))?;
        let op = sphere_zonal_operator(&kernel, &grid)?;
        let est = estimate(&op, spec, opts)?;
        pairs.push((k as f64, est.value));
        rep.records.push(ScanRecord::new(&[("k", k as f64)], &est).with("nodes", grid.len() as f64));
    }
    let fit = slope_fit(&pairs)?;
    rep.summary.insert("slope".into(), fit.slope);
    rep.fit = Some(fit);
    Ok(rep)
}

fn sphere_resolvent_estimate(
    ctx: &SphereContext,
    zeta: Complex64,
    spec: &MixedNormSpec,
    opts: &PowerOptions,
) -> Result<(NormEstimate, usize)> {
    let z = SpectralParamZeta::new(zeta);
    let k_max = default_truncation(&z);
    let kernel = resolvent_kernel(ctx, &z, Some(k_max), DegreeWindow::None)?;
    let grid = PolarGrid::new(ctx.n(), polar_nodes_for(k_max as f64))?;
    let op = sphere_zonal_operator(&kernel, &grid)?;
    Ok((estimate(&op, spec, opts)?, k_max))
}

/// Sphere resolvent lower bounds along a path in the uniformity region,
/// at off-region probes and at interior points. Summary keys:
/// `path_ratio` (max/min along the path), `baseline` (path maximum),
/// `probe_ratio_min` and `inside_ratio_max` relative to the baseline.
pub fn resolvent_uniformity_scan(
    ctx: &SphereContext,
    path: &[Complex64],
    probes: &[Complex64],
    inside: &[Complex64],
    spec: &MixedNormSpec,
    opts: &PowerOptions,
) -> Result<ScanReport> {
    let zs = |v: &[Complex64]| v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>();
    let mut rep = ScanReport::new(
        "resolvent_uniformity",
        json!({ "n": ctx.n(), "path": zs(path), "probes": zs(probes), "inside": zs(inside), "r": spec.r, "s": spec.s }),
    );
    if path.is_empty() {
        return Err(Error::Config("resolvent path is empty".into()));
    }
    let mut run = |zeta: Complex64, role: f64| -> Result<f64> {
        let (est, k_max) = sphere_resolvent_estimate(ctx, zeta, spec, opts)?;
        let p = SpectralParamZeta::new(zeta);
        rep.records.push(
            ScanRecord::new(&[("zeta_re", zeta.re), ("zeta_im", zeta.im), ("role", role)], &est)
                .with("truncation", k_max as f64)
                .with("in_region", if p.in_region() { 1.0 } else { 0.0 }),
        );
        Ok(est.value)
    };
    let on_path: Vec<f64> = path.iter().map(|&z| run(z, 0.0)).collect::<Result<_>>()?;
    let probe: Vec<f64> = probes.iter().map(|&z| run(z, 1.0)).collect::<Result<_>>()?;
    let deep: Vec<f64> = inside.iter().map(|&z| run(z, 2.0)).collect::<Result<_>>()?;
    let baseline = on_path.iter().copied().fold(0.0, f64::max);
    rep.summary.insert("path_ratio".into(), band_ratio(on_path.iter().copied()));
    rep.summary.insert("baseline".into(), baseline);
    if !probe.is_empty() {
        rep.summary.insert("probe_ratio_min".into(), probe.iter().fold(f64::INFINITY, |a, v| a.min(v / baseline)));
    }
    if !deep.is_empty() {
        rep.summary.insert("inside_ratio_max".into(), deep.iter().fold(0.0f64, |a, v| a.max(v / baseline)));
    }
    rep.notes.push("role: 0 boundary path, 1 off-region probe, 2 interior point".into());
    Ok(rep)
}

/// Compares the resolvent estimate on the sphere of curvature `kappa` at
/// `zeta` with the unit-sphere estimate at `zeta / kappa` times
/// [`resolvent_scaling_factor`]. The curvature-`kappa` operator is built
/// from its own spectral data: eigenvalues `kappa lambda_k^2`, projector
/// densities scaled by `kappa^{n/2}`, volumes by `kappa^{-n/2}`.
pub fn resolvent_scaling_check(
    n: usize,
    zeta: Complex64,
    kappas: &[f64],
    nodes: usize,
    spec: &MixedNormSpec,
    opts: &PowerOptions,
) -> Result<ScanReport> {
    let unit = SphereContext::unit(n)?;
    let mut rep = ScanReport::new(
        "resolvent_scaling",
        json!({ "n": n, "zeta": [zeta.re, zeta.im], "kappa": kappas, "nodes": nodes, "r": spec.r, "s": spec.s }),
    );
    let grid = PolarGrid::new(n, nodes)?;
    let mut worst = 0.0f64;
    for &kappa in kappas {
        let ctx = SphereContext::new(n, kappa)?;
        let z1 = SpectralParamZeta::new(zeta / kappa);
        let k_max = default_truncation(&z1);
        let k1 = resolvent_kernel(&unit, &z1, Some(k_max), DegreeWindow::None)?;
        let op1 = sphere_zonal_operator(&k1, &grid)?;
        let e1 = estimate(&op1, spec, opts)?;

        let dens = kappa.powf(n as f64 / 2.0);
        let values: Vec<Complex64> =
            (0..=k_max).map(|k| dens / (zeta - ctx.scaled_eigenvalue(k).powi(2))).collect();
        let kk = kernel_from_values(&unit, &values, DegreeWindow::None, "resolvent_kappa")?;
        let root = kappa.sqrt();
        let radii: Vec<f64> = (0..grid.len()).map(|i| grid.theta(i) / root).collect();
        let cos: Vec<f64> = radii.iter().map(|r| (root * r).cos()).collect();
        let w: Vec<f64> = grid.weights.iter().map(|w| w / dens).collect();
        let opk = DiscretizedOperator::from_kernel(w.clone(), w, |i, j| kk.latitude_mean(cos[i], cos[j]))?
            .with_label("sphere_zonal_kappa");
        let ek = estimate(&opk, spec, opts)?;

        let factor = resolvent_scaling_factor(n, kappa, spec.r, spec.s_used());
        let rel = (ek.value - factor * e1.value).abs() / (factor * e1.value);
        worst = worst.max(rel);
        rep.records.push(
            ScanRecord::new(&[("kappa", kappa)], &ek)
                .with("unit_estimate", e1.value)
                .with("factor", factor)
                .with("relative_error", rel),
        );
    }
    rep.summary.insert("max_relative_error".into(), worst);
    Ok(rep)
}

/// Parameters of [`stein_tomas_scan`].
#[derive(Debug, Clone)]
pub struct SteinTomasParams {
    pub lambdas: Vec<f64>,
    /// Band width `1/T` for the slope fit.
    pub t_slope: f64,
    /// Ball radius for the slope fit.
    pub radius: f64,
    pub t_values: Vec<f64>,
    pub band_lambda: f64,
    /// Ball radius for band width `1/T` is `max(radius, band_radius_factor * T)`.
    pub band_radius_factor: f64,
    pub stability_radii: Vec<f64>,
    pub probe_lambdas: Vec<f64>,
}

/// `T^{1/2} ||1_{[lambda, lambda + 1/T]}(P)||_{L^2 -> L^4}` lower bounds on
/// `H^3` balls. Summary keys: `slope`, `t_band_ratio`, `r_instability`,
/// `r_instability_flag` (1 when above 20%).
pub fn stein_tomas_scan(p: &SteinTomasParams, opts: &PowerOptions) -> Result<ScanReport> {
    let spec = MixedNormSpec::new(3, 2.0, 4.0)?;
    let mut rep = ScanReport::new(
        "stein_tomas",
        json!({
            "lambda": p.lambdas, "t_slope": p.t_slope, "radius": p.radius, "t": p.t_values,
            "band_lambda": p.band_lambda, "band_radius_factor": p.band_radius_factor,
            "stability_radii": p.stability_radii, "probe_lambda": p.probe_lambdas,
        }),
    );
    let run = |lambda: f64, t: f64, radius: f64| -> Result<NormEstimate> {
        let grid = RadialGrid::new(radius, radial_panel_for(lambda + 1.0 / t), 8)?;
        let op = ball_zonal_operator(&BandProjector { lambda, t }, &grid)?;
        estimate(&op, &spec, opts)
    };
    let mut pairs = Vec::new();
    for &l in &p.lambdas {
        let est = run(l, p.t_slope, p.radius)?;
        let scaled = p.t_slope.sqrt() * est.value;
        pairs.push((l, scaled));
        rep.records.push(
            ScanRecord::new(&[("lambda", l), ("t", p.t_slope), ("radius", p.radius), ("stage", 0.0)], &est)
                .with("scaled", scaled),
        );
    }
    if pairs.len() >= 3 {
        let fit = slope_fit(&pairs)?;
        rep.summary.insert("slope".into(), fit.slope);
        rep.fit = Some(fit);
    }
    let mut band = Vec::new();
    for &t in &p.t_values {
        let radius = p.radius.max(p.band_radius_factor * t);
        let est = run(p.band_lambda, t, radius)?;
        let scaled = t.sqrt() * est.value;
        band.push(scaled);
        rep.records.push(
            ScanRecord::new(&[("lambda", p.band_lambda), ("t", t), ("radius", radius), ("stage", 1.0)], &est)
                .with("scaled", scaled),
        );
    }
    if !band.is_empty() {
        rep.summary.insert("t_band_ratio".into(), band_ratio(band.into_iter()));
    }
    let mut stab = Vec::new();
    for &radius in &p.stability_radii {
        let est = run(p.band_lambda, p.t_slope, radius)?;
        stab.push(est.value);
        rep.records.push(
            ScanRecord::new(&[("lambda", p.band_lambda), ("t", p.t_slope), ("radius", radius), ("stage", 2.0)], &est)
                .with("scaled", p.t_slope.sqrt() * est.value),
        );
    }
    if !stab.is_empty() {
        let inst = band_ratio(stab.into_iter()) - 1.0;
        rep.summary.insert("r_instability".into(), inst);
        rep.summary.insert("r_instability_flag".into(), if inst > 0.2 { 1.0 } else { 0.0 });
        if inst > 0.2 {
            rep.notes.push(format!("radius instability {:.1}% exceeds 20%", 100.0 * inst));
        }
    }
    for &l in &p.probe_lambdas {
        let est = run(l, p.t_slope, p.radius)?;
        rep.records.push(
            ScanRecord::new(&[("lambda", l), ("t", p.t_slope), ("radius", p.radius), ("stage", 3.0)], &est)
                .with("scaled", p.t_slope.sqrt() * est.value),
        );
    }
    rep.notes.push("stage: 0 slope, 1 T-band, 2 radius stability, 3 small-lambda probe".into());
    Ok(rep)
}

/// Dyadic pieces `S_k` of the `H^3` resolvent on `B_{2^{k+1}}`. Records
/// the `(r, s)` estimate, the `L^2 -> L^4` estimate with its constant
/// `C_k = est / (2^{k/2} lambda^{-3/4})`, and `sup |S_k|`. Summary keys:
/// `slope` (of `log_2` estimate in `k`), `l2l4_constant_ratio`,
/// `sup_superpolynomial` (1 when the local log-log slopes of the sup
/// bounds strictly decrease).
pub fn dyadic_decay_scan(
    lambda: f64,
    mu: f64,
    ks: &[i32],
    spec: &MixedNormSpec,
    opts: &PowerOptions,
) -> Result<ScanReport> {
    let ctx = HyperbolicContext::unit(3)?;
    let l2l4 = MixedNormSpec::new(3, 2.0, 4.0)?;
    let mut rep = ScanReport::new(
        "dyadic_decay",
        json!({ "lambda": lambda, "mu": mu, "k": ks, "r": spec.r, "s": spec.s }),
    );
    let mut pairs = Vec::new();
    let mut consts = Vec::new();
    let mut sups = Vec::new();
    for &k in ks {
        if k < 1 {
            return Err(Error::Config(format!("dyadic index must be at least 1, got {k}")));
        }
        let kern = DescentKernel::new(ctx, lambda, mu, Piece::Dyadic(k))?;
        let radius = 2f64.powi(k + 1);
        let grid = RadialGrid::new(radius, radial_panel_for(lambda), 8)?;
        let op = ball_zonal_operator(&kern, &grid)?;
        let est = estimate(&op, spec, opts)?;
        let e24 = estimate(&op, &l2l4, opts)?;
        let c = e24.value / (2f64.powf(k as f64 / 2.0) * lambda.powf(-0.75));
        let sup = sk_sup(&ctx, k, lambda, mu)?;
        pairs.push((2f64.powi(k), est.value));
        consts.push(c);
        sups.push((k as f64, sup));
        rep.records.push(
            ScanRecord::new(&[("k", k as f64)], &est)
                .with("radius", radius)
                .with("l2l4_estimate", e24.value)
                .with("l2l4_constant", c)
                .with("kernel_sup", sup),
        );
    }
    if pairs.len() >= 3 {
        // ln y against ln 2^k: the slope is d log_2(y) / dk.
        let fit = slope_fit(&pairs)?;
        rep.summary.insert("slope".into(), fit.slope);
        rep.fit = Some(fit);
    }
    if !consts.is_empty() {
        rep.summary.insert("l2l4_constant_ratio".into(), band_ratio(consts.into_iter()));
    }
    let local: Vec<f64> = sups.windows(2).map(|w| (w[1].1 / w[0].1).ln() / (w[1].0 / w[0].0).ln()).collect();
    let superpoly = local.len() >= 2 && local.windows(2).all(|w| w[1] < w[0]);
    rep.summary.insert("sup_superpolynomial".into(), if superpoly { 1.0 } else { 0.0 });
    Ok(rep)
}

/// Amplitude `alpha(d)`: smooth, one on `[delta + w, pi - delta - w]`,
/// vanishing outside `[delta, pi - delta]`, with `w = delta`.
pub fn oscillatory_amplitude(delta: f64, d: f64) -> f64 {
    smooth_step((d - delta) / delta) * smooth_step((std::f64::consts::PI - delta - d) / delta)
}

/// Lower bounds for `I_lambda f(x) = int e^{i lambda d(x,y)} alpha(d) f(y) dy`
/// on `S^n` over `lambdas`, with the log-log slope. Also compares the
/// `lambda = 1` zonal estimate with a full-grid estimate at
/// `full_resolution`. Summary keys: `slope`, `target` (`-n/q`),
/// `lambda_one_zonal`, `lambda_one_full`.
pub fn oscillatory_operator_check(
    n: usize,
    lambdas: &[f64],
    p: f64,
    q: f64,
    delta: f64,
    full_resolution: usize,
    opts: &PowerOptions,
) -> Result<ScanReport> {
    if !(delta > 0.0 && 4.0 * delta < std::f64::consts::PI) {
        return Err(Error::Config(format!("amplitude margin must lie in (0, pi/4), got {delta}")));
    }
    let spec = MixedNormSpec::new(n, p, q)?;
    let mut rep = ScanReport::new(
        "oscillatory",
        json!({ "n": n, "lambda": lambdas, "p": p, "q": q, "delta": delta, "full_resolution": full_resolution }),
    );
    let kernel = |lambda: f64| move |d: f64| Complex64::from_polar(oscillatory_amplitude(delta, d), lambda * d);
    let zonal = |lambda: f64| -> Result<NormEstimate> {
        let grid = PolarGrid::new(n, polar_nodes_for(lambda))?;
        let op = sphere_zonal_generic(n, kernel(lambda), &grid, (2.0 * lambda).ceil() as usize + 64)?;
        estimate(&op, &spec, opts)
    };
    let mut pairs = Vec::new();
    for &l in lambdas {
        let est = zonal(l)?;
        pairs.push((l, est.value));
        rep.records.push(ScanRecord::new(&[("lambda", l)], &est));
    }
    if pairs.len() >= 3 {
        let fit = slope_fit(&pairs)?;
        rep.summary.insert("slope".into(), fit.slope);
        rep.fit = Some(fit);
    }
    rep.summary.insert("target".into(), -(n as f64) / q);

    if full_resolution > 0 {
        let one = zonal(1.0)?;
        let rule = sphere_grid::<f64>(n, full_resolution)?;
        let dim = n + 1;
        let coords = rule.coords();
        let f = kernel(1.0);
        let op = DiscretizedOperator::from_kernel(rule.weights().to_vec(), rule.weights().to_vec(), |i, j| {
            let c: f64 = (0..dim).map(|a| coords[i * dim + a] * coords[j * dim + a]).sum();
            f(c.clamp(-1.0, 1.0).acos())
        })?
        .with_label("sphere_full_grid");
        let full = estimate(&op, &spec, &PowerOptions { pole: None, ..opts.clone() })?;
        rep.records.push(ScanRecord::new(&[("lambda", 1.0)], &one).with("full_grid", 0.0));
        rep.records.push(ScanRecord::new(&[("lambda", 1.0)], &full).with("full_grid", 1.0));
        rep.summary.insert("lambda_one_zonal".into(), one.value);
        rep.summary.insert("lambda_one_full".into(), full.value);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> PowerOptions {
        PowerOptions { restarts: 2, max_iter: 60, ..PowerOptions::default() }
    }

    #[test]
    fn sup_scan_slope_is_dimension_minus_one() {
        let ctx = SphereContext::unit(2).unwrap();
        let rep = projector_sup_scan(&ctx, &[32, 64, 128]).unwrap();
        assert!((rep.summary["slope"] - 1.0).abs() < 0.05);
    }

    #[test]
    fn l2_projector_norm_is_one() {
        let ctx = SphereContext::unit(3).unwrap();
        let spec = MixedNormSpec::new(3, 2.0, 2.0).unwrap();
        let rep = projector_norm_scan(&ctx, &[2, 4, 6], &spec, &quick()).unwrap();
        for rec in &rep.records {
            assert!((rec.estimate - 1.0).abs() < 1e-6, "{}", rec.estimate);
        }
    }

    #[test]
    fn amplitude_support() {
        assert_eq!(oscillatory_amplitude(0.3, 0.2), 0.0);
        assert_eq!(oscillatory_amplitude(0.3, 3.0), 0.0);
        assert_eq!(oscillatory_amplitude(0.3, 1.5), 1.0);
    }

    #[test]
    fn scaling_check_unit_curvature_is_exact() {
        let spec = MixedNormSpec::admissible_pair(3, 1.2, 6.0).unwrap();
        let rep = resolvent_scaling_check(3, Complex64::new(-4.0, 2.0), &[1.0, 4.0], 96, &spec, &quick()).unwrap();
        assert!(rep.summary["max_relative_error"] < 1e-10, "{:?}", rep.summary);
    }
}
