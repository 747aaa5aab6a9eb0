//! One function per subcommand; each appends stages, assertions and
//! artifacts to a [`Run`].

use std::f64::consts::PI;

use num_complex::Complex64;
use serde_json::json;

use super::manifest::Run;
use crate::error::{Error, Result};
use crate::hyperbolic::{dyadic_reconstruction, h3_full_resolvent_scan, plancherel_consistency, small_band_probe, H3ScanParams};
use crate::norm::{
    dyadic_decay_scan, oscillatory_operator_check, projector_norm_scan, projector_sup_scan, resolvent_scaling_check,
    resolvent_uniformity_scan, slope_fit, stein_tomas_scan, PolarGrid,
};
use crate::report::{svg_plot, ScanReport, Series};
use crate::sphere::{
    projector_algebra_check, projector_asymptotics_check, resolvent_kernel, resolvent_via_wave, scaling_transport,
    tail_decay_report, wave_multiplier, DegreeWindow, SpectralParamZeta, SphereContext, TimeQuadrature,
};
use crate::windows::WindowFamily;

fn linspace(a: f64, b: f64, m: usize) -> Vec<f64> {
    if m < 2 {
        return vec![a];
    }
    (0..m).map(|i| a + (b - a) * i as f64 / (m - 1) as f64).collect()
}

fn log_series(label: &str, rep: &ScanReport, key: &str) -> Series {
    Series {
        label: label.into(),
        points: rep
            .records
            .iter()
            .filter_map(|r| r.point.get(key).map(|x| (x.ln(), r.estimate.ln())))
            .collect(),
    }
}

fn sphere_ctx(run: &Run) -> Result<SphereContext> {
    SphereContext::unit(run.config.dimension)
}

/// Trace, orthogonality, sup growth, asymptotics and `(r, s)` norm growth
/// of the projectors `H_k`.
pub fn sphere_projector(run: &mut Run) -> Result<()> {
    let p = run.config.sphere_projector.clone();
    let ctx = sphere_ctx(run)?;
    let spec = p.exponents.validate(ctx.n())?;
    let opts = run.config.power_options();
    let cap = |ks: &[usize]| ks.iter().copied().filter(|&k| k <= p.k_max).collect::<Vec<_>>();

    run.stage("projector_algebra", |run| {
        let kmax = p.algebra_k_max.min(p.k_max);
        let rep = projector_algebra_check(&ctx, kmax, p.trace_k_max.min(p.k_max), p.algebra_resolution, p.algebra_samples, run.config.seed)?;
        let thr = format!("<= {:e}", p.algebra_tol);
        run.check(Some(1), "trace_relative_error", rep.max_trace_error, rep.max_trace_error <= p.algebra_tol, thr.clone());
        run.check(Some(1), "orthogonality_deviation", rep.max_orthogonality_error, rep.max_orthogonality_error <= p.algebra_tol, thr);
        run.documents.insert("projector_algebra".into(), serde_json::to_value(&rep)?);
        Ok(())
    })?;

    let target = ctx.n() as f64 - 1.0;
    let sup_k = cap(&p.sup_k);
    let mut sup_rep = None;
    if sup_k.len() >= 3 {
        run.stage("sup_growth", |run| {
            let rep = projector_sup_scan(&ctx, &sup_k)?;
            let slope = rep.summary["slope"];
            run.check(Some(2), "sup_slope", slope, (slope - target).abs() <= p.sup_slope_tol, format!("{target} +- {}", p.sup_slope_tol));
            sup_rep = Some(rep.clone());
            run.reports.push(rep);
            Ok(())
        })?;
    } else {
        run.skip("sup_growth", "fewer than 3 degrees at or below k_max");
    }

    let ak = p.asymptotic_k.min(p.k_max);
    if ak >= p.asymptotic_min_k {
        run.stage("asymptotics", |run| {
            let lambda = ctx.eigenvalue(ak);
            let d = linspace(1.0 / lambda, 0.75 * PI, p.asymptotic_points);
            let fit = projector_asymptotics_check(&ctx, ak, &d)?;
            run.check(Some(4), "asymptotic_residual", fit.max_residual, fit.max_residual <= p.asymptotic_tol, format!("<= {}", p.asymptotic_tol));
            run.check(Some(4), "antipodal_residual", fit.antipodal_residual, fit.antipodal_residual <= p.antipodal_tol, format!("<= {:e}", p.antipodal_tol));
            run.documents.insert("asymptotics".into(), serde_json::to_value(&fit)?);
            Ok(())
        })?;
    } else {
        run.skip("asymptotics", "k below asymptotic threshold");
    }

    let norm_k = cap(&p.norm_k);
    let mut norm_rep = None;
    if norm_k.len() >= 3 {
        run.stage("norm_growth", |run| {
            let rep = projector_norm_scan(&ctx, &norm_k, &spec, &opts)?;
            let slope = rep.summary["slope"];
            run.check(
                Some(3),
                "norm_slope",
                slope,
                (slope - p.norm_slope_target).abs() <= p.norm_slope_tol,
                format!("{} +- {}", p.norm_slope_target, p.norm_slope_tol),
            );
            norm_rep = Some(rep.clone());
            run.reports.push(rep);
            Ok(())
        })?;
    } else {
        run.skip("norm_growth", "fewer than 3 degrees at or below k_max");
    }

    let mut series = Vec::new();
    if let Some(r) = &sup_rep {
        series.push(log_series("log sup|H_k|", r, "k"));
    }
    if let Some(r) = &norm_rep {
        series.push(log_series("log ||H_k|| (r,s)", r, "k"));
    }
    if !series.is_empty() {
        run.svgs.push(("projector_growth".into(), svg_plot("Projector growth", "log k", "log value", &series)));
    }
    Ok(())
}

/// Boundary-path uniformity, off-region blowup, wave identity,
/// (anti)periodicity and the tail-multiplier decay table.
pub fn sphere_resolvent(run: &mut Run) -> Result<()> {
    let p = run.config.sphere_resolvent.clone();
    let ctx = sphere_ctx(run)?;
    let spec = p.exponents.validate(ctx.n())?;
    let opts = run.config.power_options();

    run.stage("region_uniformity", |run| {
        let path: Vec<Complex64> = p.sigmas.iter().map(|s| Complex64::new(s * s, *s)).collect();
        let probe = Complex64::new(ctx.eigenvalue(p.probe_k).powi(2), p.probe_eps);
        let inside: Vec<Complex64> = p.inside.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let rep = resolvent_uniformity_scan(&ctx, &path, &[probe], &inside, &spec, &opts)?;
        let ratio = rep.summary["path_ratio"];
        run.check(Some(7), "boundary_path_ratio", ratio, ratio <= p.path_ratio_max, format!("<= {}", p.path_ratio_max));
        let blow = rep.summary["probe_ratio_min"];
        run.check(Some(7), "off_region_blowup", blow, blow >= p.probe_factor_min, format!(">= {}", p.probe_factor_min));
        if let Some(&inner) = rep.summary.get("inside_ratio_max") {
            run.check(None, "interior_below_baseline", inner, inner <= 1.0, "<= 1");
        }
        let pts: Vec<(f64, f64)> =
            rep.records.iter().filter(|r| r.point["role"] == 0.0).map(|r| (r.point["zeta_im"], r.estimate)).collect();
        run.svgs.push((
            "resolvent_boundary".into(),
            svg_plot("Resolvent estimate along the region boundary", "Im zeta", "estimate", &[Series { label: "(r,s) lower bound".into(), points: pts }]),
        ));
        run.reports.push(rep);
        Ok(())
    })?;

    run.stage("wave_identity", |run| {
        let w = &p.wave;
        let window = DegreeWindow::gaussian_for(w.truncation);
        let ds = linspace(w.d_min, w.d_max, w.d_points);
        let mut worst = 0.0f64;
        let mut rows = Vec::new();
        for &[lambda, mu] in &w.roots {
            let z = SpectralParamZeta::from_lambda_mu(lambda, mu)?;
            if mu.abs() < 1.0 {
                return Err(Error::Config(format!("wave identity points need |Im sqrt(zeta)| >= 1, got mu = {mu}")));
            }
            let t_max = 30.0 / mu.abs() + 5.0;
            let via = resolvent_via_wave(&ctx, &z, t_max, TimeQuadrature::default(), w.truncation, window)?;
            let direct = resolvent_kernel(&ctx, &z, Some(w.truncation), window)?;
            let scale = ds.iter().map(|&d| direct.eval_distance(d).norm()).fold(0.0, f64::max);
            let err = ds.iter().map(|&d| (via.eval_distance(d) - direct.eval_distance(d)).norm()).fold(0.0, f64::max) / scale;
            worst = worst.max(err);
            rows.push(json!({ "lambda": lambda, "mu": mu, "zeta": [z.zeta.re, z.zeta.im], "t_max": t_max, "relative_error": err }));
        }
        run.check(Some(5), "wave_identity_error", worst, worst <= w.tol, format!("<= {:e}", w.tol));
        run.documents.insert("wave_identity".into(), json!(rows));
        Ok(())
    })?;

    run.stage("periodicity", |run| {
        let q = &p.periodicity;
        let mut rows = Vec::new();
        for &n in &q.dimensions {
            let c = SphereContext::unit(n)?;
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            let mut worst = 0.0f64;
            for &t in &q.times {
                for k in 0..=q.truncation {
                    let l = c.eigenvalue(k);
                    worst = worst.max((wave_multiplier(t + 2.0 * PI, l) - sign * wave_multiplier(t, l)).abs());
                }
            }
            run.check(Some(6), &format!("periodicity_n{n}"), worst, worst <= q.tol, format!("<= {:e}", q.tol));
            rows.push(json!({ "n": n, "sign": sign, "max_residual": worst }));
        }
        run.documents.insert("periodicity".into(), json!(rows));
        Ok(())
    })?;

    run.stage("tail_multiplier", |run| {
        let t = &p.tail;
        let rep = tail_decay_report(t.lambda, t.mu, &t.taus, t.order, &WindowFamily)?;
        run.documents.insert("tail_multiplier".into(), serde_json::to_value(&rep)?);
        Ok(())
    })?;
    Ok(())
}

/// Curvature transport of samples and of resolvent norm estimates.
pub fn sphere_scaling(run: &mut Run) -> Result<()> {
    let p = run.config.sphere_scaling.clone();
    let ctx = sphere_ctx(run)?;
    let spec = p.exponents.validate(ctx.n())?;
    let opts = run.config.power_options();

    run.stage("sample_transport", |run| {
        let grid = PolarGrid::new(ctx.n(), p.nodes)?;
        let u: Vec<Complex64> = (0..grid.len())
            .map(|i| {
                let th = grid.theta(i);
                Complex64::new((3.0 * th).cos() + 0.5, th.sin())
            })
            .collect();
        let mut rows = Vec::new();
        for &kappa in &p.kappas {
            let (_, rep) = scaling_transport(&ctx, &grid, &u, kappa, p.s)?;
            run.check(Some(8), &format!("volume_identity_kappa_{kappa}"), rep.relative_error, rep.relative_error <= p.tol, format!("<= {:e}", p.tol));
            rows.push(serde_json::to_value(&rep)?);
        }
        run.documents.insert("sample_transport".into(), json!(rows));
        Ok(())
    })?;

    run.stage("resolvent_transport", |run| {
        let zeta = Complex64::new(p.zeta[0], p.zeta[1]);
        let rep = resolvent_scaling_check(ctx.n(), zeta, &p.kappas, p.nodes, &spec, &opts)?;
        let err = rep.summary["max_relative_error"];
        run.check(Some(8), "scaled_constant_equality", err, err <= p.tol, format!("<= {:e}", p.tol));
        run.reports.push(rep);
        Ok(())
    })?;
    Ok(())
}

/// Band-projector `L^2 -> L^4` scan on `H^3`.
pub fn hyp_stein_tomas(run: &mut Run) -> Result<()> {
    let p = run.config.hyp_stein_tomas.clone();
    let opts = run.config.power_options();
    run.stage("stein_tomas", |run| {
        let rep = stein_tomas_scan(&p.scan_params(), &opts)?;
        let slope = rep.summary["slope"];
        run.check(Some(10), "lambda_slope", slope, slope <= p.slope_max, format!("<= {}", p.slope_max));
        let band = rep.summary["t_band_ratio"];
        run.check(Some(10), "t_band_ratio", band, band <= p.band_max, format!("<= {}", p.band_max));
        let pts: Vec<(f64, f64)> = rep
            .records
            .iter()
            .filter(|r| r.point["stage"] == 0.0)
            .map(|r| (r.point["lambda"].ln(), r.extra["scaled"].ln()))
            .collect();
        run.svgs.push((
            "stein_tomas".into(),
            svg_plot("Band projector L2->L4 lower bounds", "log lambda", "log T^(1/2) estimate", &[Series { label: "T = 1".into(), points: pts }]),
        ));
        run.reports.push(rep);
        Ok(())
    })?;
    run.stage("small_lambda_probe", |run| {
        let probe = small_band_probe(&[1.0, 0.5, 0.2, 0.1, 0.05, 0.01], p.t_slope)?;
        run.documents.insert("small_lambda_probe".into(), serde_json::to_value(&probe)?);
        Ok(())
    })?;
    Ok(())
}

/// `H^3` resolvent: Plancherel consistency, dyadic reconstruction and
/// decay, and the all-`zeta` boundedness scan.
pub fn hyp_resolvent(run: &mut Run) -> Result<()> {
    let p = run.config.hyp_resolvent.clone();
    let opts = run.config.power_options();

    run.stage("plancherel", |run| {
        let q = &p.plancherel;
        let zs: Vec<Complex64> = q.z.iter().map(|z| Complex64::new(z[0], z[1])).collect();
        let recs = plancherel_consistency(&zs, &linspace(q.r_min, q.r_max, q.points))?;
        let worst = recs.iter().map(|r| r.relative_error).fold(0.0, f64::max);
        run.check(Some(9), "plancherel_relative_error", worst, worst <= q.tol, format!("<= {:e}", q.tol));
        run.documents.insert("plancherel".into(), serde_json::to_value(&recs)?);
        Ok(())
    })?;

    run.stage("dyadic_reconstruction", |run| {
        let q = &p.reconstruction;
        let top = 2f64.powi(q.k_max);
        let radii = linspace(top / q.points as f64, top, q.points);
        let rep = dyadic_reconstruction(q.lambda, q.mu, q.k_max, &radii)?;
        run.check(Some(12), "reconstruction_error", rep.max_relative_error, rep.max_relative_error <= q.tol, format!("<= {:e}", q.tol));
        let c3 = -1.0 / (4.0 * PI);
        let dev = (rep.calibrated_constant - c3).abs() / c3.abs();
        run.check(Some(12), "calibrated_constant_deviation", dev, dev <= q.tol, format!("<= {:e}", q.tol));
        run.documents.insert("dyadic_reconstruction".into(), serde_json::to_value(&rep)?);
        Ok(())
    })?;

    run.stage("dyadic_decay", |run| {
        let q = &p.dyadic;
        let spec = q.exponents.validate(3)?;
        let rep = dyadic_decay_scan(q.lambda, q.mu, &q.k, &spec, &opts)?;
        let slope = rep.summary["slope"];
        run.check(
            Some(11),
            "dyadic_slope",
            slope,
            (slope - q.slope_target).abs() <= q.slope_tol,
            format!("{} +- {}", q.slope_target, q.slope_tol),
        );
        let sups: Vec<(f64, f64)> = rep.records.iter().map(|r| (r.point["k"], r.extra["kernel_sup"])).collect();
        // ln sup against k: slope <= -N ln 2.
        let order = sup_decay_order(&sups)?;
        run.check(Some(11), "kernel_sup_decay_order", order, order >= q.sup_min_order, format!(">= {}", q.sup_min_order));
        let sp = rep.summary["sup_superpolynomial"];
        run.check(Some(11), "kernel_sup_superpolynomial", sp, sp == 1.0, "== 1");
        let l24 = rep.summary["l2l4_constant_ratio"];
        run.check(None, "l2l4_constant_stability", l24, l24 <= q.l2l4_ratio_max, format!("<= {}", q.l2l4_ratio_max));
        let pts: Vec<(f64, f64)> = rep.records.iter().map(|r| (r.point["k"], r.estimate.log2())).collect();
        let sup_pts: Vec<(f64, f64)> = sups.iter().map(|(k, s)| (*k, s.log2())).collect();
        run.svgs.push((
            "dyadic_decay".into(),
            svg_plot(
                "Dyadic pieces S_k",
                "k",
                "log2 value",
                &[
                    Series { label: "(r,s) estimate".into(), points: pts },
                    Series { label: "sup |S_k|".into(), points: sup_pts },
                ],
            ),
        ));
        run.reports.push(rep);
        Ok(())
    })?;

    run.stage("all_zeta", |run| {
        let q = &p.all_zeta;
        let spec = q.exponents.validate(3)?;
        let params = H3ScanParams {
            moduli: q.moduli.clone(),
            phases: q.phases,
            radius: q.radius,
            stability_radii: q.stability_radii.clone(),
            kappas: q.kappas.clone(),
        };
        let rep = h3_full_resolvent_scan(&params, &spec, &opts)?;
        let band = rep.summary["band_ratio"];
        run.check(Some(14), "all_zeta_band_ratio", band, band <= q.band_max, format!("<= {}", q.band_max));
        if let Some(&e) = rep.summary.get("kappa_max_relative_error") {
            run.check(None, "curvature_transport", e, e <= q.transport_tol, format!("<= {:e}", q.transport_tol));
        }
        let mut series = Vec::new();
        for &m in &q.moduli {
            let pts = rep
                .records
                .iter()
                .filter(|r| r.point["stage"] == 0.0 && r.point["modulus"] == m)
                .map(|r| (r.point["phase"], r.estimate))
                .collect();
            series.push(Series { label: format!("|zeta| = {m}"), points: pts });
        }
        run.svgs.push(("h3_all_zeta".into(), svg_plot("H3 resolvent estimates", "arg zeta", "estimate", &series)));
        run.reports.push(rep);
        Ok(())
    })?;
    Ok(())
}

/// `N` with `sup |S_k| ~ 2^{-kN}` from a least-squares line of `ln sup` in `k`.
fn sup_decay_order(sups: &[(f64, f64)]) -> Result<f64> {
    // slope_fit works in log-log; feed (e^k, sup) so ln x = k.
    let pairs: Vec<(f64, f64)> = sups.iter().map(|(k, s)| (k.exp(), *s)).collect();
    Ok(-slope_fit(&pairs)?.slope / std::f64::consts::LN_2)
}

/// Oscillatory-integral decay on `S^2` and `S^3`.
pub fn osc_check(run: &mut Run) -> Result<()> {
    let p = run.config.osc_check.clone();
    let opts = run.config.power_options();
    let mut series = Vec::new();
    for case in &p.cases {
        let name = format!("oscillatory_n{}", case.n);
        run.stage(&name, |run| {
            let rep = oscillatory_operator_check(case.n, &p.lambdas, case.p, case.q, p.delta, case.full_resolution, &opts)?;
            let slope = rep.summary["slope"];
            let bound = rep.summary["target"] + p.slope_margin;
            run.check(Some(13), &format!("{name}_slope"), slope, slope <= bound, format!("<= {bound:.6}"));
            if let (Some(&z), Some(&f)) = (rep.summary.get("lambda_one_zonal"), rep.summary.get("lambda_one_full")) {
                let gap = (f - z).abs() / f;
                run.check(None, &format!("{name}_lambda_one_gap"), gap, z.is_finite() && gap <= p.lambda_one_tol, format!("<= {}", p.lambda_one_tol));
            }
            series.push(Series {
                label: format!("n = {}", case.n),
                points: rep
                    .records
                    .iter()
                    .filter(|r| !r.extra.contains_key("full_grid"))
                    .map(|r| (r.point["lambda"].ln(), r.estimate.ln()))
                    .collect(),
            });
            run.reports.push(rep);
            Ok(())
        })?;
    }
    run.svgs.push(("oscillatory".into(), svg_plot("Oscillatory operator lower bounds", "log lambda", "log estimate", &series)));
    Ok(())
}
