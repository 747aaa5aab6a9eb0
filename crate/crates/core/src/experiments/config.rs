//! Experiment configuration: one JSON document, unknown keys rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norm::{MixedNormSpec, PowerOptions, SteinTomasParams};

/// `(r, s)` exponents; `closed_segment` admits the endpoint-inclusive
/// range used by the dyadic estimates instead of the open admissible segment.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExponentPair {
    pub r: f64,
    /// A number or the string `"inf"`.
    #[serde(deserialize_with = "extended_real", serialize_with = "write_extended_real")]
    pub s: f64,
    #[serde(default)]
    pub closed_segment: bool,
}

impl ExponentPair {
    pub const fn new(r: f64, s: f64) -> Self {
        Self { r, s, closed_segment: false }
    }

    pub fn validate(&self, n: usize) -> Result<MixedNormSpec> {
        if self.closed_segment {
            MixedNormSpec::closed_segment_pair(n, self.r, self.s)
        } else {
            MixedNormSpec::admissible_pair(n, self.r, self.s)
        }
    }
}

fn extended_real<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Ext {
        Num(f64),
        Word(String),
    }
    match Ext::deserialize(d)? {
        Ext::Num(v) => Ok(v),
        Ext::Word(w) if w == "inf" => Ok(f64::INFINITY),
        Ext::Word(w) => Err(serde::de::Error::custom(format!("expected a number or \"inf\", got {w:?}"))),
    }
}

fn write_extended_real<S: serde::Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*v)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PowerConfig {
    pub restarts: usize,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PowerConfig {
    fn default() -> Self {
        let d = PowerOptions::default();
        Self { restarts: d.restarts, tol: d.tol, max_iter: d.max_iter }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SphereProjectorParams {
    /// Caps every degree grid below; stages left with too few degrees are skipped.
    pub k_max: usize,
    pub algebra_k_max: usize,
    pub trace_k_max: usize,
    pub algebra_resolution: usize,
    pub algebra_samples: usize,
    pub algebra_tol: f64,
    pub sup_k: Vec<usize>,
    pub sup_slope_tol: f64,
    pub norm_k: Vec<usize>,
    pub exponents: ExponentPair,
    pub norm_slope_target: f64,
    pub norm_slope_tol: f64,
    pub asymptotic_k: usize,
    pub asymptotic_min_k: usize,
    pub asymptotic_points: usize,
    pub asymptotic_tol: f64,
    pub antipodal_tol: f64,
}

impl Default for SphereProjectorParams {
    fn default() -> Self {
        Self {
            k_max: 256,
            algebra_k_max: 12,
            trace_k_max: 32,
            algebra_resolution: 24,
            algebra_samples: 16,
            algebra_tol: 1e-8,
            sup_k: vec![16, 32, 64, 128, 256],
            sup_slope_tol: 0.05,
            norm_k: vec![8, 12, 16, 24, 32, 48, 64, 96],
            exponents: ExponentPair::new(1.2, 6.0),
            norm_slope_target: 1.0,
            norm_slope_tol: 0.15,
            asymptotic_k: 64,
            asymptotic_min_k: 16,
            asymptotic_points: 200,
            asymptotic_tol: 0.05,
            antipodal_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WaveIdentityParams {
    /// `(lambda, mu)` with `zeta = (lambda + i mu)^2`.
    pub roots: Vec<[f64; 2]>,
    pub d_min: f64,
    pub d_max: f64,
    pub d_points: usize,
    pub truncation: usize,
    pub tol: f64,
}

impl Default for WaveIdentityParams {
    fn default() -> Self {
        Self {
            roots: vec![[2.0, 1.0], [5.0, 1.0], [10.0, 1.5], [3.0, -1.0], [0.5, 2.0], [8.0, -2.0]],
            d_min: 0.2,
            d_max: 3.0,
            d_points: 57,
            truncation: 64,
            tol: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PeriodicityParams {
    pub dimensions: Vec<usize>,
    pub truncation: usize,
    pub times: Vec<f64>,
    pub tol: f64,
}

impl Default for PeriodicityParams {
    fn default() -> Self {
        Self { dimensions: vec![3, 4], truncation: 64, times: vec![0.0, 0.37, 1.0, 2.5, 4.0, 6.0], tol: 1e-12 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TailParams {
    pub lambda: f64,
    pub mu: f64,
    pub taus: Vec<f64>,
    pub order: i32,
}

impl Default for TailParams {
    fn default() -> Self {
        Self { lambda: 10.0, mu: 1.0, taus: vec![0.0, 5.0, 20.0, 40.0, 80.0], order: 4 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SphereResolventParams {
    pub exponents: ExponentPair,
    /// Boundary points `zeta = sigma^2 + i sigma`.
    pub sigmas: Vec<f64>,
    pub path_ratio_max: f64,
    /// Off-region probe `zeta = lambda_k^2 + i eps`.
    pub probe_k: usize,
    pub probe_eps: f64,
    pub probe_factor_min: f64,
    /// Real interior points.
    pub inside: Vec<f64>,
    pub wave: WaveIdentityParams,
    pub periodicity: PeriodicityParams,
    pub tail: TailParams,
}

impl Default for SphereResolventParams {
    fn default() -> Self {
        Self {
            exponents: ExponentPair::new(1.2, 6.0),
            sigmas: vec![5.0, 10.0, 20.0, 40.0],
            path_ratio_max: 5.0,
            probe_k: 20,
            probe_eps: 1e-4,
            probe_factor_min: 50.0,
            inside: vec![-100.0],
            wave: WaveIdentityParams::default(),
            periodicity: PeriodicityParams::default(),
            tail: TailParams::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SphereScalingParams {
    pub kappas: Vec<f64>,
    pub s: f64,
    pub exponents: ExponentPair,
    pub zeta: [f64; 2],
    pub nodes: usize,
    pub tol: f64,
}

impl Default for SphereScalingParams {
    fn default() -> Self {
        Self {
            kappas: vec![0.25, 1.0, 4.0],
            s: 6.0,
            exponents: ExponentPair::new(1.2, 6.0),
            zeta: [25.0, 5.0],
            nodes: 160,
            tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HypSteinTomasParams {
    pub lambdas: Vec<f64>,
    pub t_slope: f64,
    pub radius: f64,
    pub t_values: Vec<f64>,
    pub band_lambda: f64,
    pub band_radius_factor: f64,
    pub stability_radii: Vec<f64>,
    pub probe_lambdas: Vec<f64>,
    pub slope_max: f64,
    pub band_max: f64,
}

impl Default for HypSteinTomasParams {
    fn default() -> Self {
        Self {
            lambdas: vec![4.0, 8.0, 16.0, 32.0, 64.0],
            t_slope: 1.0,
            radius: 4.0,
            t_values: vec![1.0, 4.0, 16.0],
            band_lambda: 16.0,
            band_radius_factor: 2.0,
            stability_radii: vec![2.0, 4.0, 8.0],
            probe_lambdas: vec![0.05],
            slope_max: 0.30,
            band_max: 2.0,
        }
    }
}

impl HypSteinTomasParams {
    pub fn scan_params(&self) -> SteinTomasParams {
        SteinTomasParams {
            lambdas: self.lambdas.clone(),
            t_slope: self.t_slope,
            radius: self.radius,
            t_values: self.t_values.clone(),
            band_lambda: self.band_lambda,
            band_radius_factor: self.band_radius_factor,
            stability_radii: self.stability_radii.clone(),
            probe_lambdas: self.probe_lambdas.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PlancherelParams {
    /// `z` values as `[re, im]`.
    pub z: Vec<[f64; 2]>,
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
    pub tol: f64,
}

impl Default for PlancherelParams {
    fn default() -> Self {
        Self { z: vec![[1.0, 0.0], [2.0, 0.0], [1.0, 0.5]], r_min: 0.1, r_max: 5.0, points: 50, tol: 1e-6 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DyadicParams {
    pub lambda: f64,
    pub mu: f64,
    pub k: Vec<i32>,
    pub exponents: ExponentPair,
    pub slope_target: f64,
    pub slope_tol: f64,
    pub l2l4_ratio_max: f64,
    pub sup_min_order: f64,
}

impl Default for DyadicParams {
    fn default() -> Self {
        Self {
            lambda: 8.0,
            mu: 0.01,
            k: vec![1, 2, 3, 4, 5],
            exponents: ExponentPair { r: 1.2, s: 6.0, closed_segment: true },
            slope_target: -1.0,
            slope_tol: 0.2,
            l2l4_ratio_max: 2.0,
            sup_min_order: 2.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReconstructionParams {
    pub lambda: f64,
    pub mu: f64,
    pub k_max: i32,
    pub points: usize,
    pub tol: f64,
}

impl Default for ReconstructionParams {
    fn default() -> Self {
        Self { lambda: 8.0, mu: 0.5, k_max: 3, points: 160, tol: 1e-6 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AllZetaParams {
    pub moduli: Vec<f64>,
    pub phases: usize,
    pub radius: f64,
    pub stability_radii: Vec<f64>,
    pub kappas: Vec<f64>,
    pub exponents: ExponentPair,
    pub band_max: f64,
    pub transport_tol: f64,
}

impl Default for AllZetaParams {
    fn default() -> Self {
        Self {
            moduli: vec![0.01, 1.0, 10.0, 100.0],
            phases: 8,
            radius: 4.0,
            stability_radii: vec![2.0, 4.0, 8.0],
            kappas: vec![4.0],
            exponents: ExponentPair::new(1.2, 6.0),
            band_max: 3.0,
            transport_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HypResolventParams {
    pub plancherel: PlancherelParams,
    pub dyadic: DyadicParams,
    pub reconstruction: ReconstructionParams,
    pub all_zeta: AllZetaParams,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscCase {
    pub n: usize,
    pub p: f64,
    pub q: f64,
    /// Sphere-grid resolution of the `lambda = 1` full-grid comparison (0 disables).
    #[serde(default)]
    pub full_resolution: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OscCheckParams {
    pub cases: Vec<OscCase>,
    pub lambdas: Vec<f64>,
    pub delta: f64,
    pub slope_margin: f64,
    /// Allowed relative gap between the zonal and full-grid `lambda = 1` estimates.
    pub lambda_one_tol: f64,
}

impl Default for OscCheckParams {
    fn default() -> Self {
        Self {
            cases: vec![
                OscCase { n: 2, p: 2.0, q: 6.0, full_resolution: 24 },
                OscCase { n: 3, p: 1.5, q: 6.0, full_resolution: 12 },
            ],
            lambdas: vec![4.0, 8.0, 16.0, 32.0, 64.0],
            delta: 0.3,
            slope_margin: 0.05,
            lambda_one_tol: 0.01,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Informational name recorded in the manifest.
    #[serde(default)]
    pub experiment: String,
    #[serde(default = "default_dimension")]
    pub dimension: usize,
    #[serde(default = "default_curvature")]
    pub curvature: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub power: PowerConfig,
    #[serde(default)]
    pub sphere_projector: SphereProjectorParams,
    #[serde(default)]
    pub sphere_resolvent: SphereResolventParams,
    #[serde(default)]
    pub sphere_scaling: SphereScalingParams,
    #[serde(default)]
    pub hyp_stein_tomas: HypSteinTomasParams,
    #[serde(default)]
    pub hyp_resolvent: HypResolventParams,
    #[serde(default)]
    pub osc_check: OscCheckParams,
}

fn default_dimension() -> usize {
    3
}

fn default_curvature() -> f64 {
    1.0
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("empty config uses defaults")
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Checks dimensions, curvature, grids and every exponent pair.
    pub fn validate(&self) -> Result<()> {
        if !(2..=4).contains(&self.dimension) {
            return Err(Error::Config(format!("dimension must be 2, 3 or 4, got {}", self.dimension)));
        }
        if !(self.curvature > 0.0 && self.curvature.is_finite()) {
            return Err(Error::Config(format!("curvature magnitude must be positive, got {}", self.curvature)));
        }
        if self.power.max_iter == 0 || !(self.power.tol > 0.0) {
            return Err(Error::Config("power iteration needs max_iter > 0 and tol > 0".into()));
        }
        let n = self.dimension;
        self.sphere_projector.exponents.validate(n)?;
        self.sphere_resolvent.exponents.validate(n)?;
        self.sphere_scaling.exponents.validate(n)?;
        // The hyperbolic experiments are three-dimensional.
        self.hyp_resolvent.dyadic.exponents.validate(3)?;
        self.hyp_resolvent.all_zeta.exponents.validate(3)?;
        for c in &self.osc_check.cases {
            if !(2..=3).contains(&c.n) || !(c.p > 1.0 && c.q > 1.0) {
                return Err(Error::Config(format!("invalid oscillatory case {c:?}")));
            }
        }
        if self.sphere_scaling.kappas.iter().chain(&self.hyp_resolvent.all_zeta.kappas).any(|k| !(*k > 0.0)) {
            return Err(Error::Config("curvatures must be positive".into()));
        }
        let hs = &self.hyp_stein_tomas;
        if hs.lambdas.iter().chain(&hs.t_values).any(|v| *v < 1.0) || hs.t_slope < 1.0 || hs.band_lambda < 1.0 {
            return Err(Error::Config("band-projector scans need lambda, T >= 1".into()));
        }
        if self.hyp_resolvent.dyadic.k.iter().any(|&k| k < 1) {
            return Err(Error::Config("dyadic indices must be at least 1".into()));
        }
        Ok(())
    }

    pub fn power_options(&self) -> PowerOptions {
        PowerOptions {
            restarts: self.power.restarts,
            tol: self.power.tol,
            max_iter: self.power.max_iter,
            seed: self.seed,
            pole: Some(0),
        }
    }
}
