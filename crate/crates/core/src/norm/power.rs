//! Nonlinear power iteration for `L^r -> L^s` operator norms.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::lp::{conjugate, duality_map, lp_norm, MixedNormSpec};
use super::operator::DiscretizedOperator;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct PowerOptions {
    /// Seeded pseudo-random starts in addition to the explicit ones.
    pub restarts: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    /// Input node at which a unit bump is placed as the first start.
    pub pole: Option<usize>,
}

impl Default for PowerOptions {
    fn default() -> Self {
        Self { restarts: 4, tol: 1e-6, max_iter: 200, seed: 0x5eed, pole: Some(0) }
    }
}

/// Lower bound for a discretized operator norm together with its witness.
#[derive(Debug, Clone, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub iterations: usize,
    pub restarts: usize,
    pub converged: bool,
    /// Objective per step of the winning start.
    pub history: Vec<f64>,
    #[serde(skip)]
    pub witness: Vec<Complex64>,
    /// `(||w||_r, ||Tw||_s)` for the stored witness.
    pub witness_norms: (f64, f64),
    pub r: f64,
    pub s_requested: f64,
    pub s_used: f64,
    pub failed_restarts: Vec<String>,
}

struct Run {
    value: f64,
    iterations: usize,
    converged: bool,
    history: Vec<f64>,
    witness: Vec<Complex64>,
}

fn ratio(op: &DiscretizedOperator, f: &[Complex64], r: f64, s: f64) -> (f64, f64, f64) {
    let nf = lp_norm(f, op.in_weights(), r);
    let ng = lp_norm(&op.apply(f), op.out_weights(), s);
    (ng / nf, nf, ng)
}

fn normalize(f: &mut [Complex64], w: &[f64], r: f64) -> Result<()> {
    let nf = lp_norm(f, w, r);
    if !(nf > 0.0 && nf.is_finite()) {
        return Err(Error::NonFinite(format!("iterate norm {nf}")));
    }
    f.iter_mut().for_each(|v| *v /= nf);
    Ok(())
}

fn run(op: &DiscretizedOperator, mut f: Vec<Complex64>, r: f64, s: f64, opts: &PowerOptions) -> Result<Run> {
    normalize(&mut f, op.in_weights(), r)?;
    let rp = conjugate(r);
    let mut history = Vec::new();
    let mut best = (0.0, f.clone());
    let mut converged = false;
    let mut iterations = 0;
    for it in 0..opts.max_iter {
        iterations = it + 1;
        let g = op.apply(&f);
        let obj = lp_norm(&g, op.out_weights(), s);
        if !obj.is_finite() {
            return Err(Error::NonFinite(format!("objective at iteration {it}")));
        }
        history.push(obj);
        if obj >= best.0 {
            best = (obj, f.clone());
        }
        if it > 0 {
            let prev = history[it - 1];
            if obj - prev <= opts.tol * obj.abs() {
                converged = true;
                break;
            }
        }
        if obj == 0.0 {
            converged = true;
            break;
        }
        let u = op.apply_adjoint(&duality_map(&g, s)?);
        f = duality_map(&u, rp)?;
        normalize(&mut f, op.in_weights(), r)?;
    }
    Ok(Run { value: best.0, iterations, converged, history, witness: best.1 })
}

/// Runs the iteration `f <- normalize_r(J_{r'}(T* J_s(T f)))` from a pole
/// bump and seeded random starts, returning the best objective.
pub fn mixed_norm_power_iterate(op: &DiscretizedOperator, spec: &MixedNormSpec, opts: &PowerOptions) -> Result<NormEstimate> {
    mixed_norm_power_iterate_with(op, spec, opts, Vec::new())
}

/// As [`mixed_norm_power_iterate`] with extra caller-supplied starts.
pub fn mixed_norm_power_iterate_with(
    op: &DiscretizedOperator,
    spec: &MixedNormSpec,
    opts: &PowerOptions,
    extra: Vec<Vec<Complex64>>,
) -> Result<NormEstimate> {
    let (r, s) = (spec.r, spec.s_used());
    let m = op.cols();
    let mut starts = extra;
    if let Some(p) = opts.pole {
        let mut f = vec![Complex64::new(0.0, 0.0); m];
        f[p.min(m - 1)] = Complex64::new(1.0, 0.0);
        starts.push(f);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for j in 0..opts.restarts {
        let f: Vec<Complex64> = (0..m)
            .map(|_| {
                let a: f64 = rng.gen_range(0.05..1.0);
                if j % 2 == 0 {
                    Complex64::new(a, 0.0)
                } else {
                    Complex64::from_polar(a, rng.gen_range(0.0..std::f64::consts::TAU))
                }
            })
            .collect();
        starts.push(f);
    }
    if starts.is_empty() {
        return Err(Error::Degenerate("no starting vectors".into()));
    }
    let total = starts.len();
    let runs: Vec<Result<Run>> = starts.into_par_iter().map(|f| run(op, f, r, s, opts)).collect();
    let mut failed = Vec::new();
    let mut best: Option<Run> = None;
    for (i, res) in runs.into_iter().enumerate() {
        match res {
            Ok(run) => {
                if best.as_ref().is_none_or(|b| run.value > b.value) {
                    best = Some(run);
                }
            }
            Err(e) => failed.push(format!("start {i}: {e}")),
        }
    }
    let best = best.ok_or_else(|| Error::NonFinite(format!("all {total} starts failed")))?;
    let (_, nf, ng) = ratio(op, &best.witness, r, s);
    Ok(NormEstimate {
        value: best.value,
        iterations: best.iterations,
        restarts: total,
        converged: best.converged,
        history: best.history,
        witness: best.witness,
        witness_norms: (nf, ng),
        r,
        s_requested: spec.s,
        s_used: s,
        failed_restarts: failed,
    })
}

impl NormEstimate {
    /// `||T w||_s / ||w||_r` recomputed from the stored witness.
    pub fn reevaluate(&self, op: &DiscretizedOperator) -> f64 {
        ratio(op, &self.witness, self.r, self.s_used).0
    }

    /// Largest relative drop between consecutive objective values.
    pub fn max_decrease(&self) -> f64 {
        self.history.windows(2).map(|w| (w[0] - w[1]) / w[0].abs().max(f64::MIN_POSITIVE)).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank_one(g: Vec<f64>, w: Vec<f64>, wi: Vec<f64>, wo: Vec<f64>) -> DiscretizedOperator {
        // T f = g <w, f>  with <w, f> = sum_j w_j f_j wi_j
        DiscretizedOperator::from_kernel(wi, wo, move |i, j| Complex64::new(g[i] * w[j], 0.0)).unwrap()
    }

    #[test]
    fn rank_one_closed_form() {
        let g = vec![1.0, -2.0, 0.5, 3.0];
        let w = vec![0.3, 1.0, -0.7];
        let wi = vec![0.2, 0.5, 0.3];
        let wo = vec![0.25; 4];
        let op = rank_one(g.clone(), w.clone(), wi.clone(), wo.clone());
        let spec = MixedNormSpec::new(3, 1.2, 6.0).unwrap();
        let est = mixed_norm_power_iterate(&op, &spec, &PowerOptions::default()).unwrap();
        let gc: Vec<Complex64> = g.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let wc: Vec<Complex64> = w.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let want = lp_norm(&gc, &wo, 6.0) * lp_norm(&wc, &wi, conjugate(1.2));
        assert!((est.value - want).abs() < 1e-8 * want, "{} vs {want}", est.value);
    }

    #[test]
    fn monotone_history_and_witness() {
        let m = 30;
        let wi: Vec<f64> = (0..m).map(|i| 0.02 + 0.001 * i as f64).collect();
        let op = DiscretizedOperator::from_kernel(wi.clone(), wi, |i, j| {
            let d = (i as f64 - j as f64).abs() / 30.0;
            Complex64::from_polar(1.0 / (0.05 + d), 3.0 * d)
        })
        .unwrap();
        let spec = MixedNormSpec::new(3, 1.2, 6.0).unwrap();
        let est = mixed_norm_power_iterate(&op, &spec, &PowerOptions::default()).unwrap();
        assert!(est.max_decrease() < 1e-12);
        assert!((est.reevaluate(&op) - est.value).abs() <= 1e-12 * est.value);
    }

    #[test]
    fn l2_of_orthogonal_projection() {
        // Projection onto the constants in L^2 of a weighted grid.
        let wi: Vec<f64> = (0..20).map(|i| 0.1 + 0.01 * i as f64).collect();
        let total: f64 = wi.iter().sum();
        let op = DiscretizedOperator::from_kernel(wi.clone(), wi, |_, _| Complex64::new(1.0 / total, 0.0)).unwrap();
        let est = mixed_norm_power_iterate(&op, &MixedNormSpec::new(2, 2.0, 2.0).unwrap(), &PowerOptions::default()).unwrap();
        assert!((est.value - 1.0).abs() < 1e-6);
    }
}
