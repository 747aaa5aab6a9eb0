//! Discrete checks of the projector algebra `H_k H_j = delta_{jk} H_k`
//! and `tr H_k = d_k` on a product quadrature grid.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::context::SphereContext;
use crate::error::{Error, Result};
use crate::special::{normalized_gegenbauer_sequence, sphere_grid};

#[derive(Debug, Clone, Serialize)]
pub struct ProjectorAlgebraReport {
    pub n: usize,
    pub resolution: usize,
    pub grid_points: usize,
    pub k_max: usize,
    /// `max_k |tr H_k - d_k| / d_k` over `k <= trace_k_max`.
    pub trace_k_max: usize,
    pub max_trace_error: f64,
    /// `max |(H_k W H_j)(x, y) - delta_{jk} H_k(x, y)| / sqrt(H_k(x,x) H_j(y,y))`
    /// over sampled pairs `x, y` and `k, j <= k_max`.
    pub max_orthogonality_error: f64,
    pub samples: usize,
}

/// Trace and orthogonality of the discretized projectors on
/// `sphere_grid(n, resolution)`. Orthogonality is checked on the
/// composition kernel at `samples` pseudo-random points drawn with `seed`.
pub fn projector_algebra_check(
    ctx: &SphereContext,
    k_max: usize,
    trace_k_max: usize,
    resolution: usize,
    samples: usize,
    seed: u64,
) -> Result<ProjectorAlgebraReport> {
    if samples == 0 {
        return Err(Error::Domain("need at least one sample point".into()));
    }
    let n = ctx.n();
    let grid = sphere_grid::<f64>(n, resolution)?;
    let alpha = ctx.half_dim();
    let omega = ctx.area();
    let scale = |k: usize| ctx.harmonic_dim(k) as f64 / omega;

    // The diagonal of every H_k is the constant d_k / omega_n.
    let max_trace_error = (0..=trace_k_max)
        .map(|k| {
            let diag = scale(k) * normalized_gegenbauer_sequence(k, alpha, 1.0)[k];
            let tr: f64 = grid.weights().iter().map(|w| w * diag).sum();
            let d = ctx.harmonic_dim(k) as f64;
            (tr - d).abs() / d
        })
        .fold(0.0, f64::max);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Vec<f64>> = (0..samples)
        .map(|_| loop {
            let v: Vec<f64> = (0..=n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let r = v.iter().map(|c| c * c).sum::<f64>().sqrt();
            if r > 0.1 && r <= 1.0 {
                break v.into_iter().map(|c| c / r).collect();
            }
        })
        .collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>().clamp(-1.0, 1.0);

    // rows[s][z * (k_max + 1) + k] = H_k(x_s, z)
    let m = k_max + 1;
    let rows: Vec<Vec<f64>> = points
        .par_iter()
        .map(|x| {
            let mut row = Vec::with_capacity(grid.len() * m);
            for z in grid.nodes() {
                let p = normalized_gegenbauer_sequence(k_max, alpha, dot(x, z));
                row.extend(p.iter().enumerate().map(|(k, v)| scale(k) * v));
            }
            row
        })
        .collect();
    let weights = grid.weights();
    let max_orthogonality_error = (0..samples * samples)
        .into_par_iter()
        .map(|idx| {
            let (a, b) = (idx / samples, idx % samples);
            let mut prod = vec![0.0; m * m];
            for (z, w) in weights.iter().enumerate() {
                let ra = &rows[a][z * m..(z + 1) * m];
                let rb = &rows[b][z * m..(z + 1) * m];
                for k in 0..m {
                    let wk = w * ra[k];
                    for j in 0..m {
                        prod[k * m + j] += wk * rb[j];
                    }
                }
            }
            let direct = normalized_gegenbauer_sequence(k_max, alpha, dot(&points[a], &points[b]));
            let mut worst = 0.0f64;
            for k in 0..m {
                for j in 0..m {
                    let want = if k == j { scale(k) * direct[k] } else { 0.0 };
                    let err = (prod[k * m + j] - want).abs() / (scale(k) * scale(j)).sqrt();
                    worst = worst.max(err);
                }
            }
            worst
        })
        .reduce(|| 0.0, f64::max);

    Ok(ProjectorAlgebraReport {
        n,
        resolution,
        grid_points: grid.len(),
        k_max,
        trace_k_max,
        max_trace_error,
        max_orthogonality_error,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degree_algebra_on_s2() {
        let ctx = SphereContext::unit(2).unwrap();
        let rep = projector_algebra_check(&ctx, 4, 8, 8, 4, 1).unwrap();
        assert!(rep.max_trace_error < 1e-12);
        assert!(rep.max_orthogonality_error < 1e-10, "{}", rep.max_orthogonality_error);
    }

    #[test]
    fn coarse_grid_breaks_orthogonality() {
        // Degree 2k exceeds the exactness of a 3-node rule.
        let ctx = SphereContext::unit(2).unwrap();
        let rep = projector_algebra_check(&ctx, 6, 2, 3, 3, 2).unwrap();
        assert!(rep.max_orthogonality_error > 1e-3);
    }
}
