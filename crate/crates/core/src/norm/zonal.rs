//! Restriction of zonal operators to functions of the distance from a
//! pole. The image of a zonal function is zonal, so norms of the reduced
//! operator are lower bounds for the full norms.

use num_complex::Complex64;

use super::operator::{DiagonalPolicy, DiscretizedOperator};
use crate::error::{Error, Result};
use crate::special::{gauss_jacobi_rule, gauss_legendre, jacobi_mass, sphere_area};
use crate::sphere::ZonalKernel;

/// A kernel `K(d)` on `H^3` depending on geodesic distance.
pub trait RadialKernel: Sync {
    fn eval(&self, r: f64) -> Complex64;

    /// `int_a^b K(d) sinh d dd`.
    fn shell_integral(&self, a: f64, b: f64) -> Complex64 {
        if b <= a {
            return Complex64::new(0.0, 0.0);
        }
        let panels = ((b - a) / 0.05).ceil().max(1.0) as usize;
        let base = gauss_legendre(16);
        let h = (b - a) / panels as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for p in 0..panels {
            let mid = a + h * (p as f64 + 0.5);
            for (x, w) in base.0.iter().zip(base.1.iter()) {
                let d = mid + 0.5 * h * x;
                acc += self.eval(d) * (d.sinh() * 0.5 * h * w);
            }
        }
        acc
    }
}

/// Polar nodes on `S^n` for zonal functions: `cos theta` values and the
/// weights of `omega_{n-1} sin^{n-1} theta d theta`.
#[derive(Debug, Clone)]
pub struct PolarGrid {
    pub cos: Vec<f64>,
    pub weights: Vec<f64>,
}

impl PolarGrid {
    pub fn new(n: usize, nodes: usize) -> Result<Self> {
        if !(2..=4).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        let a = (n as f64 - 2.0) / 2.0;
        let rule = gauss_jacobi_rule::<f64>(nodes, a, a)?;
        let om = sphere_area(n - 1);
        // Descending cos: node 0 is closest to the pole.
        let mut pairs: Vec<(f64, f64)> = rule.coords().iter().zip(rule.weights()).map(|(&c, &w)| (c, w * om)).collect();
        pairs.reverse();
        Ok(Self { cos: pairs.iter().map(|p| p.0).collect(), weights: pairs.iter().map(|p| p.1).collect() })
    }

    pub fn len(&self) -> usize {
        self.cos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cos.is_empty()
    }

    pub fn theta(&self, i: usize) -> f64 {
        self.cos[i].clamp(-1.0, 1.0).acos()
    }
}

/// Radial nodes on `(0, R)` with the `4 pi sinh^2 r dr` weights of `H^3`.
#[derive(Debug, Clone)]
pub struct RadialGrid {
    pub radii: Vec<f64>,
    pub weights: Vec<f64>,
}

impl RadialGrid {
    /// Composite Gauss-Legendre with panels no longer than `max_panel`.
    pub fn new(r_max: f64, max_panel: f64, per_panel: usize) -> Result<Self> {
        if !(r_max > 0.0 && max_panel > 0.0) {
            return Err(Error::Domain("radial grid needs positive radius and panel length".into()));
        }
        let panels = (r_max / max_panel).ceil().max(1.0) as usize;
        let h = r_max / panels as f64;
        let base = gauss_legendre(per_panel.max(1));
        let mut radii = Vec::new();
        let mut weights = Vec::new();
        for p in 0..panels {
            let mid = h * (p as f64 + 0.5);
            for (x, w) in base.0.iter().zip(base.1.iter()) {
                let r = mid + 0.5 * h * x;
                radii.push(r);
                weights.push(4.0 * std::f64::consts::PI * r.sinh().powi(2) * 0.5 * h * w);
            }
        }
        Ok(Self { radii, weights })
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }
}

/// Zonal restriction of a spectral multiplier kernel on `S^n`. The
/// latitude mean of `p_k(x . y)` is `p_k(cos theta_1) p_k(cos theta_2)`.
pub fn sphere_zonal_operator(kernel: &ZonalKernel, grid: &PolarGrid) -> Result<DiscretizedOperator> {
    let c = &grid.cos;
    Ok(DiscretizedOperator::from_kernel(grid.weights.clone(), grid.weights.clone(), |i, j| {
        kernel.latitude_mean(c[i], c[j])
    })?
    .with_label("sphere_zonal_multiplier"))
}

/// Zonal restriction of an arbitrary distance kernel `f(d)` on `S^n`; the
/// latitude mean is computed by Gauss-Jacobi quadrature in the angle
/// between the two points' projections.
pub fn sphere_zonal_generic<F>(n: usize, f: F, grid: &PolarGrid, angular_nodes: usize) -> Result<DiscretizedOperator>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    let a = (n as f64 - 3.0) / 2.0;
    let rule = gauss_jacobi_rule::<f64>(angular_nodes, a, a)?;
    let mass = jacobi_mass(a, a);
    let (cs, ws) = (rule.coords().to_vec(), rule.weights().to_vec());
    let sin: Vec<f64> = grid.cos.iter().map(|c| (1.0 - c * c).max(0.0).sqrt()).collect();
    let co = &grid.cos;
    Ok(DiscretizedOperator::from_kernel(grid.weights.clone(), grid.weights.clone(), |i, j| {
        let (p, q) = (co[i] * co[j], sin[i] * sin[j]);
        let acc: Complex64 = cs.iter().zip(&ws).map(|(c, w)| f((p + q * c).clamp(-1.0, 1.0).acos()) * *w).sum();
        acc / mass
    })?
    .with_label("sphere_zonal_generic"))
}

/// Zonal restriction of a radial kernel on `H^3`: the shell mean is
/// `(2 sinh r1 sinh r2)^{-1} int_{|r1-r2|}^{r1+r2} K(d) sinh d dd`.
pub fn ball_zonal_operator<K: RadialKernel + ?Sized>(kernel: &K, grid: &RadialGrid) -> Result<DiscretizedOperator> {
    let r = &grid.radii;
    let op = DiscretizedOperator::from_kernel(grid.weights.clone(), grid.weights.clone(), |i, j| {
        let (a, b) = ((r[i] - r[j]).abs(), r[i] + r[j]);
        kernel.shell_integral(a, b) / (2.0 * r[i].sinh() * r[j].sinh())
    })?;
    Ok(op.with_label("ball_zonal").with_diagonal(DiagonalPolicy::ExactShell))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::lp::MixedNormSpec;
    use crate::norm::power::{mixed_norm_power_iterate, PowerOptions};
    use crate::sphere::{multiplier_kernel, DegreeWindow, SphereContext};
    use std::f64::consts::PI;

    #[test]
    fn polar_grid_measure() {
        for n in 2..=4 {
            let g = PolarGrid::new(n, 20).unwrap();
            let s: f64 = g.weights.iter().sum();
            assert!((s - sphere_area(n)).abs() < 1e-12 * s);
            assert!(g.cos[0] > g.cos[1]);
        }
    }

    #[test]
    fn generic_matches_funk_hecke() {
        for n in 2..=4 {
            let c = SphereContext::unit(n).unwrap();
            let k = multiplier_kernel(&c, |l| Complex64::new(1.0 / (2.0 + l * l), 0.1 / (1.0 + l)), 12, DegreeWindow::None)
                .unwrap();
            let g = PolarGrid::new(n, 10).unwrap();
            let a = sphere_zonal_operator(&k, &g).unwrap();
            let b = sphere_zonal_generic(n, |d| k.eval_distance(d), &g, 40).unwrap();
            for i in 0..10 {
                for j in 0..10 {
                    assert!((a.entry(i, j) - b.entry(i, j)).norm() < 1e-10, "n={n}");
                }
            }
        }
    }

    #[test]
    fn constant_projector_reduction() {
        let c = SphereContext::unit(3).unwrap();
        let h0 = multiplier_kernel(&c, |l| Complex64::from(if l < 1.5 { 1.0 } else { 0.0 }), 3, DegreeWindow::None).unwrap();
        let g = PolarGrid::new(3, 24).unwrap();
        let op = sphere_zonal_operator(&h0, &g).unwrap();
        let spec = MixedNormSpec::new(3, 1.2, 6.0).unwrap();
        let est = mixed_norm_power_iterate(&op, &spec, &PowerOptions::default()).unwrap();
        // H_0 f = |S^3|^{-1} int f: norm = |S^3|^{1/s - 1/r}
        let want = (2.0 * PI * PI).powf(1.0 / 6.0 - 1.0 / 1.2);
        assert!((est.value - want).abs() < 1e-8 * want);
    }

    struct Gauss;
    impl RadialKernel for Gauss {
        fn eval(&self, r: f64) -> Complex64 {
            Complex64::new((-r * r).exp(), 0.0)
        }
    }

    #[test]
    fn ball_reduction_matches_direct_shell_average() {
        let (r1, r2) = (0.7f64, 1.3f64);
        let m = 2000;
        let direct: f64 = (0..m)
            .map(|j| {
                let c = -1.0 + 2.0 * (j as f64 + 0.5) / m as f64;
                let d = (r1.cosh() * r2.cosh() - r1.sinh() * r2.sinh() * c).acosh();
                (-d * d).exp()
            })
            .sum::<f64>()
            / m as f64;
        let via = Gauss.shell_integral(r2 - r1, r1 + r2).re / (2.0 * r1.sinh() * r2.sinh());
        assert!((direct - via).abs() < 1e-6);
    }

    #[test]
    fn radial_grid_volume() {
        let g = RadialGrid::new(2.0, 0.25, 8).unwrap();
        let v: f64 = g.weights.iter().sum();
        assert!((v - PI * (4f64.sinh() - 4.0)).abs() < 1e-12 * v);
    }
}
