//! Product quadrature on round spheres and hyperbolic geodesic balls.

use statrs::function::gamma::gamma;

use super::jacobi::gauss_jacobi_rule;
use super::rule::{QuadratureRule, RuleKind};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Surface measure of the unit sphere `S^n`: `2 pi^{(n+1)/2} / Gamma((n+1)/2)`.
pub fn sphere_area(n: usize) -> f64 {
    let h = (n as f64 + 1.0) / 2.0;
    2.0 * std::f64::consts::PI.powf(h) / gamma(h)
}

/// Product rule on `S^n` (`1 <= n <= 4`): Gauss-Jacobi in each polar angle,
/// trapezoid in the azimuth. `resolution` polar nodes per angle and
/// `2 * resolution` azimuthal nodes.
pub fn sphere_grid<T: Real>(n: usize, resolution: usize) -> Result<QuadratureRule<T>> {
    if !(1..=4).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    if resolution < 1 {
        return Err(Error::Domain("sphere grid resolution must be positive".into()));
    }
    // Points are built as (coords, weight) and extended one angle at a time.
    // Start from the circle S^1 and prepend polar angles.
    let naz = 2 * resolution;
    let two_pi = T::lit(2.0) * T::PI();
    let daz = two_pi / T::from_usize(naz).unwrap();
    let mut pts: Vec<(Vec<T>, T)> = (0..naz)
        .map(|j| {
            let phi = daz * T::from_usize(j).unwrap();
            (vec![phi.cos(), phi.sin()], daz)
        })
        .collect();
    // Going from S^{m-1} to S^m adds a polar angle with weight sin^{m-1}.
    for m in 2..=n {
        let e = T::lit((m as f64 - 2.0) / 2.0);
        let polar = gauss_jacobi_rule(resolution, e, e)?;
        let mut next = Vec::with_capacity(pts.len() * polar.len());
        for (t, wt) in polar.coords().iter().zip(polar.weights()) {
            let s = (T::one() - *t * *t).max(T::zero()).sqrt();
            for (x, w) in &pts {
                let mut y = Vec::with_capacity(m + 1);
                y.push(*t);
                y.extend(x.iter().map(|&c| c * s));
                next.push((y, *w * *wt));
            }
        }
        pts = next;
    }
    let mut coords = Vec::with_capacity(pts.len() * (n + 1));
    let mut weights = Vec::with_capacity(pts.len());
    for (x, w) in pts {
        coords.extend(x);
        weights.push(w);
    }
    Ok(QuadratureRule::from_parts(RuleKind::Sphere, n + 1, coords, weights, T::lit(sphere_area(n))))
}

/// Product rule on the geodesic ball of radius `r_max` in `H^n`:
/// radial Gauss-Legendre with the `sinh^{n-1}` factor, directions from
/// `sphere_grid(n - 1)`. Node layout: `(r, omega_1..omega_n)`.
pub fn ball_grid<T: Real>(n: usize, r_max: T, resolution: usize) -> Result<QuadratureRule<T>> {
    if !(2..=4).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    if !(r_max > T::zero()) {
        return Err(Error::Domain(format!("ball radius must be positive, got {r_max:?}")));
    }
    let radial = gauss_jacobi_rule(resolution.max(1), T::zero(), T::zero())?;
    let dirs = sphere_grid::<T>(n - 1, resolution.max(1))?;
    let half = r_max / T::lit(2.0);
    let mut coords = Vec::with_capacity(radial.len() * dirs.len() * (n + 1));
    let mut weights = Vec::with_capacity(radial.len() * dirs.len());
    for (t, wt) in radial.coords().iter().zip(radial.weights()) {
        let r = half * (*t + T::one());
        let shell = *wt * half * r.sinh().powi(n as i32 - 1);
        for (om, wd) in dirs.nodes().zip(dirs.weights()) {
            coords.push(r);
            coords.extend_from_slice(om);
            weights.push(shell * *wd);
        }
    }
    let measure = T::lit(sphere_area(n - 1) * sinh_power_integral(n - 1, r_max.to_f64_lossy()));
    Ok(QuadratureRule::from_parts(RuleKind::Ball, n + 1, coords, weights, measure))
}

/// `int_0^R sinh^p(r) dr` for `p <= 3` in closed form.
pub fn sinh_power_integral(p: usize, r: f64) -> f64 {
    match p {
        0 => r,
        1 => r.cosh() - 1.0,
        2 => (2.0 * r).sinh() / 4.0 - r / 2.0,
        3 => r.cosh().powi(3) / 3.0 - r.cosh() + 2.0 / 3.0,
        _ => panic!("sinh power {p} not supported"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn areas() {
        assert_relative_eq!(sphere_area(1), 2.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(sphere_area(2), 4.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(sphere_area(3), 2.0 * PI * PI, max_relative = 1e-14);
        assert_relative_eq!(sphere_area(4), 8.0 * PI * PI / 3.0, max_relative = 1e-14);
    }

    #[test]
    fn sphere_area_matches_product_grid() {
        for n in 1..=4 {
            let g: QuadratureRule<f64> = sphere_grid(n, 6).unwrap();
            assert_relative_eq!(g.weight_sum(), sphere_area(n), max_relative = 1e-12);
            for x in g.nodes() {
                let r2: f64 = x.iter().map(|c| c * c).sum();
                assert!((r2 - 1.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn s3_total_weight() {
        let g: QuadratureRule<f64> = sphere_grid(3, 16).unwrap();
        assert_relative_eq!(g.weight_sum(), 2.0 * PI * PI, max_relative = 1e-12);
        assert!(g.weights().iter().all(|&w| w > 0.0));
    }

    #[test]
    fn s2_second_moment() {
        let g: QuadratureRule<f64> = sphere_grid(2, 8).unwrap();
        for axis in 0..3 {
            let v = g.integrate(|x| x[axis] * x[axis]);
            assert_relative_eq!(v, 4.0 * PI / 3.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn odd_coordinate_integrates_to_zero() {
        let g: QuadratureRule<f64> = sphere_grid(3, 9).unwrap();
        for axis in 0..4 {
            assert!(g.integrate(|x| x[axis]).abs() < 1e-13);
            assert!(g.integrate(|x| x[axis].powi(3) * x[(axis + 1) % 4].powi(2)).abs() < 1e-13);
        }
    }

    #[test]
    fn ball_volumes() {
        let b: QuadratureRule<f64> = ball_grid(3, 2.0, 16).unwrap();
        assert_relative_eq!(b.weight_sum(), PI * ((4.0f64).sinh() - 4.0), max_relative = 1e-10);
        assert_relative_eq!(b.measure(), PI * ((4.0f64).sinh() - 4.0), max_relative = 1e-13);
        let b: QuadratureRule<f64> = ball_grid(2, 1.0, 12).unwrap();
        assert_relative_eq!(b.weight_sum(), 2.0 * PI * (1.0f64.cosh() - 1.0), max_relative = 1e-10);
        let b: QuadratureRule<f64> = ball_grid(4, 1.5, 10).unwrap();
        assert_relative_eq!(b.weight_sum(), b.measure(), max_relative = 1e-10);
    }

    #[test]
    fn small_ball_is_euclidean() {
        let r = 1e-3;
        let b: QuadratureRule<f64> = ball_grid(3, r, 8).unwrap();
        assert_relative_eq!(b.weight_sum(), 4.0 * PI / 3.0 * r * r * r, max_relative = 1e-6);
    }

    #[test]
    fn ball_has_no_center_node() {
        let b: QuadratureRule<f64> = ball_grid(3, 1.0, 8).unwrap();
        assert!(b.nodes().all(|x| x[0] > 0.0));
    }

    #[test]
    fn unsupported_dimensions() {
        assert!(matches!(sphere_grid::<f64>(5, 4), Err(Error::UnsupportedDimension(5))));
        assert!(matches!(ball_grid::<f64>(1, 1.0, 4), Err(Error::UnsupportedDimension(1))));
    }

    #[test]
    fn csv_export_has_one_row_per_node() {
        let g: QuadratureRule<f64> = sphere_grid(2, 4).unwrap();
        let csv = g.to_csv();
        assert_eq!(csv.lines().count(), g.len() + 1);
        assert!(csv.starts_with("x0,x1,x2,weight"));
    }
}
