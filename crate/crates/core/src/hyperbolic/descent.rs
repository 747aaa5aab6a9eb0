//! The two descent operators producing `H^n` wave-type kernels from
//! functions of time.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::special::gauss_legendre;

/// `(sinh(t)^{-1} d/dt)^m g` at `t`, by jet arithmetic.
///
/// `g` maps a jet in `t` to the jet of the profile; it must return at
/// least order `m`.
pub fn jet_descend_odd<G>(g: G, m: usize, t: f64) -> Result<Complex64>
where
    G: Fn(&Jet) -> Jet,
{
    if !(t > 0.0) {
        return Err(Error::Domain(format!("descent needs t > 0, got {t}")));
    }
    let x = Jet::variable(t, m);
    let mut v = g(&x);
    if v.order() < m {
        return Err(Error::Domain(format!("profile jet has order {} < {m}", v.order())));
    }
    let sh = x.sinh();
    for _ in 0..m {
        v = v.weighted_derivative(&sh);
    }
    Ok(v.value())
}

/// `int_t^{s_max} sinh s (cosh s - cosh t)^{-1/2} (sinh(s)^{-1} d/ds)^{n/2} g(s) ds`
/// with `s = t + u^2`, which removes the endpoint singularity. `g` must
/// vanish (or be negligible) beyond `s_max`.
pub fn descend_even<G>(g: G, n: usize, t: f64, s_max: f64) -> Result<Complex64>
where
    G: Fn(&Jet) -> Jet,
{
    if !n.is_multiple_of(2) || n == 0 {
        return Err(Error::UnsupportedDimension(n));
    }
    if !(t > 0.0) {
        return Err(Error::Domain(format!("descent needs t > 0, got {t}")));
    }
    if s_max <= t {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let m = n / 2;
    let (ct, u_max) = (t.cosh(), (s_max - t).sqrt());
    let integrand = |u: f64| -> Result<Complex64> {
        let s = t + u * u;
        let d = jet_descend_odd(&g, m, s)?;
        // 2u / sqrt(cosh s - cosh t) -> 2 / sqrt(sinh t) as u -> 0
        let gap = if u * u < 1e-8 {
            t.sinh() * u * u + 0.5 * ct * u.powi(4)
        } else {
            s.cosh() - ct
        };
        let jac = if u == 0.0 { 2.0 / t.sinh().sqrt() } else { 2.0 * u / gap.sqrt() };
        Ok(d * (s.sinh() * jac))
    };
    // Geometric panels resolve the O(sqrt t) boundary layer near u = 0.
    let mut cuts = vec![0.0];
    let mut x = 0.25 * t.min(1.0).sqrt();
    while x < u_max.min(0.05) {
        cuts.push(x);
        x *= 2.0;
    }
    let start = *cuts.last().unwrap();
    let uniform = ((u_max - start) / 0.05).ceil().max(4.0) as usize;
    cuts.extend((1..=uniform).map(|i| start + (u_max - start) * i as f64 / uniform as f64));
    let base = gauss_legendre(24);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut peak: f64 = 0.0;
    for pair in cuts.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        for (x, w) in base.0.iter().zip(base.1.iter()) {
            let v = integrand(mid + half * x)?;
            peak = peak.max(v.norm());
            acc += v * (half * w);
        }
    }
    let end = integrand(u_max)?.norm();
    if end > 1e-8 * peak.max(f64::MIN_POSITIVE) && end > 1e-300 {
        return Err(Error::Domain(format!("integrand not negligible at s_max = {s_max} ({end:.3e})")));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gauss_jacobi_rule;
    use crate::windows::WindowFamily;

    #[test]
    fn odd_descent_examples() {
        assert!((jet_descend_odd(|t| t.cosh(), 1, 0.8).unwrap() - 1.0).norm() < 1e-14);
        assert!(jet_descend_odd(|t| t.cosh(), 2, 0.8).unwrap().norm() < 1e-13);
        let l = 5.0;
        let v = jet_descend_odd(|t| t.scale(Complex64::new(0.0, l)).exp(), 1, 1.0).unwrap();
        let want = Complex64::new(0.0, l) * Complex64::new(0.0, l).exp() / 1f64.sinh();
        assert!((v - want).norm() < 1e-13);
    }

    #[test]
    fn odd_descent_symbolic_library() {
        // g = t^2 e^{-t} cos(3t) and (sinh^{-1} d/dt)^m g for m <= 3 by
        // hand-expanded derivatives g', g'', g''' evaluated through the
        // chain (D f = f' / sinh).
        let t0: f64 = 0.9;
        let g = |t: f64| t * t * (-t).exp() * (3.0 * t).cos();
        let g1 = |t: f64| (-t).exp() * ((2.0 * t - t * t) * (3.0 * t).cos() - 3.0 * t * t * (3.0 * t).sin());
        let _ = g;
        let d1 = g1(t0) / t0.sinh();
        let v = jet_descend_odd(|t| &(t * t) * &(&(-t).exp() * &t.scale(3.0).cos()), 1, t0).unwrap();
        assert!((v.re - d1).abs() < 1e-12 * d1.abs().max(1.0));
        // Second order via finite differences of the first-order closed form.
        let f1 = |t: f64| g1(t) / t.sinh();
        let h = 1e-5;
        let d2 = (f1(t0 + h) - f1(t0 - h)) / (2.0 * h) / t0.sinh();
        let v2 = jet_descend_odd(|t| &(t * t) * &(&(-t).exp() * &t.scale(3.0).cos()), 2, t0).unwrap();
        assert!((v2.re - d2).abs() < 1e-7 * d2.abs().max(1.0));
    }

    #[test]
    fn even_descent_of_empty_support() {
        let w = WindowFamily;
        let v = descend_even(|s| w.beta_jet(s), 2, 3.0, 2.0).unwrap();
        assert_eq!(v.norm(), 0.0);
    }

    #[test]
    fn even_descent_matches_jacobi_oracle() {
        // g(s) = e^{-2s}, n = 2, t = 1:
        //   -2 int_1^inf e^{-2s} (cosh s - cosh 1)^{-1/2} ds.
        // Oracle: Gauss-Jacobi with weight (s - 1)^{-1/2} on [1, 1 + L].
        let t = 1.0f64;
        let l = 20.0;
        let rule = gauss_jacobi_rule::<f64>(200, 0.0, -0.5).unwrap();
        let mut oracle = 0.0;
        for (x, w) in rule.coords().iter().zip(rule.weights()) {
            let s = t + 0.5 * l * (x + 1.0);
            let h = -2.0 * (-2.0 * s).exp() * ((s - t) / (s.cosh() - t.cosh())).sqrt();
            oracle += w * h * (0.5 * l).sqrt();
        }
        let v = descend_even(|s| s.scale(-2.0).exp(), 2, t, t + l).unwrap();
        assert!((v.re - oracle).abs() < 1e-8 * oracle.abs(), "{} vs {oracle}", v.re);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn even_descent_detects_undecayed_profile() {
        assert!(descend_even(|s| s.cosh(), 2, 1.0, 3.0).is_err());
    }
}
