use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::QuadratureRule;

/// Exponent used in place of `s = infinity`.
pub const INFINITY_PROXY: f64 = 64.0;

/// `(sum w_i |f_i|^p)^{1/p}`, or `max |f_i|` for `p = inf`.
pub fn lp_norm(f: &[Complex64], weights: &[f64], p: f64) -> f64 {
    debug_assert_eq!(f.len(), weights.len());
    if p.is_infinite() {
        return f.iter().map(|v| v.norm()).fold(0.0, f64::max);
    }
    // Factor out the maximum so that large p does not overflow.
    let m = f.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if m == 0.0 {
        return 0.0;
    }
    let s: f64 = f.iter().zip(weights).map(|(v, w)| w * (v.norm() / m).powf(p)).sum();
    m * s.powf(1.0 / p)
}

pub fn lp_norm_rule(f: &[Complex64], rule: &QuadratureRule<f64>, p: f64) -> f64 {
    lp_norm(f, rule.weights(), p)
}

/// `J_p f = |f|^{p-1} f / |f|`, with `0 -> 0`.
pub fn duality_map(f: &[Complex64], p: f64) -> Result<Vec<Complex64>> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::Domain(format!("duality map needs 1 < p < inf, got {p}")));
    }
    Ok(f.iter()
        .map(|&v| {
            let a = v.norm();
            if a == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                v * a.powf(p - 2.0)
            }
        })
        .collect())
}

/// Hoelder conjugate `p / (p - 1)`.
pub fn conjugate(p: f64) -> f64 {
    if p.is_infinite() {
        1.0
    } else if p == 1.0 {
        f64::INFINITY
    } else {
        p / (p - 1.0)
    }
}

/// An exponent pair `(r, s)` for `L^r -> L^s` estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixedNormSpec {
    pub r: f64,
    /// Requested target exponent (may be infinite).
    pub s: f64,
    /// Dimension used for the admissibility classification.
    pub n: usize,
    /// `n (1/r - 1/s) = 2` and both exponents stay `1/(2n)` away from 2.
    pub admissible: bool,
}

impl MixedNormSpec {
    /// Any pair with `1 < r < inf`, `1 < s <= inf`; admissibility recorded.
    pub fn new(n: usize, r: f64, s: f64) -> Result<Self> {
        if !(r > 1.0 && r.is_finite()) || !(s > 1.0) {
            return Err(Error::Config(format!("exponents must satisfy 1 < r < inf, 1 < s <= inf; got ({r}, {s})")));
        }
        Ok(Self { r, s, n, admissible: Self::classify(n, r, s) })
    }

    /// Pair required to be admissible.
    pub fn admissible_pair(n: usize, r: f64, s: f64) -> Result<Self> {
        let spec = Self::new(n, r, s)?;
        if !spec.admissible {
            return Err(Error::Config(format!(
                "exponent pair ({r}, {s}) is not admissible in dimension {n}: need n(1/r - 1/s) = 2 and \
                 min(|1/r - 1/2|, |1/s - 1/2|) > 1/(2n)"
            )));
        }
        Ok(spec)
    }

    /// Pair on the closed segment `2n/(n+3) <= r <= 2n/(n+1)` of the
    /// scaling line, endpoints allowed.
    pub fn closed_segment_pair(n: usize, r: f64, s: f64) -> Result<Self> {
        let spec = Self::new(n, r, s)?;
        let nf = n as f64;
        let on_line = (nf * (1.0 / r - 1.0 / s) - 2.0).abs() < 1e-12;
        let lo = 2.0 * nf / (nf + 3.0) - 1e-12;
        let hi = 2.0 * nf / (nf + 1.0) + 1e-12;
        if !on_line || r < lo || r > hi {
            return Err(Error::Config(format!("exponent pair ({r}, {s}) is off the closed segment in dimension {n}")));
        }
        Ok(spec)
    }

    pub fn classify(n: usize, r: f64, s: f64) -> bool {
        let nf = n as f64;
        let (ir, is) = (1.0 / r, if s.is_infinite() { 0.0 } else { 1.0 / s });
        let on_line = (nf * (ir - is) - 2.0).abs() < 1e-12;
        let gap = (ir - 0.5).abs().min((is - 0.5).abs());
        on_line && gap > 1.0 / (2.0 * nf) && r < s && s.is_finite()
    }

    /// Exponent actually used for the target space.
    pub fn s_used(&self) -> f64 {
        if self.s.is_infinite() {
            INFINITY_PROXY
        } else {
            self.s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::sphere_grid;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn constant_on_s3() {
        let g = sphere_grid::<f64>(3, 8).unwrap();
        let f = vec![c(1.0); g.len()];
        assert!((lp_norm_rule(&f, &g, 2.0) - (2.0 * PI * PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn sup_norm_spike() {
        let mut f = vec![c(0.5); 10];
        f[3] = c(-7.0);
        assert_eq!(lp_norm(&f, &[0.1; 10], f64::INFINITY), 7.0);
    }

    #[test]
    fn duality_examples() {
        let f = vec![c(-2.0), Complex64::new(0.0, 3.0), c(0.0)];
        assert_eq!(duality_map(&f, 2.0).unwrap(), f);
        let j = duality_map(&f, 3.0).unwrap();
        assert_eq!(j[0], c(-4.0));
        assert_eq!(j[2], c(0.0));
        assert!(duality_map(&f, 1.0).is_err());
        assert!(duality_map(&f, f64::INFINITY).is_err());
    }

    #[test]
    fn admissibility() {
        assert!(MixedNormSpec::admissible_pair(3, 1.2, 6.0).is_ok());
        assert!(MixedNormSpec::admissible_pair(3, 2.0, 2.0).is_err());
        // endpoints alpha, alpha' of the segment are excluded
        assert!(!MixedNormSpec::classify(3, 1.0 + 1e-9, 3.0));
        assert!(!MixedNormSpec::classify(3, 1.5, f64::INFINITY));
        assert!(MixedNormSpec::closed_segment_pair(3, 1.5, f64::INFINITY).is_ok());
        assert_eq!(MixedNormSpec::new(3, 1.5, f64::INFINITY).unwrap().s_used(), 64.0);
    }

    proptest! {
        #[test]
        fn duality_identity(vals in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..40), p in 1.1f64..8.0) {
            let f: Vec<Complex64> = vals.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
            let w: Vec<f64> = (0..f.len()).map(|i| 0.1 + 0.01 * i as f64).collect();
            let j = duality_map(&f, p).unwrap();
            let pairing: Complex64 = j.iter().zip(&f).zip(&w).map(|((a, b), w)| a.conj() * b * *w).sum();
            let np = lp_norm(&f, &w, p).powf(p);
            prop_assert!((pairing.re - np).abs() <= 1e-10 * np.max(1e-300));
            prop_assert!(pairing.im.abs() <= 1e-10 * np.max(1e-300));
        }

        #[test]
        fn hoelder_on_finite_measure(vals in prop::collection::vec(-5.0f64..5.0, 1..40), p in 1.0f64..10.0) {
            let f: Vec<Complex64> = vals.iter().map(|&a| c(a)).collect();
            let w: Vec<f64> = (0..f.len()).map(|i| 0.05 + 0.02 * i as f64).collect();
            let total: f64 = w.iter().sum();
            prop_assert!(lp_norm(&f, &w, 1.0) <= lp_norm(&f, &w, p) * total.powf(1.0 - 1.0 / p) * (1.0 + 1e-12) + 1e-300);
        }
    }
}
