//! Gegenbauer (ultraspherical) polynomials by forward recurrence.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Degree, index and argument of a Gegenbauer evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GegenbauerParams<T> {
    pub degree: usize,
    pub alpha: T,
    pub t: T,
}

impl<T: Real> GegenbauerParams<T> {
    pub fn new(degree: usize, alpha: T, t: T) -> Result<Self> {
        let p = Self { degree, alpha, t };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if !(self.alpha > T::zero()) {
            return Err(Error::Domain(format!(
                "Gegenbauer index must be positive, got {:?}",
                self.alpha
            )));
        }
        if !(self.t.abs() <= T::one()) {
            return Err(Error::Domain(format!(
                "Gegenbauer argument must lie in [-1, 1], got {:?}",
                self.t
            )));
        }
        Ok(())
    }

    pub fn eval(&self) -> Result<T> {
        gegenbauer_eval(self.degree, self.alpha, self.t)
    }
}

/// `C_k^alpha(t)` via the three-term recurrence
/// `k C_k = 2 (k + alpha - 1) t C_{k-1} - (k + 2 alpha - 2) C_{k-2}`.
pub fn gegenbauer_eval<T: Real>(k: usize, alpha: T, t: T) -> Result<T> {
    GegenbauerParams { degree: k, alpha, t }.validate()?;
    Ok(*gegenbauer_sequence(k, alpha, t).last().unwrap())
}

/// All values `C_0^alpha(t), ..., C_kmax^alpha(t)`. No domain checks.
pub fn gegenbauer_sequence<T: Real>(kmax: usize, alpha: T, t: T) -> Vec<T> {
    let mut out = Vec::with_capacity(kmax + 1);
    out.push(T::one());
    if kmax == 0 {
        return out;
    }
    let two = T::lit(2.0);
    out.push(two * alpha * t);
    for k in 2..=kmax {
        let kf = T::from_usize(k).unwrap();
        let a = two * (kf + alpha - T::one()) * t;
        let b = kf + two * alpha - two;
        let next = (a * out[k - 1] - b * out[k - 2]) / kf;
        out.push(next);
    }
    out
}

/// `C_k^alpha(1) = (2 alpha)_k / k!`.
pub fn gegenbauer_at_one<T: Real>(k: usize, alpha: T) -> T {
    let two_alpha = T::lit(2.0) * alpha;
    (1..=k).fold(T::one(), |acc, j| {
        let jf = T::from_usize(j).unwrap();
        acc * (jf + two_alpha - T::one()) / jf
    })
}

/// `C_k^alpha(t) / C_k^alpha(1)` for all `k <= kmax`, computed with a
/// normalized recurrence so that large degrees never overflow.
pub fn normalized_gegenbauer_sequence<T: Real>(kmax: usize, alpha: T, t: T) -> Vec<T> {
    // p_k = C_k / C_k(1); C_k(1)/C_{k-1}(1) = (k + 2a - 1)/k
    let mut out = Vec::with_capacity(kmax + 1);
    out.push(T::one());
    if kmax == 0 {
        return out;
    }
    out.push(t);
    let one = T::one();
    let two = T::lit(2.0);
    for k in 2..=kmax {
        let kf = T::from_usize(k).unwrap();
        let r1 = (kf + two * alpha - one) / kf; // C_k(1)/C_{k-1}(1)
        let r2 = (kf + two * alpha - two) / (kf - one); // C_{k-1}(1)/C_{k-2}(1)
        let a = two * (kf + alpha - one) * t / (kf * r1);
        let b = (kf + two * alpha - two) / (kf * r1 * r2);
        let next = a * out[k - 1] - b * out[k - 2];
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    /// Explicit hypergeometric sum
    /// `C_k^a(t) = sum_j (-1)^j (a)_{k-j} / (j! (k-2j)!) (2t)^{k-2j}`.
    fn explicit_sum(k: usize, a: f64, t: f64) -> f64 {
        let poch = |x: f64, m: usize| (0..m).fold(1.0, |acc, i| acc * (x + i as f64));
        let fact = |m: usize| (1..=m).fold(1.0, |acc, i| acc * i as f64);
        (0..=k / 2)
            .map(|j| {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * poch(a, k - j) / (fact(j) * fact(k - 2 * j)) * (2.0 * t).powi((k - 2 * j) as i32)
            })
            .sum()
    }

    #[test]
    fn base_cases() {
        assert_eq!(gegenbauer_eval(0, 1.0, 0.3).unwrap(), 1.0);
        assert_relative_eq!(gegenbauer_eval(1, 1.0, 0.3).unwrap(), 0.6, epsilon = 1e-15);
        assert_relative_eq!(gegenbauer_eval(4, 1.0_f64, 1.0).unwrap(), 5.0, epsilon = 1e-14);
        assert_relative_eq!(explicit_sum(4, 1.0, 1.0), 5.0, epsilon = 1e-14);
    }

    #[test]
    fn matches_explicit_sum_small_degree() {
        for &a in &[0.5, 1.0, 1.5, 2.25] {
            for k in 0..=10 {
                for &t in &[-1.0, -0.7, -0.1, 0.0, 0.35, 0.9, 1.0] {
                    let want = explicit_sum(k, a, t);
                    let got = gegenbauer_eval(k, a, t).unwrap();
                    assert!((got - want).abs() <= 1e-11 * (1.0 + want.abs()), "k={k} a={a} t={t}");
                }
            }
        }
    }

    #[test]
    fn value_at_one_and_normalized_sequence() {
        for &a in &[0.5, 1.0, 1.5] {
            let raw = gegenbauer_sequence(40, a, 1.0);
            for (k, v) in raw.iter().enumerate() {
                assert_relative_eq!(*v, gegenbauer_at_one(k, a), max_relative = 1e-12);
            }
            let raw = gegenbauer_sequence(40, a, 0.37);
            let norm = normalized_gegenbauer_sequence(40, a, 0.37);
            for k in 0..=40 {
                assert_relative_eq!(norm[k], raw[k] / gegenbauer_at_one(k, a), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(gegenbauer_eval(3, 1.0, 1.2).is_err());
        assert!(gegenbauer_eval(3, 0.0, 0.2).is_err());
        assert!(gegenbauer_eval(3, -1.0, 0.2).is_err());
    }

    #[test]
    fn single_precision_is_usable() {
        let v: f32 = gegenbauer_eval(6, 1.0f32, 0.25).unwrap();
        let w = gegenbauer_eval(6, 1.0f64, 0.25).unwrap();
        assert!((v as f64 - w).abs() < 1e-5);
    }

    proptest! {
        #[test]
        fn bounded_by_value_at_one(k in 0usize..200, a in 0.1f64..3.0, t in -1.0f64..1.0) {
            let v = gegenbauer_eval(k, a, t).unwrap();
            let top = gegenbauer_at_one(k, a);
            prop_assert!(top > 0.0);
            prop_assert!(v.abs() <= top * (1.0 + 1e-10));
        }

        #[test]
        fn recurrence_residual(k in 2usize..=256, a in 0.5f64..2.0, t in -1.0f64..1.0) {
            let seq = gegenbauer_sequence(k, a, t);
            let kf = k as f64;
            let res = kf * seq[k] - 2.0 * (kf + a - 1.0) * t * seq[k - 1] + (kf + 2.0 * a - 2.0) * seq[k - 2];
            prop_assert!(res.abs() <= 1e-10 * gegenbauer_at_one(k, a));
        }
    }
}
