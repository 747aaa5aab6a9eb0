//! Smooth cutoffs built from `exp(-1/x)`, with exact jets.

use num_complex::Complex64;
use serde::Serialize;

use crate::jet::Jet;

fn h(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

fn h_jet(x: &Jet) -> Jet {
    if x.value().re > 0.0 {
        (-&x.recip()).exp()
    } else {
        Jet::constant(0.0, x.order())
    }
}

/// `C^infinity` step: 0 for `x <= 0`, 1 for `x >= 1`.
pub fn smooth_step(x: f64) -> f64 {
    let a = h(x);
    let b = h(1.0 - x);
    a / (a + b)
}

pub fn smooth_step_jet(x: &Jet) -> Jet {
    let one = Jet::constant(1.0, x.order());
    let a = h_jet(x);
    let b = h_jet(&(&one - x));
    &a * &(&a + &b).recip()
}

/// The cutoff family used by the local/dyadic kernel splittings.
///
/// * `phi(t)`: 1 on `[0, 1]`, 0 on `[2, inf)`.
/// * `beta(t) = phi(t) - phi(2t)`: supported in `[1/2, 2]`, and
///   `sum_j beta(2^{-j} t) = 1` for `t > 0`.
/// * `beta0(t) = phi(t) = 1 - sum_{j >= 1} beta(2^{-j} t)`.
/// * `rho(t)`: even, 1 for `|t| <= 1/2`, 0 for `|t| >= 1`.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct WindowFamily;

impl WindowFamily {
    pub fn phi(&self, t: f64) -> f64 {
        smooth_step(2.0 - t)
    }

    pub fn phi_jet(&self, t: &Jet) -> Jet {
        let two = Jet::constant(2.0, t.order());
        smooth_step_jet(&(&two - t))
    }

    pub fn beta0(&self, t: f64) -> f64 {
        self.phi(t)
    }

    pub fn beta0_jet(&self, t: &Jet) -> Jet {
        self.phi_jet(t)
    }

    pub fn beta(&self, t: f64) -> f64 {
        self.phi(t) - self.phi(2.0 * t)
    }

    pub fn beta_jet(&self, t: &Jet) -> Jet {
        &self.phi_jet(t) - &self.phi_jet(&t.scale(2.0))
    }

    /// `beta(2^{-k} t)`.
    pub fn dyadic(&self, k: i32, t: f64) -> f64 {
        self.beta(t * 2f64.powi(-k))
    }

    pub fn dyadic_jet(&self, k: i32, t: &Jet) -> Jet {
        self.beta_jet(&t.scale(2f64.powi(-k)))
    }

    pub fn rho(&self, t: f64) -> f64 {
        smooth_step(2.0 - 2.0 * t.abs())
    }

    pub fn rho_jet(&self, t: &Jet) -> Jet {
        let s = if t.value().re < 0.0 { -1.0 } else { 1.0 };
        let two = Jet::constant(2.0, t.order());
        smooth_step_jet(&(&two - &t.scale(2.0 * s)))
    }

    /// Support of `beta(2^{-k} .)`.
    pub fn dyadic_support(&self, k: i32) -> (f64, f64) {
        (2f64.powi(k - 1), 2f64.powi(k + 1))
    }

    /// `beta0(t) + sum_{k=1}^{kmax} beta(2^{-k} t)`.
    pub fn partial_partition(&self, kmax: i32, t: f64) -> f64 {
        self.beta0(t) + (1..=kmax).map(|k| self.dyadic(k, t)).sum::<f64>()
    }
}

/// Complex exponential profile `exp(c t)` as a jet.
pub fn exp_profile_jet(c: Complex64, t: &Jet) -> Jet {
    t.scale(c).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_limits() {
        assert_eq!(smooth_step(-0.1), 0.0);
        assert_eq!(smooth_step(0.0), 0.0);
        assert_eq!(smooth_step(1.0), 1.0);
        assert!((smooth_step(0.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn supports() {
        let w = WindowFamily;
        assert_eq!(w.beta(0.5), 0.0);
        assert_eq!(w.beta(2.0), 0.0);
        assert!(w.beta(1.0) > 0.0);
        assert_eq!(w.beta0(2.0), 0.0);
        assert_eq!(w.beta0(0.9), 1.0);
        assert_eq!(w.rho(0.5), 1.0);
        assert_eq!(w.rho(-0.4), 1.0);
        assert_eq!(w.rho(1.0), 0.0);
    }

    #[test]
    fn dyadic_partition_of_unity() {
        let w = WindowFamily;
        for i in 0..2000 {
            let t = 10f64.powf(-3.0 + 5.0 * i as f64 / 1999.0);
            let full: f64 = (-40..=40).map(|j| w.dyadic(j, t)).sum();
            assert!((full - 1.0).abs() < 1e-12, "t={t}");
            if t <= 2f64.powi(6) {
                assert!((w.partial_partition(6, t) - 1.0).abs() < 1e-12, "t={t}");
            }
        }
    }

    #[test]
    fn jets_match_values_and_finite_differences() {
        let w = WindowFamily;
        for &t0 in &[0.6, 1.2, 1.7, 2.9, 3.5] {
            let t = Jet::variable(t0, 2);
            let j = w.dyadic_jet(1, &t);
            assert!((j.value().re - w.dyadic(1, t0)).abs() < 1e-14);
            let hstep = 1e-5;
            let fd = (w.dyadic(1, t0 + hstep) - w.dyadic(1, t0 - hstep)) / (2.0 * hstep);
            assert!((j.derivative_at(1).re - fd).abs() < 1e-7);
            let r = w.rho_jet(&Jet::variable(t0 / 4.0, 1));
            assert!((r.value().re - w.rho(t0 / 4.0)).abs() < 1e-14);
        }
    }
}
