//! Truncated Taylor arithmetic ("jets") for exact nested derivatives.
//!
//! A `Jet` of order `m` at `t0` holds `f^{(j)}(t0) / j!` for `j = 0..=m`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    c: Vec<Complex64>,
}

fn cz() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

impl Jet {
    pub fn constant(v: impl Into<Complex64>, order: usize) -> Self {
        let mut c = vec![cz(); order + 1];
        c[0] = v.into();
        Self { c }
    }

    /// The identity function `t` expanded at `t0`.
    pub fn variable(t0: f64, order: usize) -> Self {
        let mut j = Self::constant(t0, order);
        if order >= 1 {
            j.c[1] = Complex64::new(1.0, 0.0);
        }
        j
    }

    pub fn from_coeffs(c: Vec<Complex64>) -> Self {
        assert!(!c.is_empty());
        Self { c }
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn value(&self) -> Complex64 {
        self.c[0]
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.c
    }

    /// `j`-th derivative at the expansion point.
    pub fn derivative_at(&self, j: usize) -> Complex64 {
        let fact: f64 = (1..=j).map(|i| i as f64).product();
        self.c[j] * fact
    }

    pub fn scale(&self, s: impl Into<Complex64>) -> Self {
        let s = s.into();
        Self { c: self.c.iter().map(|&v| v * s).collect() }
    }

    /// `d/dt`, losing one order.
    pub fn differentiate(&self) -> Self {
        if self.c.len() == 1 {
            return Self::constant(0.0, 0);
        }
        Self { c: (1..self.c.len()).map(|k| self.c[k] * k as f64).collect() }
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self { c: self.c[..=order.min(self.order())].to_vec() }
    }

    pub fn exp(&self) -> Self {
        let n = self.c.len();
        let mut f = vec![cz(); n];
        f[0] = self.c[0].exp();
        for k in 1..n {
            let mut acc = cz();
            for j in 1..=k {
                acc += self.c[j] * f[k - j] * j as f64;
            }
            f[k] = acc / k as f64;
        }
        Self { c: f }
    }

    pub fn recip(&self) -> Self {
        let n = self.c.len();
        let mut h = vec![cz(); n];
        h[0] = 1.0 / self.c[0];
        for k in 1..n {
            let mut acc = cz();
            for j in 1..=k {
                acc += self.c[j] * h[k - j];
            }
            h[k] = -acc * h[0];
        }
        Self { c: h }
    }

    /// `(sin g, cos g)` (`hyperbolic = false`) or `(sinh g, cosh g)`.
    fn trig_pair(&self, hyperbolic: bool) -> (Self, Self) {
        let n = self.c.len();
        let mut s = vec![cz(); n];
        let mut c = vec![cz(); n];
        if hyperbolic {
            s[0] = self.c[0].sinh();
            c[0] = self.c[0].cosh();
        } else {
            s[0] = self.c[0].sin();
            c[0] = self.c[0].cos();
        }
        let sign = if hyperbolic { 1.0 } else { -1.0 };
        for k in 1..n {
            let (mut as_, mut ac) = (cz(), cz());
            for j in 1..=k {
                let g = self.c[j] * j as f64;
                as_ += g * c[k - j];
                ac += g * s[k - j];
            }
            s[k] = as_ / k as f64;
            c[k] = ac * sign / k as f64;
        }
        (Self { c: s }, Self { c })
    }

    pub fn sin(&self) -> Self {
        self.trig_pair(false).0
    }

    pub fn cos(&self) -> Self {
        self.trig_pair(false).1
    }

    pub fn sinh(&self) -> Self {
        self.trig_pair(true).0
    }

    pub fn cosh(&self) -> Self {
        self.trig_pair(true).1
    }

    /// Apply `(1/w(t)) d/dt` where `w` is given as a jet of at least the
    /// same order.
    pub fn weighted_derivative(&self, weight: &Jet) -> Self {
        let d = self.differentiate();
        &d * &weight.truncate(d.order()).recip()
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, o: &Jet) -> Jet {
        let n = self.c.len().min(o.c.len());
        Jet { c: (0..n).map(|k| self.c[k] + o.c[k]).collect() }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, o: &Jet) -> Jet {
        let n = self.c.len().min(o.c.len());
        Jet { c: (0..n).map(|k| self.c[k] - o.c[k]).collect() }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, o: &Jet) -> Jet {
        let n = self.c.len().min(o.c.len());
        let mut out = vec![cz(); n];
        for (i, oi) in out.iter_mut().enumerate() {
            for j in 0..=i {
                *oi += self.c[j] * o.c[i - j];
            }
        }
        Jet { c: out }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn exp_and_trig_derivatives() {
        let t = Jet::variable(0.7, 5);
        let e = t.scale(Complex64::new(0.0, 3.0)).exp();
        for j in 0..=5 {
            let want = Complex64::new(0.0, 3.0).powu(j as u32) * Complex64::new(0.0, 2.1).exp();
            assert!(close(e.derivative_at(j), want, 1e-13));
        }
        let s = t.sinh();
        assert!(close(s.derivative_at(3), Complex64::from(0.7f64.cosh()), 1e-13));
        let c = t.cos();
        assert!(close(c.derivative_at(2), Complex64::from(-(0.7f64.cos())), 1e-13));
    }

    #[test]
    fn reciprocal_and_product() {
        let t = Jet::variable(2.0, 4);
        let r = t.recip();
        // d^3/dt^3 (1/t) = -6 / t^4
        assert!(close(r.derivative_at(3), Complex64::from(-6.0 / 16.0), 1e-13));
        let one = &t * &r;
        assert!(close(one.value(), Complex64::from(1.0), 1e-15));
        for k in 1..=4 {
            assert!(one.coeffs()[k].norm() < 1e-14);
        }
    }

    #[test]
    fn weighted_derivative_of_cosh_over_sinh() {
        let t = Jet::variable(1.3, 3);
        let once = t.cosh().weighted_derivative(&t.sinh());
        assert!(close(once.value(), Complex64::from(1.0), 1e-14));
        let twice = once.weighted_derivative(&t.sinh().truncate(once.order()));
        assert!(twice.value().norm() < 1e-13);
    }
}
