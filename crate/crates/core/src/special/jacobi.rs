//! Gauss-Jacobi quadrature by deflated Newton iteration.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use statrs::function::gamma::ln_gamma;

use super::rule::{QuadratureRule, RuleKind};
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_NEWTON: usize = 100;

/// `(P_m, P_m', P_{m-1})` of the Jacobi polynomial `P^{(a,b)}` at `x`.
pub(crate) fn jacobi_with_derivative<T: Real>(m: usize, a: T, b: T, x: T) -> (T, T, T) {
    let one = T::one();
    let two = T::lit(2.0);
    let mut prev = one;
    let mut cur = (a - b) / two + (a + b + two) * x / two;
    if m == 0 {
        return (one, T::zero(), T::zero());
    }
    for n in 2..=m {
        let nf = T::from_usize(n).unwrap();
        let c = two * nf + a + b;
        let a1 = two * nf * (nf + a + b) * (c - two);
        let a2 = (c - one) * (a * a - b * b);
        let a3 = (c - two) * (c - one) * c;
        let a4 = two * (nf + a - one) * (nf + b - one) * c;
        let next = ((a2 + a3 * x) * cur - a4 * prev) / a1;
        prev = cur;
        cur = next;
    }
    let mf = T::from_usize(m).unwrap();
    let c = two * mf + a + b;
    let deriv = if m == 1 {
        (a + b + two) / two
    } else {
        (mf * ((a - b) - c * x) * cur + two * (mf + a) * (mf + b) * prev) / (c * (one - x * x))
    };
    (cur, deriv, prev)
}

/// Gauss rule with `m` nodes for the weight `(1-t)^a (1+t)^b` on `[-1, 1]`.
///
/// Exact for polynomials of degree `<= 2m - 1`. Nodes come back in
/// ascending order.
pub fn gauss_jacobi_rule<T: Real>(m: usize, a: T, b: T) -> Result<QuadratureRule<T>> {
    let neg_one = -T::one();
    if m == 0 {
        return Err(Error::Domain("Gauss-Jacobi rule needs at least one node".into()));
    }
    if !(a > neg_one && b > neg_one) {
        return Err(Error::Domain(format!("Jacobi exponents must exceed -1, got a={a:?} b={b:?}")));
    }
    let (af, bf) = (a.to_f64_lossy(), b.to_f64_lossy());
    let two = T::lit(2.0);
    let one = T::one();
    let tol = T::lit(1e-14).max(T::epsilon() * T::lit(8.0));
    let mf = T::from_usize(m).unwrap();

    let mut roots: Vec<T> = Vec::with_capacity(m);
    for i in 1..=m {
        // Chebyshev-like asymptotic seed, descending from +1.
        let theta = T::PI() * (T::from_usize(i).unwrap() - T::lit(0.25) + a / two)
            / (mf + (a + b + one) / two);
        let mut x = theta.cos();
        let mut converged = false;
        for _ in 0..MAX_NEWTON {
            let (p, dp, _) = jacobi_with_derivative(m, a, b, x);
            let defl = roots.iter().fold(T::zero(), |acc, &r| acc + one / (x - r));
            let step = p / (dp - p * defl);
            x = x - step;
            if step.abs() <= tol * (one + x.abs()) {
                converged = true;
                break;
            }
        }
        if !converged || !x.is_finite() {
            return Err(Error::Convergence { index: i - 1, iterations: MAX_NEWTON });
        }
        roots.push(x);
    }
    roots.sort_by(|p, q| p.partial_cmp(q).unwrap());

    let ln_const = ln_gamma(m as f64 + af + 1.0) + ln_gamma(m as f64 + bf + 1.0)
        - ln_gamma(m as f64 + af + bf + 1.0)
        - ln_gamma(m as f64 + 1.0)
        + (af + bf + 1.0) * std::f64::consts::LN_2;
    let scale = T::lit(ln_const.exp());
    let weights: Vec<T> = roots
        .iter()
        .map(|&x| {
            let (_, dp, _) = jacobi_with_derivative(m, a, b, x);
            scale / ((one - x * x) * dp * dp)
        })
        .collect();
    let total = T::lit(jacobi_mass(af, bf));
    Ok(QuadratureRule::from_parts(RuleKind::Interval, 1, roots, weights, total))
}

/// `int_{-1}^{1} (1-t)^a (1+t)^b dt = 2^{a+b+1} B(a+1, b+1)`.
pub fn jacobi_mass(a: f64, b: f64) -> f64 {
    ((a + b + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0)
        - ln_gamma(a + b + 2.0))
    .exp()
}

/// Cached Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(m: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    type Rules = HashMap<usize, Arc<(Vec<f64>, Vec<f64>)>>;
    static CACHE: OnceLock<Mutex<Rules>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&m) {
        return hit.clone();
    }
    let rule = gauss_jacobi_rule(m.max(1), 0.0, 0.0).expect("Legendre rule converges");
    let entry = Arc::new((rule.coords().to_vec(), rule.weights().to_vec()));
    cache.lock().unwrap().insert(m, entry.clone());
    entry
}

/// Gauss-Legendre nodes and weights mapped onto `[lo, hi]`.
pub fn legendre_on(m: usize, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
    let base = gauss_legendre(m);
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    let nodes = base.0.iter().map(|&t| mid + half * t).collect();
    let weights = base.1.iter().map(|&w| w * half).collect();
    (nodes, weights)
}

/// Composite Gauss-Legendre integral of a complex integrand over
/// `[lo, hi]` split into `panels` equal pieces of `m` nodes.
pub fn composite_legendre<F>(lo: f64, hi: f64, panels: usize, m: usize, mut f: F) -> num_complex::Complex64
where
    F: FnMut(f64) -> num_complex::Complex64,
{
    let base = gauss_legendre(m);
    let h = (hi - lo) / panels as f64;
    let mut acc = num_complex::Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let a = lo + h * p as f64;
        let mid = a + 0.5 * h;
        for (t, w) in base.0.iter().zip(base.1.iter()) {
            acc += f(mid + 0.5 * h * t) * (w * 0.5 * h);
        }
    }
    acc
}
