//! The resolvent on `H^n` split along a dyadic partition of the time axis:
//! `S_0` from `beta_0(t)` and `S_k` from `beta(2^{-k} t)`.

use num_complex::Complex64;
use serde::Serialize;

use super::context::HyperbolicContext;
use super::descent::{descend_even, jet_descend_odd};
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::norm::RadialKernel;
use crate::windows::WindowFamily;

/// Which time window a piece uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "k", rename_all = "snake_case")]
pub enum Piece {
    /// `beta_0(t)`, supported in `[0, 2]`.
    Local,
    /// `beta(2^{-k} t)`, supported in `[2^{k-1}, 2^{k+1}]`.
    Dyadic(i32),
    /// No window: the full resolvent.
    Full,
}

impl Piece {
    /// Time support; kernels vanish beyond its right end.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            Piece::Local => (0.0, 2.0),
            Piece::Dyadic(k) => (2f64.powi(k - 1), 2f64.powi(k + 1)),
            Piece::Full => (0.0, f64::INFINITY),
        }
    }
}

/// Kernel of `sgn(mu)/(i(lambda + i mu)) int_0^inf w(t) e^{i sgn(mu) lambda t - |mu| t} cos(tP) dt`
/// for a window `w` selected by [`Piece`].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DescentKernel {
    pub ctx: HyperbolicContext,
    pub lambda: f64,
    pub mu: f64,
    pub piece: Piece,
    /// Multiplies the descent; defaults to the dimension's `c_n`.
    pub constant: f64,
    #[serde(skip)]
    pub windows: WindowFamily,
}

impl DescentKernel {
    pub fn new(ctx: HyperbolicContext, lambda: f64, mu: f64, piece: Piece) -> Result<Self> {
        if mu == 0.0 {
            return Err(Error::Domain("need mu != 0".into()));
        }
        if lambda < 0.0 {
            return Err(Error::Domain(format!("need lambda >= 0, got {lambda}")));
        }
        if let Piece::Dyadic(k) = piece {
            if k < 1 {
                return Err(Error::Domain(format!("dyadic index must be >= 1, got {k}")));
            }
        }
        Ok(Self { ctx, lambda, mu, piece, constant: ctx.descent_constant(), windows: WindowFamily })
    }

    pub fn with_constant(mut self, c: f64) -> Self {
        self.constant = c;
        self
    }

    fn prefactor(&self) -> (Complex64, Complex64) {
        let sgn = self.mu.signum();
        let w = Complex64::new(self.lambda, self.mu);
        (Complex64::new(sgn, 0.0) / (Complex64::i() * w), Complex64::new(-self.mu.abs(), sgn * self.lambda))
    }

    /// The time profile `w(t) e^{a t} sgn/(i w)` as a jet.
    pub fn profile(&self, t: &Jet) -> Jet {
        let (pref, a) = self.prefactor();
        let e = t.scale(a).exp().scale(pref);
        match self.piece {
            Piece::Local => &self.windows.beta0_jet(t) * &e,
            Piece::Dyadic(k) => &self.windows.dyadic_jet(k, t) * &e,
            Piece::Full => e,
        }
    }

    fn profile_value(&self, t: f64) -> Complex64 {
        self.profile(&Jet::variable(t, 0)).value()
    }

    pub fn kernel(&self, r: f64) -> Result<Complex64> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("need r > 0, got {r}")));
        }
        let (lo, hi) = self.piece.support();
        let n = self.ctx.n();
        if n % 2 == 1 {
            if r >= hi || (r <= lo && lo > 0.0) {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let v = jet_descend_odd(|t| self.profile(t), (n - 1) / 2, r)?;
            Ok(v * self.constant)
        } else {
            if r >= hi {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let s_max = if hi.is_finite() { hi } else { r + 60.0 / self.mu.abs() };
            let v = descend_even(|t| self.profile(t), n, r, s_max)?;
            Ok(v * self.constant)
        }
    }
}

impl RadialKernel for DescentKernel {
    fn eval(&self, r: f64) -> Complex64 {
        self.kernel(r).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }

    /// On `H^3`, `K sinh = c_3 d/dd (profile)`, so the shell integral is a
    /// difference of profile values.
    fn shell_integral(&self, a: f64, b: f64) -> Complex64 {
        if self.ctx.n() == 3 {
            let (_, hi) = self.piece.support();
            let at = |d: f64| if d >= hi { Complex64::new(0.0, 0.0) } else { self.profile_value(d) };
            return (at(b) - at(a)) * self.constant;
        }
        let panels = ((b - a) / 0.05).ceil().max(1.0) as usize;
        crate::special::composite_legendre(a, b, panels, 16, |d| self.eval(d) * d.sinh())
    }
}

/// Kernel of `S_0` at distance `r`.
pub fn s0_kernel(ctx: &HyperbolicContext, lambda: f64, mu: f64, r: f64, windows: &WindowFamily) -> Result<Complex64> {
    let mut k = DescentKernel::new(*ctx, lambda, mu, Piece::Local)?;
    k.windows = *windows;
    k.kernel(r)
}

/// Kernel of the dyadic piece `S_k` at distance `r`.
pub fn sk_kernel(ctx: &HyperbolicContext, k: i32, lambda: f64, mu: f64, r: f64, windows: &WindowFamily) -> Result<Complex64> {
    let mut kern = DescentKernel::new(*ctx, lambda, mu, Piece::Dyadic(k))?;
    kern.windows = *windows;
    kern.kernel(r)
}

/// `sup_r |S_k(r)|` on a fine grid of its support.
pub fn sk_sup(ctx: &HyperbolicContext, k: i32, lambda: f64, mu: f64) -> Result<f64> {
    let kern = DescentKernel::new(*ctx, lambda, mu, Piece::Dyadic(k))?;
    let (lo, hi) = Piece::Dyadic(k).support();
    let m = 2000;
    let mut sup: f64 = 0.0;
    for i in 1..m {
        let r = lo + (hi - lo) * i as f64 / m as f64;
        sup = sup.max(kern.kernel(r)?.norm());
    }
    Ok(sup)
}

#[derive(Debug, Clone, Serialize)]
pub struct ReconstructionReport {
    pub lambda: f64,
    pub mu: f64,
    pub k_max: i32,
    /// Least-squares constant matching the uncalibrated sum to the closed form.
    pub calibrated_constant: f64,
    pub max_relative_error: f64,
    pub radii: Vec<f64>,
}

/// Sums `S_0 + sum_{k <= k_max} S_k` on `H^3` and compares with
/// `-e^{-z r}/(4 pi sinh r)`, `z = |mu| - i sgn(mu) lambda`; also fits the
/// descent constant from scratch.
pub fn dyadic_reconstruction(lambda: f64, mu: f64, k_max: i32, radii: &[f64]) -> Result<ReconstructionReport> {
    let ctx = HyperbolicContext::unit(3)?;
    let z = Complex64::new(mu.abs(), -mu.signum() * lambda);
    let mut pieces = vec![DescentKernel::new(ctx, lambda, mu, Piece::Local)?.with_constant(1.0)];
    for k in 1..=k_max {
        pieces.push(DescentKernel::new(ctx, lambda, mu, Piece::Dyadic(k))?.with_constant(1.0));
    }
    let (mut num, mut den) = (0.0, 0.0);
    let mut raw = Vec::with_capacity(radii.len());
    let mut target = Vec::with_capacity(radii.len());
    for &r in radii {
        if r > 2f64.powi(k_max) {
            return Err(Error::Domain(format!("radius {r} beyond the covered range 2^{k_max}")));
        }
        let s: Complex64 = pieces.iter().map(|p| p.kernel(r)).sum::<Result<Complex64>>()?;
        let want = -super::kernels::h3_resolvent_kernel(z, r)?;
        // least squares for real c in c * s = want
        num += (s.conj() * want).re;
        den += s.norm_sqr();
        raw.push(s);
        target.push(want);
    }
    let c = num / den;
    let c3 = ctx.descent_constant();
    let max_relative_error = raw
        .iter()
        .zip(&target)
        .map(|(s, w)| (s * c3 - w).norm() / w.norm())
        .fold(0.0, f64::max);
    Ok(ReconstructionReport { lambda, mu, k_max, calibrated_constant: c, max_relative_error, radii: radii.to_vec() })
}
