use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// 95% confidence half-width of the slope.
    pub half_width: f64,
    pub points: usize,
}

/// Least-squares line through `(ln x, ln y)`.
pub fn slope_fit(pairs: &[(f64, f64)]) -> Result<SlopeFit> {
    if pairs.len() < 3 {
        return Err(Error::Degenerate(format!("slope fit needs at least 3 points, got {}", pairs.len())));
    }
    if pairs.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::Domain("log-log fit needs positive data".into()));
    }
    let m = pairs.len() as f64;
    let lx: Vec<f64> = pairs.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = pairs.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / m;
    let my = ly.iter().sum::<f64>() / m;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= 1e-14 * m {
        return Err(Error::Degenerate("abscissas are all equal".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let dof = m - 2.0;
    let half_width = if dof > 0.0 && ssr > 0.0 {
        let t = StudentsT::new(0.0, 1.0, dof).map(|d| d.inverse_cdf(0.975)).unwrap_or(2.0);
        t * (ssr / dof / sxx).sqrt()
    } else {
        0.0
    };
    Ok(SlopeFit { slope, intercept, half_width, points: pairs.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_powers() {
        let f = slope_fit(&[(1.0, 1.0), (2.0, 4.0), (5.0, 25.0), (9.0, 81.0)]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12);
        let f = slope_fit(&[(1.0, 3.0), (2.0, 1.5), (4.0, 0.75)]).unwrap();
        assert!((f.slope + 1.0).abs() < 1e-12);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn noisy_quarter_slope() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pts: Vec<(f64, f64)> = (0..12)
            .map(|i| {
                let x = 2f64.powf(1.0 + 0.5 * i as f64);
                (x, 1.7 * x.powf(0.25) * (1.0 + rng.gen_range(-0.02..0.02)))
            })
            .collect();
        let f = slope_fit(&pts).unwrap();
        assert!((f.slope - 0.25).abs() <= f.half_width);
        assert!(f.half_width > 0.0 && f.half_width < 0.05);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(slope_fit(&[(1.0, 1.0), (2.0, 2.0)]).is_err());
        assert!(slope_fit(&[(2.0, 1.0), (2.0, 2.0), (2.0, 3.0)]).is_err());
    }
}
