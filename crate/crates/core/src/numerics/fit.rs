//! Least-squares fits and frequency confidence intervals for the
//! scaling-law and ensemble diagnostics.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n_points: usize,
}

/// Ordinary least squares y = slope·x + intercept.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<FitResult> {
    let n = xs.len();
    if n < 2 || n != ys.len() {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some(FitResult {
        slope,
        intercept,
        r_squared,
        n_points: n,
    })
}

/// Log-log regression: fits ln y = slope·ln x + b over pairs with x,y > 0.
/// Pairs with non-positive values are dropped (reported through `n_points`).
pub fn loglog_fit(xs: &[f64], ys: &[f64]) -> Option<FitResult> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(&x, &y)| x > 0.0 && y > 0.0)
        .map(|(&x, &y)| (x.ln(), y.ln()))
        .collect();
    let lx: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ly: Vec<f64> = pts.iter().map(|p| p.1).collect();
    linear_fit(&lx, &ly)
}

/// Wilson score interval for a binomial frequency at z = 1.96 (95%).
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.96_f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = (z / denom) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Exponential-decay fit |f| ≈ A·e^{−rate·d}: returns (rate, ln A, R²).
/// Only strictly positive samples enter; needs at least 3 of them.
pub fn decay_fit(dists: &[f64], vals: &[f64]) -> Option<FitResult> {
    let pts: Vec<(f64, f64)> = dists
        .iter()
        .zip(vals)
        .filter(|(_, &v)| v > 0.0)
        .map(|(&d, &v)| (d, v.ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    linear_fit(&xs, &ys).map(|f| FitResult {
        slope: -f.slope, // decay rate is the negated log-slope
        intercept: f.intercept,
        r_squared: f.r_squared,
        n_points: f.n_points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys = [3.0, 5.0, 7.0, 9.0];
        let f = linear_fit(&xs, &ys).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12);
        assert!((f.intercept - 1.0).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn loglog_power_law() {
        let xs: Vec<f64> = (1..10).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 4.0 * x.powf(1.7)).collect();
        let f = loglog_fit(&xs, &ys).unwrap();
        assert!((f.slope - 1.7).abs() < 1e-10);
    }

    #[test]
    fn decay_rate_recovered() {
        let ds: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let vs: Vec<f64> = ds.iter().map(|d| 2.0 * (-0.35 * d).exp()).collect();
        let f = decay_fit(&ds, &vs).unwrap();
        assert!((f.slope - 0.35).abs() < 1e-10);
    }

    #[test]
    fn wilson_basic() {
        let (lo, hi) = wilson_interval(90, 100);
        assert!(lo > 0.8 && hi < 0.96 && lo < 0.9 && hi > 0.9);
        let (lo0, hi0) = wilson_interval(0, 50);
        assert_eq!(lo0, 0.0);
        assert!(hi0 > 0.0 && hi0 < 0.12);
    }
}
