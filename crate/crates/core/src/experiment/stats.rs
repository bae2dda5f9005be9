//! Interval estimates and distances for multinomial frequencies.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `k` successes out of `n`.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let phat = k as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (phat + z2 / (2.0 * nf)) / denom;
    let half = z * (phat * (1.0 - phat) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Standard error of a frequency estimate when the true probability is `p`.
pub fn binomial_se(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).max(0.0).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareSummary {
    pub statistic: f64,
    pub dof: u32,
    pub p_value: f64,
}

/// Pearson statistic of observed counts against probabilities. Cells whose
/// expected count is below 5 are pooled, and the pool is kept if it reaches 5.
pub fn chi_square(observed: &[u64], probs: &[f64]) -> Option<ChiSquareSummary> {
    let n: u64 = observed.iter().sum();
    let nf = n as f64;
    let mut stat = 0.0;
    let mut cells = 0u32;
    let (mut pool_o, mut pool_e) = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(probs) {
        let e = p * nf;
        if e < 5.0 {
            pool_o += o as f64;
            pool_e += e;
        } else {
            stat += (o as f64 - e).powi(2) / e;
            cells += 1;
        }
    }
    if pool_e >= 5.0 {
        stat += (pool_o - pool_e).powi(2) / pool_e;
        cells += 1;
    }
    if cells < 2 {
        return None;
    }
    let dof = cells - 1;
    let dist = ChiSquared::new(dof as f64).ok()?;
    Some(ChiSquareSummary { statistic: stat, dof, p_value: 1.0 - dist.cdf(stat) })
}

/// Total variation `½ Σ |p̂_i − π_i|` with its delta-method standard error
/// `½ sqrt((1 − (Σ s_i p̂_i)²) / N)`, `s_i` the sign of `p̂_i − π_i`. The
/// inputs must each sum to 1.
pub fn total_variation(empirical: &[f64], theory: &[f64], samples: u64) -> (f64, f64) {
    let mut tv = 0.0;
    let mut signed = 0.0;
    for (&e, &t) in empirical.iter().zip(theory) {
        tv += (e - t).abs();
        signed += if e >= t { e } else { -e };
    }
    let se = 0.5 * ((1.0 - signed * signed).max(0.0) / samples as f64).sqrt();
    (0.5 * tv, se)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_known_value() {
        // 50/100 at z = 1.96: (0.4038, 0.5962)
        let (lo, hi) = wilson_interval(50, 100, Z95);
        assert!((lo - 0.4038).abs() < 1e-4 && (hi - 0.5962).abs() < 1e-4);
        let (lo, hi) = wilson_interval(0, 10, Z95);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.2 && hi < 0.35);
    }

    #[test]
    fn chi_square_fit() {
        let s = chi_square(&[50, 50], &[0.5, 0.5]).unwrap();
        assert_eq!((s.statistic, s.dof), (0.0, 1));
        assert!((s.p_value - 1.0).abs() < 1e-12);
        let s = chi_square(&[90, 10], &[0.5, 0.5]).unwrap();
        assert!(s.p_value < 1e-10);
    }

    #[test]
    fn tv_values() {
        let (tv, se) = total_variation(&[0.6, 0.4], &[0.5, 0.5], 100);
        assert!((tv - 0.1).abs() < 1e-12);
        // s = (+1, −1): ½ sqrt((1 − 0.2²)/100)
        assert!((se - 0.5 * (0.96f64 / 100.0).sqrt()).abs() < 1e-12);
        let (tv, _) = total_variation(&[1.0, 0.0], &[0.0, 1.0], 100);
        assert_eq!(tv, 1.0);
    }
}
