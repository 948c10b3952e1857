//! Goodness-of-fit helpers for the Monte Carlo checks.

use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

/// Upper tail of the chi-square distribution with `df` degrees of freedom.
pub fn chi_square_sf(stat: f64, df: usize) -> f64 {
    ChiSquared::new(df as f64).expect("df > 0").sf(stat)
}

/// Pearson's statistic of `observed` counts against probabilities `expected_p`,
/// merging adjacent cells until every expected count is at least `min_expected`.
/// Returns `(statistic, degrees of freedom, p-value)`.
pub fn chi_square_test(observed: &[u64], expected_p: &[f64], min_expected: f64) -> (f64, usize, f64) {
    assert_eq!(observed.len(), expected_p.len());
    let n: u64 = observed.iter().sum();
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut obs, mut exp) = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(expected_p) {
        obs += o as f64;
        exp += p * n as f64;
        if exp >= min_expected {
            cells.push((obs, exp));
            obs = 0.0;
            exp = 0.0;
        }
    }
    if exp > 0.0 || obs > 0.0 {
        match cells.last_mut() {
            Some(last) => {
                last.0 += obs;
                last.1 += exp;
            }
            None => cells.push((obs, exp)),
        }
    }
    let stat: f64 = cells.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let df = cells.len().saturating_sub(1).max(1);
    (stat, df, chi_square_sf(stat, df))
}

/// `P(K > λ)` for the Kolmogorov distribution.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        // small-λ form converges fast where the alternating series does not
        let c = -std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda);
        let s: f64 = (1..=20).map(|k| ((2 * k - 1) as f64).powi(2) * c).map(f64::exp).sum();
        (1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * s).clamp(0.0, 1.0)
    } else {
        let mut s = 0.0;
        for k in 1..=100 {
            let term = (-2.0 * (k * k) as f64 * lambda * lambda).exp();
            s += if k % 2 == 1 { term } else { -term };
            if term < 1e-16 {
                break;
            }
        }
        (2.0 * s).clamp(0.0, 1.0)
    }
}

/// One-sample Kolmogorov–Smirnov test of `samples` against `N(mean, variance)`.
/// Ties are handled by evaluating the empirical CDF on both sides of each
/// distinct value. Returns `(D, p-value)`.
pub fn ks_normal(samples: &[f64], mean: f64, variance: f64) -> (f64, f64) {
    let normal = Normal::new(mean, variance.sqrt()).expect("positive variance");
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d = 0.0f64;
    let mut i = 0;
    while i < xs.len() {
        let v = xs[i];
        let mut j = i;
        while j < xs.len() && xs[j] == v {
            j += 1;
        }
        let f = normal.cdf(v);
        d = d.max((f - i as f64 / n).abs()).max((j as f64 / n - f).abs());
        i = j;
    }
    let sn = n.sqrt();
    (d, kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d))
}
