//! Theorem-level checks: the per-site bijection condition, exhaustive
//! path enumeration, and Monte Carlo probes of the radial process.
//!
//! Trials and sites are spread over a rayon pool. Every aggregate is an
//! integer sum, count or histogram, so reports do not depend on the worker
//! count. `PWALK_THREADS` caps the pool (`0` or unset means automatic).

use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distance::norm;
use crate::eisenstein::{Eisenstein, Step};
use crate::error::{Error, Result};
use crate::report::{ReportBuilder, VerificationReport};
use crate::stats::{chi_square_test, ks_normal};
use crate::walk::{exit_from, radial_increment, simple_walk_pmf, StepStream};

pub const THEOREM_CAP: usize = 12;
pub const MIN_MC_TRIALS: u64 = 1_000;
pub const MIN_SCALING_STEPS: u64 = 10_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    #[default]
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub trials: u64,
    pub steps: u64,
    pub start: Eisenstein,
    pub radius: i64,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
    /// Minimum p-value for chi-square and KS tests.
    pub p_threshold: f64,
    /// Allowed relative error of the sample variance.
    pub variance_tolerance: f64,
    /// Allowed relative gap between the two cartesian component variances.
    pub isotropy_tolerance: f64,
    /// Allowed absolute correlation between cartesian components.
    pub correlation_tolerance: f64,
    /// Worker count; `None` reads `PWALK_THREADS`.
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            trials: 100_000,
            steps: 100,
            start: Eisenstein::ZERO,
            radius: 60,
            output: None,
            format: OutputFormat::Json,
            p_threshold: 1e-3,
            variance_tolerance: 0.05,
            isotropy_tolerance: 0.10,
            correlation_tolerance: 0.05,
            threads: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.trials == 0 || self.steps == 0 || self.radius <= 0 {
            return bad("trials, steps and radius must be positive");
        }
        if !(0.0..1.0).contains(&self.p_threshold) {
            return bad("p threshold must lie in [0, 1)");
        }
        if self.variance_tolerance <= 0.0 || self.isotropy_tolerance <= 0.0 || self.correlation_tolerance <= 0.0 {
            return bad("tolerances must be positive");
        }
        Ok(())
    }
}

/// Worker count from `PWALK_THREADS`; zero means rayon's default.
pub fn threads_from_env() -> usize {
    std::env::var("PWALK_THREADS").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(0)
}

fn with_pool<R: Send>(threads: Option<usize>, job: impl FnOnce() -> R + Send) -> R {
    let n = threads.unwrap_or_else(threads_from_env);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().expect("thread pool");
    pool.install(job)
}

const SUFFICIENT: &str = "sufficient condition: per-site bijection of radial increments implies the simple-walk law";

/// The three radial increments available from `z`, indexed by step.
pub fn site_increments(z: Eisenstein) -> [i64; 3] {
    Step::ALL.map(|s| {
        let next = z + s.value();
        norm(next) as i64 - norm(z) as i64 - exit_from(z, next).is_some() as i64
    })
}

/// At every site of the box `|a|, |b| ≤ radius`, the three steps must induce
/// the three radial increments `-1, 0, +1`.
pub fn per_site_bijection_check(radius: i64) -> Result<VerificationReport> {
    per_site_bijection_check_with(radius, None)
}

pub fn per_site_bijection_check_with(radius: i64, threads: Option<usize>) -> Result<VerificationReport> {
    if radius < 2 {
        return Err(Error::InvalidConfig(format!("per-site check needs radius >= 2, got {radius}")));
    }
    let side = 2 * radius + 1;
    let mut report = with_pool(threads, || {
        (-radius..=radius)
            .into_par_iter()
            .map(|a| {
                let mut part = ReportBuilder::new("theorem-per-site");
                for b in -radius..=radius {
                    let z = Eisenstein::new(a, b);
                    let inc = site_increments(z);
                    let mut sorted = inc;
                    sorted.sort_unstable();
                    part.checked(1);
                    if sorted != [-1, 0, 1] {
                        part.violation(((a + radius) * side + b + radius) as u64, z, "{-1,0,+1}", format!("{inc:?}"));
                    }
                }
                part
            })
            .reduce(|| ReportBuilder::new("theorem-per-site"), |mut x, y| {
                x.merge(y);
                x
            })
    });
    report.note(SUFFICIENT);
    Ok(report.finish())
}

struct Enumeration {
    seen: Vec<bool>,
    report: ReportBuilder,
    horizon: usize,
}

impl Enumeration {
    fn descend(&mut self, z: Eisenstein, depth: usize, path_code: usize, inc_code: usize) {
        if depth == self.horizon {
            self.report.checked(1);
            if self.seen[inc_code] {
                self.report.violation(path_code as u64, format!("path #{path_code}"), "unseen increment sequence", format!("duplicate #{inc_code}"));
            }
            self.seen[inc_code] = true;
            return;
        }
        for s in Step::ALL {
            let d = radial_increment(z, s);
            let path_code = 3 * path_code + s.index();
            if !(-1..=1).contains(&d) {
                self.report.violation(path_code as u64, format!("prefix #{path_code} at t={depth}, Z_t={z}"), "{-1,0,+1}", d);
                continue;
            }
            self.descend(z + s.value(), depth + 1, path_code, 3 * inc_code + (d + 1) as usize);
        }
    }
}

/// Enumerates all `3^T` paths from `start` and checks that the map from step
/// sequences to radial increment sequences is a bijection onto `{-1, 0, +1}^T`.
pub fn exhaustive_theorem_check(start: Eisenstein, horizon: usize) -> Result<VerificationReport> {
    if horizon > THEOREM_CAP {
        return Err(Error::EnumerationCap { requested: horizon, cap: THEOREM_CAP });
    }
    let n = 3usize.pow(horizon as u32);
    let mut e = Enumeration {
        seen: vec![false; n],
        report: ReportBuilder::new(format!("theorem-exhaustive[start={start},T={horizon}]")),
        horizon,
    };
    e.descend(start, 0, 0, 0);
    let missing = e.seen.iter().filter(|&&x| !x).count();
    if missing > 0 {
        e.report.violation(u64::MAX, "increment sequences", n, n - missing);
    }
    e.report.note("exact equality of laws: every increment sequence is hit by exactly one step sequence");
    Ok(e.report.finish())
}

#[derive(Clone, Debug)]
struct Tally {
    histogram: Vec<u64>,
    sum: i128,
    sum_sq: i128,
}

impl Tally {
    fn new(steps: usize) -> Self {
        Tally { histogram: vec![0; 2 * steps + 1], sum: 0, sum_sq: 0 }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in self.histogram.iter_mut().zip(other.histogram) {
            *a += b;
        }
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self
    }
}

/// `X_T - X_0` for one trial of `steps` steps from `start`.
pub fn radial_displacement(seed: u64, trial: u64, start: Eisenstein, steps: u64) -> (i64, Eisenstein) {
    let mut z = start;
    let mut x = 0i64;
    for s in StepStream::new(seed, trial).take(steps as usize) {
        x += radial_increment(z, s);
        z = z + s.value();
    }
    (x, z)
}

/// Law of `X_T - X_0` over `cfg.trials` independent walks against the exact
/// trinomial law: mean, variance and chi-square.
pub fn monte_carlo_check(cfg: &RunConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    if cfg.trials < MIN_MC_TRIALS {
        return Err(Error::InvalidConfig(format!("Monte Carlo needs at least {MIN_MC_TRIALS} trials")));
    }
    let steps = cfg.steps as usize;
    let mut report = ReportBuilder::new(format!("monte-carlo[trials={},T={}]", cfg.trials, cfg.steps));
    let tally = with_pool(cfg.threads, || {
        (0..cfg.trials)
            .into_par_iter()
            .fold(
                || Tally::new(steps),
                |mut t, trial| {
                    let (x, _) = radial_displacement(cfg.seed, trial, cfg.start, cfg.steps);
                    t.histogram[(x + steps as i64) as usize] += 1;
                    t.sum += x as i128;
                    t.sum_sq += (x as i128) * (x as i128);
                    t
                },
            )
            .reduce(|| Tally::new(steps), Tally::merge)
    });
    report.checked(cfg.trials);

    let n = cfg.trials as f64;
    let mean = tally.sum as f64 / n;
    let variance = (tally.sum_sq as f64 - tally.sum as f64 * mean) / (n - 1.0);
    let target_var = 2.0 * cfg.steps as f64 / 3.0;
    let mean_band = 3.0 * (target_var / n).sqrt();
    let (chi2, df, p) = chi_square_test(&tally.histogram, &simple_walk_pmf(steps), 5.0);

    report.metric("mean", mean);
    report.metric("mean_band", mean_band);
    report.metric("variance", variance);
    report.metric("variance_target", target_var);
    report.metric("chi_square", chi2);
    report.metric("chi_square_df", df as f64);
    report.metric("chi_square_p", p);

    if mean.abs() > mean_band {
        report.violation(0, "mean of X_T - X_0", format!("|mean| <= {mean_band:.4}"), format!("{mean:.4}"));
    }
    if (variance - target_var).abs() > cfg.variance_tolerance * target_var {
        report.violation(
            1,
            "variance of X_T - X_0",
            format!("{target_var:.4} ± {:.1}%", 100.0 * cfg.variance_tolerance),
            format!("{variance:.4}"),
        );
    }
    if p <= cfg.p_threshold {
        report.violation(2, "chi-square against trinomial law", format!("p > {}", cfg.p_threshold), format!("p = {p:.3e}"));
    }
    Ok(report.finish())
}

/// Statistical probe of the diffusive limit: `X_n / √n` against
/// `N(0, 2/3)` by Kolmogorov–Smirnov, and isotropy of the cartesian
/// components of `Z_n / √n`.
pub fn scaling_probe(cfg: &RunConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    if cfg.steps < MIN_SCALING_STEPS {
        return Err(Error::InvalidConfig(format!("scaling probe needs at least {MIN_SCALING_STEPS} steps")));
    }
    let mut report = ReportBuilder::new(format!("scaling-probe[trials={},n={}]", cfg.trials, cfg.steps));
    let finals: Vec<(i64, Eisenstein)> = with_pool(cfg.threads, || {
        (0..cfg.trials)
            .into_par_iter()
            .map(|trial| radial_displacement(cfg.seed, trial, cfg.start, cfg.steps))
            .collect()
    });
    report.checked(cfg.trials);

    let root_n = (cfg.steps as f64).sqrt();
    let scaled: Vec<f64> = finals.iter().map(|&(x, _)| x as f64 / root_n).collect();
    let (d, p) = ks_normal(&scaled, 0.0, 2.0 / 3.0);

    // cartesian displacement (a - b/2, b√3/2) from exact integer moments
    let (mut sa, mut sb, mut saa, mut sbb, mut sab) = (0i128, 0i128, 0i128, 0i128, 0i128);
    for &(_, z) in &finals {
        let (a, b) = ((z.a - cfg.start.a) as i128, (z.b - cfg.start.b) as i128);
        sa += a;
        sb += b;
        saa += a * a;
        sbb += b * b;
        sab += a * b;
    }
    let n = cfg.trials as f64;
    let cov = |sxy: i128, sx: i128, sy: i128| (sxy as f64 - sx as f64 * sy as f64 / n) / (n - 1.0);
    let (var_a, var_b, cov_ab) = (cov(saa, sa, sa), cov(sbb, sb, sb), cov(sab, sa, sb));
    let var_x = var_a - cov_ab + var_b / 4.0;
    let var_y = 0.75 * var_b;
    let cov_xy = 3f64.sqrt() / 2.0 * (cov_ab - var_b / 2.0);
    let scale = cfg.steps as f64;
    let (var_x, var_y, cov_xy) = (var_x / scale, var_y / scale, cov_xy / scale);
    let corr = cov_xy / (var_x * var_y).sqrt();
    let isotropy_gap = (var_x / var_y - 1.0).abs();

    report.metric("ks_statistic", d);
    report.metric("ks_p", p);
    report.metric("radial_variance", scaled.iter().map(|x| x * x).sum::<f64>() / n);
    report.metric("component_variance_x", var_x);
    report.metric("component_variance_y", var_y);
    report.metric("component_correlation", corr);

    if p <= cfg.p_threshold {
        report.violation(0, "KS of X_n/sqrt(n) against N(0, 2/3)", format!("p > {}", cfg.p_threshold), format!("p = {p:.3e}"));
    }
    if isotropy_gap > cfg.isotropy_tolerance {
        report.violation(
            1,
            "component variances of Z_n/sqrt(n)",
            format!("equal within {:.0}%", 100.0 * cfg.isotropy_tolerance),
            format!("{var_x:.4} vs {var_y:.4}"),
        );
    }
    if corr.abs() > cfg.correlation_tolerance {
        report.violation(2, "component correlation", format!("|r| <= {}", cfg.correlation_tolerance), format!("{corr:.4}"));
    }
    report.note("statistical probe only; the continuous-time statement is not constructed");
    Ok(report.finish())
}

/// Runs the per-site check on a box and the exhaustive check from `start`,
/// and fails if the first passes while the second does not for a start whose
/// paths stay inside the box.
pub fn implication_check(radius: i64, start: Eisenstein, horizon: usize) -> Result<VerificationReport> {
    let inside = start.a.abs() + horizon as i64 <= radius && start.b.abs() + horizon as i64 <= radius;
    if !inside {
        return Err(Error::InvalidConfig(format!("paths of length {horizon} from {start} leave the box of radius {radius}")));
    }
    let sites = per_site_bijection_check(radius)?;
    let exhaustive = exhaustive_theorem_check(start, horizon)?;
    let mut report = ReportBuilder::new("theorem-implication");
    report.checked(1);
    if sites.pass && !exhaustive.pass {
        report.violation(0, format!("start={start}, T={horizon}"), "exhaustive pass", "exhaustive fail");
    }
    report.metric("per_site_pass", sites.pass as u8 as f64);
    report.metric("exhaustive_pass", exhaustive.pass as u8 as f64);
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(a: i64, b: i64) -> Eisenstein {
        Eisenstein::new(a, b)
    }

    #[test]
    fn site_examples() {
        assert_eq!(site_increments(e(0, 0)), [-1, 0, 1]);
        assert_eq!(site_increments(e(2, 0)), [1, -1, 0]);
    }

    #[test]
    fn per_site_small() {
        let r = per_site_bijection_check(10).unwrap();
        assert!(r.pass);
        assert_eq!(r.checked, 21 * 21);
        assert!(r.note.unwrap().contains("sufficient condition"));
        assert!(per_site_bijection_check(1).is_err());
    }

    #[test]
    fn exhaustive_small() {
        for start in [e(0, 0), e(1, 1), e(5, -3)] {
            let r = exhaustive_theorem_check(start, 6).unwrap();
            assert!(r.pass, "{start}: {:?}", r.violations);
            assert_eq!(r.checked, 729);
        }
        assert!(exhaustive_theorem_check(e(0, 0), 13).is_err());
    }

    #[test]
    fn monte_carlo_small_and_partition_independent() {
        let cfg = RunConfig { trials: 2_000, steps: 1, seed: 3, ..RunConfig::default() };
        let one = monte_carlo_check(&RunConfig { threads: Some(1), ..cfg.clone() }).unwrap();
        let four = monte_carlo_check(&RunConfig { threads: Some(4), ..cfg.clone() }).unwrap();
        assert!(one.pass, "{:?}", one.violations);
        assert_eq!(one.metrics, four.metrics);
        let few = RunConfig { trials: 999, ..cfg };
        assert!(monte_carlo_check(&few).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(RunConfig::default().validate().is_ok());
        assert!(RunConfig { steps: 0, ..RunConfig::default() }.validate().is_err());
        assert!(RunConfig { p_threshold: 1.5, ..RunConfig::default() }.validate().is_err());
        assert!(scaling_probe(&RunConfig { steps: 100, trials: 10, ..RunConfig::default() }).is_err());
    }

    #[test]
    fn implication_holds_in_box() {
        let r = implication_check(12, e(1, 0), 8).unwrap();
        assert!(r.pass);
        assert!(implication_check(5, e(1, 0), 8).is_err());
    }
}
