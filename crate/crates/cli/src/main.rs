//! `pwalk`: simulate, classify and verify walks on the Eisenstein lattice.
//!
//! Exit codes: 0 when every check passes, 1 on a verification or statistical
//! failure, 2 on a usage error.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pwalk_core::calculus::{ito_identity_check, tanaka_identity_check, tanaka_site_check, LatticeFunction};
use pwalk_core::distance::{norm, norm_bfs, verify_tables, P_POINTS};
use pwalk_core::harness::{
    exhaustive_theorem_check, monte_carlo_check, per_site_bijection_check, scaling_probe, OutputFormat, RunConfig,
};
use pwalk_core::martrep::{gram_check, representation_check, AdaptedFunctional, GRAM_CAP};
use pwalk_core::regions::{classify, in_closure, phi, psi, ClosureId};
use pwalk_core::walk::{enumerate_paths, local_time, simulate, WalkPath};
use pwalk_core::{Eisenstein, VerificationReport};

#[derive(Parser, Debug)]
#[command(name = "pwalk", version, about = "Walks on the Eisenstein lattice: local time, Ito/Tanaka checks, Monte Carlo")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Debug)]
struct Opts {
    /// Master seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Walk length.
    #[arg(long, global = true)]
    steps: Option<u64>,
    /// Number of Monte Carlo trials.
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Lattice point `a,b` meaning a + bζ.
    #[arg(long, global = true, value_parser = parse_point, allow_hyphen_values = true)]
    start: Option<Eisenstein>,
    /// Half-width of the box |a|, |b| <= radius.
    #[arg(long, global = true)]
    radius: Option<i64>,
    /// Horizon for exhaustive checks.
    #[arg(long = "t", global = true)]
    horizon: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Minimum p-value for chi-square and KS tests.
    #[arg(long, global = true, default_value_t = 1e-3)]
    p_threshold: f64,
    /// Relative tolerance on the Monte Carlo variance.
    #[arg(long, global = true, default_value_t = 0.05)]
    variance_tolerance: f64,
    /// Relative tolerance between cartesian component variances.
    #[arg(long, global = true, default_value_t = 0.10)]
    isotropy_tolerance: f64,
    /// Absolute tolerance on the cartesian component correlation.
    #[arg(long, global = true, default_value_t = 0.05)]
    correlation_tolerance: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simulate one walk and print its trace.
    Simulate,
    /// Print the region label and closure membership of --start.
    Classify,
    /// Print the graph distance of --start from P.
    Norm,
    /// Check g1, g2, g3 against the tabulated values on a box.
    Tables,
    /// Check the discrete Ito identity on all paths of length --t.
    VerifyIto,
    /// Check the Tanaka identity per site and on all paths of length --t.
    VerifyTanaka,
    /// Check orthonormality and the martingale representation up to --t.
    VerifyMartrep,
    /// Check that the radial process is a simple walk.
    VerifyTheorem,
    /// Monte Carlo law of the radial process against the trinomial law.
    Mc,
    /// Statistical probe of the diffusive scaling limit.
    ScalingProbe,
}

fn parse_point(s: &str) -> Result<Eisenstein, String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `a,b`, got `{s}`"))?;
    let a = a.trim().parse().map_err(|e| format!("bad a in `{s}`: {e}"))?;
    let b = b.trim().parse().map_err(|e| format!("bad b in `{s}`: {e}"))?;
    Ok(Eisenstein::new(a, b))
}

enum Failure {
    Usage(String),
    Verification,
    Io(io::Error),
}

impl From<pwalk_core::Error> for Failure {
    fn from(e: pwalk_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(io::Error::other(e))
    }
}

fn sink(out: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

#[derive(Serialize)]
struct TraceRow {
    t: usize,
    a: i64,
    b: i64,
    region: String,
    norm: u64,
    l1: u64,
    l3: u64,
    l5: u64,
    #[serde(rename = "L")]
    local_time: u64,
    #[serde(rename = "X")]
    radial: i64,
}

fn trace(path: &WalkPath) -> Vec<TraceRow> {
    path.positions()
        .iter()
        .zip(local_time(path))
        .enumerate()
        .map(|(t, (&z, l))| TraceRow {
            t,
            a: z.a,
            b: z.b,
            region: classify(z).to_string(),
            norm: norm(z),
            l1: l.l1,
            l3: l.l3,
            l5: l.l5,
            local_time: l.total(),
            radial: norm(z) as i64 - l.total() as i64,
        })
        .collect()
}

fn emit_report(report: &VerificationReport, opts: &Opts) -> Result<(), Failure> {
    let mut w = sink(&opts.out)?;
    match opts.format {
        Some(Format::Csv) => {
            let mut c = csv::Writer::from_writer(w);
            c.write_record(["name", "checked", "violation_count", "elapsed_ms", "pass"])?;
            c.write_record([
                report.name.clone(),
                report.checked.to_string(),
                report.violation_count.to_string(),
                report.elapsed_ms.to_string(),
                report.pass.to_string(),
            ])?;
            c.flush()?;
        }
        _ => writeln!(w, "{}", report.to_json())?,
    }
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn config(opts: &Opts, trials: u64, steps: u64) -> RunConfig {
    RunConfig {
        seed: opts.seed,
        trials: opts.trials.unwrap_or(trials),
        steps: opts.steps.unwrap_or(steps),
        start: opts.start.unwrap_or(Eisenstein::ZERO),
        radius: opts.radius.unwrap_or(60),
        output: opts.out.clone(),
        format: match opts.format {
            Some(Format::Csv) => OutputFormat::Csv,
            _ => OutputFormat::Json,
        },
        p_threshold: opts.p_threshold,
        variance_tolerance: opts.variance_tolerance,
        isotropy_tolerance: opts.isotropy_tolerance,
        correlation_tolerance: opts.correlation_tolerance,
        threads: None,
    }
}

fn starts(opts: &Opts) -> Vec<Eisenstein> {
    match opts.start {
        Some(s) => vec![s],
        None => P_POINTS.to_vec(),
    }
}

fn run(cmd: &Command, opts: &Opts) -> Result<(), Failure> {
    match cmd {
        Command::Simulate => {
            let start = opts.start.unwrap_or(Eisenstein::ZERO);
            let path = simulate(start, opts.steps.unwrap_or(100) as usize, opts.seed);
            let rows = trace(&path);
            let mut w = sink(&opts.out)?;
            match opts.format {
                Some(Format::Json) => writeln!(w, "{}", serde_json::to_string_pretty(&rows).expect("rows serialize"))?,
                _ => {
                    let mut c = csv::Writer::from_writer(w);
                    for r in &rows {
                        c.serialize(r)?;
                    }
                    c.flush()?;
                }
            }
            Ok(())
        }
        Command::Classify => {
            let z = opts.start.ok_or_else(|| Failure::Usage("classify needs --start a,b".into()))?;
            let label = classify(z);
            let closures: Vec<&str> = ClosureId::ALL.iter().filter(|&&c| in_closure(z, c)).map(|c| c.name()).collect();
            let mut w = sink(&opts.out)?;
            if let Some(Format::Json) = opts.format {
                #[derive(Serialize)]
                struct Out<'a> {
                    point: Eisenstein,
                    label: String,
                    closures: Vec<&'a str>,
                    phi: Eisenstein,
                    psi: Eisenstein,
                }
                let out = Out { point: z, label: label.to_string(), closures, phi: phi(z), psi: psi(z) };
                writeln!(w, "{}", serde_json::to_string_pretty(&out).expect("serializes"))?;
            } else {
                writeln!(w, "{label}")?;
                let list = if closures.is_empty() { "none".to_string() } else { closures.join(", ") };
                writeln!(w, "closures: {list}")?;
            }
            Ok(())
        }
        Command::Norm => {
            let z = opts.start.ok_or_else(|| Failure::Usage("norm needs --start a,b".into()))?;
            let n = norm(z);
            let bound = (z.a.unsigned_abs() + z.b.unsigned_abs() + 2).min(u32::MAX as u64) as u32;
            let bfs = norm_bfs(z, bound)?;
            let mut w = sink(&opts.out)?;
            if let Some(Format::Json) = opts.format {
                writeln!(w, "{}", serde_json::json!({ "point": z, "norm": n, "norm_bfs": bfs }))?;
            } else {
                writeln!(w, "{n}")?;
            }
            if n == bfs {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::Tables => emit_report(&verify_tables(opts.radius.unwrap_or(40))?, opts),
        Command::VerifyIto => {
            let horizon = opts.horizon.unwrap_or(6);
            let start = opts.start.unwrap_or(Eisenstein::ZERO);
            let paths: Vec<WalkPath> = enumerate_paths(start, horizon)?.collect();
            let radius = start.a.abs().max(start.b.abs()) + horizon as i64 + 1;
            let mut fs = vec![
                LatticeFunction::norm(radius),
                LatticeFunction::a_coordinate(radius),
                LatticeFunction::b_coordinate(radius),
            ];
            for k in 0..5u64 {
                let seed = opts.seed.wrapping_add(k);
                fs.push(LatticeFunction::random(format!("random[{seed}]"), radius, seed, false));
            }
            let reports = fs.iter().map(|f| ito_identity_check(f, &paths)).collect::<Result<Vec<_>, _>>()?;
            emit_report(&VerificationReport::combine("verify-ito", &reports), opts)
        }
        Command::VerifyTanaka => {
            let horizon = opts.horizon.unwrap_or(9);
            let mut reports = vec![tanaka_site_check(opts.radius.unwrap_or(60))];
            for s in starts(opts) {
                let paths: Vec<WalkPath> = enumerate_paths(s, horizon)?.collect();
                let mut r = tanaka_identity_check(&paths);
                r.name = format!("tanaka-paths[start={s}]");
                reports.push(r);
            }
            emit_report(&VerificationReport::combine("verify-tanaka", &reports), opts)
        }
        Command::VerifyMartrep => {
            let horizon = opts.horizon.unwrap_or(6);
            let start = opts.start.unwrap_or(Eisenstein::ZERO);
            let mut reports = Vec::new();
            for t in 1..=horizon.min(GRAM_CAP) {
                reports.push(gram_check(t)?);
            }
            let functionals = [
                (AdaptedFunctional::position(start, horizon)?, true),
                (AdaptedFunctional::conj_position(start, horizon)?, true),
                (AdaptedFunctional::radial(start, horizon)?, true),
                (AdaptedFunctional::random(opts.seed, horizon)?, false),
            ];
            for (x, martingale) in &functionals {
                reports.push(representation_check(x, horizon, *martingale)?);
            }
            let mut combined = VerificationReport::combine("verify-martrep", &reports);
            let gram: u64 = reports.iter().filter(|r| r.name.starts_with("gram")).map(|r| r.violation_count).sum();
            combined.metrics.insert("gram_deviations".into(), gram as f64);
            combined.metrics.insert("reconstruction_violations".into(), (combined.violation_count - gram) as f64);
            emit_report(&combined, opts)
        }
        Command::VerifyTheorem => {
            let horizon = opts.horizon.unwrap_or(9);
            let mut reports = vec![per_site_bijection_check(opts.radius.unwrap_or(60))?];
            for s in starts(opts) {
                reports.push(exhaustive_theorem_check(s, horizon)?);
            }
            emit_report(&VerificationReport::combine("verify-theorem", &reports), opts)
        }
        Command::Mc => emit_report(&monte_carlo_check(&config(opts, 100_000, 100))?, opts),
        Command::ScalingProbe => emit_report(&scaling_probe(&config(opts, 10_000, 10_000))?, opts),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command, &cli.opts) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
