use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dmkdv::harness::{self, format_float, OutputFormat, RunConfig};
use dmkdv::scattering::{scattering_coefficients, UnitCirclePoint};
use dmkdv::Error;

/// Discrete defocusing mKdV lattice: simulation, scattering data and
/// long-time asymptotics.
#[derive(Parser)]
#[command(name = "dmkdv", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override a configuration field, e.g. `--set profile.amplitude=0.2`.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the lattice to each configured time and print the profiles.
    Simulate,
    /// Scattering coefficients of the initial profile on the circle grid.
    Scatter,
    /// Leading-order asymptotic values on every configured ray and time.
    Asymptote,
    /// Direct simulation against the asymptotic formula.
    Compare {
        /// Write one gnuplot data file per ray into this directory.
        #[arg(long)]
        plot_dir: Option<PathBuf>,
    },
    /// Run the invariant suite and the sign-convention audit.
    Selftest,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) => 3,
        Error::Config(_) | Error::InvalidProfile(_) => 2,
        _ => 1,
    }
}

fn write_output(text: &str, path: Option<&Path>) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn simulate(cfg: &RunConfig) -> Result<String, Error> {
    let initial = cfg.profile.state()?;
    let mut states = Vec::new();
    for &t in &cfg.times {
        states.push(harness::simulate_to(&initial, t, cfg.dt, cfg.window_margin, cfg.tolerances.spill)?.trimmed());
    }
    Ok(match cfg.output.format {
        OutputFormat::Json => to_json(&states),
        OutputFormat::Csv => {
            let mut out = String::from("t,n,q\n");
            for s in &states {
                for (n, q) in s.sites() {
                    let _ = writeln!(out, "{},{},{}", format_float(s.t()), n, format_float(q));
                }
            }
            out
        }
    })
}

fn scatter(cfg: &RunConfig) -> Result<String, Error> {
    let q = cfg.profile.state()?;
    let size = cfg.grid_size;
    let rows = (0..size)
        .map(|k| {
            let theta = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * k as f64 / size as f64;
            scattering_coefficients(&q, UnitCirclePoint::from_angle(theta))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(match cfg.output.format {
        OutputFormat::Json => to_json(&rows),
        OutputFormat::Csv => {
            let mut out = String::from("theta,a_re,a_im,b_re,b_im,r_re,r_im,abs_r\n");
            for s in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    format_float(s.at.theta()),
                    format_float(s.a.re),
                    format_float(s.a.im),
                    format_float(s.b.re),
                    format_float(s.b.im),
                    format_float(s.r.re),
                    format_float(s.r.im),
                    format_float(s.r.norm()),
                );
            }
            out
        }
    })
}

fn asymptote(cfg: &RunConfig) -> Result<String, Error> {
    use rayon::prelude::*;
    let solver = cfg.solver()?;
    let pairs: Vec<(f64, f64)> = cfg
        .rays
        .iter()
        .flat_map(|&v| cfg.times.iter().map(move |&t| (v, t)))
        .collect();
    let results = pairs
        .par_iter()
        .map(|&(v, t)| solver.evaluate((v * t).round() as i64, t))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(match cfg.output.format {
        OutputFormat::Json => to_json(&results),
        OutputFormat::Csv => {
            let mut out = String::from("n,t,v,q_asym,imag_residual,envelope\n");
            for (r, (v, _)) in results.iter().zip(&pairs) {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.n,
                    format_float(r.t),
                    format_float(*v),
                    format_float(r.q_asym),
                    format_float(r.imag_residual),
                    format_float(r.envelope),
                );
            }
            out
        }
    })
}

fn compare(cfg: &RunConfig, plot_dir: Option<&Path>) -> Result<bool, Error> {
    let rows = harness::run_compare(cfg)?;
    let records: Vec<_> = rows.iter().map(|r| r.record).collect();
    let text = harness::render(&records, cfg.output.format)?;
    write_output(&text, cfg.output.path.as_deref())?;
    if let Some(dir) = plot_dir {
        std::fs::create_dir_all(dir)?;
        for v in harness::distinct_rays(&records) {
            let name = format!("ray_{}.dat", format_float(v));
            std::fs::write(dir.join(name), harness::gnuplot_ray(&records, v))?;
        }
    }
    let mut all_ok = true;
    for r in &rows {
        eprintln!(
            "v={} t={} n={} wall={:.3}s {}",
            format_float(r.record.v),
            format_float(r.record.t),
            r.record.n,
            r.wall_time,
            r.error.as_deref().unwrap_or("ok")
        );
        all_ok &= r.ok();
    }
    Ok(all_ok)
}

fn run(cli: Cli) -> Result<bool, Error> {
    let cfg = RunConfig::from_path(cli.common.config.as_deref(), &cli.common.overrides)?;
    if let Some(n) = cli.common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    let out = cfg.output.path.as_deref();
    match cli.command {
        Command::Simulate => write_output(&simulate(&cfg)?, out).map(|_| true),
        Command::Scatter => write_output(&scatter(&cfg)?, out).map(|_| true),
        Command::Asymptote => write_output(&asymptote(&cfg)?, out).map(|_| true),
        Command::Compare { plot_dir } => compare(&cfg, plot_dir.as_deref()),
        Command::Selftest => {
            let report = harness::selftest(&cfg);
            write_output(&to_json(&report), out)?;
            Ok(report.pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
