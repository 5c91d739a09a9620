use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use holosim_cli::config::{load_config, Scenario};
use holosim_cli::expr::parse_scalar;
use holosim_cli::run::{create_dir, simulate, summary_line, write_file, write_outputs};
use holosim_cli::study;
use holosim_cli::CliError;
use rayon::prelude::*;

/// Pulse-level simulator for holonomic gates on NV-center spins.
#[derive(Parser)]
#[command(name = "holosim", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Integration step in µs, overriding every scenario.
    #[arg(long, global = true, value_parser = parse_positive)]
    dt: Option<f64>,
    /// Suppress per-scenario summary lines.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate every scenario and write trace and summary files.
    Run { configs: Vec<PathBuf> },
    /// Re-run scenarios over a grid of one parameter and write sweep.csv.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        param: String,
        /// Comma-separated values; expressions such as `pi/4` are allowed.
        #[arg(long, value_delimiter = ',', value_parser = parse_value, conflicts_with = "linspace")]
        grid: Vec<f64>,
        /// `LO HI N`: N evenly spaced values.
        #[arg(long, num_args = 3, value_parser = parse_value)]
        linspace: Vec<f64>,
    },
    /// Closed-system holonomy checks only.
    Verify {
        configs: Vec<PathBuf>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Select NV collapse operators and fit two-qubit couplings against
    /// the `reference_fidelity` entries of a config.
    Calibrate {
        config: PathBuf,
        /// Allowed shortfall below each reference fidelity.
        #[arg(long, default_value_t = 0.01)]
        band: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda_lo: f64,
        #[arg(long, default_value_t = 1e5)]
        lambda_hi: f64,
    },
}

fn parse_value(s: &str) -> Result<f64, String> {
    parse_scalar(s)
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v = parse_scalar(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be > 0, got {v}"))
    }
}

fn load_all(paths: &[PathBuf]) -> Result<Vec<Scenario>, CliError> {
    let mut all: Vec<Scenario> = Vec::new();
    for p in paths {
        for s in load_config(p)? {
            if all.iter().any(|o| o.name == s.name) {
                return Err(CliError::Usage(format!(
                    "scenario name `{}` appears in more than one file",
                    s.name
                )));
            }
            all.push(s);
        }
    }
    Ok(all)
}

fn report(e: &CliError) -> u8 {
    eprintln!("error: {e}");
    e.exit_code()
}

fn run(g: &Global, configs: &[PathBuf]) -> Result<u8, CliError> {
    let scenarios = load_all(configs)?;
    create_dir(&g.out)?;
    let results: Vec<_> = scenarios
        .par_iter()
        .map(|s| simulate(s, g.dt).and_then(|o| write_outputs(&o, &g.out).map(|_| o)))
        .collect();
    let mut code = 0;
    for r in results {
        match r {
            Ok(o) if !g.quiet => println!("{}", summary_line(&o)),
            Ok(_) => {}
            Err(e) => code = code.max(report(&e)),
        }
    }
    Ok(code)
}

fn sweep(
    g: &Global,
    config: &Path,
    param: &str,
    grid: &[f64],
    linspace: &[f64],
) -> Result<u8, CliError> {
    let values = if linspace.is_empty() {
        grid.to_vec()
    } else {
        let (lo, hi, n) = (linspace[0], linspace[1], linspace[2]);
        if n < 1.0 || n.fract() != 0.0 {
            return Err(CliError::Usage(format!(
                "linspace count must be a positive integer, got {n}"
            )));
        }
        let n = n as usize;
        (0..n)
            .map(|i| {
                if n == 1 {
                    lo
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    };
    let scenarios = load_config(config)?;
    let rows = study::sweep(&scenarios, param, &values, g.dt)?;
    create_dir(&g.out)?;
    write_file(&g.out.join("sweep.csv"), &study::sweep_csv(param, &rows))?;
    if !g.quiet {
        for r in &rows {
            println!(
                "{} {param}={:.6e}: max fidelity {:.6}, gate error {:.2e}",
                r.scenario, r.value, r.outcome.report.max_fidelity, r.outcome.holonomy.gate_error
            );
        }
    }
    Ok(0)
}

fn verify(g: &Global, configs: &[PathBuf], tol: f64) -> Result<u8, CliError> {
    let scenarios = load_all(configs)?;
    let reports: Vec<_> = scenarios
        .par_iter()
        .map(|s| {
            let dt = g.dt.unwrap_or_else(|| s.step());
            s.spec
                .model()
                .holonomy(dt)
                .map_err(|e| CliError::simulation(&s.name, e))
        })
        .collect();
    let mut code = 0;
    for (s, r) in scenarios.iter().zip(reports) {
        match r {
            Ok(h) => {
                let pass = h.passes(tol);
                if !pass {
                    code = code.max(3);
                }
                if !g.quiet || !pass {
                    println!(
                        "{}: {} cyclicity {:.2e}, parallel transport {:.2e}, gate error {:.2e}",
                        s.name,
                        if pass { "PASS" } else { "FAIL" },
                        h.cyclicity_error,
                        h.parallel_transport_max,
                        h.gate_error
                    );
                }
            }
            Err(e) => code = code.max(report(&e)),
        }
    }
    Ok(code)
}

fn calibrate(g: &Global, config: &Path, band: f64, lo: f64, hi: f64) -> Result<u8, CliError> {
    let scenarios = load_config(config)?;
    create_dir(&g.out)?;
    let mut any = false;
    if let Some((points, rep)) = study::calibrate_channels(&scenarios, band)? {
        any = true;
        write_file(
            &g.out.join("calibration.csv"),
            &study::calibration_csv(&points, &rep),
        )?;
        let best = rep.best();
        println!(
            "channels: {} (band violations {}, max deviation {:.4})",
            best.assignment, best.band_violations, best.max_deviation
        );
        if !g.quiet {
            for (p, f) in points.iter().zip(&best.fidelities) {
                println!("  {}: {:.6} vs reference {:.4}", p.name, f, p.reference);
            }
        }
    }
    let fits = study::calibrate_couplings(&scenarios, lo, hi)?;
    if !fits.is_empty() {
        any = true;
        write_file(&g.out.join("coupling.csv"), &study::coupling_csv(&fits))?;
        for f in &fits {
            println!(
                "{}: lambda = {:.12e} rad/us (2pi x {:.6} MHz), max fidelity {:.6}",
                f.scenario,
                f.lambda,
                f.lambda / (2.0 * std::f64::consts::PI),
                f.max_fidelity
            );
        }
    }
    if !any {
        return Err(CliError::Usage(format!(
            "{}: no scenario carries a reference_fidelity",
            config.display()
        )));
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let outcome = match &cli.command {
        Command::Run { configs } => run(g, configs),
        Command::Sweep {
            config,
            param,
            grid,
            linspace,
        } => sweep(g, config, param, grid, linspace),
        Command::Verify { configs, tol } => verify(g, configs, *tol),
        Command::Calibrate {
            config,
            band,
            lambda_lo,
            lambda_hi,
        } => calibrate(g, config, *band, *lambda_lo, *lambda_hi),
    };
    ExitCode::from(outcome.unwrap_or_else(|e| report(&e)))
}
