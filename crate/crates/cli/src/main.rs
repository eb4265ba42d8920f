use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use log::info;

use anisoflow::decay::{energy_audit, fit_power_law, max_principle_audit, theoretical_exponent, Space};
use anisoflow::io::{
    checkpoint_write, load_config, read_timeseries, run_ineq_lab, write_ratio_reports, Simulation,
    TimeSeriesWriter,
};

#[derive(Parser)]
#[command(name = "anisoflow", version, about = "Anisotropic fractional conservation law: simulation and decay analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configured simulation, writing the norm time series and a final checkpoint.
    Simulate { config: PathBuf },
    /// Print the predicted decay exponent.
    Exponent {
        /// Dissipation orders, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        alphas: Vec<f64>,
        /// `l2` or `hg:<order>`.
        #[arg(long, default_value = "l2")]
        space: String,
    },
    /// Fit a power law `(1+t)^p` to one column of a time series.
    Analyze {
        csv: PathBuf,
        /// `l2`, `hg:<order>` or any column name.
        #[arg(long, default_value = "l2")]
        quantity: String,
        /// `lo,hi`; defaults to `10,<last time>`.
        #[arg(long, value_delimiter = ',')]
        window: Option<Vec<f64>>,
        /// Dissipation orders for the predicted exponent.
        #[arg(long, value_delimiter = ',')]
        alphas: Option<Vec<f64>>,
    },
    /// Evaluate the interpolation-inequality ratios on a synthetic corpus.
    IneqLab { config: PathBuf },
    /// Maximum-principle and energy-balance audits of a time series.
    Audit {
        csv: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

fn parse_space(s: &str) -> Result<Space> {
    match s {
        "l2" => Ok(Space::L2),
        _ => match s.strip_prefix("hg:").map(str::parse::<u32>) {
            Some(Ok(g)) => Ok(Space::Hgamma(g)),
            _ => bail!("unknown space `{s}`; use `l2` or `hg:<order>`"),
        },
    }
}

fn column_name(quantity: &str) -> String {
    match quantity.strip_prefix("hg:") {
        Some(g) => format!("hg{g}"),
        None => quantity.to_string(),
    }
}

fn simulate(config: PathBuf) -> Result<bool> {
    let cfg = load_config(&config).with_context(|| format!("loading {}", config.display()))?;
    let mut sim = Simulation::new(&cfg)?;
    let mut out = TimeSeriesWriter::create(&cfg.timeseries, sim.gammas())
        .with_context(|| format!("creating {}", cfg.timeseries.display()))?;
    let mut last = None;
    sim.run(|s, _| {
        last = Some((s.t, s.l2));
        out.push(s)
    })
    .context("simulation aborted; the partial series has been written")?;
    checkpoint_write(sim.state(), &cfg.checkpoint)
        .with_context(|| format!("writing {}", cfg.checkpoint.display()))?;
    if let Some((t, l2)) = last {
        println!("t = {t}  l2 = {l2:.9e}  steps = {}", sim.steps());
    }
    println!("series: {}", cfg.timeseries.display());
    println!("checkpoint: {}", cfg.checkpoint.display());
    Ok(true)
}

fn analyze(csv: PathBuf, quantity: String, window: Option<Vec<f64>>, alphas: Option<Vec<f64>>) -> Result<bool> {
    let ts = read_timeseries(&csv)?;
    let name = column_name(&quantity);
    let Some(series) = ts.column(&name) else {
        bail!("{} has no column `{name}`", csv.display());
    };
    let window = match window.as_deref() {
        Some(&[lo, hi]) => (lo, hi),
        Some(_) => bail!("--window takes two values, `lo,hi`"),
        None => (10.0, series.last().map_or(0.0, |p| p.0)),
    };
    let mut fit = fit_power_law(&series, window)?.named(name);
    if let Some(alphas) = alphas {
        let space = match quantity.as_str() {
            "l2" => Space::L2,
            q => parse_space(q)?,
        };
        fit = fit.against(theoretical_exponent(&alphas, space)?);
    }
    println!("{fit}");
    Ok(true)
}

fn ineq_lab(config: PathBuf) -> Result<bool> {
    let cfg = load_config(&config).with_context(|| format!("loading {}", config.display()))?;
    let reports = run_ineq_lab(&cfg)?;
    write_ratio_reports(&reports, &cfg.report)?;
    println!(
        "{:<20} {:>5} {:>9} {:>10} {:>12} {:>12} {:>12}",
        "inequality", "gamma", "samples", "degenerate", "min", "mean", "max"
    );
    for r in &reports {
        println!(
            "{:<20} {:>5} {:>9} {:>10} {:>12.6} {:>12.6} {:>12.6}",
            r.kind.to_string(),
            r.gamma,
            r.ratios.len(),
            r.degenerate,
            r.min,
            r.mean,
            r.max
        );
    }
    println!("report: {}", cfg.report.display());
    Ok(reports.iter().all(|r| r.degenerate == 0))
}

fn audit(csv: PathBuf, tol: f64) -> Result<bool> {
    let ts = read_timeseries(&csv)?;
    let mp = max_principle_audit(&ts.samples, tol);
    let verdict = |ok| if ok { "PASS" } else { "FAIL" };
    match mp.at {
        Some((t, p)) => println!(
            "max principle: {} (worst relative increase {:.3e} in L^{p} at t = {t})",
            verdict(mp.passed),
            mp.worst_violation
        ),
        None => println!("max principle: {} (no increase)", verdict(mp.passed)),
    }
    let e = energy_audit(&ts.samples)?;
    println!("energy balance: max relative residual {:.3e} (interval ending t = {})", e.max_residual, e.at);
    Ok(mp.passed)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate { config } => simulate(config),
        Command::Exponent { alphas, space } => parse_space(&space)
            .and_then(|s| Ok(theoretical_exponent(&alphas, s)?))
            .map(|e| {
                println!("{e}");
                true
            }),
        Command::Analyze {
            csv,
            quantity,
            window,
            alphas,
        } => analyze(csv, quantity, window, alphas),
        Command::IneqLab { config } => ineq_lab(config),
        Command::Audit { csv, tol } => audit(csv, tol),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            info!("check failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
