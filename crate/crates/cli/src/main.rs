use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use dwpp_core::controllers::{distance_point_to_line, sampled_optimal_velocity, LookaheadConfig};
use dwpp_core::harness::{
    emit_report, emit_sweep_report, format_sweep, resolve_config, run_comparison,
    run_lookahead_sweep, ExperimentConfig, SweepConfig, EXPERIMENT_PROFILE, SIMULATION_PROFILE,
};
use dwpp_core::metrics::ScenarioMetrics;
use dwpp_core::prelude::*;

#[derive(Parser)]
#[command(
    name = "dwpp",
    version,
    about = "Pure pursuit controller benchmark with dynamic window velocity selection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every controller on every configured path and write tables and CSVs.
    Compare {
        /// Shipped profile name or path to a TOML config.
        #[arg(long, default_value = EXPERIMENT_PROFILE)]
        config: String,
        /// Output directory; defaults to `output_dir` from the config, then `./results`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep the DWPP lookahead distance on the sharpest configured path.
    Sweep {
        #[arg(long, default_value = SIMULATION_PROFILE)]
        config: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Lookahead values overriding the config, e.g. `0.3,0.6,0.9`.
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
    },
    /// Simulate one controller on one path and print its metrics.
    Simulate {
        #[arg(long, default_value = "DWPP")]
        controller: ControllerKind,
        /// Name of a path in the config.
        #[arg(long, default_value = "C", conflicts_with = "waypoints")]
        path: String,
        /// CSV file with `x,y` waypoints instead of a configured path.
        #[arg(long)]
        waypoints: Option<PathBuf>,
        /// Fixed lookahead distance overriding the config.
        #[arg(long)]
        lookahead: Option<f64>,
        #[arg(long, default_value = EXPERIMENT_PROFILE)]
        config: String,
        /// Trajectory CSV to write.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Select the command closest to `omega = kappa * v` inside a window and
    /// compare it with a grid search.
    CheckOptimal {
        #[arg(long, allow_hyphen_values = true)]
        v_lo: f64,
        #[arg(long, allow_hyphen_values = true)]
        v_hi: f64,
        #[arg(long, allow_hyphen_values = true)]
        omega_lo: f64,
        #[arg(long, allow_hyphen_values = true)]
        omega_hi: f64,
        #[arg(long, allow_hyphen_values = true)]
        kappa: f64,
        #[arg(long, default_value_t = 201)]
        samples: usize,
    },
}

fn output_dir(out: Option<PathBuf>, config: &ExperimentConfig) -> PathBuf {
    out.or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("results"))
}

fn load(spec: &str) -> Result<ExperimentConfig> {
    resolve_config(spec).with_context(|| format!("loading config `{spec}`"))
}

fn compare(config: &str, out: Option<PathBuf>) -> Result<()> {
    let config = load(config)?;
    let dir = output_dir(out, &config);
    let comparison = run_comparison(&config)?;
    let summary = emit_report(&comparison, &dir)?;
    print!("{summary}");
    println!(
        "\nWrote {} trajectories and metrics to {}",
        comparison.trials.len(),
        dir.display()
    );
    Ok(())
}

fn sweep(config: &str, out: Option<PathBuf>, values: Option<Vec<f64>>) -> Result<()> {
    let config = load(config)?;
    let dir = output_dir(out, &config);
    let sweep = match values {
        Some(values) => SweepConfig::new(config.clone(), values)?,
        None => SweepConfig::from_experiment(config.clone())?,
    };
    let results = run_lookahead_sweep(&sweep)?;
    print!("{}", format_sweep(&results, &config)?);
    let csv = emit_sweep_report(&results, &config, &dir)?;
    println!("\nWrote {}", csv.display());
    Ok(())
}

fn simulate(
    kind: ControllerKind,
    path_name: &str,
    waypoints: Option<&Path>,
    lookahead: Option<f64>,
    config: &str,
    out: Option<&Path>,
) -> Result<()> {
    let config = load(config)?;
    let path = match waypoints {
        Some(file) => ReferencePath::read_csv(file)?,
        None => {
            let Some(entry) = config.paths.iter().find(|p| p.name == path_name) else {
                let names: Vec<_> = config.paths.iter().map(|p| p.name.as_str()).collect();
                bail!(
                    "unknown path `{path_name}`; configured paths: {}",
                    names.join(", ")
                );
            };
            entry.build()?
        }
    };
    let lookahead_cfg = match lookahead {
        Some(distance) => {
            let cfg = LookaheadConfig::fixed(distance);
            cfg.validate().context("--lookahead")?;
            cfg
        }
        None => config.lookahead,
    };
    let controller = PurePursuit::new(kind, config.limits, lookahead_cfg, config.regulation);
    let scenario = Scenario {
        path: &path,
        controller,
        execution: ExecutionModel::hardware_clip(config.limits),
        noise: NoiseModel::default().with_seed(config.noise.seed),
        max_time: config.max_time,
        goal_tolerance: config.goal_tolerance,
        obstacle_distance: f64::INFINITY,
    };
    let result = run_scenario(&scenario)?;
    let m = ScenarioMetrics::from_result(&result, &path)?;
    println!("controller       {kind}");
    println!("steps            {}", result.log.len());
    println!("reached goal     {}", m.reached_goal);
    println!("travel time [s]  {:.3}", m.travel_time);
    println!("violations [%]   {:.2}", m.violation_ratio);
    println!("mean CTE [m]     {:.4}", m.mean_cte);
    println!("max CTE [m]      {:.4}", m.max_cte);
    if let Some(out) = out {
        result.log.write_csv(out)?;
        println!("wrote            {}", out.display());
    }
    Ok(())
}

fn check_optimal(
    v_lo: f64,
    v_hi: f64,
    omega_lo: f64,
    omega_hi: f64,
    kappa: f64,
    samples: usize,
) -> Result<()> {
    if ![v_lo, v_hi, omega_lo, omega_hi, kappa]
        .iter()
        .all(|x| x.is_finite())
    {
        bail!("window bounds and curvature must be finite");
    }
    if v_lo > v_hi || omega_lo > omega_hi {
        bail!("window bounds must satisfy v_lo <= v_hi and omega_lo <= omega_hi");
    }
    let dw = DynamicWindow::new(v_lo, v_hi, omega_lo, omega_hi);
    let exact = optimal_velocity_in_window(&dw, kappa);
    let grid = sampled_optimal_velocity(&dw, kappa, samples);
    println!(
        "closed form  v = {:.6}  omega = {:.6}  distance = {:.3e}",
        exact.v,
        exact.omega,
        distance_point_to_line(&exact, kappa)
    );
    println!(
        "grid {samples:>4}    v = {:.6}  omega = {:.6}  distance = {:.3e}",
        grid.v,
        grid.omega,
        distance_point_to_line(&grid, kappa)
    );
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Compare { config, out } => compare(&config, out),
        Command::Sweep {
            config,
            out,
            values,
        } => sweep(&config, out, values),
        Command::Simulate {
            controller,
            path,
            waypoints,
            lookahead,
            config,
            out,
        } => simulate(
            controller,
            &path,
            waypoints.as_deref(),
            lookahead,
            &config,
            out.as_deref(),
        ),
        Command::CheckOptimal {
            v_lo,
            v_hi,
            omega_lo,
            omega_hi,
            kappa,
            samples,
        } => check_optimal(v_lo, v_hi, omega_lo, omega_hi, kappa, samples),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
