//! Thin command-line front end over the library: config-driven runs,
//! sweeps, price-of-anarchy studies, and property validation.
//!
//! Exit codes: 0 success/converged, 2 configuration error, 3
//! non-convergence, 4 property violation.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use mec_offload::config::ExperimentConfig;
use mec_offload::engine::{initial_profile, run_dynamics, Schedule};
use mec_offload::output;
use mec_offload::sweep::{poa_interference_sweep, run_sweep, SweepAxis};
use mec_offload::{is_nash, verify_exact_potential, Error};

const EXIT_CONFIG: u8 = 2;
const EXIT_NO_CONVERGENCE: u8 = 3;
const EXIT_PROPERTY: u8 = 4;

#[derive(Parser)]
#[command(
    name = "mec-offload",
    version,
    about = "Best-response dynamics and baselines for the multi-user edge-offloading game"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Experiment configuration file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Override the seed from the config file.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for artifacts.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Run the dynamics once; write trace.csv and summary.json.
    Run {
        #[command(flatten)]
        common: CommonArgs,
        /// Override the update schedule (sequential | parallel).
        #[arg(long)]
        schedule: Option<Schedule>,
        /// Override the round cap.
        #[arg(long)]
        max_rounds: Option<usize>,
    },
    /// Sweep a parameter; write one aggregated CSV per axis.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Axis name; defaults to the sweeps declared in the config.
        #[arg(long)]
        axis: Option<String>,
        /// Comma-separated values for --axis.
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
        /// Seeds per value, starting at the base seed.
        #[arg(long)]
        seeds: Option<u64>,
    },
    /// Equilibrium vs. exhaustive optimum; write poa.json and
    /// poa_sweep.csv.
    Poa {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated interference multipliers for the sweep CSV.
        #[arg(long, value_delimiter = ',')]
        multipliers: Option<Vec<f64>>,
    },
    /// Check the potential identity and the equilibrium fixed point;
    /// print a machine-readable report.
    Validate {
        /// Experiment configuration file (TOML).
        #[arg(long)]
        config: PathBuf,
        /// Override the seed from the config file.
        #[arg(long)]
        seed: Option<u64>,
        /// Number of randomized deviation trials.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Print the built-in default parameter set as a config file.
    Preset,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run {
            common,
            schedule,
            max_rounds,
        } => cmd_run(common, schedule, max_rounds),
        Command::Sweep {
            common,
            axis,
            values,
            seeds,
        } => cmd_sweep(common, axis, values, seeds),
        Command::Poa {
            common,
            multipliers,
        } => cmd_poa(common, multipliers),
        Command::Validate {
            config,
            seed,
            trials,
        } => cmd_validate(&config, seed, trials),
        Command::Preset => {
            print!("{}", ExperimentConfig::default_preset().to_toml_string());
            0
        }
    };
    ExitCode::from(code)
}

fn load_config(path: &Path, seed: Option<u64>) -> Result<ExperimentConfig, u8> {
    match ExperimentConfig::from_path(path) {
        Ok(mut cfg) => {
            if let Some(s) = seed {
                cfg.seed = s;
            }
            Ok(cfg)
        }
        Err(e) => {
            eprintln!("error: {e}");
            Err(EXIT_CONFIG)
        }
    }
}

fn fail(e: &Error) -> u8 {
    eprintln!("error: {e}");
    EXIT_CONFIG
}

fn cmd_run(common: CommonArgs, schedule: Option<Schedule>, max_rounds: Option<usize>) -> u8 {
    let cfg = match load_config(&common.config, common.seed) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let mut dynamics = cfg.dynamics();
    if let Some(s) = schedule {
        dynamics.schedule = s;
    }
    if let Some(m) = max_rounds {
        dynamics.max_rounds = m;
    }

    let trace = (|| {
        let (scenario, _, graph) = cfg.build_instance(cfg.seed)?;
        run_dynamics(&scenario, &graph, initial_profile(&scenario), &dynamics)
    })();
    let trace = match trace {
        Ok(t) => t,
        Err(e) => return fail(&e),
    };

    let summary = output::RunSummary::from_trace(&trace);
    if let Err(e) = output::write_atomic(&common.out.join("trace.csv"), &output::trace_csv(&trace))
        .and_then(|_| {
            output::write_atomic(&common.out.join("summary.json"), &output::to_json(&summary))
        })
    {
        return fail(&e);
    }

    if trace.converged {
        println!(
            "converged in {} rounds; final potential {}",
            trace.rounds_to_converge,
            trace.final_potential()
        );
        0
    } else {
        eprintln!(
            "did not converge within {} rounds; partial trace retained",
            dynamics.max_rounds
        );
        EXIT_NO_CONVERGENCE
    }
}

fn cmd_sweep(
    common: CommonArgs,
    axis: Option<String>,
    values: Option<Vec<f64>>,
    seeds: Option<u64>,
) -> u8 {
    let cfg = match load_config(&common.config, common.seed) {
        Ok(c) => c,
        Err(code) => return code,
    };

    // Axis/values from flags take precedence over [[sweep]] config entries.
    let requests: Vec<(String, Vec<f64>, u64)> = match (axis, values) {
        (Some(a), Some(v)) => vec![(a, v, seeds.unwrap_or(10))],
        (Some(_), None) | (None, Some(_)) => {
            eprintln!("error: --axis and --values must be given together");
            return EXIT_CONFIG;
        }
        (None, None) if !cfg.sweep.is_empty() => cfg
            .sweep
            .iter()
            .map(|s| (s.axis.clone(), s.values.clone(), seeds.unwrap_or(s.seeds)))
            .collect(),
        (None, None) => {
            eprintln!("error: no sweep requested; pass --axis/--values or declare [[sweep]] in the config");
            return EXIT_CONFIG;
        }
    };

    let mut all_converged = true;
    for (axis_name, values, n_seeds) in requests {
        let axis: SweepAxis = match axis_name.parse() {
            Ok(a) => a,
            Err(e) => return fail(&e),
        };
        let seed_list: Vec<u64> = (0..n_seeds).map(|k| cfg.seed + k).collect();
        let points = match run_sweep(&cfg, axis, &values, &seed_list) {
            Ok(p) => p,
            Err(e) => return fail(&e),
        };
        all_converged &= points.iter().all(|p| p.converged);
        let csv = output::sweep_csv(axis.name(), &points);
        let path = common.out.join(format!("sweep_{}.csv", axis.name()));
        if let Err(e) = output::write_atomic(&path, &csv) {
            return fail(&e);
        }
        println!("wrote {} ({} points)", path.display(), points.len());
    }
    if all_converged {
        0
    } else {
        EXIT_NO_CONVERGENCE
    }
}

fn cmd_poa(common: CommonArgs, multipliers: Option<Vec<f64>>) -> u8 {
    let cfg = match load_config(&common.config, common.seed) {
        Ok(c) => c,
        Err(code) => return code,
    };

    let run = (|| {
        let (scenario, _, graph) = cfg.build_instance(cfg.seed)?;
        let trace = run_dynamics(&scenario, &graph, initial_profile(&scenario), &cfg.dynamics())?;
        Ok((scenario, graph, trace))
    })();
    let (scenario, graph, trace) = match run {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    if !trace.converged {
        eprintln!("dynamics did not converge; no equilibrium to measure");
        return EXIT_NO_CONVERGENCE;
    }

    let ne = trace.final_profile();
    let report = match mec_offload::evaluate_poa(
        &scenario,
        &graph,
        &ne,
        cfg.poa.power_grid_points,
        cfg.poa.exhaustive_limit,
    ) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };

    let multipliers = multipliers.unwrap_or_else(|| cfg.poa.interference_multipliers.clone());
    let rows = match poa_interference_sweep(&cfg, &multipliers, cfg.seed) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };

    if let Err(e) = output::write_atomic(&common.out.join("poa.json"), &output::to_json(&report))
        .and_then(|_| {
            output::write_atomic(&common.out.join("poa_sweep.csv"), &output::poa_sweep_csv(&rows))
        })
    {
        return fail(&e);
    }
    println!(
        "poa {} (bound {}); sweep over {} multipliers written",
        report.poa,
        report.bound_upper,
        rows.len()
    );
    0
}

#[derive(Serialize)]
struct PropertyResult {
    name: &'static str,
    passed: bool,
    detail: String,
}

#[derive(Serialize)]
struct ValidateReport {
    seed: u64,
    trials: usize,
    passed: bool,
    properties: Vec<PropertyResult>,
}

fn cmd_validate(config: &Path, seed: Option<u64>, trials: usize) -> u8 {
    let cfg = match load_config(config, seed) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let (scenario, _, graph) = match cfg.build_instance(cfg.seed) {
        Ok(i) => i,
        Err(e) => return fail(&e),
    };

    let mut properties = Vec::new();

    let check = verify_exact_potential(&scenario, &graph, trials, cfg.seed);
    properties.push(PropertyResult {
        name: "exact_potential",
        passed: check.passed(),
        detail: match check.violations.first() {
            None => format!("max residual {}", check.max_residual),
            Some(v) => format!(
                "max residual {}; first violation: {}",
                check.max_residual,
                serde_json::to_string(v).unwrap_or_default()
            ),
        },
    });

    match run_dynamics(&scenario, &graph, initial_profile(&scenario), &cfg.dynamics()) {
        Ok(trace) => {
            properties.push(PropertyResult {
                name: "convergence",
                passed: trace.converged,
                detail: format!("{} rounds", trace.rounds_to_converge),
            });
            let profile = trace.final_profile();
            let nash = trace.converged
                && is_nash(
                    &profile,
                    &scenario,
                    &graph,
                    &cfg.power_search,
                    cfg.engine.nash_tol,
                );
            properties.push(PropertyResult {
                name: "equilibrium_fixed_point",
                passed: nash,
                detail: format!("tolerance {}", cfg.engine.nash_tol),
            });
            let feasible = profile.validate(&scenario);
            properties.push(PropertyResult {
                name: "profile_feasibility",
                passed: feasible.is_ok(),
                detail: feasible.err().map(|e| e.to_string()).unwrap_or_default(),
            });
        }
        Err(e) => properties.push(PropertyResult {
            name: "convergence",
            passed: false,
            detail: e.to_string(),
        }),
    }

    let report = ValidateReport {
        seed: cfg.seed,
        trials,
        passed: properties.iter().all(|p| p.passed),
        properties,
    };
    print!("{}", output::to_json(&report));
    if report.passed {
        0
    } else {
        eprintln!("property violation; replay with --seed {}", cfg.seed);
        EXIT_PROPERTY
    }
}
