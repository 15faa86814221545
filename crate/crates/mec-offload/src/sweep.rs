//! Parameter sweeps over isolated deterministic runs.
//!
//! Every sweep point is an independent `(config, seed)` run, so points
//! execute in parallel and results are merged in deterministic order
//! afterwards.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::engine::{initial_profile, run_dynamics};
use crate::error::{Error, Result};
use crate::output::RunSummary;
use crate::overhead::sinr;
use crate::poa::evaluate_poa;

/// A sweepable scalar parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    /// Network density: users per cell.
    UsersPerCell,
    /// Task input size in bits; the per-bit CPU intensity stays fixed, so
    /// the workload scales along.
    InputBits,
    /// Total task workload in cycles at fixed input size.
    WorkloadCycles,
    /// Latency weight (energy weight follows as its complement).
    AlphaT,
    /// Cross-cell gain multiplier.
    InterferenceScale,
}

impl SweepAxis {
    pub const ALL: [SweepAxis; 5] = [
        SweepAxis::UsersPerCell,
        SweepAxis::InputBits,
        SweepAxis::WorkloadCycles,
        SweepAxis::AlphaT,
        SweepAxis::InterferenceScale,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::UsersPerCell => "users_per_cell",
            SweepAxis::InputBits => "input_bits",
            SweepAxis::WorkloadCycles => "workload_cycles",
            SweepAxis::AlphaT => "alpha_t",
            SweepAxis::InterferenceScale => "interference_scale",
        }
    }

    /// Produce the config for one sweep value.
    pub fn apply(&self, base: &ExperimentConfig, value: f64) -> Result<ExperimentConfig> {
        let mut cfg = base.clone();
        match self {
            SweepAxis::UsersPerCell => {
                if value < 1.0 || value.fract() != 0.0 {
                    return Err(Error::InvalidConfig(format!(
                        "users_per_cell sweep value must be a positive integer, got {value}"
                    )));
                }
                cfg.topology.users_per_cell = value as usize;
            }
            SweepAxis::InputBits => {
                if !(value > 0.0) {
                    return Err(Error::InvalidConfig(format!(
                        "input_bits sweep value must be > 0, got {value}"
                    )));
                }
                // Keep cycles-per-bit fixed: the workload scales with the
                // input size.
                let intensity = base.task.workload_cycles / base.task.input_bits;
                cfg.task.input_bits = value;
                cfg.task.workload_cycles = value * intensity;
            }
            SweepAxis::WorkloadCycles => {
                if !(value > 0.0) {
                    return Err(Error::InvalidConfig(format!(
                        "workload_cycles sweep value must be > 0, got {value}"
                    )));
                }
                cfg.task.workload_cycles = value;
            }
            SweepAxis::AlphaT => {
                if !(0.0..=1.0).contains(&value) {
                    return Err(Error::InvalidConfig(format!(
                        "alpha_t sweep value must lie in [0, 1], got {value}"
                    )));
                }
                cfg.user_defaults.alpha_t = value;
            }
            SweepAxis::InterferenceScale => {
                if value < 0.0 {
                    return Err(Error::InvalidConfig(format!(
                        "interference_scale sweep value must be >= 0, got {value}"
                    )));
                }
                cfg.radio.interference_scale = value;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl std::str::FromStr for SweepAxis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .find(|a| a.name() == s)
            .copied()
            .ok_or_else(|| Error::UnknownAxis(s.to_string()))
    }
}

/// Outcome of one `(axis value, seed)` run.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SweepPoint {
    pub axis_value: f64,
    pub seed: u64,
    pub converged: bool,
    pub rounds: usize,
    pub final_potential: f64,
    pub offloaders: usize,
}

/// Run the dynamics once per (value, seed) pair, in parallel, and return
/// the points ordered by value then seed.
pub fn run_sweep(
    base: &ExperimentConfig,
    axis: SweepAxis,
    values: &[f64],
    seeds: &[u64],
) -> Result<Vec<SweepPoint>> {
    // Validate every value up front so errors surface before any work runs.
    let configs: Vec<(f64, ExperimentConfig)> = values
        .iter()
        .map(|&v| axis.apply(base, v).map(|c| (v, c)))
        .collect::<Result<_>>()?;

    let jobs: Vec<(f64, u64, ExperimentConfig)> = configs
        .iter()
        .flat_map(|(v, cfg)| seeds.iter().map(move |&s| (*v, s, cfg.clone())))
        .collect();

    jobs.into_par_iter()
        .map(|(value, seed, cfg)| {
            let (scenario, _, graph) = cfg.build_instance(seed)?;
            let trace = run_dynamics(&scenario, &graph, initial_profile(&scenario), &cfg.dynamics())?;
            let summary = RunSummary::from_trace(&trace);
            Ok(SweepPoint {
                axis_value: value,
                seed,
                converged: summary.converged,
                rounds: summary.rounds_to_converge,
                final_potential: summary.final_potential,
                offloaders: summary.offloaders,
            })
        })
        .collect::<Result<Vec<_>>>()
    // Parallel collect preserves job order, which is (value, seed) sorted.
}

/// One point of the interference sweep around a price-of-anarchy study.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PoaSweepRow {
    /// Multiplier applied to the base interference scale.
    pub multiplier: f64,
    /// Reciprocal of the summed equilibrium SINR: the interference axis.
    pub inv_sinr: f64,
    pub poa: f64,
    pub bound_upper: f64,
    pub ne_total: f64,
    pub opt_total: f64,
}

/// For each multiplier, scale the cross-cell gains, run the dynamics to an
/// equilibrium, and measure the price of anarchy against the exhaustive
/// baseline.
pub fn poa_interference_sweep(
    base: &ExperimentConfig,
    multipliers: &[f64],
    seed: u64,
) -> Result<Vec<PoaSweepRow>> {
    multipliers
        .par_iter()
        .map(|&multiplier| {
            let cfg =
                SweepAxis::InterferenceScale.apply(base, base.radio.interference_scale * multiplier)?;
            let (scenario, _, graph) = cfg.build_instance(seed)?;
            let trace =
                run_dynamics(&scenario, &graph, initial_profile(&scenario), &cfg.dynamics())?;
            let ne = trace.final_profile();
            let report = evaluate_poa(
                &scenario,
                &graph,
                &ne,
                cfg.poa.power_grid_points,
                cfg.poa.exhaustive_limit,
            )?;
            // The interference axis is measured at the equilibrium over the
            // users actually transmitting.
            let total_sinr: f64 = (0..scenario.num_users())
                .filter(|&u| ne[u].lambda > 0.0)
                .map(|u| sinr(u, &ne, &graph, &scenario))
                .sum();
            Ok(PoaSweepRow {
                multiplier,
                inv_sinr: 1.0 / total_sinr,
                poa: report.poa,
                bound_upper: report.bound_upper,
                ne_total: report.ne_total,
                opt_total: report.opt_total,
            })
        })
        .collect()
}
