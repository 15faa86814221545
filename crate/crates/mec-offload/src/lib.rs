//! Deterministic simulator and solvers for the multi-user edge-offloading
//! game.
//!
//! Mobile users in a small-cell network each hold one computation task and
//! jointly pick an offload ratio, a transmit power, and a local CPU
//! frequency. Uplinks on the same subchannel interfere across cells, which
//! couples the decisions. The crate provides:
//!
//! - [`scenario`]: world generation, subchannel assignment, and the
//!   directed interference graph;
//! - [`overhead`]: the latency/energy cost model, altruistic utilities, and
//!   the network potential;
//! - [`best_response`]: exact per-user best responses (binary offload,
//!   closed-form frequency, Newton power search);
//! - [`engine`]: best-response dynamics to a Nash equilibrium with full
//!   traces, plus randomized verification of the exact-potential identity;
//! - [`poa`]: a brute-force centralized baseline, price-of-anarchy
//!   measurement, and its closed-form upper bound;
//! - [`config`] / [`sweep`] / [`output`]: TOML-driven experiments, parameter
//!   sweeps, and plot-ready CSV/JSON artifacts.
//!
//! Runs are pure functions of `(config, seed)`: identical inputs produce
//! byte-identical artifacts. See the crate examples for one runnable
//! program per capability, and the `mec-offload` binary for the
//! config-driven command-line front end.

pub mod best_response;
pub mod config;
pub mod engine;
pub mod error;
pub mod output;
pub mod overhead;
pub mod poa;
pub mod scenario;
pub mod sweep;

pub use best_response::{
    best_cpu_frequency, best_response, best_transmit_power, transmission_overhead,
    BestResponse, PowerSearchConfig,
};
pub use config::ExperimentConfig;
pub use engine::{
    initial_profile, is_nash, run_dynamics, verify_exact_potential, DynamicsConfig, GameTrace,
    IterationRecord, PotentialCheck, Schedule,
};
pub use error::{Error, Result};
pub use overhead::{
    altruistic_utility, cloud_overhead, interference_power, local_overhead, potential,
    total_overhead, transmission_rate, Strategy, StrategyProfile,
};
pub use poa::{
    centralized_optimum, check_global_optimality, evaluate_poa, poa_upper_bound,
    price_of_anarchy, GlobalOptReport, PoaReport,
};
pub use scenario::{
    assign_channels, build_interference_graph, generate_scenario, ChannelPlan, GeneratorConfig,
    InterferenceGraph, Scenario, TaskSpec, UserProfile,
};
pub use sweep::{run_sweep, SweepAxis, SweepPoint};
