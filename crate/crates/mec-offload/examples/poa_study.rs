//! Measure the price of anarchy on a small instance: run the dynamics to
//! an equilibrium, enumerate the centralized optimum exhaustively, and
//! compare both against the closed-form upper bound.
//!
//! ```bash
//! cargo run --release -p mec-offload --example poa_study
//! ```

use mec_offload::config::ExperimentConfig;
use mec_offload::engine::{initial_profile, run_dynamics};
use mec_offload::poa::{centralized_optimum, check_global_optimality, evaluate_poa};
use mec_offload::potential;

fn main() {
    let mut cfg = ExperimentConfig::default_preset();
    cfg.topology.num_bs = 2;
    cfg.topology.users_per_cell = 2;
    cfg.topology.num_channels = 2;
    cfg.user_defaults.alpha_t = 1.0;
    // In the mid-interference regime the dynamics can lock into an
    // equilibrium the central planner would not pick.
    cfg.radio.interference_scale = 16.0;

    for seed in 0..6u64 {
        let (scenario, _, graph) = cfg.build_instance(seed).unwrap();
        let trace = run_dynamics(
            &scenario,
            &graph,
            initial_profile(&scenario),
            &cfg.dynamics(),
        )
        .unwrap();
        assert!(trace.converged);
        let ne = trace.final_profile();

        let report = evaluate_poa(
            &scenario,
            &graph,
            &ne,
            cfg.poa.power_grid_points,
            cfg.poa.exhaustive_limit,
        )
        .unwrap();
        let opt = centralized_optimum(
            &scenario,
            &graph,
            cfg.poa.power_grid_points,
            Some(&ne),
            cfg.poa.exhaustive_limit,
        )
        .unwrap();
        let global = check_global_optimality(
            &ne,
            &opt,
            &scenario,
            &graph,
            &cfg.power_search,
            cfg.poa.power_grid_points,
            1e-4,
        );

        println!(
            "seed {seed}: poa {:.6} (bound {:.3}), ne total {:.4}, opt total {:.4}",
            report.poa, report.bound_upper, report.ne_total, report.opt_total
        );
        println!(
            "        potential: ne {:.6} vs exhaustive optimum {:.6}; optimum is NE: {}, NE Pareto-efficient: {}",
            potential(&ne, &graph, &scenario),
            global.potential_opt,
            global.opt_is_nash,
            global.ne_is_pareto_efficient
        );
    }
}
