//! Sequential versus simultaneous updates on an anti-coordination
//! instance: two users who each prefer to offload only while the other is
//! silent. One-at-a-time updates settle immediately; simultaneous updates
//! two-cycle forever, which the engine detects by profile hashing.
//!
//! ```bash
//! cargo run --release -p mec-offload --example schedules
//! ```

use mec_offload::config::ExperimentConfig;
use mec_offload::engine::{initial_profile, run_dynamics, Schedule};

fn main() {
    let mut cfg = ExperimentConfig::default_preset();
    cfg.topology.num_bs = 2;
    cfg.topology.users_per_cell = 1;
    cfg.topology.num_channels = 1;
    cfg.user_defaults.alpha_t = 1.0;
    // Strong symmetric coupling: whoever transmits alone wins; transmitting
    // together is worse than computing locally.
    cfg.radio.interference_scale = 2000.0;

    let (scenario, _, graph) = cfg.build_instance(3).unwrap();

    for schedule in [Schedule::Sequential, Schedule::Parallel] {
        let mut dynamics = cfg.dynamics();
        dynamics.schedule = schedule;
        let trace = run_dynamics(
            &scenario,
            &graph,
            initial_profile(&scenario),
            &dynamics,
        )
        .unwrap();
        println!("schedule {:?}:", schedule);
        for r in trace.rounds.iter().take(6) {
            let lambdas: Vec<f64> = r.strategies.iter().map(|s| s.lambda).collect();
            println!(
                "  round {}: lambdas {:?}, potential {:.4}",
                r.round, lambdas, r.potential
            );
        }
        if trace.converged {
            println!(
                "  -> converged after {} changing rounds\n",
                trace.rounds_to_converge
            );
        } else {
            println!(
                "  -> no equilibrium: oscillation detected after {} rounds\n",
                trace.rounds.len() - 1
            );
        }
    }
}
