//! Run the best-response dynamics once on the default world and print the
//! equilibrium.
//!
//! ```bash
//! cargo run --release -p mec-offload --example single_run [seed]
//! ```

use mec_offload::config::ExperimentConfig;
use mec_offload::engine::{initial_profile, is_nash, run_dynamics};

fn main() {
    let seed = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("seed must be an integer"))
        .unwrap_or(42);

    // Latency-weighted users keep the 10 GHz edge server attractive; see
    // the config docs for why energy-weighted users rarely offload under
    // the default server-energy constant.
    let mut cfg = ExperimentConfig::default_preset();
    cfg.user_defaults.alpha_t = 1.0;

    let (scenario, plan, graph) = cfg.build_instance(seed).unwrap();
    let trace = run_dynamics(
        &scenario,
        &graph,
        initial_profile(&scenario),
        &cfg.dynamics(),
    )
    .unwrap();

    let record = trace.final_record();
    println!(
        "seed {seed}: {} users, converged={} after {} changing rounds",
        scenario.num_users(),
        trace.converged,
        trace.rounds_to_converge
    );
    println!(
        "network potential {:.6} ({} offloading, {} local)",
        record.potential,
        record.offloaders,
        scenario.num_users() - record.offloaders
    );
    println!(
        "equilibrium verified: {}",
        is_nash(
            &trace.final_profile(),
            &scenario,
            &graph,
            &cfg.power_search,
            cfg.engine.nash_tol
        )
    );
    println!();
    println!("user cell chan lambda power_mW freq_MHz overhead utility");
    for u in 0..scenario.num_users() {
        let s = &record.strategies[u];
        println!(
            "{:4} {:4} {:4} {:6.0} {:8.2} {:8.1} {:8.4} {:8.4}",
            u,
            scenario.cell_of[u],
            plan.channel_of[u],
            s.lambda,
            s.power_w * 1e3,
            s.freq_hz / 1e6,
            record.overheads[u],
            record.utilities[u],
        );
    }
}
