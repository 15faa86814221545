//! Watch the offload decisions, powers, and the network potential converge
//! round by round, and write the full trace to `out/trace.csv`.
//!
//! ```bash
//! cargo run --release -p mec-offload --example convergence_trace
//! ```

use mec_offload::config::ExperimentConfig;
use mec_offload::engine::{initial_profile, run_dynamics};
use mec_offload::output;

fn main() {
    let mut cfg = ExperimentConfig::default_preset();
    cfg.user_defaults.alpha_t = 1.0;
    // Stronger coupling makes the settling phase visible.
    cfg.radio.interference_scale = 30.0;

    let (scenario, _, graph) = cfg.build_instance(cfg.seed).unwrap();
    let trace = run_dynamics(
        &scenario,
        &graph,
        initial_profile(&scenario),
        &cfg.dynamics(),
    )
    .unwrap();

    println!("round potential offloaders  mean_power_mW");
    for r in &trace.rounds {
        let transmitters = r.strategies.iter().filter(|s| s.lambda > 0.0).count();
        let mean_power = if transmitters > 0 {
            r.strategies.iter().map(|s| s.power_w).sum::<f64>() / transmitters as f64
        } else {
            0.0
        };
        println!(
            "{:5} {:9.5} {:10} {:14.2}",
            r.round,
            r.potential,
            r.offloaders,
            mean_power * 1e3
        );
    }
    println!(
        "\nconverged={} in {} changing rounds; every offload ratio is 0 or 1 and each user holds exactly one active resource",
        trace.converged, trace.rounds_to_converge
    );

    let path = std::path::Path::new("out/trace.csv");
    output::write_atomic(path, &output::trace_csv(&trace)).unwrap();
    println!("full per-user trace written to {}", path.display());
}
