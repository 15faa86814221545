//! How task size drives the offloading decision.
//!
//! Two sweeps: growing the input data with fixed per-bit intensity leaves
//! the equilibrium unchanged (every cost term scales together), while
//! growing the compute workload at fixed input size makes local execution
//! relatively dearer and pushes users toward the edge server.
//!
//! ```bash
//! cargo run --release -p mec-offload --example workload_sweep
//! ```

use mec_offload::config::ExperimentConfig;
use mec_offload::sweep::{run_sweep, SweepAxis};

fn median(mut values: Vec<f64>) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

fn report(points: &[mec_offload::sweep::SweepPoint], values: &[f64], label: &str) {
    println!("{label:>12}  median_offloaders  median_potential");
    for &v in values {
        let sel: Vec<&mec_offload::sweep::SweepPoint> =
            points.iter().filter(|p| p.axis_value == v).collect();
        println!(
            "{:12.2e} {:18} {:17.4}",
            v,
            median(sel.iter().map(|p| p.offloaders as f64).collect()),
            median(sel.iter().map(|p| p.final_potential).collect()),
        );
    }
    println!();
}

fn main() {
    let mut cfg = ExperimentConfig::default_preset();
    cfg.user_defaults.alpha_t = 1.0;
    cfg.radio.interference_scale = 30.0;
    let seeds: Vec<u64> = (0..10).collect();

    let bits = [2.5e6, 5e6, 1e7, 2e7];
    let points = run_sweep(&cfg, SweepAxis::InputBits, &bits, &seeds).unwrap();
    report(&points, &bits, "input_bits");

    let cycles = [2.5e8, 5e8, 1e9, 2e9, 4e9];
    let points = run_sweep(&cfg, SweepAxis::WorkloadCycles, &cycles, &seeds).unwrap();
    report(&points, &cycles, "cycles");
}
