//! Network overhead and convergence speed as the network densifies from 20
//! to 50 users, aggregated over seeds.
//!
//! ```bash
//! cargo run --release -p mec-offload --example density_sweep
//! ```

use mec_offload::config::ExperimentConfig;
use mec_offload::output;
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

fn main() {
    let mut cfg = ExperimentConfig::default_preset();
    cfg.user_defaults.alpha_t = 1.0;
    cfg.radio.interference_scale = 30.0;

    let values = [4.0, 6.0, 8.0, 10.0];
    let seeds: Vec<u64> = (0..10).collect();
    let points = run_sweep(&cfg, SweepAxis::UsersPerCell, &values, &seeds).unwrap();

    println!("users  median_potential  median_offloaders  median_rounds");
    for &v in &values {
        let of = |f: fn(&mec_offload::sweep::SweepPoint) -> f64| {
            median(
                points
                    .iter()
                    .filter(|p| p.axis_value == v)
                    .map(f)
                    .collect(),
            )
        };
        println!(
            "{:5} {:17.4} {:18} {:14}",
            v as usize * cfg.topology.num_bs,
            of(|p| p.final_potential),
            of(|p| p.offloaders as f64),
            of(|p| p.rounds as f64),
        );
    }

    let path = std::path::Path::new("out/sweep_users_per_cell.csv");
    output::write_atomic(path, &output::sweep_csv("users_per_cell", &points)).unwrap();
    println!("\nper-seed rows written to {}", path.display());
}
