//! Price of anarchy against growing inter-cell interference, aggregated
//! over seeds. The x-axis is the reciprocal of the summed equilibrium
//! SINR, so larger values mean a noisier network.
//!
//! ```bash
//! cargo run --release -p mec-offload --example interference_sweep
//! ```

use mec_offload::config::ExperimentConfig;
use mec_offload::output;
use mec_offload::sweep::poa_interference_sweep;

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
    cfg.topology.num_bs = 2;
    cfg.topology.users_per_cell = 2;
    cfg.topology.num_channels = 2;
    cfg.user_defaults.alpha_t = 1.0;

    let multipliers = [0.25, 1.0, 4.0, 8.0, 16.0, 24.0, 32.0];
    let seeds = 10u64;

    let mut per_mult: Vec<(Vec<f64>, Vec<f64>)> = vec![(Vec::new(), Vec::new()); multipliers.len()];
    let mut last_rows = Vec::new();
    for seed in 0..seeds {
        let rows = poa_interference_sweep(&cfg, &multipliers, seed).unwrap();
        for (k, row) in rows.iter().enumerate() {
            per_mult[k].0.push(row.poa);
            per_mult[k].1.push(row.inv_sinr);
        }
        last_rows = rows;
    }

    println!("multiplier  median_inv_sinr  median_poa  max_poa");
    for (k, &m) in multipliers.iter().enumerate() {
        let max_poa = per_mult[k].0.iter().cloned().fold(f64::MIN, f64::max);
        println!(
            "{:10} {:16.3e} {:11.6} {:8.4}",
            m,
            median(per_mult[k].1.clone()),
            median(per_mult[k].0.clone()),
            max_poa
        );
    }

    let path = std::path::Path::new("out/poa_sweep.csv");
    output::write_atomic(path, &output::poa_sweep_csv(&last_rows)).unwrap();
    println!("\nlast seed's sweep written to {}", path.display());
}
