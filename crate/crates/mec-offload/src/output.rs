//! Plot-ready artifacts: the per-round trace CSV, run summary JSON, and
//! sweep CSVs.
//!
//! Floats are written with Rust's shortest round-trip formatting, so
//! identical runs produce byte-identical files and re-parsing recovers the
//! exact values.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::engine::GameTrace;
use crate::error::{Error, Result};
use crate::sweep::{PoaSweepRow, SweepPoint};

/// Machine-readable outcome of one dynamics run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub converged: bool,
    pub rounds_to_converge: usize,
    pub final_potential: f64,
    pub offloaders: usize,
}

impl RunSummary {
    pub fn from_trace(trace: &GameTrace) -> Self {
        RunSummary {
            converged: trace.converged,
            rounds_to_converge: trace.rounds_to_converge,
            final_potential: trace.final_potential(),
            offloaders: trace.final_record().offloaders,
        }
    }
}

/// Render the trace as CSV: one row per round with the potential, the
/// offloader count, and each user's strategy, overhead, and utility.
pub fn trace_csv(trace: &GameTrace) -> String {
    let users = trace
        .rounds
        .first()
        .map(|r| r.strategies.len())
        .unwrap_or(0);
    let mut out = String::new();
    out.push_str("round,potential,offloaders");
    for u in 0..users {
        let _ = write!(
            out,
            ",lambda_{u},power_w_{u},freq_hz_{u},overhead_{u},utility_{u}"
        );
    }
    out.push('\n');
    for r in &trace.rounds {
        let _ = write!(out, "{},{},{}", r.round, r.potential, r.offloaders);
        for u in 0..users {
            let s = &r.strategies[u];
            let _ = write!(
                out,
                ",{},{},{},{},{}",
                s.lambda, s.power_w, s.freq_hz, r.overheads[u], r.utilities[u]
            );
        }
        out.push('\n');
    }
    out
}

/// Pretty JSON for a serializable report, newline-terminated.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Render sweep results as CSV, one row per (axis value, seed).
pub fn sweep_csv(axis: &str, points: &[SweepPoint]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{axis},seed,converged,rounds_to_converge,final_potential,offloaders"
    );
    for p in points {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            p.axis_value, p.seed, p.converged, p.rounds, p.final_potential, p.offloaders
        );
    }
    out
}

/// Render the interference sweep as CSV, one row per multiplier.
pub fn poa_sweep_csv(rows: &[PoaSweepRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "interference_multiplier,inv_sinr,poa,bound_upper,ne_total,opt_total"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.multiplier, r.inv_sinr, r.poa, r.bound_upper, r.ne_total, r.opt_total
        );
    }
    out
}

/// Write a file atomically: contents land under the final name only once
/// they are complete, so concurrent sweep workers never expose partial
/// artifacts.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let display = path.display().to_string();
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(&display, e))?;
        }
    }
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, contents).map_err(|e| Error::io(&display, e))?;
    std::fs::rename(&tmp, path).map_err(|e| Error::io(&display, e))?;
    Ok(())
}
