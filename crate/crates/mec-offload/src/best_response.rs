//! Per-user exact best responses against a frozen opponent profile.
//!
//! The offload ratio is binary at the optimum, the local CPU frequency has a
//! closed form, and the transmit power minimizes a transcendental
//! transmission-overhead objective whose stationary points are found by
//! multistart Newton iteration with a sign-change bisection fallback. The
//! boundary powers always stay in the candidate set, so the search cannot
//! fail.

use serde::{Deserialize, Serialize};

use crate::overhead::{altruistic_utility, Strategy, StrategyProfile};
use crate::scenario::{InterferenceGraph, Scenario};

/// Tuning knobs for the interior stationary-point search.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct PowerSearchConfig {
    /// Iteration cap per Newton seed.
    pub newton_max_iter: usize,
    /// A point counts as stationary when the objective derivative is below
    /// this magnitude.
    pub newton_tol: f64,
    /// Number of equispaced Newton seeds across the power box.
    pub multistart_count: usize,
    /// Grid size for the derivative sign-change bracketing fallback.
    pub fallback_grid: usize,
}

impl Default for PowerSearchConfig {
    fn default() -> Self {
        PowerSearchConfig {
            newton_max_iter: 60,
            newton_tol: 1e-9,
            multistart_count: 8,
            fallback_grid: 64,
        }
    }
}

/// Outcome of a best-response computation: the chosen strategy and the
/// utilities of the two offload branches it was selected from.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BestResponse {
    pub strategy: Strategy,
    /// Utility of the full-offload branch at its best power.
    pub u_one: f64,
    /// Utility of the all-local branch at the best frequency.
    pub u_zero: f64,
}

impl BestResponse {
    /// Utility actually achieved by the returned strategy.
    pub fn utility(&self) -> f64 {
        self.u_one.min(self.u_zero)
    }
}

/// Optimal local CPU frequency for the all-local branch.
///
/// Balancing weighted latency against weighted dynamic energy gives
/// `(alpha_t / (2 alpha_e kappa))^(1/3)`, clamped into the device's
/// frequency range. Latency-only users run flat out; energy-only users drop
/// to the device's minimum operating frequency, which keeps the task
/// finishing in finite time.
pub fn best_cpu_frequency(n: usize, scenario: &Scenario) -> f64 {
    let p = &scenario.profiles[n];
    if p.alpha_e == 0.0 {
        return p.f_max_hz;
    }
    (p.alpha_t / (2.0 * p.alpha_e * p.kappa))
        .cbrt()
        .clamp(p.f_min_hz, p.f_max_hz)
}

/// The power-dependent part of the full-offload utility: own upload
/// latency/energy plus the upload overheads of every transmitting
/// out-neighbor, as a 1-D function of this user's transmit power.
struct TransmissionObjective {
    /// `input_bits * ln2 / bandwidth` of the deciding user.
    a: f64,
    alpha_t: f64,
    alpha_e: f64,
    /// Own gain over noise-plus-interference at the serving BS.
    c: f64,
    neighbors: Vec<NeighborTerm>,
}

/// One transmitting out-neighbor's upload overhead as seen from the
/// deciding user's power choice.
struct NeighborTerm {
    /// Weighted bit-time constant of the neighbor.
    b: f64,
    /// Neighbor's received signal power at its own BS.
    signal: f64,
    /// Noise plus all interference at the neighbor's BS except ours.
    base: f64,
    /// Our gain toward the neighbor's BS.
    coupling: f64,
}

impl TransmissionObjective {
    fn build(
        n: usize,
        profile: &StrategyProfile,
        graph: &InterferenceGraph,
        scenario: &Scenario,
    ) -> Self {
        let ln2 = std::f64::consts::LN_2;
        let omega = scenario.channel_bandwidth_hz;
        let own = &scenario.profiles[n];
        let noise = scenario.noise_power_w;

        // Interference at our own BS from transmitting in-neighbors; our own
        // lambda plays no role here.
        let gamma: f64 = graph.in_neighbors[n]
            .iter()
            .filter(|&&i| profile[i].lambda > 0.0)
            .map(|&i| profile[i].power_w * scenario.interference_gain(i, scenario.cell_of[n]))
            .sum();

        let neighbors = graph.out_neighbors[n]
            .iter()
            .filter(|&&i| profile[i].lambda > 0.0)
            .map(|&i| {
                let s = profile[i];
                let other = &scenario.profiles[i];
                let bs = scenario.cell_of[i];
                let base: f64 = noise
                    + graph.in_neighbors[i]
                        .iter()
                        .filter(|&&j| j != n && profile[j].lambda > 0.0)
                        .map(|&j| profile[j].power_w * scenario.interference_gain(j, bs))
                        .sum::<f64>();
                NeighborTerm {
                    b: s.lambda
                        * scenario.tasks[i].input_bits
                        * (other.alpha_t + other.alpha_e * s.power_w)
                        * ln2
                        / omega,
                    signal: s.power_w * scenario.own_gain(i),
                    base,
                    coupling: scenario.interference_gain(n, bs),
                }
            })
            .collect();

        TransmissionObjective {
            a: scenario.tasks[n].input_bits * ln2 / omega,
            alpha_t: own.alpha_t,
            alpha_e: own.alpha_e,
            c: scenario.own_gain(n) / (noise + gamma),
            neighbors,
        }
    }

    fn value(&self, p: f64) -> f64 {
        let mut v = self.a * (self.alpha_t + self.alpha_e * p) / (1.0 + self.c * p).ln();
        for t in &self.neighbors {
            let x = t.base + t.coupling * p;
            v += t.b / ((x + t.signal) / x).ln();
        }
        v
    }

    fn derivative(&self, p: f64) -> f64 {
        let len = (1.0 + self.c * p).ln();
        let u = self.alpha_t + self.alpha_e * p;
        let v = self.c / (1.0 + self.c * p);
        let mut d = self.a * (self.alpha_e * len - u * v) / (len * len);
        for t in &self.neighbors {
            let x = t.base + t.coupling * p;
            let y = x + t.signal;
            let g = (y / x).ln();
            d += t.b * t.coupling * t.signal / (g * g * x * y);
        }
        d
    }

    fn second_derivative(&self, p: f64) -> f64 {
        let len = (1.0 + self.c * p).ln();
        let u = self.alpha_t + self.alpha_e * p;
        let v = self.c / (1.0 + self.c * p);
        let mut d =
            self.a * (u * v * v * len - 2.0 * self.alpha_e * v * len + 2.0 * u * v * v)
                / (len * len * len);
        for t in &self.neighbors {
            let x = t.base + t.coupling * p;
            let y = x + t.signal;
            let g = (y / x).ln();
            d += t.b * t.coupling * t.coupling * t.signal / (g * g * x * y)
                * (2.0 * t.signal / (g * x * y) - 1.0 / x - 1.0 / y);
        }
        d
    }
}

/// Transmission overhead of user `n` at power `p` with its own offload
/// ratio treated as 1 and everyone else frozen: the objective the best
/// transmit power minimizes.
pub fn transmission_overhead(
    n: usize,
    p: f64,
    profile: &StrategyProfile,
    graph: &InterferenceGraph,
    scenario: &Scenario,
) -> f64 {
    TransmissionObjective::build(n, profile, graph, scenario).value(p)
}

/// Derivative of [`transmission_overhead`] in the power argument, in closed
/// form.
pub fn transmission_overhead_derivative(
    n: usize,
    p: f64,
    profile: &StrategyProfile,
    graph: &InterferenceGraph,
    scenario: &Scenario,
) -> f64 {
    TransmissionObjective::build(n, profile, graph, scenario).derivative(p)
}

/// All interior stationary points the search finds, sorted ascending.
fn stationary_points(
    obj: &TransmissionObjective,
    p_min: f64,
    p_max: f64,
    cfg: &PowerSearchConfig,
) -> Vec<f64> {
    let range = p_max - p_min;
    let mut roots: Vec<f64> = Vec::new();
    let mut push_root = |p: f64| {
        if p.is_finite()
            && p >= p_min
            && p <= p_max
            && !roots.iter().any(|&r| (r - p).abs() <= 1e-12 * range.max(p_max))
        {
            roots.push(p);
        }
    };

    if range <= 0.0 {
        return roots;
    }

    // Multistart Newton on the derivative.
    for k in 0..cfg.multistart_count {
        let mut p = p_min + range * (k as f64 + 0.5) / cfg.multistart_count as f64;
        let mut converged = false;
        for _ in 0..cfg.newton_max_iter {
            let h = obj.derivative(p);
            if h.abs() <= cfg.newton_tol {
                converged = true;
                break;
            }
            let h2 = obj.second_derivative(p);
            if !h2.is_finite() || h2 == 0.0 {
                break;
            }
            let next = p - h / h2;
            if !next.is_finite() || next < p_min || next > p_max {
                break;
            }
            if (next - p).abs() <= f64::EPSILON * p_max {
                p = next;
                converged = obj.derivative(p).abs() <= cfg.newton_tol;
                break;
            }
            p = next;
        }
        if converged {
            push_root(p);
        }
    }

    // Coarse-grid sign-change bracketing catches roots Newton skipped.
    let grid = cfg.fallback_grid.max(2);
    let mut prev_p = p_min;
    let mut prev_h = obj.derivative(prev_p);
    for k in 1..=grid {
        let p = p_min + range * k as f64 / grid as f64;
        let h = obj.derivative(p);
        if prev_h == 0.0 {
            push_root(prev_p);
        } else if prev_h.signum() != h.signum() && h != 0.0 {
            let (mut lo, mut hi, mut h_lo) = (prev_p, p, prev_h);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                let h_mid = obj.derivative(mid);
                if h_mid == 0.0 || (hi - lo) <= f64::EPSILON * p_max {
                    break;
                }
                if h_mid.signum() == h_lo.signum() {
                    lo = mid;
                    h_lo = h_mid;
                } else {
                    hi = mid;
                }
            }
            push_root(0.5 * (lo + hi));
        }
        prev_p = p;
        prev_h = h;
    }

    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots
}

/// Best transmit power for the full-offload branch of user `n` against the
/// frozen profile: the candidate minimizing the transmission overhead among
/// the power-box boundaries, every interior stationary point found, and the
/// user's current power when it is already transmitting.
pub fn best_transmit_power(
    n: usize,
    profile: &StrategyProfile,
    graph: &InterferenceGraph,
    scenario: &Scenario,
    cfg: &PowerSearchConfig,
) -> f64 {
    let prof = &scenario.profiles[n];
    let obj = TransmissionObjective::build(n, profile, graph, scenario);

    let mut candidates = stationary_points(&obj, prof.p_min_w, prof.p_max_w, cfg);
    candidates.push(prof.p_min_w);
    candidates.push(prof.p_max_w);
    // Keeping the current power in the running makes a best-response update
    // never worse than standing still, which the descent of the dynamics
    // relies on.
    if profile[n].lambda > 0.0 {
        candidates.push(profile[n].power_w);
    }
    candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut best = candidates[0];
    let mut best_value = obj.value(best);
    for &p in &candidates[1..] {
        let v = obj.value(p);
        if v < best_value {
            best = p;
            best_value = v;
        }
    }
    best
}

/// Exact best response of user `n` against the rest of the profile.
///
/// Evaluates the full-offload branch at its best power and the all-local
/// branch at the closed-form frequency, and returns the cheaper strategy.
/// Ties go to local execution, which spends no transmit energy.
pub fn best_response(
    n: usize,
    profile: &StrategyProfile,
    graph: &InterferenceGraph,
    scenario: &Scenario,
    cfg: &PowerSearchConfig,
) -> BestResponse {
    let offload = Strategy::offload(best_transmit_power(n, profile, graph, scenario, cfg));
    let local = Strategy::local(best_cpu_frequency(n, scenario));

    let u_one = utility_with(n, offload, profile, graph, scenario);
    let u_zero = utility_with(n, local, profile, graph, scenario);

    BestResponse {
        strategy: if u_one < u_zero { offload } else { local },
        u_one,
        u_zero,
    }
}

/// Altruistic utility of user `n` with its own strategy replaced.
pub fn utility_with(
    n: usize,
    strategy: Strategy,
    profile: &StrategyProfile,
    graph: &InterferenceGraph,
    scenario: &Scenario,
) -> f64 {
    let mut trial = profile.clone();
    trial.strategies[n] = strategy;
    altruistic_utility(n, &trial, graph, scenario)
}
