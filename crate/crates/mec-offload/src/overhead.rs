//! Cost model: transmission rates under inter-cell interference, the
//! latency/energy overhead of local and offloaded execution, the altruistic
//! utility, and the network potential.
//!
//! All evaluators are pure functions of a strategy profile over immutable
//! scenario data. Overheads blend seconds and joules through the per-user
//! weights without any normalization constant, so their absolute scale
//! depends on the task sizes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::{InterferenceGraph, Scenario, UserProfile};

/// One user's decision triple.
///
/// The feasible region couples the fields: a user that keeps its task local
/// (`lambda == 0`) must not transmit, a user that offloads anything must
/// transmit inside its power box, and a user with local work left
/// (`lambda < 1`) needs a positive CPU frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Strategy {
    /// Fraction of the workload sent to the edge server, in `[0, 1]`.
    pub lambda: f64,
    /// Transmit power in watts.
    pub power_w: f64,
    /// Local CPU frequency in cycles/s.
    pub freq_hz: f64,
}

impl Strategy {
    /// Fully local execution at the given CPU frequency.
    pub fn local(freq_hz: f64) -> Self {
        Strategy {
            lambda: 0.0,
            power_w: 0.0,
            freq_hz,
        }
    }

    /// Full offload at the given transmit power.
    pub fn offload(power_w: f64) -> Self {
        Strategy {
            lambda: 1.0,
            power_w,
            freq_hz: 0.0,
        }
    }

    /// Check this strategy against one user's feasible region.
    pub fn validate(&self, user: usize, profile: &UserProfile) -> Result<()> {
        let fail = |reason: String| Err(Error::InfeasibleStrategy { user, reason });
        if !(0.0..=1.0).contains(&self.lambda) {
            return fail(format!("lambda {} outside [0, 1]", self.lambda));
        }
        if self.lambda == 0.0 {
            if self.power_w != 0.0 {
                return fail(format!(
                    "lambda = 0 requires power 0, got {} W",
                    self.power_w
                ));
            }
        } else if self.power_w < profile.p_min_w || self.power_w > profile.p_max_w {
            return fail(format!(
                "power {} W outside [{}, {}]",
                self.power_w, profile.p_min_w, profile.p_max_w
            ));
        }
        if self.freq_hz < 0.0 || self.freq_hz > profile.f_max_hz {
            return fail(format!(
                "frequency {} Hz outside [0, {}]",
                self.freq_hz, profile.f_max_hz
            ));
        }
        if self.lambda < 1.0 && self.freq_hz == 0.0 {
            return fail("local work remains but frequency is 0".into());
        }
        Ok(())
    }
}

/// The strategies of every user, indexed like the scenario's users.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyProfile {
    pub strategies: Vec<Strategy>,
}

impl StrategyProfile {
    pub fn new(strategies: Vec<Strategy>) -> Self {
        StrategyProfile { strategies }
    }

    pub fn len(&self) -> usize {
        self.strategies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strategies.is_empty()
    }

    /// Validate every user's strategy against its profile.
    pub fn validate(&self, scenario: &Scenario) -> Result<()> {
        if self.len() != scenario.num_users() {
            return Err(Error::InvalidConfig(format!(
                "profile has {} strategies for {} users",
                self.len(),
                scenario.num_users()
            )));
        }
        for (user, s) in self.strategies.iter().enumerate() {
            s.validate(user, &scenario.profiles[user])?;
        }
        Ok(())
    }
}

impl std::ops::Index<usize> for StrategyProfile {
    type Output = Strategy;
    fn index(&self, user: usize) -> &Strategy {
        &self.strategies[user]
    }
}

/// Aggregate interference power (watts) received at user `n`'s serving base
/// station from its transmitting in-neighbors.
pub fn interference_power(
    n: usize,
    profile: &StrategyProfile,
    graph: &InterferenceGraph,
    scenario: &Scenario,
) -> f64 {
    let bs = scenario.cell_of[n];
    graph.in_neighbors[n]
        .iter()
        .filter(|&&i| profile[i].lambda > 0.0)
        .map(|&i| profile[i].power_w * scenario.interference_gain(i, bs))
        .sum()
}

/// Signal-to-interference-plus-noise ratio of user `n`'s uplink; 0 for a
/// silent user.
pub fn sinr(
    n: usize,
    profile: &StrategyProfile,
    graph: &InterferenceGraph,
    scenario: &Scenario,
) -> f64 {
    let gamma = interference_power(n, profile, graph, scenario);
    profile[n].power_w * scenario.own_gain(n) / (scenario.noise_power_w + gamma)
}

/// Shannon uplink rate (bits/s) of user `n` under the current profile.
///
/// Non-transmitting users get rate 0; callers never divide by this rate for
/// them because their transmission terms are short-circuited.
pub fn transmission_rate(
    n: usize,
    profile: &StrategyProfile,
    graph: &InterferenceGraph,
    scenario: &Scenario,
) -> f64 {
    scenario.channel_bandwidth_hz * (1.0 + sinr(n, profile, graph, scenario)).log2()
}

/// Overhead of running the full task locally at frequency `freq_hz`:
/// weighted latency plus weighted dynamic CPU energy. Callers scale by the
/// local workload fraction for partial offloads.
pub fn local_overhead(n: usize, freq_hz: f64, scenario: &Scenario) -> f64 {
    debug_assert!(freq_hz > 0.0, "local work needs a positive frequency");
    let w = scenario.tasks[n].workload_cycles();
    let p = &scenario.profiles[n];
    p.alpha_t * (w / freq_hz) + p.alpha_e * p.kappa * w * freq_hz * freq_hz
}

/// Overhead of the offloaded share: upload latency and energy plus the edge
/// server's execution latency and energy, all proportional to the offloaded
/// fraction. Exactly 0 for `lambda == 0`, with no rate evaluated.
pub fn cloud_overhead(
    n: usize,
    profile: &StrategyProfile,
    graph: &InterferenceGraph,
    scenario: &Scenario,
) -> f64 {
    let s = profile[n];
    if s.lambda == 0.0 {
        return 0.0;
    }
    let rate = transmission_rate(n, profile, graph, scenario);
    debug_assert!(rate > 0.0, "transmitting user must have a positive rate");
    let task = scenario.tasks[n];
    let p = &scenario.profiles[n];
    let bits = s.lambda * task.input_bits;
    let cycles = s.lambda * task.workload_cycles();
    let fc = scenario.cloud_frequency_hz;
    let upload_s = bits / rate;
    p.alpha_t * (upload_s + cycles / fc)
        + p.alpha_e * (s.power_w * upload_s + scenario.cloud_kappa * cycles * fc * fc)
}

/// Whole computation overhead of user `n`: offloaded share plus the local
/// share of the workload.
pub fn total_overhead(
    n: usize,
    profile: &StrategyProfile,
    graph: &InterferenceGraph,
    scenario: &Scenario,
) -> f64 {
    let s = profile[n];
    let mut total = cloud_overhead(n, profile, graph, scenario);
    if s.lambda < 1.0 {
        total += (1.0 - s.lambda) * local_overhead(n, s.freq_hz, scenario);
    }
    total
}

/// Altruistic utility of user `n`: its own overhead plus the overheads of
/// every user its transmission can reach.
pub fn altruistic_utility(
    n: usize,
    profile: &StrategyProfile,
    graph: &InterferenceGraph,
    scenario: &Scenario,
) -> f64 {
    let mut u = total_overhead(n, profile, graph, scenario);
    for &i in &graph.out_neighbors[n] {
        u += total_overhead(i, profile, graph, scenario);
    }
    u
}

/// Network potential: the sum of every user's overhead. Any unilateral
/// deviation moves this by exactly the deviator's utility change.
pub fn potential(
    profile: &StrategyProfile,
    graph: &InterferenceGraph,
    scenario: &Scenario,
) -> f64 {
    (0..profile.len())
        .map(|n| total_overhead(n, profile, graph, scenario))
        .sum()
}
