//! Slotted best-response dynamics to a Nash equilibrium, with full
//! per-round traces, a fixed-point check, and a randomized verifier for the
//! exact-potential identity.
//!
//! The sequential schedule updates users one at a time against the live
//! profile; every update weakly lowers the network potential, so the
//! dynamics terminate. The parallel schedule commits all best responses
//! simultaneously against the previous round; it has no convergence
//! guarantee and instead detects oscillation by profile-repeat hashing.

use std::collections::hash_map::DefaultHasher;
use std::collections::VecDeque;
use std::hash::{Hash, Hasher};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::best_response::{best_response, PowerSearchConfig};
use crate::error::Result;
use crate::overhead::{altruistic_utility, potential, Strategy, StrategyProfile};
use crate::scenario::{InterferenceGraph, Scenario};

/// Update order of the best-response dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    /// Users update one at a time in index order against the live profile.
    /// Converges on every instance.
    Sequential,
    /// All users best-respond to the previous round simultaneously. May
    /// oscillate; cycles are detected and reported as non-convergence.
    Parallel,
}

impl std::str::FromStr for Schedule {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "sequential" => Ok(Schedule::Sequential),
            "parallel" => Ok(Schedule::Parallel),
            other => Err(format!(
                "unknown schedule {other:?} (expected sequential or parallel)"
            )),
        }
    }
}

/// Engine parameters for one dynamics run.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct DynamicsConfig {
    pub schedule: Schedule,
    /// Round cap before the run is declared non-convergent.
    pub max_rounds: usize,
    /// Power refinements narrower than this (watts) are never adopted.
    pub eps_power_w: f64,
    /// Power refinements are adopted only when they lower the deviator's
    /// utility by more than this. Keeps the dynamics from chasing nearly
    /// flat utility valleys forever, and makes a converged run certify the
    /// equilibrium at this tolerance.
    pub min_improvement: f64,
    pub power_search: PowerSearchConfig,
}

impl Default for DynamicsConfig {
    fn default() -> Self {
        DynamicsConfig {
            schedule: Schedule::Sequential,
            max_rounds: 500,
            eps_power_w: 1e-8,
            min_improvement: 1e-9,
            power_search: PowerSearchConfig::default(),
        }
    }
}

/// Snapshot of one round of the dynamics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IterationRecord {
    pub round: usize,
    pub strategies: Vec<Strategy>,
    /// Per-user total overhead at this round.
    pub overheads: Vec<f64>,
    /// Per-user altruistic utility at this round.
    pub utilities: Vec<f64>,
    /// Network potential; always the sum of `overheads`.
    pub potential: f64,
    /// Number of users fully offloading.
    pub offloaders: usize,
}

/// Full record of a dynamics run. `rounds[0]` is the initial profile.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameTrace {
    pub rounds: Vec<IterationRecord>,
    pub converged: bool,
    /// Number of rounds that changed at least one strategy before the
    /// no-change round certified the equilibrium.
    pub rounds_to_converge: usize,
}

impl GameTrace {
    pub fn final_record(&self) -> &IterationRecord {
        self.rounds.last().expect("trace always has the initial round")
    }

    pub fn final_profile(&self) -> StrategyProfile {
        StrategyProfile::new(self.final_record().strategies.clone())
    }

    pub fn final_potential(&self) -> f64 {
        self.final_record().potential
    }
}

/// The initialization of the dynamics: everyone offloads at maximum power.
pub fn initial_profile(scenario: &Scenario) -> StrategyProfile {
    StrategyProfile::new(
        scenario
            .profiles
            .iter()
            .map(|p| Strategy::offload(p.p_max_w))
            .collect(),
    )
}

fn snapshot(
    round: usize,
    profile: &StrategyProfile,
    graph: &InterferenceGraph,
    scenario: &Scenario,
) -> IterationRecord {
    let n = profile.len();
    let overheads: Vec<f64> = (0..n)
        .map(|u| crate::overhead::total_overhead(u, profile, graph, scenario))
        .collect();
    let utilities: Vec<f64> = (0..n)
        .map(|u| {
            overheads[u]
                + graph.out_neighbors[u]
                    .iter()
                    .map(|&i| overheads[i])
                    .sum::<f64>()
        })
        .collect();
    IterationRecord {
        round,
        strategies: profile.strategies.clone(),
        potential: overheads.iter().sum(),
        offloaders: profile
            .strategies
            .iter()
            .filter(|s| s.lambda == 1.0)
            .count(),
        overheads,
        utilities,
    }
}

/// Whether user `u` should adopt its best response.
///
/// Branch changes (offload ratio or frequency) always adopt. A pure power
/// refinement adopts only when it is wider than `eps_power_w` and buys more
/// than `min_improvement` utility; anything smaller leaves the profile
/// alone, so a no-adoption round certifies that nobody can improve by more
/// than `min_improvement`.
fn should_adopt(
    u: usize,
    br: &crate::best_response::BestResponse,
    profile: &StrategyProfile,
    graph: &InterferenceGraph,
    scenario: &Scenario,
    cfg: &DynamicsConfig,
) -> bool {
    let old = profile[u];
    let new = br.strategy;
    if old.lambda != new.lambda || old.freq_hz != new.freq_hz {
        return true;
    }
    if (old.power_w - new.power_w).abs() <= cfg.eps_power_w {
        return false;
    }
    let current = altruistic_utility(u, profile, graph, scenario);
    current - br.utility() > cfg.min_improvement
}

fn profile_hash(profile: &StrategyProfile) -> u64 {
    let mut h = DefaultHasher::new();
    for s in &profile.strategies {
        s.lambda.to_bits().hash(&mut h);
        s.power_w.to_bits().hash(&mut h);
        s.freq_hz.to_bits().hash(&mut h);
    }
    h.finish()
}

/// Run the best-response dynamics from a feasible initial profile until a
/// full round changes nothing, a cycle repeats (parallel schedule), or the
/// round cap is hit.
pub fn run_dynamics(
    scenario: &Scenario,
    graph: &InterferenceGraph,
    initial: StrategyProfile,
    cfg: &DynamicsConfig,
) -> Result<GameTrace> {
    initial.validate(scenario)?;
    let n = scenario.num_users();
    let mut profile = initial;
    let mut rounds = vec![snapshot(0, &profile, graph, scenario)];
    let mut recent = VecDeque::with_capacity(64);
    recent.push_back(profile_hash(&profile));

    for round in 1..=cfg.max_rounds {
        let mut changed = false;
        match cfg.schedule {
            Schedule::Sequential => {
                for u in 0..n {
                    let br = best_response(u, &profile, graph, scenario, &cfg.power_search);
                    if should_adopt(u, &br, &profile, graph, scenario, cfg) {
                        profile.strategies[u] = br.strategy;
                        changed = true;
                    }
                }
            }
            Schedule::Parallel => {
                let frozen = profile.clone();
                let adoptions: Vec<Option<Strategy>> = (0..n)
                    .map(|u| {
                        let br = best_response(u, &frozen, graph, scenario, &cfg.power_search);
                        should_adopt(u, &br, &frozen, graph, scenario, cfg)
                            .then_some(br.strategy)
                    })
                    .collect();
                for (u, adoption) in adoptions.into_iter().enumerate() {
                    if let Some(s) = adoption {
                        profile.strategies[u] = s;
                        changed = true;
                    }
                }
            }
        }
        rounds.push(snapshot(round, &profile, graph, scenario));

        if !changed {
            return Ok(GameTrace {
                rounds,
                converged: true,
                rounds_to_converge: round - 1,
            });
        }
        if cfg.schedule == Schedule::Parallel {
            let h = profile_hash(&profile);
            if recent.contains(&h) {
                return Ok(GameTrace {
                    rounds,
                    converged: false,
                    rounds_to_converge: round,
                });
            }
            if recent.len() == 64 {
                recent.pop_front();
            }
            recent.push_back(h);
        }
    }

    Ok(GameTrace {
        rounds,
        converged: false,
        rounds_to_converge: cfg.max_rounds,
    })
}

/// True iff no user can lower its utility by more than `tol` through any
/// unilateral deviation, tested against the exact best response.
pub fn is_nash(
    profile: &StrategyProfile,
    scenario: &Scenario,
    graph: &InterferenceGraph,
    search: &PowerSearchConfig,
    tol: f64,
) -> bool {
    (0..profile.len()).all(|u| {
        let current = altruistic_utility(u, profile, graph, scenario);
        let br = best_response(u, profile, graph, scenario, search);
        current <= br.utility() + tol
    })
}

/// Draw a random feasible strategy: local, full offload, or a partial
/// offload with both resources active.
pub fn random_strategy(rng: &mut ChaCha8Rng, scenario: &Scenario, user: usize) -> Strategy {
    let p = &scenario.profiles[user];
    match rng.gen_range(0..3u8) {
        0 => Strategy::local(rng.gen_range(p.f_min_hz..=p.f_max_hz)),
        1 => Strategy {
            lambda: 1.0,
            power_w: rng.gen_range(p.p_min_w..=p.p_max_w),
            freq_hz: if rng.gen_bool(0.5) {
                0.0
            } else {
                rng.gen_range(0.0..=p.f_max_hz)
            },
        },
        _ => Strategy {
            lambda: rng.gen_range(0.01..0.99),
            power_w: rng.gen_range(p.p_min_w..=p.p_max_w),
            freq_hz: rng.gen_range(p.f_min_hz..=p.f_max_hz),
        },
    }
}

/// Draw a full random feasible profile.
pub fn random_profile(rng: &mut ChaCha8Rng, scenario: &Scenario) -> StrategyProfile {
    StrategyProfile::new(
        (0..scenario.num_users())
            .map(|u| random_strategy(rng, scenario, u))
            .collect(),
    )
}

/// The seven change patterns of a `(lambda, power, frequency)` deviation,
/// as bitmasks.
const DEVIATION_PATTERNS: [u8; 7] = [0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111];

/// Sample a feasible deviation for `user` that alters the components named
/// by `mask` (1 = lambda, 2 = power, 4 = frequency). Falls back to a full
/// resample when the coupling constraints make the masked pattern
/// infeasible from the current strategy.
fn random_deviation(
    rng: &mut ChaCha8Rng,
    scenario: &Scenario,
    current: Strategy,
    user: usize,
    mask: u8,
) -> Strategy {
    let p = &scenario.profiles[user];
    for _ in 0..32 {
        let mut next = current;
        if mask & 0b001 != 0 {
            next.lambda = match rng.gen_range(0..3u8) {
                0 => 0.0,
                1 => 1.0,
                _ => rng.gen_range(0.01..0.99),
            };
            // Keep the coupled fields consistent where the pattern allows.
            if next.lambda == 0.0 && mask & 0b010 == 0 && current.power_w != 0.0 {
                continue;
            }
            if next.lambda > 0.0 && mask & 0b010 == 0 && current.power_w == 0.0 {
                continue;
            }
        }
        if mask & 0b010 != 0 {
            next.power_w = if next.lambda == 0.0 {
                0.0
            } else {
                rng.gen_range(p.p_min_w..=p.p_max_w)
            };
        }
        if mask & 0b100 != 0 {
            next.freq_hz = if next.lambda == 1.0 && rng.gen_bool(0.5) {
                0.0
            } else {
                rng.gen_range(p.f_min_hz..=p.f_max_hz)
            };
        }
        if next != current && next.validate(user, p).is_ok() {
            return next;
        }
    }
    // Full resample always terminates: the strategy space has no isolated
    // points.
    loop {
        let next = random_strategy(rng, scenario, user);
        if next != current {
            return next;
        }
    }
}

/// One randomized deviation trial, kept serializable so violations can be
/// replayed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeviationTrial {
    pub trial: usize,
    pub user: usize,
    /// Bitmask of the changed components (1 = lambda, 2 = power, 4 = freq).
    pub pattern: u8,
    pub before: Strategy,
    pub after: Strategy,
    pub delta_utility: f64,
    pub delta_potential: f64,
    /// `|delta_utility - delta_potential| / max(1, |delta_potential|)`.
    pub residual: f64,
}

/// Result of the randomized exact-potential verification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PotentialCheck {
    pub trials: usize,
    /// Largest normalized residual observed.
    pub max_residual: f64,
    /// Trials whose residual exceeded the tolerance, kept for replay.
    pub violations: Vec<DeviationTrial>,
}

impl PotentialCheck {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Tolerance of the exact-potential identity: floating-point noise only.
pub const POTENTIAL_TOL: f64 = 1e-9;

/// Check the exact-potential identity on randomized (profile, user,
/// deviation) triples cycling through all seven change patterns: every
/// unilateral utility change must equal the potential change.
pub fn verify_exact_potential(
    scenario: &Scenario,
    graph: &InterferenceGraph,
    trials: usize,
    seed: u64,
) -> PotentialCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_residual: f64 = 0.0;
    let mut violations = Vec::new();

    for trial in 0..trials {
        let before = random_profile(&mut rng, scenario);
        let user = rng.gen_range(0..scenario.num_users());
        let mask = DEVIATION_PATTERNS[trial % DEVIATION_PATTERNS.len()];
        let deviated = random_deviation(&mut rng, scenario, before[user], user, mask);
        let mut after = before.clone();
        after.strategies[user] = deviated;

        let delta_utility = altruistic_utility(user, &after, graph, scenario)
            - altruistic_utility(user, &before, graph, scenario);
        let delta_potential =
            potential(&after, graph, scenario) - potential(&before, graph, scenario);
        let residual =
            (delta_utility - delta_potential).abs() / delta_potential.abs().max(1.0);

        max_residual = max_residual.max(residual);
        if residual > POTENTIAL_TOL {
            violations.push(DeviationTrial {
                trial,
                user,
                pattern: mask,
                before: before[user],
                after: deviated,
                delta_utility,
                delta_potential,
                residual,
            });
        }
    }

    PotentialCheck {
        trials,
        max_residual,
        violations,
    }
}
