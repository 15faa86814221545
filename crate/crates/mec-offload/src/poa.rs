//! Centralized baseline and price-of-anarchy measurement.
//!
//! The continuous joint problem is NP-hard, so the centralized optimum is
//! taken over a discretized candidate space: each user either computes
//! locally at its closed-form frequency or offloads at one of a grid of
//! powers, optionally augmented with its equilibrium power so the
//! equilibrium profile is always a candidate. That construction keeps the
//! measured price of anarchy at least 1 by design and makes the grid error
//! transparent.

use serde::{Deserialize, Serialize};

use crate::best_response::{best_cpu_frequency, PowerSearchConfig};
use crate::engine::is_nash;
use crate::error::{Error, Result};
use crate::overhead::{altruistic_utility, potential, Strategy, StrategyProfile};
use crate::scenario::{InterferenceGraph, Scenario};

/// The power discretization used for an exhaustive search.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GridSpec {
    /// Number of grid powers per offloading candidate.
    pub power_points: usize,
    /// Whether the equilibrium powers were added to the candidate set.
    pub ne_augmented: bool,
}

/// Price-of-anarchy measurement on one instance.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PoaReport {
    /// Total utility at the equilibrium reached by the dynamics.
    pub ne_total: f64,
    /// Total utility at the centralized optimum.
    pub opt_total: f64,
    /// `ne_total / opt_total`.
    pub poa: f64,
    /// Closed-form upper bound evaluated at the equilibrium profile.
    pub bound_upper: f64,
    pub grid: GridSpec,
}

/// Per-user candidate strategies for the exhaustive search.
pub(crate) fn candidate_set(
    scenario: &Scenario,
    user: usize,
    grid_points: usize,
    ne_hint: Option<&StrategyProfile>,
) -> Vec<Strategy> {
    let prof = &scenario.profiles[user];
    let grid_points = grid_points.max(2);
    let mut candidates = Vec::with_capacity(grid_points + 2);
    candidates.push(Strategy::local(best_cpu_frequency(user, scenario)));
    for k in 0..grid_points {
        let p = prof.p_min_w
            + (prof.p_max_w - prof.p_min_w) * k as f64 / (grid_points - 1) as f64;
        candidates.push(Strategy::offload(p));
    }
    if let Some(ne) = ne_hint {
        let s = ne[user];
        if s.lambda > 0.0 && !candidates.iter().any(|c| c.power_w == s.power_w) {
            candidates.push(Strategy::offload(s.power_w));
        }
    }
    candidates
}

/// Visit every profile in the cross product of the candidate sets, in
/// lexicographic candidate order.
fn for_each_profile(
    candidates: &[Vec<Strategy>],
    mut visit: impl FnMut(&StrategyProfile),
) {
    let n = candidates.len();
    let mut digits = vec![0usize; n];
    let mut profile =
        StrategyProfile::new(candidates.iter().map(|c| c[0]).collect::<Vec<_>>());
    loop {
        visit(&profile);
        // Advance the odometer, least-significant digit last.
        let mut pos = n;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < candidates[pos].len() {
                profile.strategies[pos] = candidates[pos][digits[pos]];
                break;
            }
            digits[pos] = 0;
            profile.strategies[pos] = candidates[pos][0];
        }
    }
}

/// Exhaustively minimize the total overhead over the discretized candidate
/// space. Ties break toward the lexicographically first profile.
///
/// The candidate space has `prod_n (1 + grid + [ne offloads])` profiles;
/// the instance is refused above `exhaustive_limit` users.
pub fn centralized_optimum(
    scenario: &Scenario,
    graph: &InterferenceGraph,
    grid_points: usize,
    ne_hint: Option<&StrategyProfile>,
    exhaustive_limit: usize,
) -> Result<StrategyProfile> {
    let n = scenario.num_users();
    if n > exhaustive_limit {
        return Err(Error::TooManyUsers {
            users: n,
            limit: exhaustive_limit,
        });
    }
    let candidates: Vec<Vec<Strategy>> = (0..n)
        .map(|u| candidate_set(scenario, u, grid_points, ne_hint))
        .collect();

    let mut best: Option<(f64, StrategyProfile)> = None;
    for_each_profile(&candidates, |profile| {
        let phi = potential(profile, graph, scenario);
        if best.as_ref().map_or(true, |(b, _)| phi < *b) {
            best = Some((phi, profile.clone()));
        }
    });
    Ok(best.expect("candidate space is never empty").1)
}

/// Total utility of a profile: the sum of every user's altruistic utility.
pub fn total_utility(
    profile: &StrategyProfile,
    graph: &InterferenceGraph,
    scenario: &Scenario,
) -> f64 {
    (0..profile.len())
        .map(|u| altruistic_utility(u, profile, graph, scenario))
        .sum()
}

/// Ratio of total utility at the equilibrium over total utility at the
/// centralized optimum.
pub fn price_of_anarchy(
    ne_profile: &StrategyProfile,
    opt_profile: &StrategyProfile,
    scenario: &Scenario,
    graph: &InterferenceGraph,
) -> f64 {
    total_utility(ne_profile, graph, scenario) / total_utility(opt_profile, graph, scenario)
}

/// Closed-form upper bound on the price of anarchy, evaluated at an
/// equilibrium profile.
///
/// Both sides weight each user by one plus its interference in-degree, the
/// multiplicity its overhead carries in the total utility. The numerator
/// charges every user a ceiling on its equilibrium overhead: offloaders
/// upload against every in-neighbor transmitting at the strongest feasible
/// in-neighbor power, local users run at maximum frequency. The
/// denominator charges the floor any feasible profile can reach: the
/// cheaper of an interference-free upload at the best standalone power and
/// local execution at the optimal frequency. Ceilings dominate the
/// equilibrium terms and floors undercut any optimum, also when the
/// optimum offloads a different user set than the equilibrium, so the
/// measured ratio never exceeds the bound.
pub fn poa_upper_bound(
    scenario: &Scenario,
    graph: &InterferenceGraph,
    profile_at_ne: &StrategyProfile,
) -> f64 {
    let omega = scenario.channel_bandwidth_hz;
    let noise = scenario.noise_power_w;
    let fc = scenario.cloud_frequency_hz;
    let search = crate::best_response::PowerSearchConfig::default();
    let silent = StrategyProfile::new(
        scenario
            .profiles
            .iter()
            .map(|p| Strategy::local(p.f_min_hz))
            .collect(),
    );

    let mut numerator = 0.0;
    let mut denominator = 0.0;
    for n in 0..profile_at_ne.len() {
        let s = profile_at_ne[n];
        let prof = &scenario.profiles[n];
        let task = scenario.tasks[n];
        let w = task.workload_cycles();
        let weight = 1.0 + graph.in_neighbors[n].len() as f64;
        let cloud_fixed =
            prof.alpha_t * w / fc + prof.alpha_e * scenario.cloud_kappa * w * fc * fc;

        let ceiling = if s.lambda > 0.0 {
            let bs = scenario.cell_of[n];
            let signal = s.power_w * scenario.own_gain(n);
            let strongest_in = graph.in_neighbors[n]
                .iter()
                .map(|&j| scenario.profiles[j].p_max_w)
                .fold(0.0f64, f64::max);
            let worst_interference: f64 = graph.in_neighbors[n]
                .iter()
                .map(|&j| strongest_in * scenario.interference_gain(j, bs))
                .sum();
            let rate_worst = omega * (1.0 + signal / (noise + worst_interference)).log2();
            (prof.alpha_t + prof.alpha_e * s.power_w) * task.input_bits / rate_worst
                + cloud_fixed
        } else {
            let f_max = prof.f_max_hz;
            prof.alpha_t * w / f_max + prof.alpha_e * prof.kappa * w * f_max * f_max
        };

        // Interference-free upload at the best standalone power.
        let p_free =
            crate::best_response::best_transmit_power(n, &silent, graph, scenario, &search);
        let offload_floor =
            crate::best_response::transmission_overhead(n, p_free, &silent, graph, scenario)
                + cloud_fixed;
        let f_opt = best_cpu_frequency(n, scenario);
        let local_floor =
            prof.alpha_t * w / f_opt + prof.alpha_e * prof.kappa * w * f_opt * f_opt;
        let floor = offload_floor.min(local_floor);

        numerator += weight * ceiling;
        denominator += weight * floor;
    }
    numerator / denominator
}

/// Evaluate the full price-of-anarchy report for an equilibrium profile.
pub fn evaluate_poa(
    scenario: &Scenario,
    graph: &InterferenceGraph,
    ne_profile: &StrategyProfile,
    grid_points: usize,
    exhaustive_limit: usize,
) -> Result<PoaReport> {
    let opt = centralized_optimum(scenario, graph, grid_points, Some(ne_profile), exhaustive_limit)?;
    let ne_total = total_utility(ne_profile, graph, scenario);
    let opt_total = total_utility(&opt, graph, scenario);
    Ok(PoaReport {
        ne_total,
        opt_total,
        poa: ne_total / opt_total,
        bound_upper: poa_upper_bound(scenario, graph, ne_profile),
        grid: GridSpec {
            power_points: grid_points.max(2),
            ne_augmented: true,
        },
    })
}

/// Empirical checks around the claim that equilibria of this game minimize
/// the potential.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GlobalOptReport {
    pub potential_ne: f64,
    pub potential_opt: f64,
    /// Whether the dynamics' equilibrium matches the exhaustive minimum of
    /// the potential within tolerance.
    pub ne_is_potential_minimal: bool,
    /// Whether the exhaustive potential minimizer is itself an equilibrium.
    pub opt_is_nash: bool,
    /// Number of enumerated profiles that weakly improve every user and
    /// strictly improve at least one, relative to the equilibrium.
    pub pareto_dominations: usize,
    pub ne_is_pareto_efficient: bool,
}

/// Compare the dynamics' equilibrium against the exhaustive optimizer.
///
/// Findings are reported, not asserted: instances where the equilibrium
/// misses the global potential minimum, or where the minimizer is not an
/// equilibrium at the given tolerance, surface as `false` fields.
pub fn check_global_optimality(
    ne_profile: &StrategyProfile,
    opt_profile: &StrategyProfile,
    scenario: &Scenario,
    graph: &InterferenceGraph,
    search: &PowerSearchConfig,
    grid_points: usize,
    tol: f64,
) -> GlobalOptReport {
    let potential_ne = potential(ne_profile, graph, scenario);
    let potential_opt = potential(opt_profile, graph, scenario);

    let ne_utilities: Vec<f64> = (0..ne_profile.len())
        .map(|u| altruistic_utility(u, ne_profile, graph, scenario))
        .collect();

    let candidates: Vec<Vec<Strategy>> = (0..scenario.num_users())
        .map(|u| candidate_set(scenario, u, grid_points, Some(ne_profile)))
        .collect();
    let mut pareto_dominations = 0usize;
    for_each_profile(&candidates, |profile| {
        let mut weakly_better = true;
        let mut strictly_better = false;
        for u in 0..profile.len() {
            let utility = altruistic_utility(u, profile, graph, scenario);
            if utility > ne_utilities[u] + 1e-12 {
                weakly_better = false;
                break;
            }
            if utility < ne_utilities[u] - tol {
                strictly_better = true;
            }
        }
        if weakly_better && strictly_better {
            pareto_dominations += 1;
        }
    });

    GlobalOptReport {
        potential_ne,
        potential_opt,
        ne_is_potential_minimal: potential_ne <= potential_opt + tol,
        opt_is_nash: is_nash(opt_profile, scenario, graph, search, tol),
        pareto_dominations,
        ne_is_pareto_efficient: pareto_dominations == 0,
    }
}
