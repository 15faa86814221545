//! Static world description: topology, channel gains, subchannel plan, and
//! the directed interference graph.
//!
//! Everything here is immutable after construction and pure to evaluate, so
//! scenarios can be shared read-only across threads. Units are SI throughout:
//! meters, hertz, watts, bits, CPU cycles.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// 2-D position in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// One user's computation task.
///
/// The cost model only ever consumes the product `input_bits *
/// cycles_per_bit` (the total workload in cycles), exposed as
/// [`TaskSpec::workload_cycles`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TaskSpec {
    /// Input data length in bits.
    pub input_bits: f64,
    /// CPU cycles needed per input bit.
    pub cycles_per_bit: f64,
}

impl TaskSpec {
    /// Total workload in CPU cycles.
    pub fn workload_cycles(&self) -> f64 {
        self.input_bits * self.cycles_per_bit
    }
}

/// Per-user hardware profile and decision weights.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct UserProfile {
    /// Effective-capacitance constant of the local CPU (J*s^2/cycle^3).
    pub kappa: f64,
    /// Smallest positive CPU frequency the device can run local work at
    /// (cycles/s). Keeps the energy-only corner case finite.
    pub f_min_hz: f64,
    /// Maximum local CPU frequency (cycles/s).
    pub f_max_hz: f64,
    /// Transmit-power bounds (watts).
    pub p_min_w: f64,
    pub p_max_w: f64,
    /// Latency weight in the overhead blend.
    pub alpha_t: f64,
    /// Energy weight in the overhead blend.
    pub alpha_e: f64,
    /// Transmission range in meters; decides whom this user can interfere
    /// with. `f64::INFINITY` means every co-channel user in another cell.
    pub tx_range_m: f64,
}

/// Immutable world description for one simulation instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scenario {
    pub bs_positions: Vec<Point>,
    pub user_positions: Vec<Point>,
    /// Serving base station of each user.
    pub cell_of: Vec<usize>,
    /// Number of orthogonal subchannels shared by every cell.
    pub num_channels: usize,
    /// Bandwidth of one subchannel (Hz).
    pub channel_bandwidth_hz: f64,
    /// White-noise power (watts).
    pub noise_power_w: f64,
    /// Path-loss exponent; gain is distance^-exponent.
    pub path_loss_exponent: f64,
    /// Edge-server CPU frequency (cycles/s).
    pub cloud_frequency_hz: f64,
    /// Edge-server effective-capacitance constant (J*s^2/cycle^3).
    pub cloud_kappa: f64,
    /// Multiplier applied to every cross-cell gain; 1.0 is the physical
    /// model, other values scale interference for sweeps.
    pub interference_scale: f64,
    pub tasks: Vec<TaskSpec>,
    pub profiles: Vec<UserProfile>,
}

impl Scenario {
    pub fn num_users(&self) -> usize {
        self.user_positions.len()
    }

    pub fn num_bs(&self) -> usize {
        self.bs_positions.len()
    }

    /// Distance between a user and a base station (meters).
    pub fn distance_to_bs(&self, user: usize, bs: usize) -> f64 {
        self.user_positions[user].distance(&self.bs_positions[bs])
    }

    /// Path-loss channel gain between a user and a base station.
    pub fn channel_gain(&self, user: usize, bs: usize) -> f64 {
        self.distance_to_bs(user, bs)
            .powf(-self.path_loss_exponent)
    }

    /// Gain of a user's own uplink (toward its serving base station).
    pub fn own_gain(&self, user: usize) -> f64 {
        self.channel_gain(user, self.cell_of[user])
    }

    /// Gain of interferer `user` toward the victim's serving base station,
    /// scaled by `interference_scale`. The base station is the uplink
    /// receiver, so interference power is measured there.
    pub fn interference_gain(&self, user: usize, victim_bs: usize) -> f64 {
        self.interference_scale * self.channel_gain(user, victim_bs)
    }

    /// Check every structural invariant; returns the first violation.
    pub fn validate(&self) -> Result<()> {
        let n = self.num_users();
        let l = self.num_bs();
        if n == 0 || l == 0 {
            return Err(Error::InvalidConfig(
                "scenario needs at least one user and one base station".into(),
            ));
        }
        if self.num_channels == 0 {
            return Err(Error::InvalidConfig("num_channels must be >= 1".into()));
        }
        for (name, v) in [
            ("channel_bandwidth_hz", self.channel_bandwidth_hz),
            ("noise_power_w", self.noise_power_w),
            ("path_loss_exponent", self.path_loss_exponent),
            ("cloud_frequency_hz", self.cloud_frequency_hz),
        ] {
            if !(v > 0.0) {
                return Err(Error::InvalidConfig(format!("{name} must be > 0, got {v}")));
            }
        }
        if self.cloud_kappa < 0.0 || self.interference_scale < 0.0 {
            return Err(Error::InvalidConfig(
                "cloud_kappa and interference_scale must be >= 0".into(),
            ));
        }
        if self.cell_of.len() != n || self.tasks.len() != n || self.profiles.len() != n {
            return Err(Error::InvalidConfig(
                "cell_of, tasks, and profiles must all have one entry per user".into(),
            ));
        }
        for (user, &cell) in self.cell_of.iter().enumerate() {
            if cell >= l {
                return Err(Error::InvalidConfig(format!(
                    "user {user} is assigned to nonexistent base station {cell}"
                )));
            }
        }
        for (user, task) in self.tasks.iter().enumerate() {
            if !(task.input_bits > 0.0) || !(task.cycles_per_bit > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "user {user}: input_bits and cycles_per_bit must be > 0"
                )));
            }
        }
        for (user, p) in self.profiles.iter().enumerate() {
            if !(p.kappa > 0.0) {
                return Err(Error::InvalidConfig(format!("user {user}: kappa must be > 0")));
            }
            if !(p.f_min_hz > 0.0) || !(p.f_max_hz >= p.f_min_hz) {
                return Err(Error::InvalidConfig(format!(
                    "user {user}: need 0 < f_min_hz <= f_max_hz"
                )));
            }
            if !(p.p_min_w > 0.0) || !(p.p_max_w >= p.p_min_w) {
                return Err(Error::InvalidConfig(format!(
                    "user {user}: need 0 < p_min_w <= p_max_w"
                )));
            }
            if !(0.0..=1.0).contains(&p.alpha_t)
                || !(0.0..=1.0).contains(&p.alpha_e)
                || (p.alpha_t + p.alpha_e - 1.0).abs() > 1e-9
            {
                return Err(Error::InvalidConfig(format!(
                    "user {user}: weights must satisfy alpha_t, alpha_e in [0,1] and alpha_t + alpha_e = 1"
                )));
            }
            if !(p.tx_range_m > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "user {user}: tx_range_m must be > 0"
                )));
            }
        }
        // Gains toward every base station must be finite, so no user may sit
        // exactly on any BS.
        for user in 0..n {
            for bs in 0..l {
                if self.distance_to_bs(user, bs) == 0.0 {
                    return Err(Error::CoincidentPositions { user, bs });
                }
            }
        }
        Ok(())
    }
}

/// Map from user to subchannel index in `[0, num_channels)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelPlan {
    pub channel_of: Vec<usize>,
}

/// Directed interference neighborhoods per user.
///
/// `in_neighbors[n]` holds the users (other cells, same subchannel) whose
/// transmissions reach user n; `out_neighbors[n]` those whom user n's own
/// transmission reaches. The sets are dual: `i in out(n)` iff
/// `n in in(i)`, but in- and out-sets of one user may differ because
/// transmission ranges differ.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InterferenceGraph {
    pub in_neighbors: Vec<Vec<usize>>,
    pub out_neighbors: Vec<Vec<usize>>,
}

impl InterferenceGraph {
    /// Graph with no edges (no cross-cell coupling at all).
    pub fn empty(num_users: usize) -> Self {
        InterferenceGraph {
            in_neighbors: vec![Vec::new(); num_users],
            out_neighbors: vec![Vec::new(); num_users],
        }
    }
}

/// Knobs for the random scenario generator, bundled with the per-user
/// defaults every generated user starts from.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub num_bs: usize,
    pub users_per_cell: usize,
    /// Coverage radius of each base station (meters).
    pub cell_radius_m: f64,
    /// Spacing of the base-station grid (meters).
    pub bs_spacing_m: f64,
    pub num_channels: usize,
    pub channel_bandwidth_hz: f64,
    pub noise_power_w: f64,
    pub path_loss_exponent: f64,
    pub cloud_frequency_hz: f64,
    pub cloud_kappa: f64,
    pub interference_scale: f64,
    pub task: TaskSpec,
    pub profile: UserProfile,
}

impl GeneratorConfig {
    /// The simulation defaults used throughout: 5 base stations with 50 m
    /// coverage, 5 MHz subchannels, -100 dBm noise, path-loss exponent 4,
    /// 5 Mb tasks of 1e9 total cycles, 10 GHz edge server, and 1 GHz
    /// handsets with kappa = 1e-27.
    ///
    /// `cloud_kappa` mirrors the handset constant; charging the edge
    /// server's energy to the user at all is a modeling choice, and with a
    /// 10 GHz server it dominates the energy term, so energy-weighted users
    /// rarely offload under this default.
    pub fn default_preset() -> Self {
        GeneratorConfig {
            num_bs: 5,
            users_per_cell: 4,
            cell_radius_m: 50.0,
            bs_spacing_m: 100.0,
            num_channels: 10,
            channel_bandwidth_hz: 5e6,
            noise_power_w: 1e-13,
            path_loss_exponent: 4.0,
            cloud_frequency_hz: 1e10,
            cloud_kappa: 1e-27,
            interference_scale: 1.0,
            task: TaskSpec {
                input_bits: 5e6,
                cycles_per_bit: 200.0, // 1e9 total cycles
            },
            profile: UserProfile {
                kappa: 1e-27,
                f_min_hz: 1e6,
                f_max_hz: 1e9,
                p_min_w: 1e-3,
                p_max_w: 0.15,
                alpha_t: 0.5,
                alpha_e: 0.5,
                tx_range_m: f64::INFINITY,
            },
        }
    }

    fn validate(&self) -> Result<()> {
        if self.num_bs == 0 {
            return Err(Error::InvalidConfig("num_bs must be >= 1".into()));
        }
        if self.users_per_cell == 0 {
            return Err(Error::InvalidConfig("users_per_cell must be >= 1".into()));
        }
        if !(self.cell_radius_m > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "cell_radius_m must be > 0, got {}",
                self.cell_radius_m
            )));
        }
        if self.num_bs > 1 && !(self.bs_spacing_m > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "bs_spacing_m must be > 0, got {}",
                self.bs_spacing_m
            )));
        }
        Ok(())
    }
}

/// Place base stations on a regular grid and drop `users_per_cell` users
/// uniformly at random inside each coverage disc.
///
/// The same `(config, seed)` pair always yields a bit-identical scenario.
pub fn generate_scenario(config: &GeneratorConfig, seed: u64) -> Result<Scenario> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let cols = (config.num_bs as f64).sqrt().ceil() as usize;
    let bs_positions: Vec<Point> = (0..config.num_bs)
        .map(|i| {
            Point::new(
                (i % cols) as f64 * config.bs_spacing_m,
                (i / cols) as f64 * config.bs_spacing_m,
            )
        })
        .collect();

    let n = config.num_bs * config.users_per_cell;
    let mut user_positions = Vec::with_capacity(n);
    let mut cell_of = Vec::with_capacity(n);
    for cell in 0..config.num_bs {
        for _ in 0..config.users_per_cell {
            let center = bs_positions[cell];
            loop {
                let r = config.cell_radius_m * rng.gen::<f64>().sqrt();
                let theta = rng.gen::<f64>() * std::f64::consts::TAU;
                let pos = Point::new(center.x + r * theta.cos(), center.y + r * theta.sin());
                // Re-draw the vanishingly unlikely positions that would make
                // a gain infinite.
                if bs_positions.iter().all(|bs| pos.distance(bs) > 1e-9) {
                    user_positions.push(pos);
                    break;
                }
            }
            cell_of.push(cell);
        }
    }

    let scenario = Scenario {
        bs_positions,
        user_positions,
        cell_of,
        num_channels: config.num_channels,
        channel_bandwidth_hz: config.channel_bandwidth_hz,
        noise_power_w: config.noise_power_w,
        path_loss_exponent: config.path_loss_exponent,
        cloud_frequency_hz: config.cloud_frequency_hz,
        cloud_kappa: config.cloud_kappa,
        interference_scale: config.interference_scale,
        tasks: vec![config.task; n],
        profiles: vec![config.profile; n],
    };
    scenario.validate()?;
    Ok(scenario)
}

/// Assign every user a subchannel, round-robin in user-index order within
/// each cell, so no two users of one cell share a subchannel. Every cell
/// reuses the full set of subchannels.
pub fn assign_channels(scenario: &Scenario) -> Result<ChannelPlan> {
    let k = scenario.num_channels;
    let mut next_in_cell = vec![0usize; scenario.num_bs()];
    let mut channel_of = vec![0usize; scenario.num_users()];
    for user in 0..scenario.num_users() {
        let cell = scenario.cell_of[user];
        let slot = next_in_cell[cell];
        if slot >= k {
            let users = scenario.cell_of.iter().filter(|&&c| c == cell).count();
            return Err(Error::CellOverCapacity {
                cell,
                users,
                channels: k,
            });
        }
        channel_of[user] = slot;
        next_in_cell[cell] += 1;
    }
    Ok(ChannelPlan { channel_of })
}

/// Build the directed interference graph from the channel plan.
///
/// `i` is an in-neighbor of `n` iff they sit in different cells, share a
/// subchannel, and `i`'s transmission range covers the distance between
/// them; out-neighborhoods apply the same rule with `n`'s range. Both sides
/// are derived from the same predicate, so duality holds by construction.
pub fn build_interference_graph(scenario: &Scenario, plan: &ChannelPlan) -> InterferenceGraph {
    let n_users = scenario.num_users();
    let mut graph = InterferenceGraph::empty(n_users);
    for n in 0..n_users {
        for i in 0..n_users {
            if i == n
                || scenario.cell_of[i] == scenario.cell_of[n]
                || plan.channel_of[i] != plan.channel_of[n]
            {
                continue;
            }
            let dist = scenario.user_positions[i].distance(&scenario.user_positions[n]);
            if scenario.profiles[i].tx_range_m >= dist {
                graph.in_neighbors[n].push(i);
                graph.out_neighbors[i].push(n);
            }
        }
    }
    graph
}
