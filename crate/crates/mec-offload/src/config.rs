//! TOML experiment configuration.
//!
//! A config file fully determines an experiment together with a seed. The
//! five world sections (`topology`, `radio`, `cloud`, `task`,
//! `user_defaults`) are required; solver sections fall back to defaults.
//! `ExperimentConfig::default_preset()` is the built-in parameter set the
//! simulation study uses, printable through the `preset` CLI subcommand.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::best_response::PowerSearchConfig;
use crate::engine::{DynamicsConfig, Schedule};
use crate::error::{Error, Result};
use crate::scenario::{
    assign_channels, build_interference_graph, generate_scenario, ChannelPlan, GeneratorConfig,
    InterferenceGraph, Scenario, TaskSpec, UserProfile,
};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologyConfig {
    pub num_bs: usize,
    pub users_per_cell: usize,
    pub cell_radius_m: f64,
    pub bs_spacing_m: f64,
    pub num_channels: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadioConfig {
    pub channel_bandwidth_hz: f64,
    pub noise_power_w: f64,
    pub path_loss_exponent: f64,
    /// Scales every cross-cell gain; 1.0 is the physical model.
    #[serde(default = "one")]
    pub interference_scale: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CloudConfig {
    pub frequency_hz: f64,
    /// Effective-capacitance constant of the edge server. Charging server
    /// energy to the user's overhead at all is a modeling choice; with the
    /// default mirroring the handset constant it dominates the energy term
    /// of offloading.
    pub kappa: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskConfig {
    pub input_bits: f64,
    /// Total workload in CPU cycles; the per-bit intensity is derived.
    pub workload_cycles: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UserDefaults {
    pub kappa: f64,
    #[serde(default = "default_f_min")]
    pub f_min_hz: f64,
    pub f_max_hz: f64,
    pub p_min_w: f64,
    pub p_max_w: f64,
    /// Latency weight; the energy weight is `1 - alpha_t`.
    pub alpha_t: f64,
    /// Transmission range in meters; omit for unlimited reach.
    #[serde(default = "default_range")]
    pub tx_range_m: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EngineSection {
    pub schedule: Schedule,
    pub max_rounds: usize,
    pub eps_power_w: f64,
    /// Utility gain a power refinement must buy to be adopted.
    pub min_improvement: f64,
    /// Tolerance of the equilibrium check in `validate`.
    pub nash_tol: f64,
}

impl Default for EngineSection {
    fn default() -> Self {
        EngineSection {
            schedule: Schedule::Sequential,
            max_rounds: 500,
            eps_power_w: 1e-8,
            min_improvement: 1e-9,
            nash_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PoaSection {
    /// Refuse exhaustive enumeration above this many users.
    pub exhaustive_limit: usize,
    /// Power grid points per user in the centralized search.
    pub power_grid_points: usize,
    /// Interference multipliers for the PoA sweep artifact.
    pub interference_multipliers: Vec<f64>,
}

impl Default for PoaSection {
    fn default() -> Self {
        PoaSection {
            exhaustive_limit: 6,
            power_grid_points: 16,
            interference_multipliers: vec![0.25, 0.5, 1.0, 2.0, 4.0],
        }
    }
}

/// One sweep axis declared in the config file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub axis: String,
    pub values: Vec<f64>,
    /// Number of seeds per value, starting at the experiment seed.
    #[serde(default = "default_sweep_seeds")]
    pub seeds: u64,
}

fn one() -> f64 {
    1.0
}
fn default_f_min() -> f64 {
    1e6
}
fn default_range() -> f64 {
    f64::INFINITY
}
fn default_sweep_seeds() -> u64 {
    10
}
fn default_seed() -> u64 {
    42
}

/// A complete experiment description; together with a seed it determines
/// every artifact byte.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub topology: TopologyConfig,
    pub radio: RadioConfig,
    pub cloud: CloudConfig,
    pub task: TaskConfig,
    pub user_defaults: UserDefaults,
    #[serde(default)]
    pub engine: EngineSection,
    #[serde(default)]
    pub power_search: PowerSearchConfig,
    #[serde(default)]
    pub poa: PoaSection,
    #[serde(default)]
    pub sweep: Vec<SweepSpec>,
}

impl ExperimentConfig {
    /// The built-in default parameter set: 5 base stations of 50 m radius,
    /// 4 users each, 5 MHz subchannels, -100 dBm noise, path-loss exponent
    /// 4, 5 Mb / 1e9-cycle tasks, a 10 GHz edge server, 1 GHz handsets with
    /// kappa = 1e-27, 150 mW power cap, and balanced decision weights.
    pub fn default_preset() -> Self {
        ExperimentConfig {
            seed: default_seed(),
            topology: TopologyConfig {
                num_bs: 5,
                users_per_cell: 4,
                cell_radius_m: 50.0,
                bs_spacing_m: 100.0,
                num_channels: 10,
            },
            radio: RadioConfig {
                channel_bandwidth_hz: 5e6,
                noise_power_w: 1e-13,
                path_loss_exponent: 4.0,
                interference_scale: 1.0,
            },
            cloud: CloudConfig {
                frequency_hz: 1e10,
                kappa: 1e-27,
            },
            task: TaskConfig {
                input_bits: 5e6,
                workload_cycles: 1e9,
            },
            user_defaults: UserDefaults {
                kappa: 1e-27,
                f_min_hz: default_f_min(),
                f_max_hz: 1e9,
                p_min_w: 1e-3,
                p_max_w: 0.15,
                alpha_t: 0.5,
                tx_range_m: f64::INFINITY,
            },
            engine: EngineSection::default(),
            power_search: PowerSearchConfig::default(),
            poa: PoaSection::default(),
            sweep: Vec::new(),
        }
    }

    /// Parse a config from TOML text.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Load a config file.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        Self::from_toml_str(&text)
    }

    /// Render back to TOML, round-trippable through [`Self::from_toml_str`].
    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    /// Sanity checks beyond what the schema enforces.
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.user_defaults.alpha_t) {
            return Err(Error::InvalidConfig(format!(
                "user_defaults.alpha_t must lie in [0, 1], got {}",
                self.user_defaults.alpha_t
            )));
        }
        if self.topology.users_per_cell > self.topology.num_channels {
            return Err(Error::InvalidConfig(format!(
                "users_per_cell {} exceeds num_channels {}; subchannels within a cell must be orthogonal",
                self.topology.users_per_cell, self.topology.num_channels
            )));
        }
        self.generator().validate_shallow()?;
        Ok(())
    }

    /// The scenario generator settings this config describes.
    pub fn generator(&self) -> GeneratorConfig {
        GeneratorConfig {
            num_bs: self.topology.num_bs,
            users_per_cell: self.topology.users_per_cell,
            cell_radius_m: self.topology.cell_radius_m,
            bs_spacing_m: self.topology.bs_spacing_m,
            num_channels: self.topology.num_channels,
            channel_bandwidth_hz: self.radio.channel_bandwidth_hz,
            noise_power_w: self.radio.noise_power_w,
            path_loss_exponent: self.radio.path_loss_exponent,
            cloud_frequency_hz: self.cloud.frequency_hz,
            cloud_kappa: self.cloud.kappa,
            interference_scale: self.radio.interference_scale,
            task: TaskSpec {
                input_bits: self.task.input_bits,
                cycles_per_bit: self.task.workload_cycles / self.task.input_bits,
            },
            profile: UserProfile {
                kappa: self.user_defaults.kappa,
                f_min_hz: self.user_defaults.f_min_hz,
                f_max_hz: self.user_defaults.f_max_hz,
                p_min_w: self.user_defaults.p_min_w,
                p_max_w: self.user_defaults.p_max_w,
                alpha_t: self.user_defaults.alpha_t,
                alpha_e: 1.0 - self.user_defaults.alpha_t,
                tx_range_m: self.user_defaults.tx_range_m,
            },
        }
    }

    /// Engine settings this config describes.
    pub fn dynamics(&self) -> DynamicsConfig {
        DynamicsConfig {
            schedule: self.engine.schedule,
            max_rounds: self.engine.max_rounds,
            eps_power_w: self.engine.eps_power_w,
            min_improvement: self.engine.min_improvement,
            power_search: self.power_search,
        }
    }

    /// Generate the world for one seed: scenario, subchannel plan, and
    /// interference graph.
    pub fn build_instance(&self, seed: u64) -> Result<(Scenario, ChannelPlan, InterferenceGraph)> {
        let scenario = generate_scenario(&self.generator(), seed)?;
        let plan = assign_channels(&scenario)?;
        let graph = build_interference_graph(&scenario, &plan);
        Ok((scenario, plan, graph))
    }
}

impl GeneratorConfig {
    /// The subset of generator validation that does not need a seed.
    fn validate_shallow(&self) -> Result<()> {
        generate_scenario(self, 0).map(|_| ())
    }
}
