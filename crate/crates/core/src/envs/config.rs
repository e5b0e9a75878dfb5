use serde::{Deserialize, Serialize};
use thiserror::Error;

const DEFAULT_TOML: &str = include_str!("../../config/envs.toml");

/// Version of the bundled constants file.
pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid environment config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("environment config version {found} is not supported (expected {expected})")]
    Version { found: u32, expected: u32 },
    #[error("invalid environment config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvConfig {
    pub version: u32,
    pub mountaincar: MountainCarConfig,
    pub cartpole: CartPoleConfig,
    pub acrobot: AcrobotConfig,
    pub bytetoy: ByteToyConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MountainCarConfig {
    pub min_position: f64,
    pub max_position: f64,
    pub max_speed: f64,
    pub goal_position: f64,
    pub goal_velocity: f64,
    pub force: f64,
    pub gravity: f64,
    pub initial_position: f64,
    pub initial_velocity: f64,
    pub step_reward: f64,
    pub horizon: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CartPoleConfig {
    pub gravity: f64,
    pub mass_cart: f64,
    pub mass_pole: f64,
    pub half_pole_length: f64,
    pub force_mag: f64,
    pub dt: f64,
    pub theta_threshold: f64,
    pub x_threshold: f64,
    pub initial_state: [f64; 4],
    pub step_reward: f64,
    pub horizon: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AcrobotConfig {
    pub gravity: f64,
    pub link_length_1: f64,
    pub link_mass_1: f64,
    pub link_mass_2: f64,
    pub link_com_pos_1: f64,
    pub link_com_pos_2: f64,
    pub link_moi: f64,
    pub max_vel_1: f64,
    pub max_vel_2: f64,
    pub torques: Vec<f64>,
    pub dt: f64,
    pub goal_height: f64,
    pub initial_state: [f64; 4],
    pub step_reward: f64,
    pub horizon: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ByteToyConfig {
    pub size: usize,
    /// Bytes `0..registers` can be incremented and decremented.
    pub registers: usize,
    pub step_reward: f64,
    pub horizon: usize,
    pub targets: Vec<ByteTarget>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ByteTarget {
    /// `(position, value)` pairs that must all hold.
    pub bytes: Vec<(usize, u8)>,
    pub reward: f64,
}

impl Default for EnvConfig {
    fn default() -> Self {
        EnvConfig::from_toml_str(DEFAULT_TOML).expect("bundled environment config is valid")
    }
}

impl EnvConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let cfg: EnvConfig = toml::from_str(text)?;
        if cfg.version != CONFIG_VERSION {
            return Err(ConfigError::Version {
                found: cfg.version,
                expected: CONFIG_VERSION,
            });
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: &str| Err(ConfigError::Invalid(m.to_string()));
        if self.mountaincar.horizon == 0 || self.cartpole.horizon == 0 || self.acrobot.horizon == 0 || self.bytetoy.horizon == 0 {
            return bad("horizon must be at least 1");
        }
        if self.acrobot.torques.is_empty() {
            return bad("acrobot needs at least one torque");
        }
        let b = &self.bytetoy;
        if b.registers == 0 || b.registers > b.size {
            return bad("bytetoy registers must be in 1..=size");
        }
        for t in &b.targets {
            if t.bytes.iter().any(|&(i, _)| i >= b.size) {
                return bad("bytetoy target position out of range");
            }
            if !t.reward.is_finite() {
                return bad("bytetoy target reward must be finite");
            }
        }
        Ok(())
    }
}
