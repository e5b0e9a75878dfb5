//! Deterministic simulators used as black-box planning problems.
//!
//! Environments are stateless: a state carries its own step index, and
//! [`Environment::step`] is a pure function of `(state, action)`, so cloning
//! a state is all a tree search needs to branch.

mod acrobot;
mod bytetoy;
mod cartpole;
mod config;
mod mountain_car;
mod trace;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use acrobot::Acrobot;
pub use bytetoy::ByteToy;
pub use cartpole::CartPole;
pub use config::{
    AcrobotConfig, ByteTarget, ByteToyConfig, CartPoleConfig, ConfigError, EnvConfig, MountainCarConfig,
};
pub use mountain_car::MountainCar;
pub use trace::{EnvTrace, TraceStep};

pub const ENV_NAMES: [&str; 4] = ["cartpole", "mountaincar", "acrobot", "bytetoy"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericState {
    pub values: Vec<f64>,
    pub step_index: usize,
}

impl NumericState {
    pub fn new(values: Vec<f64>) -> Self {
        NumericState { values, step_index: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ByteState {
    pub bytes: Vec<u8>,
    pub step_index: usize,
}

impl ByteState {
    pub fn new(bytes: Vec<u8>) -> Self {
        ByteState { bytes, step_index: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum EnvState {
    Numeric(NumericState),
    Bytes(ByteState),
}

impl EnvState {
    pub fn step_index(&self) -> usize {
        match self {
            EnvState::Numeric(n) => n.step_index,
            EnvState::Bytes(b) => b.step_index,
        }
    }

    /// State variables as reals, for traces.
    pub fn to_vec(&self) -> Vec<f64> {
        match self {
            EnvState::Numeric(n) => n.values.clone(),
            EnvState::Bytes(b) => b.bytes.iter().map(|&x| x as f64).collect(),
        }
    }

    pub fn as_numeric(&self) -> Option<&NumericState> {
        match self {
            EnvState::Numeric(n) => Some(n),
            EnvState::Bytes(_) => None,
        }
    }

    pub fn as_bytes(&self) -> Option<&ByteState> {
        match self {
            EnvState::Bytes(b) => Some(b),
            EnvState::Numeric(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateKind {
    Numeric,
    Byte,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RewardKind {
    CostToMinimize,
    RewardToMaximize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnvSpec {
    pub name: &'static str,
    pub action_count: usize,
    pub horizon: usize,
    pub state_kind: StateKind,
    pub state_len: usize,
    pub reward_kind: RewardKind,
    /// Whether the environment defines a goal region (see [`Environment::is_goal`]).
    pub has_goal: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepResult {
    pub state: EnvState,
    pub reward: f64,
    pub terminal: bool,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnvError {
    #[error("action {action} out of range (environment has {count} actions)")]
    InvalidAction { action: usize, count: usize },
    #[error("step {step} is past the horizon of {horizon}")]
    HorizonExceeded { step: usize, horizon: usize },
    #[error("state does not belong to environment `{0}`")]
    ForeignState(&'static str),
    #[error("environment `{env}` produced a non-finite value in variable {index}")]
    NonFinite { env: &'static str, index: usize },
    #[error("unknown environment `{0}` (expected one of cartpole, mountaincar, acrobot, bytetoy)")]
    Unknown(String),
}

pub trait Environment: Send + Sync {
    fn spec(&self) -> &EnvSpec;

    /// The fixed initial state, with step index 0.
    fn reset(&self) -> EnvState;

    /// Deterministic successor of `s` under `action`.
    fn step(&self, s: &EnvState, action: usize) -> Result<StepResult, EnvError>;

    /// Goal region membership, for environments that have one.
    fn is_goal(&self, _s: &EnvState) -> bool {
        false
    }
}

/// Shared argument checks for `step`.
pub(crate) fn check_step(spec: &EnvSpec, s: &EnvState, action: usize) -> Result<(), EnvError> {
    if action >= spec.action_count {
        return Err(EnvError::InvalidAction {
            action,
            count: spec.action_count,
        });
    }
    let step = s.step_index();
    if step >= spec.horizon {
        return Err(EnvError::HorizonExceeded {
            step,
            horizon: spec.horizon,
        });
    }
    Ok(())
}

pub(crate) fn numeric<'a>(spec: &EnvSpec, s: &'a EnvState) -> Result<&'a NumericState, EnvError> {
    match s {
        EnvState::Numeric(n) if n.values.len() == spec.state_len => Ok(n),
        _ => Err(EnvError::ForeignState(spec.name)),
    }
}

pub(crate) fn finite(spec: &EnvSpec, values: Vec<f64>, step_index: usize) -> Result<EnvState, EnvError> {
    if let Some(index) = values.iter().position(|v| !v.is_finite()) {
        return Err(EnvError::NonFinite { env: spec.name, index });
    }
    Ok(EnvState::Numeric(NumericState { values, step_index }))
}

/// Builds an environment by name.
pub fn make_env(name: &str, cfg: &EnvConfig) -> Result<Box<dyn Environment>, EnvError> {
    Ok(match name {
        "cartpole" => Box::new(CartPole::new(cfg.cartpole.clone())),
        "mountaincar" => Box::new(MountainCar::new(cfg.mountaincar.clone())),
        "acrobot" => Box::new(Acrobot::new(cfg.acrobot.clone())),
        "bytetoy" => Box::new(ByteToy::new(cfg.bytetoy.clone())),
        other => return Err(EnvError::Unknown(other.to_string())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selection_by_name() {
        let cfg = EnvConfig::default();
        for name in ENV_NAMES {
            let env = make_env(name, &cfg).unwrap();
            assert_eq!(env.spec().name, name);
            assert_eq!(env.reset(), env.reset());
            assert_eq!(env.reset().step_index(), 0);
        }
        assert!(matches!(make_env("nosuchenv", &cfg), Err(EnvError::Unknown(_))));
    }

    #[test]
    fn horizon_and_action_errors() {
        let cfg = EnvConfig::default();
        for name in ENV_NAMES {
            let env = make_env(name, &cfg).unwrap();
            let spec = env.spec().clone();
            let s = env.reset();
            assert!(matches!(
                env.step(&s, spec.action_count),
                Err(EnvError::InvalidAction { .. })
            ));
            let mut late = s.clone();
            match &mut late {
                EnvState::Numeric(n) => n.step_index = spec.horizon,
                EnvState::Bytes(b) => b.step_index = spec.horizon,
            }
            assert!(matches!(env.step(&late, 0), Err(EnvError::HorizonExceeded { .. })));
        }
    }

    #[test]
    fn stepping_is_bitwise_deterministic() {
        let cfg = EnvConfig::default();
        for name in ENV_NAMES {
            let env = make_env(name, &cfg).unwrap();
            let mut a = env.reset();
            let mut b = env.reset();
            for t in 0..50 {
                let act = (t * 7 + 3) % env.spec().action_count;
                let ra = env.step(&a, act).unwrap();
                let rb = env.step(&b, act).unwrap();
                assert_eq!(ra.reward.to_bits(), rb.reward.to_bits());
                assert_eq!(
                    ra.state.to_vec().iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
                    rb.state.to_vec().iter().map(|v| v.to_bits()).collect::<Vec<_>>()
                );
                if ra.terminal {
                    break;
                }
                a = ra.state;
                b = rb.state;
            }
        }
    }
}
