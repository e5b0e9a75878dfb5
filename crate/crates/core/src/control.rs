//! Rolling-horizon control: plan a bounded lookahead from the current
//! state, execute its first action, repeat.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::envs::{EnvState, EnvTrace, Environment, RewardKind, StateKind, TraceStep};
use crate::novelty::{BeeFeatures, BitFeatures, ByteFeatures, FeatureMap};
use crate::search::{
    best_leaf, env_lookahead, rollout_iw, Budget, RolloutConfig, SearchError, SearchStats,
};

pub use crate::search::Objective;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LookaheadKind {
    Iw,
    RolloutIw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Encoding {
    /// IEEE-754 bit pattern of each numeric variable.
    Bit,
    /// Boundary extension intervals.
    Bee,
    /// One feature per byte.
    Byte,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControllerConfig {
    pub algorithm: LookaheadKind,
    pub k: usize,
    pub features: Encoding,
    /// Generated-node cap per decision.
    pub budget_nodes: Option<u64>,
    /// Wall-time cap per decision.
    pub budget_ms: Option<u64>,
    /// Steps to run; `None` uses the environment horizon.
    pub horizon: Option<usize>,
    /// `None` follows the environment's reward kind.
    pub objective: Option<Objective>,
    /// Seed for Rollout-IW's random choices.
    pub seed: u64,
}

impl Default for ControllerConfig {
    fn default() -> Self {
        ControllerConfig {
            algorithm: LookaheadKind::Iw,
            k: 1,
            features: Encoding::Bee,
            budget_nodes: Some(2000),
            budget_ms: None,
            horizon: None,
            objective: None,
            seed: 0,
        }
    }
}

impl ControllerConfig {
    fn budget(&self) -> Budget {
        Budget {
            max_generated: self.budget_nodes,
            max_time: self.budget_ms.map(Duration::from_millis),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ControlError {
    #[error("a per-decision budget (nodes or ms) greater than zero is required")]
    NoBudget,
    #[error("k must be at least 1")]
    ZeroWidth,
    #[error("{encoding:?} features do not apply to {kind:?} states")]
    EncodingMismatch { encoding: Encoding, kind: StateKind },
}

/// A finished or aborted episode.
#[derive(Debug, Clone)]
pub struct Episode {
    pub trace: EnvTrace,
    /// Set when the environment or a lookahead failed; the trace holds the
    /// steps taken before the fault.
    pub fault: Option<SearchError>,
    /// The last state lies in the environment's goal region.
    pub reached_goal: bool,
    /// Lookahead statistics summed over all decisions.
    pub stats: SearchStats,
    pub max_decision_ms: f64,
    pub wall_ms: f64,
}

impl Episode {
    pub fn total_reward(&self) -> f64 {
        self.trace.total_reward()
    }
}

fn feature_map(enc: Encoding, vars: usize) -> Box<dyn FeatureMap<EnvState>> {
    match enc {
        Encoding::Bit => Box::new(BitFeatures),
        Encoding::Bee => Box::new(BeeFeatures::new(vars)),
        Encoding::Byte => Box::new(ByteFeatures),
    }
}

/// Chooses an action from `state` with one fresh lookahead.
pub fn decide(
    env: &dyn Environment,
    state: &EnvState,
    cfg: &ControllerConfig,
    features: &mut dyn FeatureMap<EnvState>,
) -> Result<(usize, SearchStats), SearchError> {
    let objective = cfg.objective.unwrap_or(match env.spec().reward_kind {
        RewardKind::CostToMinimize => Objective::MinimizeCost,
        RewardKind::RewardToMaximize => Objective::MaximizeReward,
    });
    match cfg.algorithm {
        LookaheadKind::Iw => {
            let (tree, stats, _) = env_lookahead(env, state, features, cfg.k, cfg.budget())?;
            let best = best_leaf(&tree, tree.leaves(), objective, |n| n.acc_reward).unwrap_or(0);
            Ok((tree.first_action(best).unwrap_or(0), stats))
        }
        LookaheadKind::RolloutIw => {
            let rc = RolloutConfig {
                k: cfg.k,
                budget: cfg.budget(),
                max_rollouts: None,
                seed: cfg.seed ^ state.step_index() as u64,
                objective,
            };
            let r = rollout_iw(env, state, features, &rc)?;
            Ok((r.action, r.stats))
        }
    }
}

/// Runs one episode from the environment's initial state.
pub fn run_episode(env: &dyn Environment, cfg: &ControllerConfig) -> Result<Episode, ControlError> {
    if cfg.k == 0 {
        return Err(ControlError::ZeroWidth);
    }
    if cfg.budget_nodes.unwrap_or(0) == 0 && cfg.budget_ms.unwrap_or(0) == 0 {
        return Err(ControlError::NoBudget);
    }
    let spec = env.spec();
    let fits = matches!(
        (cfg.features, spec.state_kind),
        (Encoding::Bit | Encoding::Bee, StateKind::Numeric) | (Encoding::Byte, StateKind::Byte)
    );
    if !fits {
        return Err(ControlError::EncodingMismatch {
            encoding: cfg.features,
            kind: spec.state_kind,
        });
    }
    let horizon = cfg.horizon.unwrap_or(spec.horizon).min(spec.horizon);
    let start = Instant::now();
    let mut features = feature_map(cfg.features, spec.state_len);
    let mut state = env.reset();
    let mut trace = EnvTrace::default();
    let mut stats = SearchStats::named(
        match cfg.algorithm {
            LookaheadKind::Iw => "iw",
            LookaheadKind::RolloutIw => "rollout-iw",
        },
        Some(cfg.k),
    );
    let mut fault = None;
    let mut max_decision_ms: f64 = 0.0;
    let mut cumulative = 0.0;
    for t in 0..horizon {
        let t0 = Instant::now();
        let action = match decide(env, &state, cfg, features.as_mut()) {
            Ok((a, s)) => {
                stats.absorb(&s);
                a
            }
            Err(e) => {
                fault = Some(e);
                break;
            }
        };
        let decision_ms = t0.elapsed().as_secs_f64() * 1e3;
        max_decision_ms = max_decision_ms.max(decision_ms);
        let step = match env.step(&state, action) {
            Ok(s) => s,
            Err(e) => {
                fault = Some(e.into());
                break;
            }
        };
        cumulative += step.reward;
        trace.steps.push(TraceStep {
            step: t,
            state: state.to_vec(),
            action,
            reward: step.reward,
            cumulative,
            decision_ms,
        });
        state = step.state;
        if step.terminal {
            trace.terminal = true;
            break;
        }
    }
    trace.final_state = state.to_vec();
    stats.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(Episode {
        reached_goal: env.is_goal(&state),
        trace,
        fault,
        stats,
        max_decision_ms,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envs::{ByteToy, CartPole, EnvConfig, MountainCar};

    #[test]
    fn zero_horizon_is_empty() {
        let env = MountainCar::new(EnvConfig::default().mountaincar);
        let cfg = ControllerConfig { horizon: Some(0), ..Default::default() };
        let ep = run_episode(&env, &cfg).unwrap();
        assert!(ep.trace.is_empty());
        assert!(ep.fault.is_none());
    }

    #[test]
    fn config_errors() {
        let env = MountainCar::new(EnvConfig::default().mountaincar);
        let no_budget = ControllerConfig { budget_nodes: None, budget_ms: None, ..Default::default() };
        assert_eq!(run_episode(&env, &no_budget).unwrap_err(), ControlError::NoBudget);
        let bytes = ControllerConfig { features: Encoding::Byte, ..Default::default() };
        assert!(matches!(run_episode(&env, &bytes), Err(ControlError::EncodingMismatch { .. })));
    }

    #[test]
    fn replay_reproduces_rewards() {
        let env = CartPole::new(EnvConfig::default().cartpole);
        let cfg = ControllerConfig { horizon: Some(30), budget_nodes: Some(300), ..Default::default() };
        let ep = run_episode(&env, &cfg).unwrap();
        let mut s = env.reset();
        let mut total = 0.0;
        for step in &ep.trace.steps {
            let r = env.step(&s, step.action).unwrap();
            assert_eq!(r.reward.to_bits(), step.reward.to_bits());
            total += r.reward;
            s = r.state;
        }
        assert_eq!(total, ep.total_reward());
        assert_eq!(ep.trace.steps.last().unwrap().cumulative, total);
        assert!(ep.trace.len() <= 30);
    }

    #[test]
    fn decision_time_respects_budget() {
        let env = ByteToy::new(EnvConfig::default().bytetoy);
        let cfg = ControllerConfig {
            algorithm: LookaheadKind::RolloutIw,
            features: Encoding::Byte,
            budget_nodes: None,
            budget_ms: Some(20),
            ..Default::default()
        };
        let ep = run_episode(&env, &cfg).unwrap();
        assert!(ep.max_decision_ms <= 24.0, "{}", ep.max_decision_ms);
    }
}
