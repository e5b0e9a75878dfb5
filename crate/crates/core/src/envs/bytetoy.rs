use super::{check_step, ByteState, ByteToyConfig, EnvError, EnvSpec, EnvState, Environment, RewardKind, StateKind, StepResult};

/// Byte-vector register machine. Action `2r` increments register `r`,
/// action `2r + 1` decrements it, both saturating. Matching any target
/// pattern pays its reward and ends the episode.
#[derive(Debug, Clone)]
pub struct ByteToy {
    cfg: ByteToyConfig,
    spec: EnvSpec,
}

impl ByteToy {
    pub fn new(cfg: ByteToyConfig) -> Self {
        let spec = EnvSpec {
            name: "bytetoy",
            action_count: 2 * cfg.registers,
            horizon: cfg.horizon,
            state_kind: StateKind::Byte,
            state_len: cfg.size,
            reward_kind: RewardKind::RewardToMaximize,
            has_goal: !cfg.targets.is_empty(),
        };
        ByteToy { cfg, spec }
    }

    pub fn config(&self) -> &ByteToyConfig {
        &self.cfg
    }

    /// Best reward among the targets `bytes` matches, if any.
    pub fn target_reward(&self, bytes: &[u8]) -> Option<f64> {
        self.cfg
            .targets
            .iter()
            .filter(|t| t.bytes.iter().all(|&(i, v)| bytes[i] == v))
            .map(|t| t.reward)
            .reduce(f64::max)
    }
}

impl Environment for ByteToy {
    fn spec(&self) -> &EnvSpec {
        &self.spec
    }

    fn reset(&self) -> EnvState {
        EnvState::Bytes(ByteState::new(vec![0; self.cfg.size]))
    }

    fn step(&self, s: &EnvState, action: usize) -> Result<StepResult, EnvError> {
        check_step(&self.spec, s, action)?;
        let b = match s {
            EnvState::Bytes(b) if b.bytes.len() == self.cfg.size => b,
            _ => return Err(EnvError::ForeignState(self.spec.name)),
        };
        let mut bytes = b.bytes.clone();
        let r = action / 2;
        bytes[r] = if action.is_multiple_of(2) { bytes[r].saturating_add(1) } else { bytes[r].saturating_sub(1) };
        let hit = self.target_reward(&bytes);
        Ok(StepResult {
            reward: self.cfg.step_reward + hit.unwrap_or(0.0),
            terminal: hit.is_some(),
            state: EnvState::Bytes(ByteState { bytes, step_index: b.step_index + 1 }),
        })
    }

    fn is_goal(&self, s: &EnvState) -> bool {
        s.as_bytes().is_some_and(|b| self.target_reward(&b.bytes).is_some())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envs::EnvConfig;

    #[test]
    fn reset_is_zero() {
        let e = ByteToy::new(EnvConfig::default().bytetoy);
        assert_eq!(e.reset().as_bytes().unwrap().bytes, vec![0u8; 16]);
        assert_eq!(e.spec().action_count, 8);
    }

    #[test]
    fn registers_saturate() {
        let e = ByteToy::new(EnvConfig::default().bytetoy);
        let r = e.step(&e.reset(), 1).unwrap();
        assert_eq!(r.state.as_bytes().unwrap().bytes[0], 0);
        let mut s = ByteState::new(vec![0; 16]);
        s.bytes[2] = 255;
        let r = e.step(&EnvState::Bytes(s), 4).unwrap();
        assert_eq!(r.state.as_bytes().unwrap().bytes[2], 255);
    }

    #[test]
    fn targets_pay_and_terminate() {
        let e = ByteToy::new(EnvConfig::default().bytetoy);
        let decoy = e.step(&e.reset(), 2).unwrap();
        assert_eq!((decoy.reward, decoy.terminal), (0.25, true));
        let mut s = e.reset();
        for t in 0..3 {
            let r = e.step(&s, 0).unwrap();
            assert_eq!(r.terminal, t == 2);
            if t == 2 {
                assert_eq!(r.reward, 1.0);
            }
            s = r.state;
        }
    }
}
