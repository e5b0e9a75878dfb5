use super::{check_step, finite, numeric, EnvError, EnvSpec, EnvState, Environment, MountainCarConfig, NumericState, RewardKind, StateKind, StepResult};

/// Underpowered car in a valley; actions push left, coast, push right.
/// State is `[position, velocity]`.
#[derive(Debug, Clone)]
pub struct MountainCar {
    cfg: MountainCarConfig,
    spec: EnvSpec,
}

impl MountainCar {
    pub fn new(cfg: MountainCarConfig) -> Self {
        let spec = EnvSpec {
            name: "mountaincar",
            action_count: 3,
            horizon: cfg.horizon,
            state_kind: StateKind::Numeric,
            state_len: 2,
            reward_kind: RewardKind::CostToMinimize,
            has_goal: true,
        };
        MountainCar { cfg, spec }
    }

    pub fn config(&self) -> &MountainCarConfig {
        &self.cfg
    }

    fn reached(&self, position: f64, velocity: f64) -> bool {
        position >= self.cfg.goal_position && velocity >= self.cfg.goal_velocity
    }
}

impl Environment for MountainCar {
    fn spec(&self) -> &EnvSpec {
        &self.spec
    }

    fn reset(&self) -> EnvState {
        EnvState::Numeric(NumericState::new(vec![self.cfg.initial_position, self.cfg.initial_velocity]))
    }

    fn step(&self, s: &EnvState, action: usize) -> Result<StepResult, EnvError> {
        check_step(&self.spec, s, action)?;
        let n = numeric(&self.spec, s)?;
        let c = &self.cfg;
        let (mut position, mut velocity) = (n.values[0], n.values[1]);
        velocity += (action as f64 - 1.0) * c.force + (3.0 * position).cos() * (-c.gravity);
        velocity = velocity.clamp(-c.max_speed, c.max_speed);
        position += velocity;
        position = position.clamp(c.min_position, c.max_position);
        if position == c.min_position && velocity < 0.0 {
            velocity = 0.0;
        }
        let terminal = self.reached(position, velocity);
        Ok(StepResult {
            state: finite(&self.spec, vec![position, velocity], n.step_index + 1)?,
            reward: c.step_reward,
            terminal,
        })
    }

    fn is_goal(&self, s: &EnvState) -> bool {
        s.as_numeric().is_some_and(|n| self.reached(n.values[0], n.values[1]))
    }
}
