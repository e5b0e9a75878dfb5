use std::f64::consts::PI;

use super::{check_step, finite, numeric, AcrobotConfig, EnvError, EnvSpec, EnvState, Environment, NumericState, RewardKind, StateKind, StepResult};

/// Two-link underactuated pendulum; torque is applied at the elbow.
/// State is `[theta1, theta2, dtheta1, dtheta2]`, angles wrapped to `[-pi, pi]`.
#[derive(Debug, Clone)]
pub struct Acrobot {
    cfg: AcrobotConfig,
    spec: EnvSpec,
}

fn wrap(mut x: f64, lo: f64, hi: f64) -> f64 {
    let span = hi - lo;
    while x > hi {
        x -= span;
    }
    while x < lo {
        x += span;
    }
    x
}

impl Acrobot {
    pub fn new(cfg: AcrobotConfig) -> Self {
        let spec = EnvSpec {
            name: "acrobot",
            action_count: cfg.torques.len(),
            horizon: cfg.horizon,
            state_kind: StateKind::Numeric,
            state_len: 4,
            reward_kind: RewardKind::CostToMinimize,
            has_goal: true,
        };
        Acrobot { cfg, spec }
    }

    pub fn config(&self) -> &AcrobotConfig {
        &self.cfg
    }

    /// Height of the tip above the pivot, in units of link length.
    pub fn tip_height(values: &[f64]) -> f64 {
        -values[0].cos() - (values[0] + values[1]).cos()
    }

    fn derivs(&self, s: [f64; 4], torque: f64) -> [f64; 4] {
        let c = &self.cfg;
        let (m1, m2, l1) = (c.link_mass_1, c.link_mass_2, c.link_length_1);
        let (lc1, lc2, i1, i2, g) = (c.link_com_pos_1, c.link_com_pos_2, c.link_moi, c.link_moi, c.gravity);
        let [theta1, theta2, dtheta1, dtheta2] = s;
        let d1 = m1 * lc1 * lc1 + m2 * (l1 * l1 + lc2 * lc2 + 2.0 * l1 * lc2 * theta2.cos()) + i1 + i2;
        let d2 = m2 * (lc2 * lc2 + l1 * lc2 * theta2.cos()) + i2;
        let phi2 = m2 * lc2 * g * (theta1 + theta2 - PI / 2.0).cos();
        let phi1 = -m2 * l1 * lc2 * dtheta2 * dtheta2 * theta2.sin()
            - 2.0 * m2 * l1 * lc2 * dtheta2 * dtheta1 * theta2.sin()
            + (m1 * lc1 + m2 * l1) * g * (theta1 - PI / 2.0).cos()
            + phi2;
        let ddtheta2 = (torque + d2 / d1 * phi1 - m2 * l1 * lc2 * dtheta1 * dtheta1 * theta2.sin() - phi2)
            / (m2 * lc2 * lc2 + i2 - d2 * d2 / d1);
        let ddtheta1 = -(d2 * ddtheta2 + phi1) / d1;
        [dtheta1, dtheta2, ddtheta1, ddtheta2]
    }

    fn rk4(&self, s: [f64; 4], torque: f64) -> [f64; 4] {
        let dt = self.cfg.dt;
        let add = |a: [f64; 4], b: [f64; 4], h: f64| std::array::from_fn::<f64, 4, _>(|i| a[i] + h * b[i]);
        let k1 = self.derivs(s, torque);
        let k2 = self.derivs(add(s, k1, dt / 2.0), torque);
        let k3 = self.derivs(add(s, k2, dt / 2.0), torque);
        let k4 = self.derivs(add(s, k3, dt), torque);
        std::array::from_fn(|i| s[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
    }
}

impl Environment for Acrobot {
    fn spec(&self) -> &EnvSpec {
        &self.spec
    }

    fn reset(&self) -> EnvState {
        EnvState::Numeric(NumericState::new(self.cfg.initial_state.to_vec()))
    }

    fn step(&self, s: &EnvState, action: usize) -> Result<StepResult, EnvError> {
        check_step(&self.spec, s, action)?;
        let n = numeric(&self.spec, s)?;
        let c = &self.cfg;
        let ns = self.rk4([n.values[0], n.values[1], n.values[2], n.values[3]], c.torques[action]);
        let next = vec![
            wrap(ns[0], -PI, PI),
            wrap(ns[1], -PI, PI),
            ns[2].clamp(-c.max_vel_1, c.max_vel_1),
            ns[3].clamp(-c.max_vel_2, c.max_vel_2),
        ];
        let terminal = Self::tip_height(&next) > c.goal_height;
        Ok(StepResult {
            state: finite(&self.spec, next, n.step_index + 1)?,
            reward: if terminal { 0.0 } else { c.step_reward },
            terminal,
        })
    }

    fn is_goal(&self, s: &EnvState) -> bool {
        s.as_numeric().is_some_and(|n| Self::tip_height(&n.values) > self.cfg.goal_height)
    }
}
