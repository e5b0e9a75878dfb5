use super::{check_step, finite, numeric, CartPoleConfig, EnvError, EnvSpec, EnvState, Environment, NumericState, RewardKind, StateKind, StepResult};

/// Pole balanced on a cart, explicit Euler integration.
/// State is `[x, x_dot, theta, theta_dot]`; actions push left or right.
#[derive(Debug, Clone)]
pub struct CartPole {
    cfg: CartPoleConfig,
    spec: EnvSpec,
}

impl CartPole {
    pub fn new(cfg: CartPoleConfig) -> Self {
        let spec = EnvSpec {
            name: "cartpole",
            action_count: 2,
            horizon: cfg.horizon,
            state_kind: StateKind::Numeric,
            state_len: 4,
            reward_kind: RewardKind::RewardToMaximize,
            has_goal: false,
        };
        CartPole { cfg, spec }
    }

    pub fn config(&self) -> &CartPoleConfig {
        &self.cfg
    }

    /// True when the cart or the pole has left its threshold band.
    pub fn out_of_bounds(&self, values: &[f64]) -> bool {
        values[0] < -self.cfg.x_threshold
            || values[0] > self.cfg.x_threshold
            || values[2] < -self.cfg.theta_threshold
            || values[2] > self.cfg.theta_threshold
    }
}

impl Environment for CartPole {
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
        let [x, x_dot, theta, theta_dot] = [n.values[0], n.values[1], n.values[2], n.values[3]];
        let force = if action == 1 { c.force_mag } else { -c.force_mag };
        let total_mass = c.mass_cart + c.mass_pole;
        let polemass_length = c.mass_pole * c.half_pole_length;
        let (sin, cos) = theta.sin_cos();
        let temp = (force + polemass_length * theta_dot * theta_dot * sin) / total_mass;
        let theta_acc = (c.gravity * sin - cos * temp)
            / (c.half_pole_length * (4.0 / 3.0 - c.mass_pole * cos * cos / total_mass));
        let x_acc = temp - polemass_length * theta_acc * cos / total_mass;
        let next = vec![
            x + c.dt * x_dot,
            x_dot + c.dt * x_acc,
            theta + c.dt * theta_dot,
            theta_dot + c.dt * theta_acc,
        ];
        let terminal = self.out_of_bounds(&next);
        Ok(StepResult {
            state: finite(&self.spec, next, n.step_index + 1)?,
            // paid for each step that ends with the pole still up
            reward: if terminal { 0.0 } else { c.step_reward },
            terminal,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envs::EnvConfig;

    // Independent transcription of the published equations of motion.
    fn reference_step(s: [f64; 4], push_right: bool) -> [f64; 4] {
        let (g, mc, mp, l, f, tau) = (9.8, 1.0, 0.1, 0.5, 10.0, 0.02);
        let f = if push_right { f } else { -f };
        let [x, xd, th, thd] = s;
        let m = mc + mp;
        let thdd = (g * th.sin() + th.cos() * ((-f - mp * l * thd * thd * th.sin()) / m))
            / (l * (4.0 / 3.0 - mp * th.cos().powi(2) / m));
        let xdd = (f + mp * l * (thd * thd * th.sin() - thdd * th.cos())) / m;
        [x + tau * xd, xd + tau * xdd, th + tau * thd, thd + tau * thdd]
    }

    #[test]
    fn alternating_forces_track_reference() {
        let e = CartPole::new(EnvConfig::default().cartpole);
        let mut s = e.reset();
        let mut r = [0.0; 4];
        for t in 0..200 {
            let a = t % 2;
            let out = e.step(&s, a).unwrap();
            r = reference_step(r, a == 1);
            let v = out.state.to_vec();
            for i in 0..4 {
                assert!((v[i] - r[i]).abs() < 1e-12, "step {t} var {i}: {} vs {}", v[i], r[i]);
            }
            let reference_out = r[0].abs() > 2.4 || r[2].abs() > 0.20943951023931953;
            assert_eq!(out.terminal, reference_out, "step {t}");
            assert_eq!(out.reward, if out.terminal { 0.0 } else { 1.0 });
            if t < 25 {
                assert!(!out.terminal, "step {t}");
            }
            if out.terminal {
                break;
            }
            s = out.state;
        }
    }

    #[test]
    fn feedback_forces_stay_upright() {
        let e = CartPole::new(EnvConfig::default().cartpole);
        let mut s = e.reset();
        for t in 0..200 {
            let v = s.to_vec();
            let a = usize::from(v[2] + 0.5 * v[3] > 0.0);
            let out = e.step(&s, a).unwrap();
            assert!(!out.terminal, "step {t}");
            s = out.state;
        }
    }

    #[test]
    fn terminal_exactly_at_threshold_crossing() {
        let e = CartPole::new(EnvConfig::default().cartpole);
        let mut s = e.reset();
        for _ in 0..200 {
            let out = e.step(&s, 1).unwrap();
            assert_eq!(out.terminal, e.out_of_bounds(&out.state.to_vec()));
            if out.terminal {
                return;
            }
            s = out.state;
        }
        panic!("constant push must topple the pole");
    }
}
