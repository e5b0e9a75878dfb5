use crate::envs::{EnvError, EnvState, Environment};
use crate::model::{Cost, State, StripsTask};

use super::SearchError;

#[derive(Debug, Clone)]
pub struct Transition<S> {
    pub action: usize,
    pub cost: Cost,
    pub reward: f64,
    pub terminal: bool,
    pub state: S,
}

/// A deterministic state space explored by forward search.
pub trait SearchSpace {
    type State: Clone;

    fn root(&self) -> Self::State;

    /// Appends the successors of `s` to `out`, in action order.
    fn successors(&self, s: &Self::State, out: &mut Vec<Transition<Self::State>>) -> Result<(), SearchError>;
}

/// Forward search over a STRIPS task from an arbitrary start state.
#[derive(Debug, Clone, Copy)]
pub struct StripsSpace<'a> {
    pub task: &'a StripsTask,
    pub start: &'a State,
}

impl<'a> StripsSpace<'a> {
    pub fn new(task: &'a StripsTask) -> Self {
        StripsSpace { task, start: task.init() }
    }

    pub fn from_state(task: &'a StripsTask, start: &'a State) -> Self {
        StripsSpace { task, start }
    }
}

impl SearchSpace for StripsSpace<'_> {
    type State = State;

    fn root(&self) -> State {
        self.start.clone()
    }

    fn successors(&self, s: &State, out: &mut Vec<Transition<State>>) -> Result<(), SearchError> {
        for a in self.task.actions() {
            if self.task.applicable(s, a) {
                out.push(Transition {
                    action: a.id,
                    cost: a.cost,
                    reward: -(a.cost as f64),
                    terminal: false,
                    state: self.task.successor(s, a),
                });
            }
        }
        Ok(())
    }
}

/// Lookahead over a simulator. Terminal states and states at the horizon
/// have no successors.
#[derive(Clone, Copy)]
pub struct EnvSpace<'a> {
    pub env: &'a dyn Environment,
    pub start: &'a EnvState,
}

impl<'a> EnvSpace<'a> {
    pub fn new(env: &'a dyn Environment, start: &'a EnvState) -> Self {
        EnvSpace { env, start }
    }
}

impl SearchSpace for EnvSpace<'_> {
    type State = EnvState;

    fn root(&self) -> EnvState {
        self.start.clone()
    }

    fn successors(&self, s: &EnvState, out: &mut Vec<Transition<EnvState>>) -> Result<(), SearchError> {
        for action in 0..self.env.spec().action_count {
            match self.env.step(s, action) {
                Ok(r) => out.push(Transition {
                    action,
                    cost: 1,
                    reward: r.reward,
                    terminal: r.terminal,
                    state: r.state,
                }),
                Err(EnvError::HorizonExceeded { .. }) => return Ok(()),
                Err(e) => return Err(e.into()),
            }
        }
        Ok(())
    }
}
