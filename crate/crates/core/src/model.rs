//! Grounded STRIPS tasks and their transition semantics.
//!
//! Fluents are densely indexed, states are fixed-length bit vectors over
//! those indices and actions carry index lists for precondition, add and
//! delete effects. States are values: `apply` never mutates its input.

use std::fmt;

use thiserror::Error;

/// Index of a fluent inside its task.
pub type FluentId = usize;
/// Index of a ground action inside its task.
pub type ActionId = usize;
/// Path cost. STRIPS tasks use unit costs unless built otherwise.
pub type Cost = u64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("action `{action}` is not applicable: precondition fluent `{fluent}` is false")]
    Inapplicable { action: String, fluent: String },
    #[error("action id {0} out of range")]
    UnknownAction(ActionId),
    #[error("fluent index {index} out of range for a task with {count} fluents")]
    FluentOutOfRange { index: usize, count: usize },
    #[error("action `{0}` adds and deletes the same fluent")]
    AddDeleteOverlap(String),
    #[error("duplicate fluent name `{0}`")]
    DuplicateFluent(String),
    #[error("plan does not reach a goal state ({unachieved} goals unachieved)")]
    PlanMissesGoal { unachieved: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fluent {
    pub index: FluentId,
    pub name: String,
}

/// A truth assignment over the fluents of a task.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    words: Vec<u64>,
    len: usize,
}

impl State {
    pub fn empty(len: usize) -> Self {
        State {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_fluents(len: usize, fluents: impl IntoIterator<Item = FluentId>) -> Self {
        let mut s = State::empty(len);
        for f in fluents {
            s.set(f, true);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, f: FluentId) -> bool {
        f < self.len && self.words[f / 64] >> (f % 64) & 1 == 1
    }

    /// Panics if `f` is out of range.
    pub fn set(&mut self, f: FluentId, value: bool) {
        assert!(f < self.len, "fluent {f} out of range ({})", self.len);
        let mask = 1u64 << (f % 64);
        if value {
            self.words[f / 64] |= mask;
        } else {
            self.words[f / 64] &= !mask;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// True fluents in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = FluentId> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let bit = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + bit)
                }
            })
        })
    }

    pub fn is_subset_of(&self, other: &State) -> bool {
        self.len == other.len && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundAction {
    pub id: ActionId,
    pub name: String,
    pub pre: Vec<FluentId>,
    pub add: Vec<FluentId>,
    pub del: Vec<FluentId>,
    pub cost: Cost,
}

impl GroundAction {
    /// Unit-cost action; index lists are sorted and deduplicated.
    pub fn new(
        id: ActionId,
        name: impl Into<String>,
        pre: impl IntoIterator<Item = FluentId>,
        add: impl IntoIterator<Item = FluentId>,
        del: impl IntoIterator<Item = FluentId>,
    ) -> Self {
        fn norm(v: impl IntoIterator<Item = FluentId>) -> Vec<FluentId> {
            let mut v: Vec<_> = v.into_iter().collect();
            v.sort_unstable();
            v.dedup();
            v
        }
        GroundAction {
            id,
            name: name.into(),
            pre: norm(pre),
            add: norm(add),
            del: norm(del),
            cost: 1,
        }
    }

    pub fn with_cost(mut self, cost: Cost) -> Self {
        self.cost = cost;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StripsTask {
    pub name: String,
    fluents: Vec<Fluent>,
    actions: Vec<GroundAction>,
    init: State,
    goal: Vec<FluentId>,
}

impl StripsTask {
    /// Builds a task, checking index ranges, name uniqueness and the
    /// add/delete disjointness of every action. Action ids are reassigned to
    /// their position in `actions`.
    pub fn new(
        name: impl Into<String>,
        fluent_names: Vec<String>,
        mut actions: Vec<GroundAction>,
        init: impl IntoIterator<Item = FluentId>,
        goal: impl IntoIterator<Item = FluentId>,
    ) -> Result<Self, ModelError> {
        let count = fluent_names.len();
        let mut seen = std::collections::HashSet::new();
        for n in &fluent_names {
            if !seen.insert(n.as_str()) {
                return Err(ModelError::DuplicateFluent(n.clone()));
            }
        }
        let check = |i: usize| {
            if i < count {
                Ok(())
            } else {
                Err(ModelError::FluentOutOfRange { index: i, count })
            }
        };
        for (id, a) in actions.iter_mut().enumerate() {
            a.id = id;
            for &i in a.pre.iter().chain(&a.add).chain(&a.del) {
                check(i)?;
            }
            if a.add.iter().any(|f| a.del.binary_search(f).is_ok()) {
                return Err(ModelError::AddDeleteOverlap(a.name.clone()));
            }
        }
        let init: Vec<_> = init.into_iter().collect();
        for &i in &init {
            check(i)?;
        }
        let mut goal: Vec<_> = goal.into_iter().collect();
        goal.sort_unstable();
        goal.dedup();
        for &i in &goal {
            check(i)?;
        }
        Ok(StripsTask {
            name: name.into(),
            fluents: fluent_names
                .into_iter()
                .enumerate()
                .map(|(index, name)| Fluent { index, name })
                .collect(),
            actions,
            init: State::from_fluents(count, init),
            goal,
        })
    }

    pub fn fluents(&self) -> &[Fluent] {
        &self.fluents
    }

    pub fn fluent_count(&self) -> usize {
        self.fluents.len()
    }

    pub fn fluent_name(&self, f: FluentId) -> &str {
        &self.fluents[f].name
    }

    pub fn fluent_by_name(&self, name: &str) -> Option<FluentId> {
        self.fluents.iter().position(|f| f.name == name)
    }

    pub fn actions(&self) -> &[GroundAction] {
        &self.actions
    }

    pub fn action(&self, id: ActionId) -> Result<&GroundAction, ModelError> {
        self.actions.get(id).ok_or(ModelError::UnknownAction(id))
    }

    pub fn init(&self) -> &State {
        &self.init
    }

    pub fn goal(&self) -> &[FluentId] {
        &self.goal
    }

    pub fn applicable(&self, s: &State, a: &GroundAction) -> bool {
        a.pre.iter().all(|&p| s.contains(p))
    }

    pub fn apply(&self, s: &State, a: &GroundAction) -> Result<State, ModelError> {
        if let Some(&p) = a.pre.iter().find(|&&p| !s.contains(p)) {
            return Err(ModelError::Inapplicable {
                action: a.name.clone(),
                fluent: self.fluents[p].name.clone(),
            });
        }
        Ok(self.successor(s, a))
    }

    /// `apply` without the precondition check.
    pub(crate) fn successor(&self, s: &State, a: &GroundAction) -> State {
        let mut next = s.clone();
        for &d in &a.del {
            next.set(d, false);
        }
        for &f in &a.add {
            next.set(f, true);
        }
        next
    }

    /// Number of goal fluents false in `s` (the `#g` heuristic).
    pub fn goal_count(&self, s: &State) -> usize {
        self.goal.iter().filter(|&&g| !s.contains(g)).count()
    }

    pub fn is_goal(&self, s: &State) -> bool {
        self.goal_count(s) == 0
    }

    /// Replays `plan` from the initial state, returning the final state and
    /// the accumulated cost. Fails on an inapplicable step or if the final
    /// state misses a goal.
    pub fn validate_plan(&self, plan: &[ActionId]) -> Result<(State, Cost), ModelError> {
        self.validate_plan_from(&self.init, plan, |s| self.goal_count(s))
    }

    pub(crate) fn validate_plan_from(
        &self,
        start: &State,
        plan: &[ActionId],
        unachieved: impl Fn(&State) -> usize,
    ) -> Result<(State, Cost), ModelError> {
        let mut s = start.clone();
        let mut cost = 0;
        for &id in plan {
            let a = self.action(id)?;
            s = self.apply(&s, a)?;
            cost += a.cost;
        }
        match unachieved(&s) {
            0 => Ok((s, cost)),
            n => Err(ModelError::PlanMissesGoal { unachieved: n }),
        }
    }

    /// Copy of this task with a different goal set.
    pub fn with_goal(&self, goal: impl IntoIterator<Item = FluentId>) -> Result<Self, ModelError> {
        let mut t = self.clone();
        let mut goal: Vec<_> = goal.into_iter().collect();
        goal.sort_unstable();
        goal.dedup();
        if let Some(&bad) = goal.iter().find(|&&g| g >= self.fluent_count()) {
            return Err(ModelError::FluentOutOfRange {
                index: bad,
                count: self.fluent_count(),
            });
        }
        t.goal = goal;
        Ok(t)
    }

    /// Copy of this task starting from `init`.
    pub fn with_init(&self, init: State) -> Self {
        assert_eq!(init.len(), self.fluent_count());
        let mut t = self.clone();
        t.init = init;
        t
    }

    pub fn state_names(&self, s: &State) -> Vec<&str> {
        s.iter().map(|f| self.fluent_name(f)).collect()
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// Chain p0 -> p1 -> ... -> pn; each step consumes the previous fluent.
    pub fn chain(n: usize) -> StripsTask {
        let names = (0..=n).map(|i| format!("p{i}")).collect();
        let actions = (0..n)
            .map(|i| GroundAction::new(0, format!("step{i}"), [i], [i + 1], [i]))
            .collect();
        StripsTask::new("chain", names, actions, [0], [n]).unwrap()
    }
}
