use serde::Serialize;

use crate::model::{FluentId, State, StripsTask};
use crate::novelty::AtomFeatures;

use super::iw::{iw_core, CostMode, RunEnd};
use super::space::StripsSpace;
use super::{Budget, Meter, SearchError};

/// Fluents seen on the way to individual goals during a lookahead.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelevantSet {
    fluents: Vec<FluentId>,
    /// The lookahead hit its budget, so the set may be missing fluents.
    pub partial: bool,
    /// Novelty bound of the lookahead that produced the set.
    pub k: usize,
}

impl RelevantSet {
    pub fn from_fluents(fluents: impl IntoIterator<Item = FluentId>) -> Self {
        let mut fluents: Vec<_> = fluents.into_iter().collect();
        fluents.sort_unstable();
        fluents.dedup();
        RelevantSet { fluents, partial: false, k: 0 }
    }

    pub fn fluents(&self) -> &[FluentId] {
        &self.fluents
    }

    pub fn len(&self) -> usize {
        self.fluents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fluents.is_empty()
    }

    pub fn contains(&self, f: FluentId) -> bool {
        self.fluents.binary_search(&f).is_ok()
    }
}

/// Runs IW(k) from the initial state without stopping at the goal. For each
/// goal fluent, the first generated state containing it (hence a shallowest
/// one) contributes every fluent true along its path from the root. Goals
/// already true initially are reached by the empty path and mark nothing.
pub fn extract_relevant(task: &StripsTask, k: usize, budget: Budget) -> Result<RelevantSet, SearchError> {
    let mut meter = Meter::new(budget);
    let run = iw_core(&StripsSpace::new(task), &mut AtomFeatures, k, CostMode::Uniform, &mut meter, |_| false)?;
    let mut marked = State::empty(task.fluent_count());
    let init = task.init();
    let mut pending: Vec<FluentId> = task.goal().iter().copied().filter(|&g| !init.contains(g)).collect();
    for (id, node) in run.tree.nodes().iter().enumerate() {
        if pending.is_empty() {
            break;
        }
        let before = pending.len();
        pending.retain(|&g| !node.state.contains(g));
        if pending.len() < before {
            for n in run.tree.path(id) {
                for f in run.tree.node(n).state.iter() {
                    marked.set(f, true);
                }
            }
        }
    }
    Ok(RelevantSet {
        fluents: marked.iter().collect(),
        partial: run.end == RunEnd::Budget,
        k,
    })
}

/// `|{f in R : f holds in some state of path}|`, computed from scratch.
pub fn r_count<'a>(path: impl IntoIterator<Item = &'a State>, r: &RelevantSet) -> usize {
    let mut seen: Vec<FluentId> = path
        .into_iter()
        .flat_map(|s| s.iter().filter(|&f| r.contains(f)).collect::<Vec<_>>())
        .collect();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

/// Incremental `#r`: each node carries the relevant fluents achieved on its
/// path, so a child costs one pass over its own state.
#[derive(Debug, Clone)]
pub struct RCounter {
    relevant: State,
}

impl RCounter {
    pub fn new(fluent_count: usize, r: &RelevantSet) -> Self {
        RCounter {
            relevant: State::from_fluents(fluent_count, r.fluents().iter().copied()),
        }
    }

    pub fn root(&self, s: &State) -> (State, usize) {
        self.child(&State::empty(self.relevant.len()), 0, s)
    }

    /// Achieved set and count for a child in state `s` of a parent with
    /// `(achieved, count)`.
    pub fn child(&self, achieved: &State, count: usize, s: &State) -> (State, usize) {
        let mut out = achieved.clone();
        let mut n = count;
        for f in s.iter() {
            if self.relevant.contains(f) && !out.contains(f) {
                out.set(f, true);
                n += 1;
            }
        }
        (out, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::chain;
    use crate::model::GroundAction;
    use proptest::prelude::*;

    #[test]
    fn chain_marks_every_cell() {
        let t = chain(4);
        let r = extract_relevant(&t, 1, Budget::default()).unwrap();
        assert_eq!(r.fluents(), &[0, 1, 2, 3, 4]);
        assert!(!r.partial);
    }

    #[test]
    fn goals_true_initially_mark_nothing() {
        let t = chain(4).with_goal([0]).unwrap();
        assert!(extract_relevant(&t, 1, Budget::default()).unwrap().is_empty());
        // only the path to the open goal counts
        let t = chain(4).with_goal([0, 2]).unwrap();
        assert_eq!(extract_relevant(&t, 1, Budget::default()).unwrap().fluents(), &[0, 1, 2]);
    }

    #[test]
    fn unreachable_goal_contributes_nothing() {
        let acts = vec![GroundAction::new(0, "ab", [0], [1], [])];
        let t = StripsTask::new("u", vec!["a".into(), "b".into(), "c".into()], acts, [0], [2]).unwrap();
        assert!(extract_relevant(&t, 1, Budget::default()).unwrap().is_empty());
    }

    #[test]
    fn budget_sets_partial_flag() {
        let r = extract_relevant(&chain(6), 1, Budget::nodes(2)).unwrap();
        assert!(r.partial);
    }

    #[test]
    fn counter_examples() {
        let r = RelevantSet::from_fluents([2, 3]);
        let c = RCounter::new(4, &r);
        let (a0, n0) = c.root(&State::from_fluents(4, [0, 1]));
        assert_eq!(n0, 0);
        let (_, n1) = c.child(&a0, n0, &State::from_fluents(4, [0, 2]));
        assert_eq!(n1, 1);
    }

    proptest! {
        #[test]
        fn incremental_matches_path_union(
            rel in proptest::collection::vec(0usize..12, 0..8),
            path in proptest::collection::vec(proptest::collection::vec(0usize..12, 0..6), 1..8),
        ) {
            let r = RelevantSet::from_fluents(rel);
            let c = RCounter::new(12, &r);
            let states: Vec<State> = path.iter().map(|fs| State::from_fluents(12, fs.iter().copied())).collect();
            let (mut acc, mut n) = c.root(&states[0]);
            prop_assert_eq!(n, r_count(&states[..1], &r));
            for i in 1..states.len() {
                let (a, m) = c.child(&acc, n, &states[i]);
                prop_assert!(m >= n);
                prop_assert_eq!(m, r_count(&states[..=i], &r));
                acc = a;
                n = m;
            }
        }
    }
}
