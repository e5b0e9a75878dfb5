use std::collections::{HashSet, VecDeque};

use crate::model::{State, StripsTask};

use super::tree::Tree;
use super::{Meter, Plan, SearchError, SearchOutcome, SearchStats};
use crate::novelty::Novelty;

/// Result of a search together with the states it expanded, in order.
#[derive(Debug, Clone)]
pub struct ExpansionTrace {
    pub outcome: SearchOutcome,
    pub expanded: Vec<State>,
}

/// Breadth-first search with duplicate detection on full states. Optimal in
/// plan length; the goal test runs at generation.
pub fn brfs_oracle(task: &StripsTask, node_cap: u64) -> Result<SearchOutcome, SearchError> {
    brfs_trace(task, node_cap, true).map(|t| t.outcome)
}

/// [`brfs_oracle`] with the expanded states recorded. With `stop_at_goal`
/// false it enumerates the whole reachable space.
pub fn brfs_trace(task: &StripsTask, node_cap: u64, stop_at_goal: bool) -> Result<ExpansionTrace, SearchError> {
    let mut meter = Meter::new(super::Budget::nodes(node_cap));
    let mut stats = SearchStats::named("brfs", None);
    let mut tree = Tree::with_root(task.init().clone(), Novelty::new(1));
    let mut seen: HashSet<State> = HashSet::from([task.init().clone()]);
    let mut expanded = Vec::new();
    let mut found = None;
    let mut over = false;
    if stop_at_goal && task.is_goal(task.init()) {
        found = Some(0);
    }
    let mut open = VecDeque::from([0]);
    'search: while found.is_none() {
        let Some(id) = open.pop_front() else { break };
        let s = tree.node(id).state.clone();
        stats.expanded += 1;
        expanded.push(s.clone());
        for a in task.actions() {
            if !task.applicable(&s, a) {
                continue;
            }
            if !meter.generate() {
                over = true;
                break 'search;
            }
            stats.generated += 1;
            let next = task.successor(&s, a);
            if !seen.insert(next.clone()) {
                stats.pruned += 1;
                continue;
            }
            let goal = stop_at_goal && task.is_goal(&next);
            let c = tree.add_child(id, a.id, next, a.cost, -(a.cost as f64), false, Novelty::new(1));
            if goal {
                found = Some(c);
                break 'search;
            }
            open.push_back(c);
        }
    }
    stats.wall_ms = meter.elapsed_ms();
    let outcome = match (found, over) {
        (Some(id), _) => SearchOutcome::Solved(Plan::validated(task, tree.path_actions(id), stats)?),
        (None, true) => SearchOutcome::BudgetExceeded(stats),
        (None, false) => SearchOutcome::Exhausted(stats),
    };
    Ok(ExpansionTrace { outcome, expanded })
}
