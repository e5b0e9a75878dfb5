use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use serde::{Deserialize, Serialize};

use crate::model::{State, StripsTask};
use crate::novelty::{atom_features, PartitionedNovelty};

use super::relevant::{extract_relevant, RCounter, RelevantSet};
use super::tree::Tree;
use super::{Budget, Meter, Plan, SearchError, SearchOutcome, SearchStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BfwsVariant {
    /// Exact novelty up to arity 2; non-novel nodes are kept and ranked last.
    Full,
    /// Tables of arity k; nodes with novelty above k are discarded.
    KPruning(usize),
    /// `KPruning(1)` first, then `Full` from scratch if that fails.
    Dual,
}

/// Priority of an extracted node: novelty (NOT_NOVEL as `u32::MAX`) and
/// unachieved goal count.
pub type BfwsKey = (u32, usize);

/// One pop from the open list, for checking the ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BfwsExtraction {
    pub key: BfwsKey,
    /// Best key still queued right after the pop.
    pub open_min: Option<BfwsKey>,
}

enum PhaseEnd {
    Found(Vec<usize>),
    Exhausted,
    Budget,
}

fn phase(
    task: &StripsTask,
    relevant: &RelevantSet,
    arity: usize,
    prune: bool,
    budget: Budget,
    stats: &mut SearchStats,
    observer: &mut dyn FnMut(&BfwsExtraction),
) -> Result<PhaseEnd, SearchError> {
    let mut meter = Meter::new(budget);
    let counter = RCounter::new(task.fluent_count(), relevant);
    let mut novelty: PartitionedNovelty<(usize, usize), _> = PartitionedNovelty::exact(arity);
    let init = task.init().clone();
    let (achieved, r0) = counter.root(&init);
    let g0 = task.goal_count(&init);
    let w0 = novelty.check_and_update((g0, r0), &atom_features(&init));
    stats.note_novelty(w0);
    if g0 == 0 {
        return Ok(PhaseEnd::Found(Vec::new()));
    }
    let mut tree = Tree::with_root(init.clone(), w0);
    // per node: relevant fluents achieved on its path and their count
    let mut path_r: Vec<(State, usize)> = vec![(achieved, r0)];
    let mut seen: HashSet<State> = HashSet::from([init]);
    let mut open: BinaryHeap<Reverse<(u32, usize, usize)>> = BinaryHeap::new();
    let rank = |w: crate::novelty::Novelty| w.value().unwrap_or(u32::MAX);
    open.push(Reverse((rank(w0), g0, 0)));

    while let Some(Reverse((w, g, id))) = open.pop() {
        observer(&BfwsExtraction {
            key: (w, g),
            open_min: open.peek().map(|Reverse((w, g, _))| (*w, *g)),
        });
        if meter.exhausted() {
            return Ok(PhaseEnd::Budget);
        }
        let s = tree.node(id).state.clone();
        stats.expanded += 1;
        for a in task.actions() {
            if !task.applicable(&s, a) {
                continue;
            }
            if !meter.generate() {
                return Ok(PhaseEnd::Budget);
            }
            stats.generated += 1;
            let next = task.successor(&s, a);
            if seen.contains(&next) {
                continue;
            }
            let (child_r, rc) = counter.child(&path_r[id].0, path_r[id].1, &next);
            let gc = task.goal_count(&next);
            let wn = novelty.check_and_update((gc, rc), &atom_features(&next));
            if prune && !wn.within(arity) {
                stats.pruned += 1;
                continue;
            }
            stats.note_novelty(wn);
            seen.insert(next.clone());
            let c = tree.add_child(id, a.id, next, a.cost, -(a.cost as f64), false, wn);
            path_r.push((child_r, rc));
            if gc == 0 {
                return Ok(PhaseEnd::Found(tree.path_actions(c)));
            }
            open.push(Reverse((rank(wn), gc, c)));
        }
    }
    Ok(PhaseEnd::Exhausted)
}

/// Relevant fluents for `#r`: an IW(1) lookahead, widened to IW(2) when
/// IW(1) marks nothing.
fn relevant_for(task: &StripsTask, budget: Budget) -> Result<RelevantSet, SearchError> {
    let r = extract_relevant(task, 1, budget)?;
    if r.is_empty() {
        extract_relevant(task, 2, budget)
    } else {
        Ok(r)
    }
}

/// Best-first width search ordered by `(w, #g)` with FIFO tie-breaking,
/// where `w` is novelty partitioned by `(#g, #r)`. Each phase of `Dual`
/// gets its own copy of `budget`.
pub fn bfws(task: &StripsTask, variant: BfwsVariant, budget: Budget) -> Result<SearchOutcome, SearchError> {
    bfws_observed(task, variant, budget, &mut |_| {})
}

/// [`bfws`] reporting every extraction to `observer`.
pub fn bfws_observed(
    task: &StripsTask,
    variant: BfwsVariant,
    budget: Budget,
    observer: &mut dyn FnMut(&BfwsExtraction),
) -> Result<SearchOutcome, SearchError> {
    let start = std::time::Instant::now();
    let relevant = relevant_for(task, budget)?;
    let phases: Vec<(&str, usize, bool)> = match variant {
        BfwsVariant::Full => vec![("bfws", 2, false)],
        BfwsVariant::KPruning(0) => return Err(SearchError::ZeroWidth),
        BfwsVariant::KPruning(k) => vec![("k-bfws", k, true)],
        BfwsVariant::Dual => vec![("1-bfws", 1, true), ("bfws", 2, false)],
    };
    let name = match variant {
        BfwsVariant::Full => "bfws".to_string(),
        BfwsVariant::KPruning(k) => format!("{k}-bfws"),
        BfwsVariant::Dual => "dual-bfws".to_string(),
    };
    let mut stats = SearchStats::named(&name, None);
    stats.relevant = Some(relevant.len());
    let mut last_budget = false;
    for (label, arity, prune) in phases {
        stats.k = Some(arity);
        let end = phase(task, &relevant, arity, prune, budget, &mut stats, observer)?;
        stats.wall_ms = start.elapsed().as_secs_f64() * 1e3;
        match end {
            PhaseEnd::Found(actions) => {
                if variant == BfwsVariant::Dual {
                    stats.phase = Some(label.to_string());
                }
                return Ok(SearchOutcome::Solved(Plan::validated(task, actions, stats)?));
            }
            PhaseEnd::Exhausted => last_budget = false,
            PhaseEnd::Budget => last_budget = true,
        }
    }
    Ok(if last_budget {
        SearchOutcome::BudgetExceeded(stats)
    } else {
        SearchOutcome::Exhausted(stats)
    })
}
