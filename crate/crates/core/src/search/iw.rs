use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::envs::{EnvState, Environment};
use crate::model::{Cost, State, StripsTask};
use crate::novelty::{ApproxConfig, ApproxNoveltyTable, AtomFeatures, FeatureMap, NoveltyMeasure, NoveltyTable};

use super::brfs::ExpansionTrace;
use super::space::{EnvSpace, SearchSpace, StripsSpace, Transition};
use super::tree::{NodeId, Tree};
use super::{Budget, Meter, Plan, SearchError, SearchOutcome, SearchStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CostMode {
    /// Breadth-first order; the goal test runs when a node is generated.
    #[default]
    Uniform,
    /// Nondecreasing path cost; novelty and the goal test are evaluated
    /// when a node is taken off the queue.
    Dijkstra,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum RunEnd {
    Found(NodeId),
    Exhausted,
    Budget,
}

pub(crate) struct IwRun<S> {
    pub tree: Tree<S>,
    pub end: RunEnd,
    pub stats: SearchStats,
    /// Node ids in expansion order.
    pub expanded: Vec<NodeId>,
}

/// IW(k) over any space: children whose novelty exceeds `k` are dropped.
/// `stop` is the goal test; terminal nodes are kept but never expanded.
pub(crate) fn iw_core<Sp, F>(
    space: &Sp,
    features: &mut F,
    k: usize,
    mode: CostMode,
    meter: &mut Meter,
    stop: impl FnMut(&Sp::State) -> bool,
) -> Result<IwRun<Sp::State>, SearchError>
where
    Sp: SearchSpace,
    F: FeatureMap<Sp::State> + ?Sized,
{
    if k == 0 {
        return Err(SearchError::ZeroWidth);
    }
    iw_core_with(space, features, k, &mut NoveltyTable::new(k), mode, meter, stop)
}

pub(crate) fn iw_core_with<Sp, F>(
    space: &Sp,
    features: &mut F,
    k: usize,
    table: &mut dyn NoveltyMeasure,
    mode: CostMode,
    meter: &mut Meter,
    stop: impl FnMut(&Sp::State) -> bool,
) -> Result<IwRun<Sp::State>, SearchError>
where
    Sp: SearchSpace,
    F: FeatureMap<Sp::State> + ?Sized,
{
    if k == 0 {
        return Err(SearchError::ZeroWidth);
    }
    let mut stats = SearchStats::named("iw", Some(k));
    features.reset();
    let root = space.root();
    let novelty = table.check_and_update(&features.features(&root)?);
    stats.note_novelty(novelty);
    let mut run = IwRun {
        tree: Tree::with_root(root, novelty),
        end: RunEnd::Exhausted,
        stats,
        expanded: Vec::new(),
    };
    run.end = match mode {
        CostMode::Uniform => breadth_first(space, features, k, table, meter, stop, &mut run)?,
        CostMode::Dijkstra => cheapest_first(space, features, k, table, meter, stop, &mut run)?,
    };
    run.stats.wall_ms = meter.elapsed_ms();
    Ok(run)
}

fn breadth_first<Sp, F>(
    space: &Sp,
    features: &mut F,
    k: usize,
    table: &mut dyn NoveltyMeasure,
    meter: &mut Meter,
    mut stop: impl FnMut(&Sp::State) -> bool,
    run: &mut IwRun<Sp::State>,
) -> Result<RunEnd, SearchError>
where
    Sp: SearchSpace,
    F: FeatureMap<Sp::State> + ?Sized,
{
    let tree = &mut run.tree;
    if stop(&tree.node(0).state) {
        return Ok(RunEnd::Found(0));
    }
    let mut open = VecDeque::from([0]);
    let mut buf: Vec<Transition<Sp::State>> = Vec::new();
    while let Some(id) = open.pop_front() {
        if tree.node(id).terminal {
            continue;
        }
        if meter.exhausted() {
            return Ok(RunEnd::Budget);
        }
        buf.clear();
        space.successors(&tree.node(id).state, &mut buf)?;
        run.stats.expanded += 1;
        run.expanded.push(id);
        for t in buf.drain(..) {
            if !meter.generate() {
                return Ok(RunEnd::Budget);
            }
            run.stats.generated += 1;
            let novelty = table.check_and_update(&features.features(&t.state)?);
            if !novelty.within(k) {
                run.stats.pruned += 1;
                continue;
            }
            run.stats.note_novelty(novelty);
            let goal = stop(&t.state);
            let c = tree.add_child(id, t.action, t.state, t.cost, t.reward, t.terminal, novelty);
            if goal {
                return Ok(RunEnd::Found(c));
            }
            open.push_back(c);
        }
    }
    Ok(RunEnd::Exhausted)
}

/// Dijkstra order. Novelty and the goal test are evaluated when a node
/// leaves the queue, so a cheaper path to a tuple is seen before a dearer
/// one that happened to be generated first.
fn cheapest_first<Sp, F>(
    space: &Sp,
    features: &mut F,
    k: usize,
    table: &mut dyn NoveltyMeasure,
    meter: &mut Meter,
    mut stop: impl FnMut(&Sp::State) -> bool,
    run: &mut IwRun<Sp::State>,
) -> Result<RunEnd, SearchError>
where
    Sp: SearchSpace,
    F: FeatureMap<Sp::State> + ?Sized,
{
    let tree = &mut run.tree;
    // queued children wait here until popped
    let mut pending: Vec<Option<(NodeId, Transition<Sp::State>)>> = Vec::new();
    let mut open: BinaryHeap<Reverse<(Cost, usize)>> = BinaryHeap::new();
    let mut buf: Vec<Transition<Sp::State>> = Vec::new();
    let mut next: Option<NodeId> = Some(0);
    loop {
        let id = match next.take() {
            Some(id) => id,
            None => {
                let Some(Reverse((_, seq))) = open.pop() else {
                    return Ok(RunEnd::Exhausted);
                };
                let (parent, t) = pending[seq].take().expect("queued once");
                let novelty = table.check_and_update(&features.features(&t.state)?);
                if !novelty.within(k) {
                    run.stats.pruned += 1;
                    continue;
                }
                run.stats.note_novelty(novelty);
                tree.add_child(parent, t.action, t.state, t.cost, t.reward, t.terminal, novelty)
            }
        };
        if stop(&tree.node(id).state) {
            return Ok(RunEnd::Found(id));
        }
        if tree.node(id).terminal {
            continue;
        }
        if meter.exhausted() {
            return Ok(RunEnd::Budget);
        }
        buf.clear();
        space.successors(&tree.node(id).state, &mut buf)?;
        run.stats.expanded += 1;
        run.expanded.push(id);
        let g = tree.node(id).g;
        for t in buf.drain(..) {
            if !meter.generate() {
                return Ok(RunEnd::Budget);
            }
            run.stats.generated += 1;
            open.push(Reverse((g + t.cost, pending.len())));
            pending.push(Some((id, t)));
        }
    }
}

pub(crate) fn to_outcome(
    task: &StripsTask,
    run: &IwRun<State>,
    stats: SearchStats,
) -> Result<SearchOutcome, SearchError> {
    Ok(match run.end {
        RunEnd::Found(id) => SearchOutcome::Solved(Plan::validated(task, run.tree.path_actions(id), stats)?),
        RunEnd::Exhausted => SearchOutcome::Exhausted(stats),
        RunEnd::Budget => SearchOutcome::BudgetExceeded(stats),
    })
}

/// IW(k) from the initial state of `task`, stopping at the first goal state.
pub fn iw(task: &StripsTask, k: usize, mode: CostMode, budget: Budget) -> Result<SearchOutcome, SearchError> {
    let mut meter = Meter::new(budget);
    let run = iw_core(&StripsSpace::new(task), &mut AtomFeatures, k, mode, &mut meter, |s| task.is_goal(s))?;
    let mut stats = run.stats.clone();
    if mode == CostMode::Dijkstra {
        stats.algorithm = "iw-dijkstra".into();
    }
    to_outcome(task, &run, stats)
}

/// IW(k) with tuples kept in a Bloom filter instead of exact sets.
pub fn iw_approx(task: &StripsTask, k: usize, cfg: ApproxConfig, budget: Budget) -> Result<SearchOutcome, SearchError> {
    if k == 0 {
        return Err(SearchError::ZeroWidth);
    }
    let mut meter = Meter::new(budget);
    let mut table = ApproxNoveltyTable::new(k, cfg);
    let run = iw_core_with(
        &StripsSpace::new(task),
        &mut AtomFeatures,
        k,
        &mut table,
        CostMode::Uniform,
        &mut meter,
        |s| task.is_goal(s),
    )?;
    let mut stats = run.stats.clone();
    stats.algorithm = "iw-approx".into();
    to_outcome(task, &run, stats)
}

/// IW(k) with the expanded states recorded. With `stop_at_goal` false the
/// search runs until its pruned space is exhausted.
pub fn iw_trace(task: &StripsTask, k: usize, budget: Budget, stop_at_goal: bool) -> Result<ExpansionTrace, SearchError> {
    let mut meter = Meter::new(budget);
    let run = iw_core(&StripsSpace::new(task), &mut AtomFeatures, k, CostMode::Uniform, &mut meter, |s| {
        stop_at_goal && task.is_goal(s)
    })?;
    let expanded = run.expanded.iter().map(|&id| run.tree.node(id).state.clone()).collect();
    let outcome = to_outcome(task, &run, run.stats.clone())?;
    Ok(ExpansionTrace { outcome, expanded })
}

pub(crate) struct IteratedEnd {
    pub end: RunEnd,
    /// Last k tried.
    pub k: usize,
    pub actions: Vec<usize>,
    pub stats: SearchStats,
    /// The final run was exhausted without pruning anything, or with k at
    /// least |F|, so no state satisfying `stop` is reachable.
    pub complete: bool,
}

/// Runs IW(1), IW(2), ... IW(k_max) from `start` until `stop` holds.
/// Stops early when a run exhausts without pruning, as no larger bound can
/// reach more states.
pub(crate) fn iterated_until(
    task: &StripsTask,
    start: &State,
    k_max: usize,
    meter: &mut Meter,
    stop: impl Fn(&State) -> bool,
) -> Result<IteratedEnd, SearchError> {
    let space = StripsSpace::from_state(task, start);
    let mut total = SearchStats::named("iterated-iw", None);
    for k in 1..=k_max.max(1) {
        let run = iw_core(&space, &mut AtomFeatures, k, CostMode::Uniform, meter, &stop)?;
        total.absorb(&run.stats);
        total.k = Some(k);
        total.wall_ms = meter.elapsed_ms();
        // With positive preconditions, whatever is reachable from a pruned
        // state is reachable from the superset that made it non-novel, so
        // IW(|F|) exhausting is conclusive.
        let complete = run.end == RunEnd::Exhausted && (run.stats.pruned == 0 || k >= task.fluent_count());
        match run.end {
            RunEnd::Found(id) => {
                return Ok(IteratedEnd { end: run.end, k, actions: run.tree.path_actions(id), stats: total, complete })
            }
            RunEnd::Budget => return Ok(IteratedEnd { end: run.end, k, actions: Vec::new(), stats: total, complete }),
            RunEnd::Exhausted if complete || k == k_max.max(1) => {
                return Ok(IteratedEnd { end: run.end, k, actions: Vec::new(), stats: total, complete })
            }
            RunEnd::Exhausted => {}
        }
    }
    unreachable!("loop returns on its last iteration")
}

/// Iterated IW with bounds 1..=`k_max` (default |F|).
pub fn iterated_iw(task: &StripsTask, k_max: Option<usize>, budget: Budget) -> Result<SearchOutcome, SearchError> {
    let k_max = k_max.unwrap_or(task.fluent_count()).max(1);
    let mut meter = Meter::new(budget);
    let r = iterated_until(task, task.init(), k_max, &mut meter, |s| task.is_goal(s))?;
    Ok(match r.end {
        RunEnd::Found(_) => SearchOutcome::Solved(Plan::validated(task, r.actions, r.stats)?),
        RunEnd::Exhausted => SearchOutcome::Exhausted(r.stats),
        RunEnd::Budget => SearchOutcome::BudgetExceeded(r.stats),
    })
}

/// A full IW(k) lookahead over a simulator from `start`, without goal
/// stopping. Returns the tree and whether the budget cut it short.
pub fn env_lookahead<F>(
    env: &dyn Environment,
    start: &EnvState,
    features: &mut F,
    k: usize,
    budget: Budget,
) -> Result<(Tree<EnvState>, SearchStats, bool), SearchError>
where
    F: FeatureMap<EnvState> + ?Sized,
{
    let mut meter = Meter::new(budget);
    let run = iw_core(&EnvSpace::new(env, start), features, k, CostMode::Uniform, &mut meter, |_| false)?;
    Ok((run.tree, run.stats, run.end == RunEnd::Budget))
}
