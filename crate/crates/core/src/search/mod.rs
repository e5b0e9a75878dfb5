//! Width-based search: breadth-first oracle, IW(k), iterated IW, BFWS,
//! SIW, Rollout-IW and effective-width measurement.

mod bfws;
mod brfs;
mod iw;
mod relevant;
mod rollout;
mod siw;
mod space;
mod tree;
mod width;

use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

pub use bfws::{bfws, bfws_observed, BfwsExtraction, BfwsVariant};
pub use brfs::{brfs_oracle, brfs_trace, ExpansionTrace};
pub use iw::{env_lookahead, iterated_iw, iw, iw_approx, iw_trace, CostMode};
pub use relevant::{extract_relevant, r_count, RCounter, RelevantSet};
pub use rollout::{rollout_iw, RolloutConfig, RolloutResult};
pub use siw::siw;
pub use space::{EnvSpace, SearchSpace, StripsSpace, Transition};
pub use tree::{best_leaf, Node, NodeId, Objective, Tree};
pub use width::effective_width;

use crate::envs::EnvError;
use crate::model::{ActionId, Cost, ModelError, StripsTask};
use crate::novelty::FeatureError;

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;
pub const DEFAULT_TIME_BUDGET: Duration = Duration::from_secs(300);

/// Caps on generated nodes and wall time for one call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_generated: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_generated: Some(DEFAULT_NODE_BUDGET),
            max_time: Some(DEFAULT_TIME_BUDGET),
        }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            max_generated: None,
            max_time: None,
        }
    }

    pub fn nodes(n: u64) -> Self {
        Budget {
            max_generated: Some(n),
            max_time: None,
        }
    }

    pub fn millis(ms: u64) -> Self {
        Budget {
            max_generated: None,
            max_time: Some(Duration::from_millis(ms)),
        }
    }

    pub fn with_nodes(mut self, n: u64) -> Self {
        self.max_generated = Some(n);
        self
    }

    pub fn with_time(mut self, t: Duration) -> Self {
        self.max_time = Some(t);
        self
    }
}

/// Budget accounting shared by the phases of one call.
#[derive(Debug, Clone)]
pub(crate) struct Meter {
    budget: Budget,
    start: Instant,
    generated: u64,
}

impl Meter {
    pub(crate) fn new(budget: Budget) -> Self {
        Meter {
            budget,
            start: Instant::now(),
            generated: 0,
        }
    }

    /// Counts one generated node; false once the budget is spent.
    pub(crate) fn generate(&mut self) -> bool {
        self.generated += 1;
        !self.exhausted()
    }

    pub(crate) fn exhausted(&self) -> bool {
        self.budget.max_generated.is_some_and(|m| self.generated > m)
            || self.budget.max_time.is_some_and(|t| self.start.elapsed() >= t)
    }

    pub(crate) fn elapsed_ms(&self) -> f64 {
        self.start.elapsed().as_secs_f64() * 1e3
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SearchStats {
    pub algorithm: String,
    pub k: Option<usize>,
    pub generated: u64,
    pub expanded: u64,
    /// Children discarded by the novelty test.
    pub pruned: u64,
    /// Largest novelty value among nodes kept in the search.
    pub max_novelty: Option<u32>,
    pub wall_ms: f64,
    /// Which phase produced the result, for multi-phase searches.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase: Option<String>,
    /// Width used by each SIW subcall.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub subcall_widths: Vec<usize>,
    /// Size of the relevant set used for `#r`, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relevant: Option<usize>,
}

impl SearchStats {
    pub(crate) fn named(algorithm: &str, k: Option<usize>) -> Self {
        SearchStats {
            algorithm: algorithm.to_string(),
            k,
            ..Default::default()
        }
    }

    pub(crate) fn note_novelty(&mut self, n: crate::novelty::Novelty) {
        if let Some(v) = n.value() {
            self.max_novelty = Some(self.max_novelty.map_or(v, |m| m.max(v)));
        }
    }

    pub(crate) fn absorb(&mut self, other: &SearchStats) {
        self.generated += other.generated;
        self.expanded += other.expanded;
        self.pruned += other.pruned;
        if let Some(v) = other.max_novelty {
            self.max_novelty = Some(self.max_novelty.map_or(v, |m| m.max(v)));
        }
    }
}

/// A validated action sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Plan {
    pub actions: Vec<ActionId>,
    pub cost: Cost,
    pub stats: SearchStats,
}

impl Plan {
    /// Replays `actions` from the initial state of `task` and checks that
    /// every goal holds at the end.
    pub fn validated(task: &StripsTask, actions: Vec<ActionId>, stats: SearchStats) -> Result<Plan, SearchError> {
        let (_, cost) = task.validate_plan(&actions)?;
        Ok(Plan { actions, cost, stats })
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn action_names<'a>(&self, task: &'a StripsTask) -> Vec<&'a str> {
        self.actions.iter().map(|&a| task.actions()[a].name.as_str()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum SearchOutcome {
    Solved(Plan),
    /// The (pruned) search space was consumed without reaching the goal.
    Exhausted(SearchStats),
    BudgetExceeded(SearchStats),
}

impl SearchOutcome {
    pub fn plan(&self) -> Option<&Plan> {
        match self {
            SearchOutcome::Solved(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_solved(&self) -> bool {
        matches!(self, SearchOutcome::Solved(_))
    }

    pub fn stats(&self) -> &SearchStats {
        match self {
            SearchOutcome::Solved(p) => &p.stats,
            SearchOutcome::Exhausted(s) | SearchOutcome::BudgetExceeded(s) => s,
        }
    }

    pub fn stats_mut(&mut self) -> &mut SearchStats {
        match self {
            SearchOutcome::Solved(p) => &mut p.stats,
            SearchOutcome::Exhausted(s) | SearchOutcome::BudgetExceeded(s) => s,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SearchOutcome::Solved(_) => "solved",
            SearchOutcome::Exhausted(_) => "exhausted",
            SearchOutcome::BudgetExceeded(_) => "budget-exceeded",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("novelty bound k must be at least 1")]
    ZeroWidth,
    #[error("SIW could not achieve another goal from a state with {remaining} unachieved goals (k <= {k_max})")]
    SerializationFailure { remaining: usize, k_max: usize },
    #[error("breadth-first oracle exceeded its node cap")]
    OracleTooLarge,
    #[error("search budget exceeded")]
    BudgetExceeded,
    #[error("no k <= {k_max} matched the oracle cost")]
    WidthExceedsBound { k_max: usize },
    #[error("plan failed validation: {0}")]
    InvalidPlan(#[from] ModelError),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
}
