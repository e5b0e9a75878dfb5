use crate::model::StripsTask;

use super::iw::{iw, CostMode};
use super::{brfs_oracle, Budget, SearchError, SearchOutcome, DEFAULT_NODE_BUDGET};

/// Empirical upper bound on the width of `task`: the least k <= `k_max`
/// (default |F|) for which IW(k) returns a plan as cheap as the
/// breadth-first optimum. 0 when the goal holds initially, |F| + 1 when the
/// oracle proves the task unsolvable.
pub fn effective_width(task: &StripsTask, k_max: Option<usize>, budget: Budget) -> Result<usize, SearchError> {
    if task.is_goal(task.init()) {
        return Ok(0);
    }
    let cap = budget.max_generated.unwrap_or(DEFAULT_NODE_BUDGET);
    let optimum = match brfs_oracle(task, cap)? {
        SearchOutcome::Solved(p) => p.cost,
        SearchOutcome::Exhausted(_) => return Ok(task.fluent_count() + 1),
        SearchOutcome::BudgetExceeded(_) => return Err(SearchError::OracleTooLarge),
    };
    let k_max = k_max.unwrap_or(task.fluent_count()).max(1);
    for k in 1..=k_max {
        match iw(task, k, CostMode::Uniform, budget)? {
            SearchOutcome::Solved(p) if p.cost == optimum => return Ok(k),
            SearchOutcome::BudgetExceeded(_) => return Err(SearchError::BudgetExceeded),
            _ => {}
        }
    }
    Err(SearchError::WidthExceedsBound { k_max })
}
