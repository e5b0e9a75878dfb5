use crate::model::StripsTask;

use super::iw::{iterated_until, RunEnd};
use super::{Budget, Meter, Plan, SearchError, SearchOutcome, SearchStats};

/// Serialized IW: from the current state, iterated IW (bounds 1..=`k_max`,
/// default |F|) searches for the first state with fewer unachieved goals;
/// its path is appended and the search restarts there.
pub fn siw(task: &StripsTask, k_max: Option<usize>, budget: Budget) -> Result<SearchOutcome, SearchError> {
    let k_max = k_max.unwrap_or(task.fluent_count()).max(1);
    let mut meter = Meter::new(budget);
    let mut stats = SearchStats::named("siw", Some(k_max));
    let mut state = task.init().clone();
    let mut plan = Vec::new();
    let mut first = true;
    loop {
        let remaining = task.goal_count(&state);
        if remaining == 0 {
            break;
        }
        let sub = iterated_until(task, &state, k_max, &mut meter, |s| task.goal_count(s) < remaining)?;
        stats.absorb(&sub.stats);
        stats.wall_ms = meter.elapsed_ms();
        match sub.end {
            RunEnd::Found(_) => {
                stats.subcall_widths.push(sub.k);
                for &a in &sub.actions {
                    state = task.apply(&state, &task.actions()[a])?;
                }
                plan.extend(sub.actions);
                debug_assert!(task.goal_count(&state) < remaining);
            }
            RunEnd::Budget => return Ok(SearchOutcome::BudgetExceeded(stats)),
            // nothing reachable from the initial state improves: unsolvable
            RunEnd::Exhausted if first && sub.complete => return Ok(SearchOutcome::Exhausted(stats)),
            RunEnd::Exhausted => return Err(SearchError::SerializationFailure { remaining, k_max }),
        }
        first = false;
    }
    stats.wall_ms = meter.elapsed_ms();
    Ok(SearchOutcome::Solved(Plan::validated(task, plan, stats)?))
}
