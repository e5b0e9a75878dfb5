mod common;

use std::collections::HashSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use widthplan::model::{State, StripsTask};
use widthplan::search::{brfs_trace, iw, iw_trace, Budget, CostMode, SearchOutcome};

use common::{binary_task, choose, corpus_pairs, load, random_task, token_task};

fn state_set(states: &[State]) -> HashSet<State> {
    states.iter().cloned().collect()
}

/// Every state BrFS expands, or IW(|F|) expands, on `task`.
fn expansions(task: &StripsTask) -> (Vec<State>, Vec<State>) {
    let f = task.fluent_count().max(1);
    let iw = iw_trace(task, f, Budget::unlimited(), false).unwrap();
    let bf = brfs_trace(task, u64::MAX, false).unwrap();
    (iw.expanded, bf.expanded)
}

/// IW(|F|) and breadth-first search with duplicate detection visit the same
/// states, and IW(|F|) never expands a state twice.
fn assert_full_width_is_brfs(task: &StripsTask) {
    let (iw, bf) = expansions(task);
    assert_eq!(iw.len(), state_set(&iw).len(), "{}: IW re-expanded a state", task.name);
    assert_eq!(state_set(&iw), state_set(&bf), "{}", task.name);
}

#[test]
fn bundled_small_tasks_match_breadth_first() {
    let mut checked = 0;
    for (d, p) in corpus_pairs() {
        let task = load(&d, &p);
        if task.fluent_count() <= 10 {
            assert_full_width_is_brfs(&task);
            checked += 1;
        }
    }
    assert!(checked >= 4, "only {checked} small tasks in the corpus");
}

#[test]
fn token_permutations_match_breadth_first() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        // 2 tokens on 3 cells is 9 fluents
        let t = token_task(&mut rng, 2, 3);
        assert!(t.fluent_count() <= 10);
        assert_full_width_is_brfs(&t);
    }
}

#[test]
fn solved_token_plans_are_optimal_at_full_width() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let t = token_task(&mut rng, 2, 4);
        let full = iw(&t, t.fluent_count(), CostMode::Uniform, Budget::unlimited()).unwrap();
        let bf = brfs_trace(&t, u64::MAX, true).unwrap().outcome;
        assert_eq!(full.plan().map(|p| p.cost), bf.plan().map(|p| p.cost));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn two_valued_tasks_match_breadth_first(seed in any::<u64>(), vars in 1usize..=5, m in 1usize..=8) {
        let t = binary_task(&mut ChaCha8Rng::seed_from_u64(seed), vars, m);
        assert_full_width_is_brfs(&t);
    }

    /// With only positive atoms as features, a state whose atoms are all
    /// inside an earlier state has no new tuple at any size. IW(|F|) skips
    /// it, and loses nothing: whatever follows the smaller state also
    /// follows, atom for atom, the larger one.
    #[test]
    fn full_width_skips_only_covered_states(seed in any::<u64>(), n in 2usize..=8, m in 1usize..=8) {
        let t = random_task(&mut ChaCha8Rng::seed_from_u64(seed), n, m);
        let (iw, bf) = expansions(&t);
        let iw = state_set(&iw);
        let bf_set = state_set(&bf);
        prop_assert!(iw.is_subset(&bf_set));
        for s in bf_set.difference(&iw) {
            prop_assert!(bf.iter().any(|o| o != s && (0..n).all(|f| !s.contains(f) || o.contains(f))), "{:?} uncovered", s);
        }
    }

    #[test]
    fn generation_is_bounded(seed in any::<u64>(), n in 2usize..=9, m in 1usize..=8, k in 1usize..=3) {
        let t = random_task(&mut ChaCha8Rng::seed_from_u64(seed), n, m);
        let tr = iw_trace(&t, k, Budget::unlimited(), false).unwrap();
        let stats = tr.outcome.stats();
        let kept = 1 + stats.generated - stats.pruned;
        let tuples: usize = (1..=k).map(|j| choose(n, j)).sum();
        prop_assert!(stats.generated <= 1 + m as u64 * kept);
        prop_assert!(kept as usize <= 1 + tuples, "kept {} > 1 + {}", kept, tuples);
        prop_assert_eq!(stats.expanded as usize, tr.expanded.len());
    }

    #[test]
    fn larger_bounds_solve_at_least_as_much(seed in any::<u64>(), n in 2usize..=8, m in 1usize..=8) {
        let t = random_task(&mut ChaCha8Rng::seed_from_u64(seed), n, m);
        let solved = |k| iw(&t, k, CostMode::Uniform, Budget::unlimited()).unwrap().is_solved();
        // a plan at k = |F| exists iff the goal is reachable
        let reachable = matches!(brfs_trace(&t, u64::MAX, true).unwrap().outcome, SearchOutcome::Solved(_));
        prop_assert_eq!(solved(n), reachable);
        if solved(1) {
            prop_assert!(reachable);
        }
    }
}
