use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::envs::{EnvState, Environment};
use crate::novelty::{DepthNoveltyTable, FeatureMap, FeatureSet, Novelty};

use super::space::{EnvSpace, SearchSpace, Transition};
use super::tree::{best_leaf, NodeId, Objective, Tree};
use super::{Budget, Meter, SearchError, SearchStats};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RolloutConfig {
    pub k: usize,
    pub budget: Budget,
    pub max_rollouts: Option<u64>,
    pub seed: u64,
    pub objective: Objective,
}

impl Default for RolloutConfig {
    fn default() -> Self {
        RolloutConfig {
            k: 1,
            budget: Budget::default(),
            max_rollouts: None,
            seed: 0,
            objective: Objective::MaximizeReward,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RolloutResult {
    pub action: usize,
    /// Accumulated reward of the chosen leaf.
    pub value: f64,
    pub rollouts: u64,
    /// The budget ran out before the tree was solved.
    pub budget_hit: bool,
    pub stats: SearchStats,
    pub tree: Tree<EnvState>,
    /// Nodes reached by some rollout, in id order.
    pub visited: Vec<NodeId>,
}

struct Book {
    features: Vec<FeatureSet>,
    visited: Vec<bool>,
    expanded: Vec<bool>,
    solved: Vec<bool>,
}

impl Book {
    fn push(&mut self, fs: FeatureSet) {
        self.features.push(fs);
        self.visited.push(false);
        self.expanded.push(false);
        self.solved.push(false);
    }

    /// Labels `id` solved and propagates to ancestors whose children are
    /// all solved.
    fn solve(&mut self, tree: &Tree<EnvState>, mut id: NodeId) {
        self.solved[id] = true;
        while let Some(p) = tree.node(id).parent {
            if !tree.node(p).children.iter().all(|&c| self.solved[c]) {
                break;
            }
            self.solved[p] = true;
            id = p;
        }
    }
}

/// Rollout IW(k): depth-first rollouts from `start`, each choosing uniformly
/// among unsolved children and ending at the first non-novel node, a
/// terminal state or the horizon. Novelty is depth-aware, so a node is
/// revisited only while it still holds the shallowest occurrence of one of
/// its tuples. Returns the first action towards the best visited leaf.
pub fn rollout_iw<F>(
    env: &dyn Environment,
    start: &EnvState,
    features: &mut F,
    cfg: &RolloutConfig,
) -> Result<RolloutResult, SearchError>
where
    F: FeatureMap<EnvState> + ?Sized,
{
    if cfg.k == 0 {
        return Err(SearchError::ZeroWidth);
    }
    let space = EnvSpace::new(env, start);
    let mut meter = Meter::new(cfg.budget);
    let mut stats = SearchStats::named("rollout-iw", Some(cfg.k));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut table = DepthNoveltyTable::new(cfg.k);
    features.reset();

    let root = space.root();
    let fs = features.features(&root)?;
    table.check_and_update(&fs, 0);
    let mut tree = Tree::with_root(root, Novelty::new(1));
    let mut book = Book { features: Vec::new(), visited: Vec::new(), expanded: Vec::new(), solved: Vec::new() };
    book.push(fs);
    book.visited[0] = true;

    let mut rollouts = 0u64;
    let mut budget_hit = false;
    let mut buf: Vec<Transition<EnvState>> = Vec::new();
    'outer: while !book.solved[0] {
        if meter.exhausted() {
            budget_hit = true;
            break;
        }
        if cfg.max_rollouts.is_some_and(|m| rollouts >= m) {
            break;
        }
        rollouts += 1;
        let mut n = 0;
        loop {
            if tree.node(n).terminal {
                book.solve(&tree, n);
                break;
            }
            if !book.expanded[n] {
                buf.clear();
                space.successors(&tree.node(n).state, &mut buf)?;
                book.expanded[n] = true;
                stats.expanded += 1;
                for t in buf.drain(..) {
                    if !meter.generate() {
                        budget_hit = true;
                        break 'outer;
                    }
                    stats.generated += 1;
                    let fs = features.features(&t.state)?;
                    tree.add_child(n, t.action, t.state, t.cost, t.reward, t.terminal, Novelty::NOT_NOVEL);
                    book.push(fs);
                }
            }
            let open: Vec<NodeId> = tree.node(n).children.iter().copied().filter(|&c| !book.solved[c]).collect();
            if open.is_empty() {
                book.solve(&tree, n);
                break;
            }
            let c = open[rng.gen_range(0..open.len())];
            let depth = tree.node(c).depth;
            let novel = if book.visited[c] {
                table.still_novel(&book.features[c], depth)
            } else {
                book.visited[c] = true;
                table.check_and_update(&book.features[c], depth)
            };
            if !novel {
                stats.pruned += 1;
                book.solve(&tree, c);
                break;
            }
            n = c;
        }
    }
    stats.wall_ms = meter.elapsed_ms();

    let leaves = (0..tree.len()).filter(|&i| book.visited[i] && !tree.node(i).children.iter().any(|&c| book.visited[c]));
    let best = best_leaf(&tree, leaves, cfg.objective, |n| n.acc_reward).unwrap_or(0);
    Ok(RolloutResult {
        action: tree.first_action(best).unwrap_or(0),
        value: tree.node(best).acc_reward,
        rollouts,
        budget_hit,
        stats,
        visited: (0..tree.len()).filter(|&i| book.visited[i]).collect(),
        tree,
    })
}
