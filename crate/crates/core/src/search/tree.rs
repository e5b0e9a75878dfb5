use crate::model::Cost;
use crate::novelty::Novelty;

pub type NodeId = usize;

#[derive(Debug, Clone)]
pub struct Node<S> {
    pub state: S,
    pub parent: Option<NodeId>,
    /// Action that generated this node; `None` for the root.
    pub action: Option<usize>,
    pub g: Cost,
    pub depth: usize,
    pub acc_reward: f64,
    /// Reward of the incoming transition (0 for the root).
    pub reward: f64,
    pub terminal: bool,
    pub novelty: Novelty,
    /// Children kept in the tree.
    pub children: Vec<NodeId>,
}

/// Arena of search nodes; ids are insertion order, so they double as the
/// FIFO tie-break.
#[derive(Debug, Clone)]
pub struct Tree<S> {
    nodes: Vec<Node<S>>,
}

impl<S> Tree<S> {
    pub fn with_root(state: S, novelty: Novelty) -> Self {
        Tree {
            nodes: vec![Node {
                state,
                parent: None,
                action: None,
                g: 0,
                depth: 0,
                acc_reward: 0.0,
                reward: 0.0,
                terminal: false,
                novelty,
                children: Vec::new(),
            }],
        }
    }

    pub const ROOT: NodeId = 0;

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &Node<S> {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[Node<S>] {
        &self.nodes
    }

    #[allow(clippy::too_many_arguments)]
    pub fn add_child(
        &mut self,
        parent: NodeId,
        action: usize,
        state: S,
        cost: Cost,
        reward: f64,
        terminal: bool,
        novelty: Novelty,
    ) -> NodeId {
        let id = self.nodes.len();
        let p = &self.nodes[parent];
        let node = Node {
            state,
            parent: Some(parent),
            action: Some(action),
            g: p.g + cost,
            depth: p.depth + 1,
            acc_reward: p.acc_reward + reward,
            reward,
            terminal,
            novelty,
            children: Vec::new(),
        };
        self.nodes[parent].children.push(id);
        self.nodes.push(node);
        id
    }

    /// Node ids from the root to `id`, inclusive.
    pub fn path(&self, id: NodeId) -> Vec<NodeId> {
        let mut out = vec![id];
        let mut cur = id;
        while let Some(p) = self.nodes[cur].parent {
            out.push(p);
            cur = p;
        }
        out.reverse();
        out
    }

    pub fn path_actions(&self, id: NodeId) -> Vec<usize> {
        self.path(id).into_iter().filter_map(|n| self.nodes[n].action).collect()
    }

    /// Action leaving the root on the way to `id`.
    pub fn first_action(&self, id: NodeId) -> Option<usize> {
        self.path(id).get(1).and_then(|&n| self.nodes[n].action)
    }

    pub fn leaves(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].children.is_empty())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    MaximizeReward,
    MinimizeCost,
}

/// Picks the best of `candidates`; ties go to the shallower node, then to
/// the earlier id. `value` is the accumulated reward of a node. Under
/// [`Objective::MinimizeCost`] the cost of a node is its negated reward.
pub fn best_leaf<S>(
    tree: &Tree<S>,
    candidates: impl IntoIterator<Item = NodeId>,
    objective: Objective,
    value: impl Fn(&Node<S>) -> f64,
) -> Option<NodeId> {
    let improves = |v: f64, bv: f64| match objective {
        Objective::MaximizeReward => v > bv,
        Objective::MinimizeCost => -v < -bv,
    };
    let mut best: Option<(NodeId, f64)> = None;
    for id in candidates {
        let n = tree.node(id);
        let v = value(n);
        best = match best {
            None => Some((id, v)),
            Some((b, bv)) => {
                let bn = tree.node(b);
                let better = improves(v, bv) || (v == bv && (n.depth < bn.depth || (n.depth == bn.depth && id < b)));
                if better {
                    Some((id, v))
                } else {
                    Some((b, bv))
                }
            }
        };
    }
    best.map(|(id, _)| id)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree_with(rewards: &[(NodeId, f64)]) -> Tree<()> {
        let mut t = Tree::with_root((), Novelty::new(1));
        for (i, &(parent, r)) in rewards.iter().enumerate() {
            t.add_child(parent, i, (), 1, r, false, Novelty::new(1));
        }
        t
    }

    #[test]
    fn single_node_tree_is_root() {
        let t = tree_with(&[]);
        assert_eq!(best_leaf(&t, t.leaves(), Objective::MaximizeReward, |n| n.acc_reward), Some(0));
    }

    #[test]
    fn higher_reward_wins() {
        let t = tree_with(&[(0, 3.0), (0, 5.0)]);
        assert_eq!(best_leaf(&t, t.leaves(), Objective::MaximizeReward, |n| n.acc_reward), Some(2));
        assert_eq!(t.first_action(2), Some(1));
    }

    #[test]
    fn ties_prefer_shallow_then_fifo() {
        // depth-4 leaf under action 0, depth-7 leaf under action 1, equal reward
        let mut spec = vec![(0, 0.0)];
        for i in 0..3 {
            spec.push((i + 1, 0.0));
        }
        spec.push((0, 0.0));
        for i in 0..6 {
            spec.push((i + 5, 0.0));
        }
        let t = tree_with(&spec);
        let leaf = best_leaf(&t, t.leaves(), Objective::MaximizeReward, |n| n.acc_reward).unwrap();
        assert_eq!(t.node(leaf).depth, 4);
        let t = tree_with(&[(0, 1.0), (0, 1.0)]);
        assert_eq!(best_leaf(&t, t.leaves(), Objective::MinimizeCost, |n| n.acc_reward), Some(1));
    }

    #[test]
    fn paths() {
        let t = tree_with(&[(0, 1.0), (1, 2.0), (0, 0.5)]);
        assert_eq!(t.path(2), vec![0, 1, 2]);
        assert_eq!(t.path_actions(2), vec![0, 1]);
        assert_eq!(t.node(2).acc_reward, 3.0);
        assert_eq!(t.node(2).g, 2);
        assert_eq!(t.leaves().collect::<Vec<_>>(), vec![2, 3]);
    }
}
