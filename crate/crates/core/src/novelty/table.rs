use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Serialize, Serializer};

use super::features::{Feature, FeatureSet};

/// Novelty of a state: the size of its smallest feature tuple not seen
/// before, or [`Novelty::NOT_NOVEL`] when every tuple up to the table's
/// arity has been seen. `NOT_NOVEL` orders after every finite value.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Novelty(u32);

impl Novelty {
    pub const NOT_NOVEL: Novelty = Novelty(u32::MAX);

    pub fn new(size: u32) -> Self {
        assert!((1..u32::MAX).contains(&size), "novelty must be in 1..u32::MAX");
        Novelty(size)
    }

    pub fn value(self) -> Option<u32> {
        (self != Self::NOT_NOVEL).then_some(self.0)
    }

    pub fn is_novel(self) -> bool {
        self != Self::NOT_NOVEL
    }

    /// True if a search bounded by `k` keeps this state.
    pub fn within(self, k: usize) -> bool {
        self.value().is_some_and(|v| v as usize <= k)
    }
}

impl fmt::Debug for Novelty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(v) => write!(f, "Novelty({v})"),
            None => write!(f, "NOT_NOVEL"),
        }
    }
}

impl Serialize for Novelty {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.value().serialize(s)
    }
}

/// Anything that can answer novelty queries for a stream of states.
pub trait NoveltyMeasure {
    fn max_arity(&self) -> usize;
    /// Returns the novelty of `fs` and records all of its tuples up to
    /// `max_arity` as seen.
    fn check_and_update(&mut self, fs: &FeatureSet) -> Novelty;
}

/// Calls `f` with every `r`-combination of `items`, in lexicographic order
/// of positions.
pub fn for_each_combination<T: Copy>(items: &[T], r: usize, mut f: impl FnMut(&[T])) {
    let n = items.len();
    if r > n {
        return;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    let mut buf: Vec<T> = idx.iter().map(|&i| items[i]).collect();
    loop {
        f(&buf);
        // advance the rightmost index that can still move
        let mut i = r;
        while i > 0 && idx[i - 1] == n - r + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        let i = i - 1;
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
        for j in i..r {
            buf[j] = items[idx[j]];
        }
    }
}

/// Exact novelty table.
///
/// Features receive dense ordinals on first sight. Singletons live in a
/// boolean vector, pairs in a triangular boolean vector and larger tuples
/// in hash sets of sorted ordinal tuples.
#[derive(Debug, Clone)]
pub struct NoveltyTable {
    arity: usize,
    ordinals: HashMap<Feature, u32>,
    alphabet: Vec<Feature>,
    singles: Vec<bool>,
    pairs: Vec<bool>,
    higher: Vec<HashSet<Box<[u32]>>>,
    submitted: bool,
    scratch: Vec<u32>,
}

#[inline]
fn pair_index(lo: u32, hi: u32) -> usize {
    debug_assert!(lo < hi);
    let hi = hi as usize;
    hi * (hi - 1) / 2 + lo as usize
}

impl NoveltyTable {
    pub fn new(arity: usize) -> Self {
        assert!(arity >= 1, "novelty arity must be at least 1");
        NoveltyTable {
            arity,
            ordinals: HashMap::new(),
            alphabet: Vec::new(),
            singles: Vec::new(),
            pairs: Vec::new(),
            higher: (3..=arity).map(|_| HashSet::new()).collect(),
            submitted: false,
            scratch: Vec::new(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    fn ordinal(&mut self, f: Feature) -> u32 {
        if let Some(&o) = self.ordinals.get(&f) {
            return o;
        }
        let o = self.alphabet.len() as u32;
        self.ordinals.insert(f, o);
        self.alphabet.push(f);
        self.singles.push(false);
        if self.arity >= 2 {
            let m = self.alphabet.len();
            self.pairs.resize(m * (m - 1) / 2, false);
        }
        o
    }

    /// Every tuple recorded as seen, as sorted feature lists. Intended for
    /// checks on small alphabets.
    pub fn seen_tuples(&self) -> HashSet<Vec<Feature>> {
        let mut out = HashSet::new();
        let m = self.alphabet.len() as u32;
        for o in 0..m {
            if self.singles[o as usize] {
                out.insert(vec![self.alphabet[o as usize]]);
            }
        }
        for hi in 0..m {
            for lo in 0..hi {
                if self.pairs.get(pair_index(lo, hi)).copied().unwrap_or(false) {
                    let mut t = vec![self.alphabet[lo as usize], self.alphabet[hi as usize]];
                    t.sort();
                    out.insert(t);
                }
            }
        }
        for set in &self.higher {
            for tuple in set {
                let mut t: Vec<_> = tuple.iter().map(|&o| self.alphabet[o as usize]).collect();
                t.sort();
                out.insert(t);
            }
        }
        out
    }
}

impl NoveltyMeasure for NoveltyTable {
    fn max_arity(&self) -> usize {
        self.arity
    }

    fn check_and_update(&mut self, fs: &FeatureSet) -> Novelty {
        let first = !self.submitted;
        self.submitted = true;
        if fs.is_empty() {
            return if first { Novelty::new(1) } else { Novelty::NOT_NOVEL };
        }
        let mut ords = std::mem::take(&mut self.scratch);
        ords.clear();
        for &f in fs.iter() {
            let o = self.ordinal(f);
            ords.push(o);
        }
        ords.sort_unstable();

        let mut best = Novelty::NOT_NOVEL;
        for &o in &ords {
            let seen = &mut self.singles[o as usize];
            if !*seen {
                *seen = true;
                best = best.min(Novelty::new(1));
            }
        }
        if self.arity >= 2 {
            for j in 1..ords.len() {
                for i in 0..j {
                    let seen = &mut self.pairs[pair_index(ords[i], ords[j])];
                    if !*seen {
                        *seen = true;
                        best = best.min(Novelty::new(2));
                    }
                }
            }
        }
        for r in 3..=self.arity.min(ords.len()) {
            let set = &mut self.higher[r - 3];
            let mut fresh = false;
            for_each_combination(&ords, r, |t| {
                if !set.contains(t) {
                    set.insert(t.into());
                    fresh = true;
                }
            });
            if fresh {
                best = best.min(Novelty::new(r as u32));
            }
        }
        self.scratch = ords;
        best
    }
}

/// Bank of tables keyed by a heuristic tuple; each key owns an independent
/// table created on first use.
pub struct PartitionedNovelty<K, M> {
    tables: HashMap<K, M>,
    make: Box<dyn Fn() -> M + Send>,
}

impl<K: std::hash::Hash + Eq> PartitionedNovelty<K, NoveltyTable> {
    pub fn exact(arity: usize) -> Self {
        Self::with_factory(move || NoveltyTable::new(arity))
    }
}

impl<K: std::hash::Hash + Eq, M: NoveltyMeasure> PartitionedNovelty<K, M> {
    pub fn with_factory(make: impl Fn() -> M + Send + 'static) -> Self {
        PartitionedNovelty {
            tables: HashMap::new(),
            make: Box::new(make),
        }
    }

    pub fn check_and_update(&mut self, key: K, fs: &FeatureSet) -> Novelty {
        let make = &self.make;
        self.tables.entry(key).or_insert_with(make).check_and_update(fs)
    }

    pub fn partitions(&self) -> usize {
        self.tables.len()
    }

    pub fn table(&self, key: &K) -> Option<&M> {
        self.tables.get(key)
    }
}

/// Arity-1 table where a feature is novel again when reached with a larger
/// accumulated reward than the best state seen so far with it.
#[derive(Debug, Clone, Default)]
pub struct RewardNoveltyTable {
    best: HashMap<Feature, f64>,
}

impl RewardNoveltyTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn check_and_update(&mut self, fs: &FeatureSet, acc_reward: f64) -> bool {
        let mut novel = false;
        for &f in fs.iter() {
            match self.best.get_mut(&f) {
                None => {
                    self.best.insert(f, acc_reward);
                    novel = true;
                }
                Some(b) if *b < acc_reward => {
                    *b = acc_reward;
                    novel = true;
                }
                Some(_) => {}
            }
        }
        novel
    }

    pub fn best_reward(&self, f: &Feature) -> Option<f64> {
        self.best.get(f).copied()
    }
}

/// Depth-aware table: a tuple counts as novel when first seen, or when it
/// was previously seen only at a strictly greater depth.
#[derive(Debug, Clone)]
pub struct DepthNoveltyTable {
    arity: usize,
    min_depth: HashMap<Box<[Feature]>, usize>,
}

impl DepthNoveltyTable {
    pub fn new(arity: usize) -> Self {
        assert!(arity >= 1);
        DepthNoveltyTable {
            arity,
            min_depth: HashMap::new(),
        }
    }

    pub fn check_and_update(&mut self, fs: &FeatureSet, depth: usize) -> bool {
        let mut novel = false;
        for r in 1..=self.arity.min(fs.len()) {
            for_each_combination(fs.as_slice(), r, |t| match self.min_depth.get_mut(t) {
                None => {
                    self.min_depth.insert(t.into(), depth);
                    novel = true;
                }
                Some(d) if *d > depth => {
                    *d = depth;
                    novel = true;
                }
                Some(_) => {}
            });
        }
        novel
    }

    /// True if a node at `depth` with features `fs` still holds the
    /// shallowest occurrence of at least one of its tuples.
    pub fn still_novel(&self, fs: &FeatureSet, depth: usize) -> bool {
        let mut novel = false;
        for r in 1..=self.arity.min(fs.len()) {
            for_each_combination(fs.as_slice(), r, |t| {
                if self.min_depth.get(t).is_none_or(|&d| d >= depth) {
                    novel = true;
                }
            });
        }
        novel
    }
}
