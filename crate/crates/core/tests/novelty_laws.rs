use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use widthplan::novelty::{for_each_combination, Feature, FeatureSet, Novelty, NoveltyMeasure, NoveltyTable};

/// Reference table: stores every subset of size <= k explicitly. The first
/// submission counts as novel even when it has no features.
struct SubsetOracle {
    k: usize,
    seen: HashSet<Vec<Feature>>,
    submitted: bool,
}

impl SubsetOracle {
    fn submit(&mut self, fs: &FeatureSet) -> Novelty {
        let first = !std::mem::replace(&mut self.submitted, true);
        let items = fs.as_slice();
        if items.is_empty() && first {
            return Novelty::new(1);
        }
        let mut best = None;
        for size in 1..=self.k.min(items.len()) {
            let mut fresh = false;
            for_each_combination(items, size, |t| {
                fresh |= self.seen.insert(t.to_vec());
            });
            if fresh && best.is_none() {
                best = Some(size as u32);
            }
        }
        best.map_or(Novelty::NOT_NOVEL, Novelty::new)
    }
}

fn random_set(rng: &mut ChaCha8Rng, alphabet: &[Feature]) -> FeatureSet {
    alphabet.iter().copied().filter(|_| rng.gen_bool(0.4)).collect()
}

#[test]
fn exact_table_agrees_with_subset_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut submissions = 0usize;
    for round in 0..600 {
        let size = rng.gen_range(1..=12);
        let k = rng.gen_range(1..=3);
        // features over a few variables with small domains
        let alphabet: Vec<Feature> = (0..size).map(|i| Feature::new(i % 5, (i / 5) as u64 + round as u64 % 3)).collect();
        let mut table = NoveltyTable::new(k);
        let mut oracle = SubsetOracle { k, seen: HashSet::new(), submitted: false };
        let mut first = true;
        for _ in 0..rng.gen_range(5..40) {
            let fs = random_set(&mut rng, &alphabet);
            let got = table.check_and_update(&fs);
            let want = oracle.submit(&fs);
            submissions += 1;
            assert_eq!(got, want, "round {round} k {k} fs {fs:?}");
            if let Some(v) = got.value() {
                assert!((1..=k as u32).contains(&v));
            }
            if first {
                assert_eq!(got, Novelty::new(1));
                first = false;
            }
            // an identical resubmission has nothing new
            assert_eq!(table.check_and_update(&fs), Novelty::NOT_NOVEL);
            assert_eq!(oracle.submit(&fs), Novelty::NOT_NOVEL);
            submissions += 1;
        }
        assert_eq!(table.seen_tuples(), oracle.seen, "round {round}");
    }
    assert!(submissions >= 10_000, "{submissions}");
}

#[test]
fn values_depend_on_order_but_seen_sets_do_not() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let alphabet: Vec<Feature> = (0..10).map(|i| Feature::new(i, 1)).collect();
    for _ in 0..200 {
        let k = rng.gen_range(1..=3);
        let sets: Vec<FeatureSet> = (0..8).map(|_| random_set(&mut rng, &alphabet)).collect();
        let mut a = NoveltyTable::new(k);
        let mut b = NoveltyTable::new(k);
        for s in &sets {
            a.check_and_update(s);
        }
        for s in sets.iter().rev() {
            b.check_and_update(s);
        }
        assert_eq!(a.seen_tuples(), b.seen_tuples());
    }
}
