//! Bloom-filter backed approximate novelty.

use std::hash::{DefaultHasher, Hash, Hasher};

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::features::{Feature, FeatureSet};
use super::table::{for_each_combination, Novelty, NoveltyMeasure};

#[inline]
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Classic Bloom filter with `h` probes derived by double hashing.
#[derive(Debug, Clone)]
pub struct BloomFilter {
    bits: Vec<u64>,
    m: usize,
    h: u32,
    inserted: u64,
}

impl BloomFilter {
    pub fn new(m_bits: usize, hashes: u32) -> Self {
        assert!(m_bits > 0 && hashes > 0);
        BloomFilter {
            bits: vec![0; m_bits.div_ceil(64)],
            m: m_bits,
            h: hashes,
            inserted: 0,
        }
    }

    pub fn bit_count(&self) -> usize {
        self.m
    }

    pub fn hash_count(&self) -> u32 {
        self.h
    }

    pub fn insertions(&self) -> u64 {
        self.inserted
    }

    fn probes<T: Hash + ?Sized>(&self, item: &T) -> impl Iterator<Item = usize> {
        let mut hasher = DefaultHasher::new();
        item.hash(&mut hasher);
        let x = hasher.finish();
        let h1 = splitmix64(x);
        let h2 = splitmix64(x ^ 0xA076_1D64_78BD_642F) | 1;
        let m = self.m as u64;
        (0..self.h as u64).map(move |i| (h1.wrapping_add(i.wrapping_mul(h2)) % m) as usize)
    }

    /// Inserts `item`; returns true if it was (possibly) present already.
    pub fn insert<T: Hash + ?Sized>(&mut self, item: &T) -> bool {
        let mut present = true;
        let probes: Vec<usize> = self.probes(item).collect();
        for p in probes {
            let (w, b) = (p / 64, 1u64 << (p % 64));
            if self.bits[w] & b == 0 {
                present = false;
                self.bits[w] |= b;
            }
        }
        self.inserted += 1;
        present
    }

    pub fn contains<T: Hash + ?Sized>(&self, item: &T) -> bool {
        self.probes(item).all(|p| self.bits[p / 64] >> (p % 64) & 1 == 1)
    }

    /// `(1 - e^(-h n / m))^h` for the current insertion count.
    pub fn expected_false_positive_rate(&self) -> f64 {
        let (h, n, m) = (self.h as f64, self.inserted as f64, self.m as f64);
        (1.0 - (-h * n / m).exp()).powf(h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxConfig {
    pub bloom_bits: usize,
    pub bloom_hashes: u32,
    /// Random tuples drawn per arity >= 3; `None` draws `|fs|`.
    pub samples: Option<usize>,
    pub seed: u64,
}

impl Default for ApproxConfig {
    fn default() -> Self {
        ApproxConfig {
            bloom_bits: 1 << 20,
            bloom_hashes: 4,
            samples: None,
            seed: 0,
        }
    }
}

/// Novelty with tuples stored in a Bloom filter. Tuples of size 1 and 2 are
/// enumerated exhaustively; larger sizes draw uniformly random tuples
/// (distinct features, sorted). Answers may wrongly report a tuple as seen
/// and miss unseen tuples of size >= 3, never the reverse for inserted ones.
#[derive(Debug, Clone)]
pub struct ApproxNoveltyTable {
    arity: usize,
    filter: BloomFilter,
    samples: Option<usize>,
    rng: ChaCha8Rng,
    submitted: bool,
}

impl ApproxNoveltyTable {
    pub fn new(arity: usize, cfg: ApproxConfig) -> Self {
        assert!(arity >= 1);
        ApproxNoveltyTable {
            arity,
            filter: BloomFilter::new(cfg.bloom_bits, cfg.bloom_hashes),
            samples: cfg.samples,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            submitted: false,
        }
    }

    pub fn filter(&self) -> &BloomFilter {
        &self.filter
    }

    fn record(filter: &mut BloomFilter, tuple: &[Feature]) -> bool {
        // arity is part of the key through the slice length
        !filter.insert(tuple)
    }
}

impl NoveltyMeasure for ApproxNoveltyTable {
    fn max_arity(&self) -> usize {
        self.arity
    }

    fn check_and_update(&mut self, fs: &FeatureSet) -> Novelty {
        let first = !self.submitted;
        self.submitted = true;
        if fs.is_empty() {
            return if first { Novelty::new(1) } else { Novelty::NOT_NOVEL };
        }
        let items = fs.as_slice();
        let mut best = Novelty::NOT_NOVEL;
        for r in 1..=self.arity.min(items.len()) {
            let mut fresh = false;
            if r <= 2 {
                let filter = &mut self.filter;
                for_each_combination(items, r, |t| fresh |= Self::record(filter, t));
            } else {
                let draws = self.samples.unwrap_or(items.len());
                let mut tuple = Vec::with_capacity(r);
                for _ in 0..draws {
                    let mut picks = index::sample(&mut self.rng, items.len(), r).into_vec();
                    picks.sort_unstable();
                    tuple.clear();
                    tuple.extend(picks.iter().map(|&i| items[i]));
                    fresh |= Self::record(&mut self.filter, &tuple);
                }
            }
            if fresh {
                best = best.min(Novelty::new(r as u32));
            }
        }
        best
    }
}
