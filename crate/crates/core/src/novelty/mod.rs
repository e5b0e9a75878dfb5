//! State features and novelty measurement.
//!
//! The novelty of a state is the size of the smallest tuple of its features
//! that no earlier state submitted to the same table contained. Tables here
//! record tuples at submission time, so a check is also an update.

mod bee;
mod bloom;
mod features;
mod table;

pub use bee::{bee_features, BeeFeatureMap, BeeFeatures};
pub use bloom::{ApproxConfig, ApproxNoveltyTable, BloomFilter};
pub use features::{
    atom_features, bit_features, byte_features, AtomFeatures, BitFeatures, ByteFeatures, Feature,
    FeatureError, FeatureMap, FeatureSet,
};
pub use table::{
    for_each_combination, DepthNoveltyTable, Novelty, NoveltyMeasure, NoveltyTable,
    PartitionedNovelty, RewardNoveltyTable,
};
