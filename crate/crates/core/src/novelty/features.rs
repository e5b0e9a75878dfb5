use std::fmt;

use serde::{Deserialize, Serialize};

use crate::envs::{ByteState, EnvState, NumericState};
use crate::model::State;

/// One element of the feature alphabet: a variable paired with a value.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Feature {
    pub variable: u32,
    pub value: u64,
}

impl Feature {
    pub const fn new(variable: u32, value: u64) -> Self {
        Feature { variable, value }
    }
}

impl fmt::Debug for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{:#x})", self.variable, self.value)
    }
}

/// Sorted, duplicate-free features of a single state.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FeatureSet(Vec<Feature>);

impl FeatureSet {
    pub fn new(mut features: Vec<Feature>) -> Self {
        features.sort_unstable();
        features.dedup();
        FeatureSet(features)
    }

    pub fn as_slice(&self) -> &[Feature] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Feature> {
        self.0.iter()
    }
}

impl FromIterator<Feature> for FeatureSet {
    fn from_iter<I: IntoIterator<Item = Feature>>(iter: I) -> Self {
        FeatureSet::new(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FeatureError {
    #[error("state variable {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },
    #[error("feature encoding `{encoding}` does not apply to {kind} states")]
    Mismatch { encoding: &'static str, kind: &'static str },
}

/// One feature `(fluent, 1)` per true fluent.
pub fn atom_features(s: &State) -> FeatureSet {
    // State::iter yields increasing indices, already sorted and unique.
    FeatureSet(s.iter().map(|f| Feature::new(f as u32, 1)).collect())
}

/// One feature per variable holding the IEEE-754 bit pattern of its value.
pub fn bit_features(s: &NumericState) -> Result<FeatureSet, FeatureError> {
    s.values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            if v.is_finite() {
                Ok(Feature::new(i as u32, v.to_bits()))
            } else {
                Err(FeatureError::NonFinite { index: i, value: v })
            }
        })
        .collect::<Result<Vec<_>, _>>()
        .map(FeatureSet)
}

/// One feature per byte position holding the byte value.
pub fn byte_features(s: &ByteState) -> FeatureSet {
    FeatureSet(
        s.bytes
            .iter()
            .enumerate()
            .map(|(i, &b)| Feature::new(i as u32, b as u64))
            .collect(),
    )
}

/// Maps states of some space onto feature sets. Implementations may keep
/// state across calls (BEE intervals); `reset` clears it.
pub trait FeatureMap<S> {
    fn features(&mut self, s: &S) -> Result<FeatureSet, FeatureError>;
    fn reset(&mut self) {}
}

/// Boolean fluent features for STRIPS states.
#[derive(Debug, Default, Clone, Copy)]
pub struct AtomFeatures;

impl FeatureMap<State> for AtomFeatures {
    fn features(&mut self, s: &State) -> Result<FeatureSet, FeatureError> {
        Ok(atom_features(s))
    }
}

#[derive(Debug, Default, Clone, Copy)]
pub struct BitFeatures;

impl FeatureMap<EnvState> for BitFeatures {
    fn features(&mut self, s: &EnvState) -> Result<FeatureSet, FeatureError> {
        match s {
            EnvState::Numeric(n) => bit_features(n),
            EnvState::Bytes(_) => Err(FeatureError::Mismatch { encoding: "bit", kind: "byte" }),
        }
    }
}

#[derive(Debug, Default, Clone, Copy)]
pub struct ByteFeatures;

impl FeatureMap<EnvState> for ByteFeatures {
    fn features(&mut self, s: &EnvState) -> Result<FeatureSet, FeatureError> {
        match s {
            EnvState::Bytes(b) => Ok(byte_features(b)),
            EnvState::Numeric(_) => Err(FeatureError::Mismatch { encoding: "byte", kind: "numeric" }),
        }
    }
}
