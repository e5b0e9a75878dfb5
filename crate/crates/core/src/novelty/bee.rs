//! Boundary extension encoding.
//!
//! Each numeric variable keeps the range of values observed so far, split
//! into intervals. The first observation `v0` opens the degenerate interval
//! `[v0, v0]` with index 0. A value above the current maximum opens
//! `(max, v]`, a value below the minimum opens `[v, min)`, each with the next
//! fresh index. Values inside the range get the index of the interval that
//! contains them. Intervals are never split.

use super::features::{Feature, FeatureError, FeatureMap, FeatureSet};
use crate::envs::{EnvState, NumericState};

#[derive(Debug, Clone)]
struct VarIntervals {
    origin: f64,
    /// `(hi, index)` ascending; entry i covers `(previous hi, hi]`.
    upper: Vec<(f64, u64)>,
    /// `(lo, index)` descending; entry i covers `[lo, previous lo)`.
    lower: Vec<(f64, u64)>,
    next: u64,
}

impl VarIntervals {
    fn new(origin: f64) -> Self {
        VarIntervals {
            origin,
            upper: Vec::new(),
            lower: Vec::new(),
            next: 1,
        }
    }

    fn max(&self) -> f64 {
        self.upper.last().map_or(self.origin, |u| u.0)
    }

    fn min(&self) -> f64 {
        self.lower.last().map_or(self.origin, |l| l.0)
    }

    fn index_of(&mut self, v: f64) -> u64 {
        if v > self.max() {
            let idx = self.next;
            self.next += 1;
            self.upper.push((v, idx));
            idx
        } else if v < self.min() {
            let idx = self.next;
            self.next += 1;
            self.lower.push((v, idx));
            idx
        } else if v == self.origin {
            0
        } else if v > self.origin {
            let i = self.upper.partition_point(|&(hi, _)| hi < v);
            self.upper[i].1
        } else {
            let i = self.lower.partition_point(|&(lo, _)| lo > v);
            self.lower[i].1
        }
    }

    fn interval_count(&self) -> usize {
        1 + self.upper.len() + self.lower.len()
    }
}

/// Per-variable interval maps for one lookahead.
#[derive(Debug, Clone)]
pub struct BeeFeatureMap {
    vars: Vec<Option<VarIntervals>>,
}

impl BeeFeatureMap {
    pub fn new(variables: usize) -> Self {
        BeeFeatureMap {
            vars: vec![None; variables],
        }
    }

    pub fn variables(&self) -> usize {
        self.vars.len()
    }

    /// Intervals created so far for `var` (0 before its first observation).
    pub fn interval_count(&self, var: usize) -> usize {
        self.vars[var].as_ref().map_or(0, VarIntervals::interval_count)
    }

    /// Observed `[min, max]` of `var`.
    pub fn range(&self, var: usize) -> Option<(f64, f64)> {
        self.vars[var].as_ref().map(|v| (v.min(), v.max()))
    }

    /// Interval index of `value` for variable `var`, extending the map when
    /// the value lies outside the observed range.
    pub fn observe(&mut self, var: usize, value: f64) -> Result<u64, FeatureError> {
        if !value.is_finite() {
            return Err(FeatureError::NonFinite { index: var, value });
        }
        let slot = &mut self.vars[var];
        match slot {
            None => {
                *slot = Some(VarIntervals::new(value));
                Ok(0)
            }
            Some(v) => Ok(v.index_of(value)),
        }
    }

    pub fn clear(&mut self) {
        self.vars.iter_mut().for_each(|v| *v = None);
    }
}

/// Feature `(i, interval index)` per variable; mutates `map`.
pub fn bee_features(map: &mut BeeFeatureMap, s: &NumericState) -> Result<FeatureSet, FeatureError> {
    assert_eq!(map.variables(), s.values.len(), "BEE map arity mismatch");
    if let Some((i, &v)) = s.values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(FeatureError::NonFinite { index: i, value: v });
    }
    let mut out = Vec::with_capacity(s.values.len());
    for (i, &v) in s.values.iter().enumerate() {
        out.push(Feature::new(i as u32, map.observe(i, v)?));
    }
    Ok(FeatureSet::new(out))
}

/// [`FeatureMap`] adapter owning a BEE map.
#[derive(Debug, Clone)]
pub struct BeeFeatures {
    map: BeeFeatureMap,
}

impl BeeFeatures {
    pub fn new(variables: usize) -> Self {
        BeeFeatures {
            map: BeeFeatureMap::new(variables),
        }
    }

    pub fn map(&self) -> &BeeFeatureMap {
        &self.map
    }
}

impl FeatureMap<EnvState> for BeeFeatures {
    fn features(&mut self, s: &EnvState) -> Result<FeatureSet, FeatureError> {
        match s {
            EnvState::Numeric(n) => bee_features(&mut self.map, n),
            EnvState::Bytes(_) => Err(FeatureError::Mismatch { encoding: "bee", kind: "byte" }),
        }
    }

    fn reset(&mut self) {
        self.map.clear();
    }
}
