//! Machine-readable run records and suite reports.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::AlgoSpec;

/// Bumped whenever a field of [`RunRecord`] or [`SuiteReport`] changes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Solved,
    Exhausted,
    BudgetExceeded,
    /// The search stopped with an error, such as an SIW serialization failure.
    Failed,
    /// The instance could not be read, parsed or grounded.
    InputError,
    /// An episode ended in the environment's goal region.
    Goal,
    /// An episode ran its full horizon without a terminal state.
    Horizon,
    /// An episode hit a terminal state outside any goal region.
    Terminal,
    /// The environment or a lookahead failed mid-episode.
    Fault,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Solved => "solved",
            Outcome::Exhausted => "exhausted",
            Outcome::BudgetExceeded => "budget-exceeded",
            Outcome::Failed => "failed",
            Outcome::InputError => "input-error",
            Outcome::Goal => "goal",
            Outcome::Horizon => "horizon",
            Outcome::Terminal => "terminal",
            Outcome::Fault => "fault",
        }
    }

    pub fn parse(s: &str) -> Option<Outcome> {
        use Outcome::*;
        [Solved, Exhausted, BudgetExceeded, Failed, InputError, Goal, Horizon, Terminal, Fault]
            .into_iter()
            .find(|o| o.as_str() == s)
    }
}

/// One planner run or control episode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunRecord {
    pub schema_version: u32,
    pub instance: String,
    pub algo: String,
    /// Parameter label, e.g. `iw(k=2)`.
    pub label: String,
    pub k: Option<usize>,
    pub variant: Option<String>,
    pub novelty: Option<String>,
    pub bloom_bits: Option<usize>,
    pub outcome: Outcome,
    pub cost: Option<u64>,
    pub plan_length: Option<usize>,
    /// Accumulated reward of an episode.
    pub reward: Option<f64>,
    pub steps: Option<usize>,
    pub generated: u64,
    pub expanded: u64,
    pub pruned: u64,
    pub ms: f64,
    pub max_decision_ms: Option<f64>,
    pub seed: u64,
    /// Phase of a multi-phase search that found the plan.
    pub phase: Option<String>,
    /// Optimal cost from the breadth-first oracle, when it was run.
    pub oracle_cost: Option<u64>,
    /// Whether a returned plan matches `oracle_cost`.
    pub optimal: Option<bool>,
    pub message: Option<String>,
}

impl RunRecord {
    pub fn new(instance: &str, algo: &str) -> Self {
        RunRecord {
            schema_version: SCHEMA_VERSION,
            instance: instance.to_string(),
            algo: algo.to_string(),
            label: algo.to_string(),
            k: None,
            variant: None,
            novelty: None,
            bloom_bits: None,
            outcome: Outcome::Failed,
            cost: None,
            plan_length: None,
            reward: None,
            steps: None,
            generated: 0,
            expanded: 0,
            pruned: 0,
            ms: 0.0,
            max_decision_ms: None,
            seed: 0,
            phase: None,
            oracle_cost: None,
            optimal: None,
            message: None,
        }
    }

    pub fn for_spec(instance: &str, spec: &AlgoSpec) -> Self {
        let mut r = RunRecord::new(instance, spec.algo.name());
        r.label = spec.label();
        r.k = spec.effective_k();
        r.variant = spec.variant.map(|v| v.name().to_string());
        r.novelty = Some(
            match spec.novelty {
                crate::NoveltyMode::Exact => "exact",
                crate::NoveltyMode::Approx => "approx",
            }
            .to_string(),
        );
        r.bloom_bits = spec.bloom_bits;
        r.seed = spec.seed;
        r
    }

    pub fn is_solved(&self) -> bool {
        self.outcome == Outcome::Solved
    }

    /// Copy with every wall-clock field zeroed, for determinism checks.
    pub fn without_timing(&self) -> RunRecord {
        let mut r = self.clone();
        r.ms = 0.0;
        r.max_decision_ms = r.max_decision_ms.map(|_| 0.0);
        r
    }

    pub fn csv_row(&self) -> CsvRow {
        CsvRow {
            instance: self.instance.clone(),
            algo: self.label.clone(),
            k: self.k,
            outcome: self.outcome.as_str().to_string(),
            cost: self.cost,
            generated: self.generated,
            expanded: self.expanded,
            pruned: self.pruned,
            ms: self.ms,
        }
    }
}

/// The CSV summary columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub instance: String,
    pub algo: String,
    pub k: Option<usize>,
    pub outcome: String,
    pub cost: Option<u64>,
    pub generated: u64,
    pub expanded: u64,
    pub pruned: u64,
    pub ms: f64,
}

/// Solve counts for a group of records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub total: usize,
    pub solved: usize,
    /// `None` when there are no records.
    pub solve_rate: Option<f64>,
    /// `solved/total`, or `n/a`.
    pub solve_rate_exact: String,
    /// Solved runs whose plan matched the oracle optimum.
    pub optimal: usize,
}

impl Aggregate {
    pub fn of<'a>(records: impl IntoIterator<Item = &'a RunRecord>) -> Self {
        let mut total = 0;
        let mut solved = 0;
        let mut optimal = 0;
        for r in records {
            total += 1;
            if r.is_solved() {
                solved += 1;
                if r.optimal == Some(true) {
                    optimal += 1;
                }
            }
        }
        Aggregate {
            total,
            solved,
            solve_rate: (total > 0).then(|| solved as f64 / total as f64),
            solve_rate_exact: if total > 0 { format!("{solved}/{total}") } else { "n/a".into() },
            optimal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub records: Vec<RunRecord>,
    #[serde(flatten)]
    pub overall: Aggregate,
    /// Keyed by algorithm label.
    pub per_algorithm: BTreeMap<String, Aggregate>,
}

impl SuiteReport {
    pub fn from_records(records: Vec<RunRecord>) -> Self {
        let mut groups: BTreeMap<String, Vec<&RunRecord>> = BTreeMap::new();
        for r in &records {
            groups.entry(r.label.clone()).or_default().push(r);
        }
        let per_algorithm = groups.into_iter().map(|(k, v)| (k, Aggregate::of(v))).collect();
        SuiteReport {
            schema_version: SCHEMA_VERSION,
            overall: Aggregate::of(&records),
            per_algorithm,
            records,
        }
    }

    pub fn write_csv<W: Write>(&self, w: W) -> io::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for r in &self.records {
            out.serialize(r.csv_row()).map_err(io::Error::other)?;
        }
        out.flush()
    }

    /// Records solved by `label`, by instance name.
    pub fn solved_set(&self, label: &str) -> std::collections::BTreeSet<&str> {
        self.records
            .iter()
            .filter(|r| r.label == label && r.is_solved())
            .map(|r| r.instance.as_str())
            .collect()
    }
}

/// Reads back a CSV summary.
pub fn read_csv<R: io::Read>(r: R) -> Result<Vec<CsvRow>, csv::Error> {
    csv::Reader::from_reader(r).deserialize().collect()
}
