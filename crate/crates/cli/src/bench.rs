//! Benchmark manifests and the suite runner.
//!
//! A manifest is TOML:
//!
//! ```toml
//! split_goals = true      # one sub-instance per goal fluent
//! oracle = true           # compare plan costs with the breadth-first optimum
//! budget_nodes = 1000000
//!
//! [[instances]]
//! domain = "blocksworld/domain.pddl"
//! problems = ["blocksworld/p01.pddl", "blocksworld/p02.pddl"]
//!
//! [[algos]]
//! algo = "iw"
//! k = 2
//! ```
//!
//! Relative paths are resolved against the manifest's directory.

use std::path::{Path, PathBuf};
use std::time::Duration;

use rayon::prelude::*;
use serde::Deserialize;
use widthplan::model::StripsTask;
use widthplan::search::{brfs_oracle, Budget, SearchOutcome, DEFAULT_NODE_BUDGET};

use crate::report::{Outcome, RunRecord, SuiteReport};
use crate::{load_task, solve_record, split_goals, AlgoSpec};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default)]
    pub split_goals: bool,
    #[serde(default)]
    pub oracle: bool,
    #[serde(default)]
    pub budget_nodes: Option<u64>,
    #[serde(default)]
    pub budget_ms: Option<u64>,
    /// Worker threads; default is one per core.
    #[serde(default)]
    pub jobs: Option<usize>,
    #[serde(default)]
    pub instances: Vec<InstanceGroup>,
    #[serde(default)]
    pub algos: Vec<AlgoSpec>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceGroup {
    pub domain: PathBuf,
    pub problems: Vec<PathBuf>,
}

#[derive(Debug)]
pub enum ManifestError {
    Io(std::io::Error),
    Toml(toml::de::Error),
    Spec(String),
}

impl std::fmt::Display for ManifestError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ManifestError::Io(e) => write!(f, "cannot read manifest: {e}"),
            ManifestError::Toml(e) => write!(f, "invalid manifest: {e}"),
            ManifestError::Spec(e) => write!(f, "invalid algorithm entry: {e}"),
        }
    }
}

impl std::error::Error for ManifestError {}

impl Manifest {
    pub fn from_toml_str(text: &str) -> Result<Self, ManifestError> {
        let m: Manifest = toml::from_str(text).map_err(ManifestError::Toml)?;
        for a in &m.algos {
            a.check().map_err(|e| ManifestError::Spec(format!("{}: {e}", a.label())))?;
        }
        Ok(m)
    }

    /// Loads a manifest and makes its paths absolute.
    pub fn load(path: &Path) -> Result<Self, ManifestError> {
        let text = std::fs::read_to_string(path).map_err(ManifestError::Io)?;
        let mut m = Manifest::from_toml_str(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for g in &mut m.instances {
            g.domain = base.join(&g.domain);
            for p in &mut g.problems {
                *p = base.join(&*p);
            }
        }
        Ok(m)
    }

    pub fn budget(&self) -> Budget {
        let mut b = Budget::default();
        if let Some(n) = self.budget_nodes {
            b.max_generated = Some(n);
        }
        if let Some(ms) = self.budget_ms {
            b.max_time = Some(Duration::from_millis(ms));
        }
        b
    }
}

/// Instance id: the problem file and its directory, e.g. `gripper/p01.pddl`.
pub fn instance_id(problem: &Path) -> String {
    let file = problem.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
    match problem.parent().and_then(Path::file_name) {
        Some(dir) => format!("{}/{file}", dir.to_string_lossy()),
        None => file,
    }
}

enum Unit {
    Task { id: String, task: StripsTask, oracle: Option<u64> },
    Broken { id: String, message: String },
}

/// Runs every algorithm on every (sub-)instance. Failures to load an
/// instance become `input-error` records; the suite always completes.
/// Records come out in manifest order whatever the thread count.
pub fn run_suite(m: &Manifest) -> SuiteReport {
    let budget = m.budget();
    let mut loaded = Vec::new();
    for g in &m.instances {
        for p in &g.problems {
            let id = instance_id(p);
            match load_task(&g.domain, p) {
                Ok(task) if m.split_goals => {
                    for sub in split_goals(&task) {
                        let goal = sub.name.rsplit_once('/').map(|(_, g)| g.to_string()).unwrap_or_default();
                        loaded.push(Unit::Task { id: format!("{id}#{goal}"), task: sub, oracle: None });
                    }
                }
                Ok(task) => loaded.push(Unit::Task { id, task, oracle: None }),
                Err(e) => loaded.push(Unit::Broken { id, message: e.to_string() }),
            }
        }
    }
    let run = || {
        let units: Vec<Unit> = loaded
            .into_par_iter()
            .map(|u| match u {
                Unit::Task { id, task, .. } => {
                    let oracle = if m.oracle { oracle_cost(&task, budget) } else { None };
                    Unit::Task { id, task, oracle }
                }
                broken => broken,
            })
            .collect();
        let jobs: Vec<(&Unit, &AlgoSpec)> = units.iter().flat_map(|u| m.algos.iter().map(move |a| (u, a))).collect();
        jobs.into_par_iter()
            .map(|(u, spec)| match u {
                Unit::Task { id, task, oracle } => {
                    let (mut rec, _) = solve_record(id, task, spec, budget);
                    rec.oracle_cost = *oracle;
                    if let (Some(c), Some(o)) = (rec.cost, oracle) {
                        rec.optimal = Some(c == *o);
                    }
                    rec
                }
                Unit::Broken { id, message } => {
                    let mut rec = RunRecord::for_spec(id, spec);
                    rec.outcome = Outcome::InputError;
                    rec.message = Some(message.clone());
                    rec
                }
            })
            .collect::<Vec<_>>()
    };
    let records = match m.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        },
        None => run(),
    };
    SuiteReport::from_records(records)
}

/// Optimal plan cost, or `None` when the oracle gives up or the goal is
/// unreachable.
pub fn oracle_cost(task: &StripsTask, budget: Budget) -> Option<u64> {
    let cap = budget.max_generated.unwrap_or(DEFAULT_NODE_BUDGET);
    match brfs_oracle(task, cap) {
        Ok(SearchOutcome::Solved(p)) => Some(p.cost),
        _ => None,
    }
}
