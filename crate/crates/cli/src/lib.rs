//! Front end for the widthplan library: run records, algorithm dispatch and
//! the benchmark suite runner used by the `widthplan` binary.

pub mod bench;
pub mod report;

use std::fmt;
use std::path::Path;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use widthplan::model::StripsTask;
use widthplan::novelty::ApproxConfig;
use widthplan::parser::{ground, parse_domain, parse_problem};
use widthplan::search::{
    bfws, brfs_oracle, iterated_iw, iw, iw_approx, siw, BfwsVariant, Budget, CostMode, SearchError,
    SearchOutcome,
};

pub use report::{Aggregate, Outcome, RunRecord, SuiteReport, SCHEMA_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Algo {
    Brfs,
    Iw,
    Iiw,
    Bfws,
    Siw,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Brfs => "brfs",
            Algo::Iw => "iw",
            Algo::Iiw => "iiw",
            Algo::Bfws => "bfws",
            Algo::Siw => "siw",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Full,
    Kprune,
    Dual,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Full => "full",
            Variant::Kprune => "kprune",
            Variant::Dual => "dual",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum NoveltyMode {
    #[default]
    Exact,
    Approx,
}

/// An algorithm and its parameters, as given on the command line or in a
/// bench manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgoSpec {
    pub algo: Algo,
    /// Width bound; `k_max` for `iiw` and `siw`.
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub variant: Option<Variant>,
    #[serde(default)]
    pub novelty: NoveltyMode,
    #[serde(default)]
    pub bloom_bits: Option<usize>,
    /// Order children by path cost (IW only).
    #[serde(default)]
    pub dijkstra: bool,
    #[serde(default)]
    pub seed: u64,
}

impl AlgoSpec {
    pub fn new(algo: Algo) -> Self {
        AlgoSpec {
            algo,
            k: None,
            variant: None,
            novelty: NoveltyMode::Exact,
            bloom_bits: None,
            dijkstra: false,
            seed: 0,
        }
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    /// Rejects parameter combinations that do not apply to the algorithm.
    pub fn check(&self) -> Result<(), SpecError> {
        if self.k == Some(0) {
            return Err(SpecError("k must be at least 1".into()));
        }
        if self.variant.is_some() && self.algo != Algo::Bfws {
            return Err(SpecError("--variant applies only to bfws".into()));
        }
        if self.novelty == NoveltyMode::Approx && self.algo != Algo::Iw {
            return Err(SpecError("approximate novelty is available for iw only".into()));
        }
        if self.bloom_bits.is_some() && self.novelty != NoveltyMode::Approx {
            return Err(SpecError("--bloom-bits needs --novelty approx".into()));
        }
        if self.bloom_bits == Some(0) {
            return Err(SpecError("--bloom-bits must be positive".into()));
        }
        if self.dijkstra && (self.algo != Algo::Iw || self.novelty == NoveltyMode::Approx) {
            return Err(SpecError("--dijkstra applies only to exact iw".into()));
        }
        if self.variant == Some(Variant::Full) && self.k.is_some_and(|k| k != 2) {
            return Err(SpecError("the full bfws variant always uses k = 2".into()));
        }
        if self.variant == Some(Variant::Dual) && self.k.is_some() {
            return Err(SpecError("the dual bfws variant fixes its own k".into()));
        }
        Ok(())
    }

    /// The k reported in records: the bound actually used where it is fixed.
    pub fn effective_k(&self) -> Option<usize> {
        match (self.algo, self.variant) {
            (Algo::Brfs, _) => None,
            (Algo::Iw, _) => Some(self.k.unwrap_or(1)),
            (Algo::Bfws, Some(Variant::Full)) => Some(2),
            (Algo::Bfws, Some(Variant::Dual)) => None,
            (Algo::Bfws, _) => Some(self.k.unwrap_or(1)),
            (Algo::Iiw | Algo::Siw, _) => self.k,
        }
    }

    /// Short label such as `iw(k=2)` or `bfws(dual)`.
    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        if let Some(v) = self.variant {
            parts.push(v.name().to_string());
        }
        if let Some(k) = self.effective_k() {
            parts.push(format!("k={k}"));
        }
        if self.novelty == NoveltyMode::Approx {
            parts.push("approx".into());
        }
        if self.dijkstra {
            parts.push("dijkstra".into());
        }
        if parts.is_empty() {
            self.algo.name().to_string()
        } else {
            format!("{}({})", self.algo.name(), parts.join(","))
        }
    }

    fn bfws_variant(&self) -> BfwsVariant {
        match self.variant {
            Some(Variant::Full) => BfwsVariant::Full,
            Some(Variant::Dual) => BfwsVariant::Dual,
            Some(Variant::Kprune) | None => BfwsVariant::KPruning(self.k.unwrap_or(1)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecError(pub String);

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for SpecError {}

/// Problems reading or grounding an instance. Parse errors carry the file
/// they came from.
#[derive(Debug)]
pub enum InputError {
    Io { path: String, source: std::io::Error },
    Parse { path: String, error: widthplan::parser::ParseError },
    Ground { path: String, message: String },
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Io { path, source } => write!(f, "{path}: {source}"),
            InputError::Parse { path, error } => write!(f, "{path}:{error}"),
            InputError::Ground { path, message } => write!(f, "{path}: {message}"),
        }
    }
}

impl std::error::Error for InputError {}

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|source| InputError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Reads, parses and grounds one domain/problem pair.
pub fn load_task(domain: &Path, problem: &Path) -> Result<StripsTask, InputError> {
    let dtext = read(domain)?;
    let ptext = read(problem)?;
    let d = parse_domain(&dtext).map_err(|error| InputError::Parse {
        path: domain.display().to_string(),
        error,
    })?;
    let p = parse_problem(&ptext, &d).map_err(|error| InputError::Parse {
        path: problem.display().to_string(),
        error,
    })?;
    ground(&d, &p).map_err(|e| InputError::Ground {
        path: problem.display().to_string(),
        message: e.to_string(),
    })
}

/// One sub-task per goal fluent, named `<task>/<fluent>`.
pub fn split_goals(task: &StripsTask) -> Vec<StripsTask> {
    task.goal()
        .iter()
        .map(|&g| {
            let mut t = task.with_goal([g]).expect("goal fluent is in range");
            t.name = format!("{}/{}", task.name, task.fluent_name(g));
            t
        })
        .collect()
}

/// Runs `spec` on `task`. An exceeded breadth-first cap is reported as a
/// budget outcome, not an error.
pub fn run_algo(task: &StripsTask, spec: &AlgoSpec, budget: Budget) -> Result<SearchOutcome, SearchError> {
    match spec.algo {
        Algo::Brfs => match brfs_oracle(task, budget.max_generated.unwrap_or(u64::MAX)) {
            Err(SearchError::OracleTooLarge) => Ok(SearchOutcome::BudgetExceeded(Default::default())),
            other => other,
        },
        Algo::Iw => {
            let k = spec.k.unwrap_or(1);
            match spec.novelty {
                NoveltyMode::Exact => {
                    let mode = if spec.dijkstra { CostMode::Dijkstra } else { CostMode::Uniform };
                    iw(task, k, mode, budget)
                }
                NoveltyMode::Approx => {
                    let mut cfg = ApproxConfig { seed: spec.seed, ..Default::default() };
                    if let Some(bits) = spec.bloom_bits {
                        cfg.bloom_bits = bits;
                    }
                    iw_approx(task, k, cfg, budget)
                }
            }
        }
        Algo::Iiw => iterated_iw(task, spec.k, budget),
        Algo::Bfws => bfws(task, spec.bfws_variant(), budget),
        Algo::Siw => siw(task, spec.k, budget),
    }
}

/// Runs `spec` and folds the result into a record. Search errors (such as
/// an SIW serialization failure) become `failed` records.
pub fn solve_record(instance: &str, task: &StripsTask, spec: &AlgoSpec, budget: Budget) -> (RunRecord, Option<Vec<String>>) {
    let start = std::time::Instant::now();
    let result = run_algo(task, spec, budget);
    let ms = start.elapsed().as_secs_f64() * 1e3;
    let mut rec = RunRecord::for_spec(instance, spec);
    rec.ms = ms;
    match result {
        Ok(out) => {
            let stats = out.stats();
            rec.generated = stats.generated;
            rec.expanded = stats.expanded;
            rec.pruned = stats.pruned;
            rec.phase = stats.phase.clone();
            rec.outcome = match &out {
                SearchOutcome::Solved(_) => Outcome::Solved,
                SearchOutcome::Exhausted(_) => Outcome::Exhausted,
                SearchOutcome::BudgetExceeded(_) => Outcome::BudgetExceeded,
            };
            if let Some(p) = out.plan() {
                rec.cost = Some(p.cost);
                rec.plan_length = Some(p.len());
                let names = p.action_names(task).into_iter().map(String::from).collect();
                return (rec, Some(names));
            }
        }
        Err(e) => {
            rec.outcome = match e {
                SearchError::BudgetExceeded => Outcome::BudgetExceeded,
                _ => Outcome::Failed,
            };
            rec.message = Some(e.to_string());
        }
    }
    (rec, None)
}
