use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use widthplan::control::{run_episode, ControllerConfig, Encoding, LookaheadKind};
use widthplan::envs::{make_env, EnvConfig, EnvError, StateKind, ENV_NAMES};
use widthplan::search::{effective_width, Budget};
use widthplan_cli::bench::{run_suite, Manifest};
use widthplan_cli::{load_task, solve_record, split_goals, Algo, AlgoSpec, NoveltyMode, Outcome, RunRecord, Variant};

#[derive(Parser)]
#[command(name = "widthplan", version, about = "Width-based planning and control")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve a PDDL problem.
    Solve(SolveArgs),
    /// Run a rolling-horizon controller on a built-in environment.
    Control(ControlArgs),
    /// Run a benchmark manifest.
    Bench(BenchArgs),
    /// Measure the effective width of a PDDL problem.
    Width(WidthArgs),
}

#[derive(Args)]
struct BudgetArgs {
    /// Generated-node cap.
    #[arg(long)]
    budget_nodes: Option<u64>,
    /// Wall-time cap in milliseconds.
    #[arg(long)]
    budget_ms: Option<u64>,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
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

#[derive(Args)]
struct SolveArgs {
    domain: PathBuf,
    problem: PathBuf,
    #[arg(long, value_enum, default_value = "iw")]
    algo: Algo,
    /// Width bound (k_max for iiw and siw).
    #[arg(long)]
    k: Option<usize>,
    /// BFWS variant.
    #[arg(long, value_enum)]
    variant: Option<Variant>,
    #[arg(long, value_enum, default_value = "exact")]
    novelty: NoveltyMode,
    /// Bloom filter size for approximate novelty.
    #[arg(long)]
    bloom_bits: Option<usize>,
    /// Expand IW nodes in order of path cost.
    #[arg(long)]
    dijkstra: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Write the run record here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the plan here, one action per line.
    #[arg(long)]
    plan: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ControlAlgo {
    Iw,
    RolloutIw,
}

#[derive(Clone, Copy, ValueEnum)]
enum FeatureArg {
    Bit,
    Bee,
    Byte,
}

#[derive(Args)]
struct ControlArgs {
    env: String,
    #[arg(long, value_enum, default_value = "iw")]
    algo: ControlAlgo,
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Defaults to bee for numeric states and byte for byte states.
    #[arg(long, value_enum)]
    features: Option<FeatureArg>,
    /// Per-decision node cap (default 2000 when no cap is given).
    #[arg(long)]
    budget_nodes: Option<u64>,
    /// Per-decision time cap in milliseconds.
    #[arg(long)]
    budget_ms: Option<u64>,
    /// Steps to run, at most the environment horizon.
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Environment constants (TOML); defaults to the bundled ones.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the run record here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the episode as JSON lines.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    manifest: PathBuf,
    /// Suite report JSON; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// CSV summary.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Override the manifest's worker count.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct WidthArgs {
    domain: PathBuf,
    problem: PathBuf,
    /// Largest k to try (default |F|).
    #[arg(long)]
    k_max: Option<usize>,
    /// Report one width per goal fluent.
    #[arg(long)]
    split_goals: bool,
    #[command(flatten)]
    budget: BudgetArgs,
}

/// Failure kinds mapped to exit codes.
enum Fail {
    Input(anyhow::Error),
    Run(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail::Run(e.into())
    }
}

fn input<T, E: Into<anyhow::Error>>(r: std::result::Result<T, E>) -> std::result::Result<T, Fail> {
    r.map_err(|e| Fail::Input(e.into()))
}

fn write_json(path: Option<&Path>, value: &impl serde::Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match path {
        Some(p) => std::fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn solve(a: SolveArgs) -> std::result::Result<bool, Fail> {
    let spec = AlgoSpec {
        algo: a.algo,
        k: a.k,
        variant: a.variant,
        novelty: a.novelty,
        bloom_bits: a.bloom_bits,
        dijkstra: a.dijkstra,
        seed: a.seed,
    };
    input(spec.check())?;
    let task = input(load_task(&a.domain, &a.problem))?;
    let id = a.problem.display().to_string();
    let (rec, plan) = solve_record(&id, &task, &spec, a.budget.budget());
    if let (Some(path), Some(plan)) = (&a.plan, &plan) {
        let mut w = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
        for step in plan {
            writeln!(w, "{step}")?;
        }
        w.flush()?;
    }
    write_json(a.out.as_deref(), &rec)?;
    if let Some(m) = &rec.message {
        eprintln!("{m}");
    }
    Ok(rec.is_solved())
}

fn control(a: ControlArgs) -> std::result::Result<bool, Fail> {
    let env_cfg = match &a.config {
        Some(p) => {
            let text = input(std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display())))?;
            input(EnvConfig::from_toml_str(&text))?
        }
        None => EnvConfig::default(),
    };
    let env = match make_env(&a.env, &env_cfg) {
        Ok(e) => e,
        Err(EnvError::Unknown(name)) => {
            return Err(Fail::Input(anyhow::anyhow!(
                "unknown environment {name:?}; expected one of {}",
                ENV_NAMES.join(", ")
            )))
        }
        Err(e) => return Err(Fail::Input(e.into())),
    };
    let spec = env.spec();
    let features = match a.features {
        Some(FeatureArg::Bit) => Encoding::Bit,
        Some(FeatureArg::Bee) => Encoding::Bee,
        Some(FeatureArg::Byte) => Encoding::Byte,
        None if spec.state_kind == StateKind::Byte => Encoding::Byte,
        None => Encoding::Bee,
    };
    let budget_nodes = match (a.budget_nodes, a.budget_ms) {
        (None, None) => ControllerConfig::default().budget_nodes,
        (n, _) => n,
    };
    let cfg = ControllerConfig {
        algorithm: match a.algo {
            ControlAlgo::Iw => LookaheadKind::Iw,
            ControlAlgo::RolloutIw => LookaheadKind::RolloutIw,
        },
        k: a.k,
        features,
        budget_nodes,
        budget_ms: a.budget_ms,
        horizon: a.horizon,
        objective: None,
        seed: a.seed,
    };
    let ep = input(run_episode(env.as_ref(), &cfg))?;
    if let Some(p) = &a.trace {
        let f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
        ep.trace.write_jsonl(BufWriter::new(f))?;
    }
    let mut rec = RunRecord::new(&a.env, algorithm_name(cfg.algorithm));
    rec.label = format!("{}(k={})", algorithm_name(cfg.algorithm), cfg.k);
    rec.k = Some(cfg.k);
    rec.novelty = Some(format!("{:?}", cfg.features).to_lowercase());
    rec.seed = cfg.seed;
    rec.reward = Some(ep.total_reward());
    rec.steps = Some(ep.trace.len());
    rec.generated = ep.stats.generated;
    rec.expanded = ep.stats.expanded;
    rec.pruned = ep.stats.pruned;
    rec.ms = ep.wall_ms;
    rec.max_decision_ms = Some(ep.max_decision_ms);
    rec.outcome = if ep.fault.is_some() {
        Outcome::Fault
    } else if ep.reached_goal {
        Outcome::Goal
    } else if ep.trace.terminal {
        Outcome::Terminal
    } else {
        Outcome::Horizon
    };
    rec.message = ep.fault.as_ref().map(|e| e.to_string());
    write_json(a.out.as_deref(), &rec)?;
    // success: the goal region for goal tasks, surviving the horizon otherwise
    let full = ep.trace.len() == cfg.horizon.unwrap_or(spec.horizon).min(spec.horizon);
    Ok(match rec.outcome {
        Outcome::Goal => true,
        Outcome::Horizon => !spec.has_goal && full,
        _ => false,
    })
}

fn bench(a: BenchArgs) -> std::result::Result<bool, Fail> {
    let mut m = input(Manifest::load(&a.manifest))?;
    if a.jobs.is_some() {
        m.jobs = a.jobs;
    }
    let report = run_suite(&m);
    if let Some(p) = &a.csv {
        let f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
        report.write_csv(BufWriter::new(f))?;
    }
    write_json(a.out.as_deref(), &report)?;
    eprintln!("solved {} ({})", report.overall.solve_rate_exact, report.overall.solve_rate.map_or("n/a".into(), |r| format!("{:.1}%", 100.0 * r)));
    for (label, agg) in &report.per_algorithm {
        eprintln!("  {label}: {} optimal {}", agg.solve_rate_exact, agg.optimal);
    }
    Ok(true)
}

fn width(a: WidthArgs) -> std::result::Result<bool, Fail> {
    if a.k_max == Some(0) {
        return Err(Fail::Input(anyhow::anyhow!("--k-max must be at least 1")));
    }
    let task = input(load_task(&a.domain, &a.problem))?;
    let tasks = if a.split_goals { split_goals(&task) } else { vec![task] };
    let mut all_ok = true;
    let mut rows = Vec::new();
    for t in &tasks {
        let row = match effective_width(t, a.k_max, a.budget.budget()) {
            Ok(w) => serde_json::json!({ "instance": t.name, "fluents": t.fluent_count(), "width": w }),
            Err(e) => {
                all_ok = false;
                serde_json::json!({ "instance": t.name, "fluents": t.fluent_count(), "error": e.to_string() })
            }
        };
        rows.push(row);
    }
    write_json(None, &rows)?;
    Ok(all_ok)
}

fn algorithm_name(kind: LookaheadKind) -> &'static str {
    match kind {
        LookaheadKind::Iw => "iw",
        LookaheadKind::RolloutIw => "rollout-iw",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Solve(a) => solve(a),
        Cmd::Control(a) => control(a),
        Cmd::Bench(a) => bench(a),
        Cmd::Width(a) => width(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Fail::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Fail::Run(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
