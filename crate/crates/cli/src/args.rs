use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dstar_core::engine::{InitMode, SchedulePolicy, SimulationParams};
use dstar_core::{DSepQuery, Dag};

#[derive(Debug, Parser)]
#[command(name = "dstar", version, about = "Decide d-separation queries by asynchronous color passing")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide one query and optionally export its trace, snapshots and bounds.
    Query(RunConfig),
    /// Compare the engine against both oracles on generated instances.
    Crosscheck(CrosscheckConfig),
    /// Check the measured clash time against the analytic bounds.
    Bounds(RunConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Dstar,
    DstarConcurrent,
    OracleReach,
    OracleMoral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Schedule {
    Random,
    Fifo,
    Adversarial,
}

impl From<Schedule> for SchedulePolicy {
    fn from(s: Schedule) -> Self {
        match s {
            Schedule::Random => SchedulePolicy::RandomDelays,
            Schedule::Fifo => SchedulePolicy::FifoZeroDelay,
            Schedule::Adversarial => SchedulePolicy::AdversarialLatest,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Expect {
    Dep,
    Indep,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    #[arg(long)]
    pub graph: PathBuf,
    /// Comma-separated node list.
    #[arg(long)]
    pub a: String,
    #[arg(long)]
    pub b: String,
    #[arg(long, default_value = "")]
    pub c: String,
    #[arg(long, value_enum, default_value_t = Engine::Dstar)]
    pub engine: Engine,
    #[arg(long, env = "DSTAR_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, value_enum, default_value_t = Schedule::Random)]
    pub schedule: Schedule,
    /// `self` or `central:SOURCE`.
    #[arg(long, default_value = "self", value_parser = parse_init)]
    pub init: InitMode,
    /// Write the trace as JSON.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Write one DOT file per snapshot into this directory.
    #[arg(long)]
    pub snapshots: Option<PathBuf>,
    /// Write the bound report as JSON.
    #[arg(long)]
    pub check_bounds: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub expect: Option<Expect>,
    /// Node cap for refutation-module enumeration.
    #[arg(long, default_value_t = dstar_core::analysis::DEFAULT_MODULE_CAP)]
    pub module_cap: usize,
}

#[derive(Debug, Clone, Args)]
pub struct CrosscheckConfig {
    /// Graph sizes for random trials, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "12")]
    pub sizes: Vec<usize>,
    /// Random trials per size.
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, env = "DSTAR_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Edge probability of the random generator.
    #[arg(long, default_value_t = 0.3)]
    pub p: f64,
    /// Instead of random trials, sweep every labeled DAG up to this size.
    #[arg(long)]
    pub exhaustive: Option<usize>,
}

fn parse_init(s: &str) -> Result<InitMode, String> {
    match s {
        "self" => Ok(InitMode::SelfActivated),
        _ => match s.strip_prefix("central:") {
            Some(src) if !src.is_empty() => Ok(InitMode::Centralized { source: src.to_string() }),
            _ => Err(format!("expected `self` or `central:SOURCE`, got `{s}`")),
        },
    }
}

fn split_list(s: &str) -> Vec<&str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).collect()
}

impl RunConfig {
    pub fn params(&self) -> SimulationParams {
        SimulationParams {
            alpha: self.alpha,
            beta: self.beta,
            seed: self.seed,
            schedule: self.schedule.into(),
            init: self.init.clone(),
        }
    }

    pub fn load(&self) -> Result<(Dag, DSepQuery)> {
        let text = std::fs::read_to_string(&self.graph)
            .with_context(|| format!("reading {}", self.graph.display()))?;
        let g = Dag::parse(&text).with_context(|| format!("parsing {}", self.graph.display()))?;
        let q = DSepQuery::new(&g, &split_list(&self.a), &split_list(&self.b), &split_list(&self.c))?;
        Ok((g, q))
    }

    pub fn require_engine_trace(&self) -> Result<()> {
        let wants_trace = self.trace.is_some() || self.snapshots.is_some() || self.check_bounds.is_some();
        if wants_trace && matches!(self.engine, Engine::OracleReach | Engine::OracleMoral) {
            bail!("--trace, --snapshots and --check-bounds need a dstar engine");
        }
        Ok(())
    }
}
