use std::fs;

use anyhow::{Context, Result};
use dstar_core::analysis::{account_messages, check_bounds_with_cap};
use dstar_core::engine::{run_query, run_query_concurrent, trace_to_dot, ExecutionTrace, Verdict};
use dstar_core::oracles::{d_separated_moral, d_separated_reach};
use dstar_core::{AnalysisError, DSepQuery, Dag};

use crate::args::{Engine, Expect, RunConfig};

pub fn run(cfg: &RunConfig) -> Result<bool> {
    cfg.require_engine_trace()?;
    let (g, q) = cfg.load()?;
    let dependent = match cfg.engine {
        Engine::Dstar | Engine::DstarConcurrent => {
            let params = cfg.params();
            let (verdict, trace) = if cfg.engine == Engine::Dstar {
                run_query(&g, &q, &params)?
            } else {
                run_query_concurrent(&g, &q, &params)?
            };
            report_run(&g, &q, &verdict, &trace);
            write_artifacts(cfg, &g, &q, &trace)?;
            verdict.is_dependent()
        }
        Engine::OracleReach => {
            let r = d_separated_reach(&g, &q);
            println!("{}", verdict_word(!r.separated));
            if let Some(path) = r.witness_path {
                let names: Vec<&str> = path.iter().map(|&v| g.name(v)).collect();
                println!("witness: {}", names.join(" "));
            }
            !r.separated
        }
        Engine::OracleMoral => {
            let r = d_separated_moral(&g, &q);
            println!("{}", verdict_word(!r.separated));
            !r.separated
        }
    };
    Ok(match cfg.expect {
        Some(Expect::Dep) => dependent,
        Some(Expect::Indep) => !dependent,
        None => true,
    })
}

pub fn verdict_word(dependent: bool) -> &'static str {
    if dependent {
        "DEPENDENT"
    } else {
        "INDEPENDENT"
    }
}

fn report_run(g: &Dag, q: &DSepQuery, verdict: &Verdict, trace: &ExecutionTrace) {
    println!("{}", verdict_word(verdict.is_dependent()));
    match *verdict {
        Verdict::Dependent { node, time } => println!("clash at {} (t = {time})", g.name(node)),
        Verdict::Independent { equilibrium_time, quiescence_time } => {
            println!("equilibrium t = {equilibrium_time}, quiescence t = {quiescence_time}")
        }
    }
    let acc = account_messages(trace, g, q);
    println!(
        "messages: {} ({} bits), max per channel {}, control {}",
        acc.total_messages, acc.total_bits, acc.max_per_channel, trace.control_messages
    );
}

fn write_artifacts(cfg: &RunConfig, g: &Dag, q: &DSepQuery, trace: &ExecutionTrace) -> Result<()> {
    if let Some(path) = &cfg.trace {
        fs::write(path, trace.to_json()).with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(dir) = &cfg.snapshots {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for (i, dot) in trace_to_dot(g, q, trace).iter().enumerate() {
            let path = dir.join(format!("snapshot_{i:04}.dot"));
            fs::write(&path, dot).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    if let Some(path) = &cfg.check_bounds {
        let json = match check_bounds_with_cap(g, q, trace, &cfg.params(), cfg.module_cap) {
            Ok(report) => serde_json::to_string_pretty(&report)?,
            Err(AnalysisError::IndependentTrace) => serde_json::to_string_pretty(
                &serde_json::json!({ "status": "NOT APPLICABLE (independent)" }),
            )?,
            Err(e) => return Err(e.into()),
        };
        fs::write(path, json).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}
