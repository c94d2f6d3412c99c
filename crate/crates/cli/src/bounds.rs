use std::fs;

use anyhow::{bail, Context, Result};
use dstar_core::analysis::{check_bounds_with_cap, BoundReport};
use dstar_core::engine::{run_query, Verdict};

use crate::args::{Engine, RunConfig};

pub fn run(cfg: &RunConfig) -> Result<bool> {
    if cfg.engine != Engine::Dstar {
        bail!("bounds needs the deterministic dstar engine");
    }
    let (g, q) = cfg.load()?;
    let params = cfg.params();
    let (verdict, trace) = run_query(&g, &q, &params)?;
    if let Verdict::Independent { .. } = verdict {
        println!("NOT APPLICABLE (independent)");
        return Ok(true);
    }
    let report = check_bounds_with_cap(&g, &q, &trace, &params, cfg.module_cap)?;
    print_table(&report);
    let json = serde_json::to_string_pretty(&report)?;
    match &cfg.check_bounds {
        Some(path) => fs::write(path, json).with_context(|| format!("writing {}", path.display()))?,
        None => println!("{json}"),
    }
    Ok(report.all_satisfied())
}

fn print_table(r: &BoundReport) {
    let mark = |ok: bool| if ok { "ok" } else { "VIOLATED" };
    println!("measured clash time   {:>10.4}", r.measured_clash_time);
    println!("path bound            {:>10.4}  {}", r.path_bound, mark(r.path_bound_satisfied));
    println!("module bound          {:>10.4}  {}", r.module_bound, mark(r.module_bound_satisfied));
    println!("module <= path        {:>10}  {}", "", mark(r.module_le_path));
    println!("minimal module edges  {:>10}", r.minimal_module_edges);
}
