use anyhow::{bail, Result};
use dstar_core::engine::{run_query, SimulationParams};
use dstar_core::generate::{all_labeled_dags, random_dag, random_query, singleton_queries};
use dstar_core::oracles::{d_separated_moral, d_separated_reach};
use dstar_core::{DSepQuery, Dag};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::CrosscheckConfig;

/// Largest graph size accepted by `--exhaustive`.
const MAX_EXHAUSTIVE: usize = 5;

#[derive(Debug, Default)]
struct Row {
    label: String,
    instances: usize,
    dependent: usize,
    counterexamples: Vec<Counterexample>,
}

impl Row {
    fn merge(&mut self, other: Row) {
        self.instances += other.instances;
        self.dependent += other.dependent;
        self.counterexamples.extend(other.counterexamples);
    }
}

#[derive(Debug, Serialize)]
struct Counterexample {
    graph: String,
    query: String,
    seed: u64,
    dstar_dependent: bool,
    reach_dependent: bool,
    moral_dependent: bool,
}

pub fn run(cfg: &CrosscheckConfig) -> Result<bool> {
    if !(0.0..=1.0).contains(&cfg.p) {
        bail!("--p must lie in [0, 1], got {}", cfg.p);
    }
    let rows = match cfg.exhaustive {
        Some(n) if n > MAX_EXHAUSTIVE => bail!("--exhaustive is limited to {MAX_EXHAUSTIVE} nodes"),
        Some(n) => exhaustive(n, cfg.seed)?,
        None => random(cfg)?,
    };
    println!("{:<14} {:>10} {:>10} {:>14}", "instances", "count", "dependent", "disagreements");
    for r in rows.iter().filter(|r| r.instances > 0) {
        println!("{:<14} {:>10} {:>10} {:>14}", r.label, r.instances, r.dependent, r.counterexamples.len());
    }
    for ce in rows.iter().flat_map(|r| &r.counterexamples) {
        eprintln!("{}", serde_json::to_string(ce)?);
    }
    let bad: usize = rows.iter().map(|r| r.counterexamples.len()).sum();
    println!("{}", if bad == 0 { "all engines agree" } else { "DISAGREEMENT" });
    Ok(bad == 0)
}

fn random(cfg: &CrosscheckConfig) -> Result<Vec<Row>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut rows = Vec::new();
    for &n in &cfg.sizes {
        if n < 2 {
            bail!("graph sizes must be at least 2, got {n}");
        }
        let mut row = Row { label: format!("n={n}"), ..Row::default() };
        for _ in 0..cfg.trials {
            let g = random_dag(n, cfg.p, &mut rng);
            let a_len = rng.gen_range(1..=(n / 4).max(1));
            let b_len = rng.gen_range(1..=(n / 4).max(1));
            let c_len = rng.gen_range(0..=n - a_len - b_len);
            let q = random_query(&g, a_len, b_len, c_len, &mut rng).expect("sizes fit the graph");
            check(&g, &q, rng.gen(), &mut row)?;
        }
        rows.push(row);
    }
    Ok(rows)
}

fn exhaustive(n: usize, seed: u64) -> Result<Vec<Row>> {
    let graphs = all_labeled_dags(n);
    let workers = std::thread::available_parallelism().map_or(1, |w| w.get());
    let chunk = graphs.len().div_ceil(workers).max(1);
    // Chunks are merged in order, so the counterexample list does not depend
    // on thread timing.
    let parts: Vec<Result<Row>> = std::thread::scope(|s| {
        let handles: Vec<_> = graphs
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    let mut row = Row::default();
                    for g in part {
                        for q in singleton_queries(g, n.saturating_sub(2)) {
                            check(g, &q, seed, &mut row)?;
                        }
                    }
                    Ok(row)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut row = Row { label: format!("all n={n}"), ..Row::default() };
    for part in parts {
        row.merge(part?);
    }
    Ok(vec![row])
}

fn check(g: &Dag, q: &DSepQuery, seed: u64, row: &mut Row) -> Result<()> {
    let params = SimulationParams { seed, ..SimulationParams::default() };
    let (verdict, _) = run_query(g, q, &params)?;
    let dstar = verdict.is_dependent();
    let reach = !d_separated_reach(g, q).separated;
    let moral = !d_separated_moral(g, q).separated;
    row.instances += 1;
    row.dependent += usize::from(reach);
    if dstar != reach || reach != moral {
        row.counterexamples.push(Counterexample {
            graph: g.to_text(),
            query: q.describe(g),
            seed,
            dstar_dependent: dstar,
            reach_dependent: reach,
            moral_dependent: moral,
        });
    }
    Ok(())
}
