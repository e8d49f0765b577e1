//! Corpus × seed × strategy benchmark grid.

use std::fmt::Write;

use anyhow::{Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use psdl::interp::execute;
use psdl::par::{self, Schedule};
use psdl::repair::{repair, SearchConfig, Strategy};

use crate::corpus::Scene;
use crate::inject::inject_errors;

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub strategies: Vec<Strategy>,
    pub seeds: Vec<u64>,
    /// Corruptions injected per scene and seed.
    pub injected: usize,
    pub schedule: Schedule,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub scene: String,
    pub seed: u64,
    pub strategy: Strategy,
    pub errors_before: usize,
    pub errors_after: usize,
    pub f_before: f64,
    pub f_after: f64,
    pub accepted_edits: usize,
    pub candidates_per_iteration: f64,
    pub candidates_evaluated: usize,
    pub wall_time_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Aggregate {
    pub strategy: Strategy,
    pub runs: usize,
    pub mean_errors_before: f64,
    pub mean_errors_after: f64,
    pub mean_accepted_edits: f64,
    pub mean_candidates_per_iteration: f64,
    pub mean_wall_time_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub aggregates: Vec<Aggregate>,
}

/// Seed for the corruption of one scene, independent of corpus order.
pub fn scene_seed(scene: &str, seed: u64) -> u64 {
    // FNV-1a over the scene name, mixed with the run seed.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in scene.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h ^ seed.wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// The corrupted program a bench run starts from.
pub fn corrupt(scene: &Scene, seed: u64, injected: usize) -> Result<psdl::lang::Program> {
    let mut rng = ChaCha8Rng::seed_from_u64(scene_seed(&scene.name, seed));
    let (p, _) = inject_errors(&scene.program, &mut rng, injected)
        .with_context(|| format!("corrupting {}", scene.name))?;
    Ok(p)
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

pub fn aggregate(rows: &[BenchRow], strategies: &[Strategy]) -> Vec<Aggregate> {
    strategies
        .iter()
        .map(|&strategy| {
            let mine: Vec<&BenchRow> = rows.iter().filter(|r| r.strategy == strategy).collect();
            Aggregate {
                strategy,
                runs: mine.len(),
                mean_errors_before: mean(mine.iter().map(|r| r.errors_before as f64)),
                mean_errors_after: mean(mine.iter().map(|r| r.errors_after as f64)),
                mean_accepted_edits: mean(mine.iter().map(|r| r.accepted_edits as f64)),
                mean_candidates_per_iteration: mean(
                    mine.iter().map(|r| r.candidates_per_iteration),
                ),
                mean_wall_time_s: mean(mine.iter().map(|r| r.wall_time_s)),
            }
        })
        .collect()
}

/// Runs every (scene, seed, strategy) cell; scenes run in parallel under
/// `Schedule::Parallel`, each search itself sequentially.
pub fn run_bench(scenes: &[Scene], cfg: &BenchConfig) -> Result<BenchReport> {
    let mut jobs = Vec::new();
    for scene in scenes {
        for &seed in &cfg.seeds {
            for &strategy in &cfg.strategies {
                jobs.push((scene, seed, strategy));
            }
        }
    }
    let search = |seed| SearchConfig {
        schedule: Schedule::Sequential,
        ..SearchConfig::with_seed(seed)
    };
    let results = par::map(cfg.schedule, &jobs, |&(scene, seed, strategy)| -> Result<BenchRow> {
        let program = corrupt(scene, seed, cfg.injected)?;
        execute(&program, &scene.template)
            .with_context(|| format!("corrupted {} no longer executes", scene.name))?;
        let out = repair(&program, &scene.template, strategy, &search(seed))
            .with_context(|| format!("repairing {}", scene.name))?;
        let candidates_evaluated = match &out.trace {
            psdl::repair::RepairTrace::Search(s) => s.candidates_evaluated(),
            _ => 0,
        };
        Ok(BenchRow {
            scene: scene.name.clone(),
            seed,
            strategy,
            errors_before: out.before.error_count,
            errors_after: out.after.error_count,
            f_before: out.f_before(),
            f_after: out.f_after(),
            accepted_edits: out.accepted_edits(),
            candidates_per_iteration: out.mean_candidates(),
            candidates_evaluated,
            wall_time_s: out.wall_time.as_secs_f64(),
        })
    });
    let rows = results.into_iter().collect::<Result<Vec<_>>>()?;
    let aggregates = aggregate(&rows, &cfg.strategies);
    Ok(BenchReport { rows, aggregates })
}

impl BenchReport {
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<14} {:>4} {:<5} {:>6} {:>6} {:>10} {:>10} {:>6} {:>9} {:>9}",
            "scene", "seed", "strat", "err0", "err1", "f0", "f1", "edits", "cand/it", "time_s"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<14} {:>4} {:<5} {:>6} {:>6} {:>10.4} {:>10.4} {:>6} {:>9.1} {:>9.3}",
                r.scene,
                r.seed,
                r.strategy.name(),
                r.errors_before,
                r.errors_after,
                r.f_before,
                r.f_after,
                r.accepted_edits,
                r.candidates_per_iteration,
                r.wall_time_s
            );
        }
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "{:<5} {:>5} {:>9} {:>9} {:>9} {:>9} {:>9}",
            "strat", "runs", "err0", "err1", "edits", "cand/it", "time_s"
        );
        for a in &self.aggregates {
            let _ = writeln!(
                out,
                "{:<5} {:>5} {:>9.2} {:>9.2} {:>9.2} {:>9.1} {:>9.3}",
                a.strategy.name(),
                a.runs,
                a.mean_errors_before,
                a.mean_errors_after,
                a.mean_accepted_edits,
                a.mean_candidates_per_iteration,
                a.mean_wall_time_s
            );
        }
        out
    }
}
