//! Program repair by iterated local search over literal edits, plus the two
//! baselines that ignore program structure: straight-line lowering and
//! gradient descent on object centers.

mod flat;
mod gd;

pub use flat::lower_to_flat;
pub use gd::{fd_gradient, gradient_descent_repair, CenterObjective, GdConfig, GdTrace};

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::interp::{bind_template, execute_bound, Bindings, ExecError, Layout, SceneTemplate};
use crate::lang::{apply_edit, edit_sites, Literal, NodePath, Program, SiteKind};
use crate::loss::{loss_value, total_loss, LossReport};
use crate::par::{self, Schedule};
use crate::geometry::Facing;
use crate::transport::ot_distance;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub seed: u64,
    pub samples_per_constant: usize,
    pub directions_per_site: usize,
    pub improvement_threshold: f64,
    pub max_iterations: usize,
    /// Scale of additive candidates for constants that are exactly zero.
    /// Zero disables the fallback, leaving zero constants fixed.
    pub zero_step: f64,
    pub schedule: Schedule,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            seed: 0,
            samples_per_constant: 10,
            directions_per_site: 4,
            improvement_threshold: 1e-3,
            max_iterations: 200,
            zero_step: 0.1,
            schedule: Schedule::default(),
        }
    }
}

impl SearchConfig {
    pub fn with_seed(seed: u64) -> Self {
        SearchConfig {
            seed,
            ..SearchConfig::default()
        }
    }

    fn validate(&self) -> Result<(), RepairError> {
        if self.samples_per_constant == 0 {
            return Err(RepairError::InvalidConfig("samples_per_constant must be at least 1"));
        }
        if self.directions_per_site != 4 {
            return Err(RepairError::InvalidConfig("directions_per_site must be 4"));
        }
        if !(self.improvement_threshold > 0.0) {
            return Err(RepairError::InvalidConfig("improvement_threshold must be positive"));
        }
        if !(self.zero_step >= 0.0 && self.zero_step.is_finite()) {
            return Err(RepairError::InvalidConfig("zero_step must be finite and non-negative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RepairError {
    #[error("seed program does not execute: {0}")]
    InvalidSeedProgram(#[from] ExecError),
    #[error("invalid search configuration: {0}")]
    InvalidConfig(&'static str),
}

/// One elementary edit: replace the literal at `path`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edit {
    pub path: NodePath,
    pub before: Literal,
    pub after: Literal,
}

/// Candidate edits for one search iteration.
///
/// Constant sites get `samples_per_constant` draws of `c * s * 4^y` with
/// `s` in {-1, 1} and `y` uniform on [-1, 1]. Direction sites get every
/// cardinal. Candidates are ordered by site, then by sample.
pub fn sample_neighborhood(p: &Program, rng: &mut ChaCha8Rng, cfg: &SearchConfig) -> Vec<Edit> {
    let mut edits = Vec::new();
    for site in edit_sites(p) {
        match (site.kind, site.value) {
            (SiteKind::Constant, Literal::Number(c)) => {
                for _ in 0..cfg.samples_per_constant {
                    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                    let y: f64 = rng.gen_range(-1.0..=1.0);
                    let factor = sign * 4f64.powf(y);
                    let after = if c == 0.0 {
                        factor * cfg.zero_step
                    } else {
                        c * factor
                    };
                    edits.push(Edit {
                        path: site.path.clone(),
                        before: site.value,
                        after: Literal::Number(after),
                    });
                }
            }
            (_, before) => {
                for d in Facing::ALL {
                    edits.push(Edit {
                        path: site.path.clone(),
                        before,
                        after: Literal::Direction(d),
                    });
                }
            }
        }
    }
    edits
}

/// Search state shared by every candidate evaluation.
struct Objective<'a> {
    bindings: &'a Bindings,
    reference: &'a Layout,
}

impl Objective<'_> {
    fn f(&self, layout: &Layout) -> f64 {
        let drift = ot_distance(layout, self.reference).expect("layouts share one template");
        loss_value(layout) + drift
    }

    fn eval(&self, p: &Program) -> Option<(Layout, f64)> {
        let layout = execute_bound(p, self.bindings).ok()?;
        let f = self.f(&layout);
        f.is_finite().then_some((layout, f))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Iteration {
    /// Best candidate of the iteration, absent when every candidate failed.
    pub edit: Option<Edit>,
    /// Objective value of that candidate.
    pub candidate_f: Option<f64>,
    /// Objective of the incumbent after the iteration.
    pub f: f64,
    pub candidates: usize,
    pub accepted: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchTrace {
    pub iterations: Vec<Iteration>,
    pub accepted_edit_count: usize,
    pub initial_report: LossReport,
    pub final_report: LossReport,
    pub initial_f: f64,
    pub final_f: f64,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SearchTrace {
    /// Mean neighborhood size across iterations.
    pub fn mean_candidates(&self) -> f64 {
        if self.iterations.is_empty() {
            return 0.0;
        }
        let total: usize = self.iterations.iter().map(|i| i.candidates).sum();
        total as f64 / self.iterations.len() as f64
    }

    pub fn candidates_evaluated(&self) -> usize {
        self.iterations.iter().map(|i| i.candidates).sum()
    }
}

/// Greedy best-improvement search from `p0`.
///
/// Each iteration samples a fresh neighborhood of the incumbent, evaluates
/// `loss(L) + ot(L, L0)` for every candidate that executes, and moves to
/// the best one if it improves the incumbent by more than the threshold.
pub fn local_search(
    p0: &Program,
    t: &SceneTemplate,
    cfg: &SearchConfig,
) -> Result<(Program, SearchTrace), RepairError> {
    cfg.validate()?;
    let start = Instant::now();
    let bindings = bind_template(t).map_err(ExecError::from)?;
    let mut reference = execute_bound(p0, &bindings).map_err(ExecError::from)?;
    reference.name = t.name.clone();
    let objective = Objective {
        bindings: &bindings,
        reference: &reference,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut current = p0.clone();
    let mut current_layout = reference.clone();
    let mut current_f = objective.f(&reference);
    let initial_f = current_f;
    let mut iterations = Vec::new();
    let mut accepted_edit_count = 0;

    for _ in 0..cfg.max_iterations {
        let edits = sample_neighborhood(&current, &mut rng, cfg);
        let results = par::map(cfg.schedule, &edits, |e| {
            let candidate = apply_edit(&current, &e.path, e.after).ok()?;
            objective.eval(&candidate).map(|(_, f)| f)
        });
        let best = results
            .iter()
            .enumerate()
            .filter_map(|(i, f)| f.map(|f| (i, f)))
            .fold(None::<(usize, f64)>, |best, (i, f)| match best {
                Some((_, bf)) if bf <= f => best,
                _ => Some((i, f)),
            });
        let accepted = matches!(best, Some((_, f)) if f < current_f - cfg.improvement_threshold);
        if accepted {
            let (i, f) = best.unwrap();
            current = apply_edit(&current, &edits[i].path, edits[i].after)
                .expect("candidate applied during evaluation");
            current_layout = execute_bound(&current, &bindings).expect("candidate executed");
            current_f = f;
            accepted_edit_count += 1;
        }
        iterations.push(Iteration {
            edit: best.map(|(i, _)| edits[i].clone()),
            candidate_f: best.map(|(_, f)| f),
            f: current_f,
            candidates: edits.len(),
            accepted,
        });
        if !accepted {
            break;
        }
    }
    current_layout.name = t.name.clone();
    let trace = SearchTrace {
        iterations,
        accepted_edit_count,
        initial_report: total_loss(&reference),
        final_report: total_loss(&current_layout),
        initial_f,
        final_f: current_f,
        wall_time: start.elapsed(),
    };
    Ok((current, trace))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    None,
    Gd,
    Flat,
    Psdl,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [Strategy::None, Strategy::Gd, Strategy::Flat, Strategy::Psdl];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::None => "none",
            Strategy::Gd => "gd",
            Strategy::Flat => "flat",
            Strategy::Psdl => "psdl",
        }
    }

    pub fn from_name(s: &str) -> Option<Strategy> {
        Strategy::ALL.into_iter().find(|k| k.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RepairTrace {
    None,
    Search(SearchTrace),
    Gd(GdTrace),
}

#[derive(Clone, Debug)]
pub struct RepairOutcome {
    pub strategy: Strategy,
    /// Repaired program; absent for gradient descent, which edits the layout.
    pub program: Option<Program>,
    pub layout: Layout,
    pub before: LossReport,
    pub after: LossReport,
    pub trace: RepairTrace,
    pub wall_time: Duration,
}

impl RepairOutcome {
    pub fn accepted_edits(&self) -> usize {
        match &self.trace {
            RepairTrace::Search(s) => s.accepted_edit_count,
            RepairTrace::Gd(_) | RepairTrace::None => 0,
        }
    }

    pub fn mean_candidates(&self) -> f64 {
        match &self.trace {
            RepairTrace::Search(s) => s.mean_candidates(),
            RepairTrace::Gd(_) | RepairTrace::None => 0.0,
        }
    }

    pub fn f_before(&self) -> f64 {
        match &self.trace {
            RepairTrace::Search(s) => s.initial_f,
            RepairTrace::Gd(g) => g.initial_f,
            RepairTrace::None => self.before.total,
        }
    }

    pub fn f_after(&self) -> f64 {
        match &self.trace {
            RepairTrace::Search(s) => s.final_f,
            RepairTrace::Gd(g) => g.final_f,
            RepairTrace::None => self.after.total,
        }
    }
}

pub fn repair(
    p0: &Program,
    t: &SceneTemplate,
    strategy: Strategy,
    cfg: &SearchConfig,
) -> Result<RepairOutcome, RepairError> {
    let start = Instant::now();
    let searched = |p: &Program| -> Result<RepairOutcome, RepairError> {
        let (program, trace) = local_search(p, t, cfg)?;
        let layout = crate::interp::execute(&program, t)?;
        Ok(RepairOutcome {
            strategy,
            program: Some(program),
            layout,
            before: trace.initial_report.clone(),
            after: trace.final_report.clone(),
            trace: RepairTrace::Search(trace),
            wall_time: Duration::ZERO,
        })
    };
    let mut outcome = match strategy {
        Strategy::None => {
            let layout = crate::interp::execute(p0, t)?;
            let report = total_loss(&layout);
            return Ok(RepairOutcome {
                strategy,
                program: Some(p0.clone()),
                layout,
                before: report.clone(),
                after: report,
                trace: RepairTrace::None,
                wall_time: Duration::ZERO,
            });
        }
        Strategy::Psdl => searched(p0)?,
        Strategy::Flat => searched(&lower_to_flat(p0, t)?)?,
        Strategy::Gd => {
            let (layout, trace) = gradient_descent_repair(p0, t, &GdConfig::default())?;
            RepairOutcome {
                strategy,
                program: None,
                before: trace.initial_report.clone(),
                after: total_loss(&layout),
                layout,
                trace: RepairTrace::Gd(trace),
                wall_time: Duration::ZERO,
            }
        }
    };
    outcome.wall_time = start.elapsed();
    Ok(outcome)
}

#[cfg(test)]
mod tests;
