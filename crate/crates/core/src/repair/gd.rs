//! Gradient-descent baseline over the 3n object center coordinates.
//! Facings stay as the seed program set them.

use serde::{Deserialize, Serialize};

use super::RepairError;
use crate::interp::{execute, ExecError, Layout, SceneTemplate};
use crate::lang::Program;
use crate::loss::{loss_value, total_loss, LossReport};
use crate::transport::ot_distance;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GdConfig {
    /// Central-difference step (m).
    pub h: f64,
    pub initial_step: f64,
    pub armijo: f64,
    pub gradient_tolerance: f64,
    pub max_iterations: usize,
    pub min_step: f64,
}

impl Default for GdConfig {
    fn default() -> Self {
        GdConfig {
            h: 1e-3,
            initial_step: 0.1,
            armijo: 1e-4,
            gradient_tolerance: 1e-4,
            max_iterations: 500,
            min_step: 1e-9,
        }
    }
}

/// `loss(L(x)) + ot(L(x), L0)` as a function of the flattened centers `x`.
#[derive(Clone, Debug)]
pub struct CenterObjective {
    base: Layout,
    reference: Layout,
}

impl CenterObjective {
    pub fn new(base: Layout, reference: Layout) -> Self {
        CenterObjective { base, reference }
    }

    pub fn dimension(&self) -> usize {
        3 * self.base.objects.len()
    }

    pub fn variables(&self) -> Vec<f64> {
        self.base
            .objects
            .iter()
            .flat_map(|o| [o.center.x, o.center.y, o.center.z])
            .collect()
    }

    pub fn layout_at(&self, x: &[f64]) -> Layout {
        let mut l = self.base.clone();
        for (o, c) in l.objects.iter_mut().zip(x.chunks_exact(3)) {
            o.center.x = c[0];
            o.center.y = c[1];
            o.center.z = c[2];
        }
        l
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let l = self.layout_at(x);
        loss_value(&l) + ot_distance(&l, &self.reference).expect("same template")
    }
}

/// Central finite-difference gradient with step `h`.
pub fn fd_gradient(obj: &CenterObjective, x: &[f64], h: f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|k| {
            probe[k] = x[k] + h;
            let up = obj.value(&probe);
            probe[k] = x[k] - h;
            let down = obj.value(&probe);
            probe[k] = x[k];
            (up - down) / (2.0 * h)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GdStop {
    SmallGradient,
    LineSearchFailed,
    IterationLimit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GdTrace {
    pub iterations: usize,
    pub initial_f: f64,
    pub final_f: f64,
    pub final_gradient_norm: f64,
    pub stop: GdStop,
    pub initial_report: LossReport,
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, g| m.max(g.abs()))
}

/// Minimizes the center objective from the layout of `p0`.
pub fn gradient_descent_repair(
    p0: &Program,
    t: &SceneTemplate,
    cfg: &GdConfig,
) -> Result<(Layout, GdTrace), RepairError> {
    let reference = execute(p0, t).map_err(|e: ExecError| RepairError::InvalidSeedProgram(e))?;
    let obj = CenterObjective::new(reference.clone(), reference.clone());
    let mut x = obj.variables();
    let mut f = obj.value(&x);
    let initial_f = f;
    let mut iterations = 0;
    let mut grad = fd_gradient(&obj, &x, cfg.h);
    let stop = loop {
        if inf_norm(&grad) < cfg.gradient_tolerance {
            break GdStop::SmallGradient;
        }
        if iterations == cfg.max_iterations {
            break GdStop::IterationLimit;
        }
        let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        let mut step = cfg.initial_step;
        let mut next = None;
        while step >= cfg.min_step {
            let trial: Vec<f64> = x.iter().zip(&grad).map(|(xi, g)| xi - step * g / norm).collect();
            let ft = obj.value(&trial);
            if ft <= f - cfg.armijo * step * norm {
                next = Some((trial, ft));
                break;
            }
            step /= 2.0;
        }
        let Some((trial, ft)) = next else {
            break GdStop::LineSearchFailed;
        };
        x = trial;
        f = ft;
        iterations += 1;
        grad = fd_gradient(&obj, &x, cfg.h);
    };
    let layout = obj.layout_at(&x);
    let trace = GdTrace {
        iterations,
        initial_f,
        final_f: f,
        final_gradient_norm: inf_norm(&grad),
        stop,
        initial_report: total_loss(&reference),
    };
    Ok((layout, trace))
}
