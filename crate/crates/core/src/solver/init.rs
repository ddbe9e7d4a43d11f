//! Initial bounds for total reward, and certified upper bounds.

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::graph;
use crate::model::{BoundsPair, Objective, Rmdp};
use crate::uncertainty::{self, Pmin};

use super::sweep::{Sweeper, Update};

/// Initial bounds plus the qualitative information they were built from.
#[derive(Debug, Clone)]
pub struct InitReport {
    pub bounds: BoundsPair,
    pub infinite: Vec<bool>,
    pub targets: Vec<bool>,
    /// Smallest positive transition probability that was used.
    pub p_min: f64,
    pub diagnostics: Vec<String>,
}

/// Smallest positive probability over all sets, or `None` if some set has none.
pub(crate) fn model_pmin(model: &Rmdp, cfg: &SolverConfig) -> Option<f64> {
    let mut m = 1.0f64;
    for act in model.actions.iter().flatten() {
        match uncertainty::min_positive_probability(&act.uncertainty, cfg) {
            Pmin::Known(p) => m = m.min(p),
            Pmin::Unknown => return None,
        }
    }
    Some(m)
}

/// `L = 0`, `U = r_max / p_min^|S|` with `r_max = |S| max r`; targets are 0 and
/// infinite-value states are `+inf` on both sides.
pub fn init_tr(model: &Rmdp, objective: &Objective, cfg: &SolverConfig) -> Result<InitReport> {
    if !objective.is_total_reward() {
        return Err(Error::UnsupportedObjective(
            "initial bounds need a total-reward objective".into(),
        ));
    }
    let infinite = graph::infinite_value_states(model, objective, cfg)?;
    let targets = objective.target_mask(model.num_states());
    init_with(model, &targets, &infinite, cfg)
}

pub(crate) fn init_with(
    model: &Rmdp,
    targets: &[bool],
    infinite: &[bool],
    cfg: &SolverConfig,
) -> Result<InitReport> {
    let n = model.num_states();
    let mut diagnostics = Vec::new();
    let p_min = match model_pmin(model, cfg) {
        Some(p) => p,
        None => {
            let floor = cfg.pmin_floor.ok_or(Error::PminUnknown)?;
            diagnostics.push(format!(
                "minimum transition probability unknown; using floor {floor:e} (upper bound is only sound if no admissible probability is smaller)"
            ));
            floor
        }
    };
    let r_max = n as f64 * model.max_reward();
    let top = if r_max == 0.0 {
        0.0
    } else {
        r_max / p_min.powi(n as i32)
    };
    let mut lower = vec![0.0; n];
    let mut upper = vec![top; n];
    for s in 0..n {
        if infinite[s] {
            lower[s] = f64::INFINITY;
            upper[s] = f64::INFINITY;
        } else if targets[s] {
            upper[s] = 0.0;
        }
    }
    Ok(InitReport {
        bounds: BoundsPair::new(lower, upper),
        infinite: infinite.to_vec(),
        targets: targets.to_vec(),
        p_min,
        diagnostics,
    })
}

/// Schedules and runs attempts to replace the upper bound by a pre-fixpoint.
///
/// Any `U` with `T U <= U` dominates the least fixpoint of `T`, which is the
/// value for total reward. Candidates `L + eta (1 + L)` are refined by upper
/// sweeps until one sweep certifies the pre-fixpoint property.
pub(crate) struct Certifier {
    next_attempt: u64,
    budget: u64,
    pub attempts: u64,
    pub succeeded: bool,
}

impl Certifier {
    pub fn new() -> Self {
        Certifier {
            next_attempt: 1,
            budget: 16,
            attempts: 0,
            succeeded: false,
        }
    }

    /// Attempts certification if due; returns `true` if `upper` was improved.
    pub fn maybe_certify(
        &mut self,
        sweeper: &Sweeper<'_>,
        iteration: u64,
        lower_change: f64,
        lower: &[f64],
        upper: &mut [f64],
        eps: f64,
    ) -> Result<bool> {
        if iteration < self.next_attempt || lower_change > eps {
            return Ok(false);
        }
        self.attempts += 1;
        let cfg = sweeper.config();
        let scale = if cfg.relative_gap {
            1.0
        } else {
            1.0 + lower
                .iter()
                .filter(|v| v.is_finite())
                .fold(0.0f64, |m, &v| m.max(v))
        };
        let eta = 0.5 * eps / scale;
        let mut cand: Vec<f64> = lower
            .iter()
            .zip(upper.iter())
            .enumerate()
            .map(|(s, (&l, &u))| {
                if sweeper.frozen[s] || !l.is_finite() {
                    u
                } else {
                    u.min(l + eta * (1.0 + l.abs()))
                }
            })
            .collect();
        let mut certified = false;
        for _ in 0..self.budget {
            let stats = sweeper.sweep(&mut cand, Update::Upper)?;
            if stats.pre_fixpoint {
                certified = true;
                break;
            }
        }
        self.next_attempt = iteration + self.budget.max(iteration);
        self.budget = (self.budget * 2).min(1 << 16);
        if !certified {
            return Ok(false);
        }
        self.succeeded = true;
        let mut improved = false;
        for s in 0..upper.len() {
            if cand[s] < upper[s] {
                upper[s] = cand[s].max(lower[s]);
                improved = true;
            }
        }
        Ok(improved)
    }
}
