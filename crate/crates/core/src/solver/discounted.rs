//! Discounted reward: a contraction, so no end-component treatment is needed.

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::model::{BoundsPair, Direction, Objective, Rmdp};

use super::sweep::{Sweeper, Update};
use super::{policy, stop_gap, Algorithm, Recorder, SolveReport};

/// Iterates `L` from 0 and `U` from `r_max / (1 - gamma)`.
///
/// After `i` sweeps the gap is at most `gamma^i r_max / (1 - gamma)`; the run
/// stops once the observed gap or that a-priori bound is at most `eps`.
pub fn solve_discounted(
    model: &Rmdp,
    gamma: f64,
    direction: Direction,
    eps: f64,
    cfg: &SolverConfig,
) -> Result<SolveReport> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::GammaOutOfRange(gamma));
    }
    let n = model.num_states();
    let r_max = model.max_reward();
    let top = r_max / (1.0 - gamma);
    let mut lower = vec![0.0; n];
    let mut upper = vec![top; n];
    let sweeper = Sweeper::new(model, direction, gamma, vec![false; n], cfg);
    let mut recorder = Recorder::new(cfg);
    recorder.record(0, lower.clone(), upper.clone());
    let mut i = 0u64;
    let mut a_priori = top;
    let converged = loop {
        if stop_gap(&lower, &upper, cfg) <= eps || a_priori <= eps {
            break true;
        }
        if i >= cfg.max_iterations {
            break false;
        }
        sweeper.sweep(&mut lower, Update::Lower)?;
        sweeper.sweep(&mut upper, Update::Upper)?;
        // both iterates approach the same fixpoint; rounding may cross them by a few ulps
        for (l, u) in lower.iter().zip(upper.iter_mut()) {
            if *u < *l {
                *u = *l;
            }
        }
        i += 1;
        a_priori *= gamma;
        if recorder.active() {
            recorder.record(i, lower.clone(), upper.clone());
        }
    };
    let mut bounds = BoundsPair::new(lower, upper);
    bounds.iteration = i;
    let mut report = SolveReport::new(bounds, Algorithm::Discounted);
    report.iterations = i;
    report.converged = converged;
    recorder.finish(&mut report);
    if converged {
        let objective = Objective::discounted(direction, gamma);
        report.policies = Some(policy::extract_policies(model, &objective, &report, cfg)?);
    }
    Ok(report)
}
