//! Bounded value iteration without the constant-support assumption.
//!
//! Instead of collapsing end components up front, each iteration guesses the
//! environment's strategy from the current bounds, finds the zero-reward end
//! components it induces, and deflates (or inflates) their bounds to the best
//! value obtainable by leaving them.

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::graph;
use crate::model::{BoundsPair, Direction, Objective, Rmdp};
use crate::uncertainty::{self, OptDirection};

use super::init::{init_with, Certifier};
use super::sweep::{Sweeper, Update};
use super::{deflate_supports, policy, stop_gap, Algorithm, Recorder, SolveReport};

/// Environment witness for every pair at `x`.
fn witnesses(
    model: &Rmdp,
    x: &[f64],
    env: OptDirection,
    cfg: &SolverConfig,
) -> Result<Vec<Vec<Vec<f64>>>> {
    model
        .actions
        .iter()
        .map(|acts| {
            acts.iter()
                .map(|act| {
                    let vals: Vec<f64> = act.support.iter().map(|&t| x[t]).collect();
                    Ok(uncertainty::optimize(&act.uncertainty, &vals, env, cfg)?.witness)
                })
                .collect()
        })
        .collect()
}

/// One deflation (max) or inflation (min) pass; returns whether any bound moved.
fn deflate_step(
    sweeper: &Sweeper<'_>,
    lower: &mut [f64],
    upper: &mut [f64],
    cfg: &SolverConfig,
) -> Result<bool> {
    let model = sweeper.model;
    let (guide, env): (&[f64], OptDirection) = match sweeper.agent {
        Direction::Max => (lower, OptDirection::Min),
        Direction::Min => (upper, OptDirection::Max),
    };
    let tau = witnesses(model, guide, env, cfg)?;
    let candidates = graph::sec_candidates(model, &tau, &sweeper.frozen, cfg)?;
    let mut moved = false;
    for c in candidates {
        let mut best: Option<f64> = None;
        for (i, &s) in c.states.iter().enumerate() {
            for a in 0..model.actions[s].len() {
                if c.actions[i].contains(&a) {
                    continue;
                }
                let v = match sweeper.agent {
                    Direction::Max => sweeper.q_value(s, a, upper)?,
                    Direction::Min => sweeper.q_value(s, a, lower)?,
                };
                if best.map_or(true, |b| sweeper.agent.better(v, b)) {
                    best = Some(v);
                }
            }
        }
        match sweeper.agent {
            Direction::Max => {
                let bound = best.unwrap_or(0.0);
                for &s in &c.states {
                    if bound < upper[s] {
                        upper[s] = bound.max(lower[s]);
                        moved = true;
                    }
                }
            }
            Direction::Min => {
                let bound = best.unwrap_or(f64::INFINITY);
                for &s in &c.states {
                    if bound > lower[s] {
                        lower[s] = bound.min(upper[s]);
                        moved = true;
                    }
                }
            }
        }
    }
    Ok(moved)
}

/// Bounded value iteration with deflation for polytopic models.
///
/// Supports maximal total reward with cumulative semantics and minimal total
/// reward (or SSP) where missing the targets costs `+inf`.
pub fn solve_bvi_deflate(
    model: &Rmdp,
    objective: &Objective,
    eps: f64,
    cfg: &SolverConfig,
) -> Result<SolveReport> {
    if !deflate_supports(objective) {
        return Err(Error::UnsupportedObjective(
            "deflation handles max total reward (cumulative) and min total reward with targets"
                .into(),
        ));
    }
    if !model.is_polytopic() {
        return Err(Error::NotPolytopic);
    }
    let n = model.num_states();
    let infinite = graph::infinite_value_states(model, objective, cfg)?;
    let targets = objective.target_mask(n);
    let init = init_with(model, &targets, &infinite, cfg)?;
    let frozen: Vec<bool> = (0..n).map(|s| infinite[s] || targets[s]).collect();
    let sweeper = Sweeper::new(model, objective.direction, 1.0, frozen, cfg);
    let mut lower = init.bounds.lower.clone();
    let mut upper = init.bounds.upper.clone();
    let mut recorder = Recorder::new(cfg);
    let mut certifier = Certifier::new();
    recorder.record(0, lower.clone(), upper.clone());
    let mut iteration = 0u64;
    let converged = loop {
        if stop_gap(&lower, &upper, cfg) <= eps {
            break true;
        }
        if iteration >= cfg.max_iterations {
            break false;
        }
        let low = sweeper.sweep(&mut lower, Update::Lower)?;
        sweeper.sweep(&mut upper, Update::Upper)?;
        deflate_step(&sweeper, &mut lower, &mut upper, cfg)?;
        iteration += 1;
        if cfg.certify_upper {
            certifier.maybe_certify(
                &sweeper,
                iteration,
                low.max_change,
                &lower,
                &mut upper,
                eps,
            )?;
        }
        if recorder.active() {
            recorder.record(iteration, lower.clone(), upper.clone());
        }
    };
    let mut bounds = BoundsPair::new(lower, upper);
    bounds.iteration = iteration;
    let mut report = SolveReport::new(bounds, Algorithm::Deflate);
    report.iterations = iteration;
    report.converged = converged;
    report.diagnostics = init.diagnostics;
    recorder.finish(&mut report);
    if converged {
        report.policies = Some(policy::extract_policies(model, objective, &report, cfg)?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ActionRecord, UncertaintySet};

    fn polytope_trap(alpha: f64, beta: f64) -> Rmdp {
        let mut m = Rmdp::new(vec!["p".into(), "q".into(), "sink".into()], 0);
        let stay = UncertaintySet::PolytopeV {
            vertices: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        };
        m.add_action(0, ActionRecord::new("stay", 0.0, vec![0, 1], stay.clone()));
        m.add_action(
            0,
            ActionRecord::singleton("exit", alpha, vec![2], vec![1.0]),
        );
        m.add_action(1, ActionRecord::new("stay", 0.0, vec![0, 1], stay));
        m.add_action(1, ActionRecord::singleton("exit", beta, vec![2], vec![1.0]));
        m.add_action(2, ActionRecord::singleton("loop", 0.0, vec![2], vec![1.0]));
        m
    }

    #[test]
    fn polytope_trap_values() {
        let cfg = SolverConfig {
            certify_upper: false,
            ..SolverConfig::default()
        };
        let r = solve_bvi_deflate(
            &polytope_trap(1.0, 2.0),
            &Objective::total_reward(Direction::Max),
            1e-6,
            &cfg,
        )
        .unwrap();
        assert!(r.converged);
        assert!((r.bounds.lower[0] - 1.0).abs() <= 1e-6 && (r.bounds.upper[0] - 1.0).abs() <= 1e-6);
        assert!((r.bounds.lower[1] - 2.0).abs() <= 1e-6 && (r.bounds.upper[1] - 2.0).abs() <= 1e-6);
    }

    #[test]
    fn unsupported_objectives() {
        let m = polytope_trap(1.0, 2.0);
        let cfg = SolverConfig::default();
        assert!(matches!(
            solve_bvi_deflate(&m, &Objective::total_reward(Direction::Min), 1e-6, &cfg),
            Err(Error::UnsupportedObjective(_))
        ));
        let mut l2 = m.clone();
        l2.actions[0][0].uncertainty =
            UncertaintySet::ball(crate::model::Norm::L2, vec![0.5, 0.5], 0.1);
        assert_eq!(
            solve_bvi_deflate(&l2, &Objective::total_reward(Direction::Max), 1e-6, &cfg)
                .unwrap_err(),
            Error::NotPolytopic
        );
    }
}
