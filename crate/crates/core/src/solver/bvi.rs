//! Bounded value iteration for total reward on constant-support models.

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::model::{check_constant_support, BoundsPair, Objective, Rmdp, TrSemantics};
use crate::transform::{self, CollapseMap};

use super::init::{init_with, Certifier};
use super::sweep::{Sweeper, Update};
use super::{policy, stop_gap, Algorithm, Recorder, SolveReport};

/// Result of iterating both bounds on one model.
pub(crate) struct BoundedRun {
    pub iterations: u64,
    pub converged: bool,
}

/// Alternates lower and upper sweeps until the gap is at most `eps`.
///
/// `observe` is called with the bounds before the first and after every sweep.
pub(crate) fn iterate_bounds(
    sweeper: &Sweeper<'_>,
    lower: &mut [f64],
    upper: &mut [f64],
    eps: f64,
    cfg: &SolverConfig,
    mut observe: impl FnMut(u64, &[f64], &[f64]),
) -> Result<BoundedRun> {
    let mut certifier = Certifier::new();
    let mut iteration = 0;
    observe(0, lower, upper);
    loop {
        if stop_gap(lower, upper, cfg) <= eps {
            return Ok(BoundedRun {
                iterations: iteration,
                converged: true,
            });
        }
        if iteration >= cfg.max_iterations {
            return Ok(BoundedRun {
                iterations: iteration,
                converged: false,
            });
        }
        let low = sweeper.sweep(lower, Update::Lower)?;
        sweeper.sweep(upper, Update::Upper)?;
        iteration += 1;
        if cfg.certify_upper {
            certifier.maybe_certify(sweeper, iteration, low.max_change, lower, upper, eps)?;
        }
        observe(iteration, lower, upper);
    }
}

/// Collapses zero-reward MECs, initializes, and runs bounded value iteration.
///
/// Bounds are sound at every iteration (`L <= V <= U`) and the run stops once
/// `max_s U(s) - L(s) <= eps`.
pub fn solve_bvi_tr(
    model: &Rmdp,
    objective: &Objective,
    eps: f64,
    cfg: &SolverConfig,
) -> Result<SolveReport> {
    if !objective.is_total_reward() {
        return Err(Error::UnsupportedObjective(
            "bounded value iteration needs total reward".into(),
        ));
    }
    if !check_constant_support(model).all {
        return Err(Error::NotConstantSupport);
    }
    let n = model.num_states();
    let infinite = crate::graph::infinite_value_states(model, objective, cfg)?;
    let targets = objective.target_mask(n);
    let excluded: Vec<bool> = (0..n).map(|s| infinite[s] || targets[s]).collect();
    let (collapsed, map) = transform::collapse_unchecked(model, &excluded);
    let m = collapsed.num_states();

    // Excluded states are never merged, so their flags carry over directly.
    let mut c_infinite = vec![false; m];
    let mut c_targets = vec![false; m];
    for s in 0..n {
        c_infinite[map.new_of_old[s]] |= infinite[s];
        c_targets[map.new_of_old[s]] |= targets[s];
    }
    let sink_value_infinite = objective.effective_semantics() == TrSemantics::Infinite;
    if sink_value_infinite {
        c_infinite[map.sink] = true;
    } else {
        c_targets[map.sink] = true;
    }
    let init = init_with(&collapsed, &c_targets, &c_infinite, cfg)?;
    let frozen: Vec<bool> = (0..m).map(|s| c_infinite[s] || c_targets[s]).collect();
    let sweeper = Sweeper::new(&collapsed, objective.direction, 1.0, frozen, cfg);
    let mut lower = init.bounds.lower.clone();
    let mut upper = init.bounds.upper.clone();
    let mut recorder = Recorder::new(cfg);
    let run = iterate_bounds(&sweeper, &mut lower, &mut upper, eps, cfg, |i, l, u| {
        if recorder.active() {
            recorder.record(i, map.pull_back(l), map.pull_back(u));
        }
    })?;
    let mut report = SolveReport::new(
        pull_back(&map, &lower, &upper, run.iterations),
        Algorithm::Bvi,
    );
    report.iterations = run.iterations;
    report.converged = run.converged;
    report.diagnostics = init.diagnostics;
    if !run.converged {
        report.diagnostics.push(format!(
            "iteration limit reached after {} sweeps; bounds are sound",
            run.iterations
        ));
    }
    recorder.finish(&mut report);
    if run.converged {
        report.policies = Some(policy::extract_policies(model, objective, &report, cfg)?);
    }
    Ok(report)
}

fn pull_back(map: &CollapseMap, lower: &[f64], upper: &[f64], iteration: u64) -> BoundsPair {
    let mut b = BoundsPair::new(map.pull_back(lower), map.pull_back(upper));
    b.iteration = iteration;
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ActionRecord, Direction, UncertaintySet};

    fn zero_cycle() -> Rmdp {
        let mut m = Rmdp::new(vec!["p".into(), "q".into(), "s".into()], 0);
        m.add_action(0, ActionRecord::singleton("stay", 0.0, vec![1], vec![1.0]));
        m.add_action(1, ActionRecord::singleton("stay", 0.0, vec![0], vec![1.0]));
        m.add_action(1, ActionRecord::singleton("exit", 1.0, vec![2], vec![1.0]));
        m.add_action(2, ActionRecord::singleton("stay", 0.0, vec![2], vec![1.0]));
        m
    }

    #[test]
    fn zero_cycle_converges_exactly() {
        let r = solve_bvi_tr(
            &zero_cycle(),
            &Objective::total_reward(Direction::Max),
            1e-6,
            &SolverConfig::default(),
        )
        .unwrap();
        assert!(r.converged);
        assert_eq!(r.bounds.lower, vec![1.0, 1.0, 0.0]);
        assert_eq!(r.bounds.upper, vec![1.0, 1.0, 0.0]);
        assert!(r.iterations <= 3);
        let pol = r.policies.unwrap();
        assert_eq!(pol.agent[1], 1);
    }

    #[test]
    fn unreachable_target_is_infinite() {
        let mut m = Rmdp::with_states(3);
        m.add_action(0, ActionRecord::singleton("a", 1.0, vec![1], vec![1.0]));
        m.add_action(1, ActionRecord::singleton("a", 1.0, vec![0], vec![1.0]));
        m.add_action(2, ActionRecord::singleton("a", 0.0, vec![2], vec![1.0]));
        let obj = Objective::reach_total_reward(Direction::Min, vec![2]);
        let r = solve_bvi_tr(&m, &obj, 1e-6, &SolverConfig::default()).unwrap();
        assert!(r.converged);
        assert_eq!(r.bounds.lower[0], f64::INFINITY);
        assert_eq!(r.bounds.upper[1], f64::INFINITY);
        assert_eq!(r.bounds.upper[2], 0.0);
    }

    #[test]
    fn interval_loop_converges_with_certified_upper() {
        // stay w.p. in [0.8, 0.95] with reward 1, else done: max V = 1 / 0.05 = 20
        let mut m = Rmdp::with_states(2);
        m.add_action(
            0,
            ActionRecord::new(
                "a",
                1.0,
                vec![0, 1],
                UncertaintySet::PolytopeH {
                    a: vec![vec![1.0, 0.0], vec![-1.0, 0.0]],
                    b: vec![-0.95, 0.8],
                },
            ),
        );
        m.add_action(1, ActionRecord::singleton("a", 0.0, vec![1], vec![1.0]));
        let cfg = SolverConfig::default();
        let r = solve_bvi_tr(&m, &Objective::total_reward(Direction::Min), 1e-6, &cfg).unwrap();
        assert!(r.converged);
        assert!((r.bounds.lower[0] - 20.0).abs() < 1e-4, "{:?}", r.bounds);
        assert!(r.bounds.lower[0] <= 20.0 + 1e-9 && r.bounds.upper[0] >= 20.0 - 1e-9);
        let r = solve_bvi_tr(&m, &Objective::total_reward(Direction::Max), 1e-6, &cfg).unwrap();
        // environment minimizes: stays w.p. 0.8 -> 5
        assert!((r.bounds.lower[0] - 5.0).abs() < 1e-5);
    }
}
