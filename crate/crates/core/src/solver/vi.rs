//! Best-effort value iteration from below.

use crate::config::{SolverConfig, SweepOrder};
use crate::error::{Error, Result};
use crate::graph;
use crate::model::{BoundsPair, Objective, Payoff, Rmdp};

use super::sweep::{Sweeper, Update};
use super::{Algorithm, Recorder, SolveReport};

/// Iterates the Bellman operator from 0 and stops once the largest change of
/// a sweep drops below `eps_hint`. There is no guarantee on the distance to
/// the value: the report is never marked converged and has `U = +inf`.
///
/// For long-run average the iterates `T^i 0 / i` are reported.
pub fn solve_vi(
    model: &Rmdp,
    objective: &Objective,
    eps_hint: f64,
    cfg: &SolverConfig,
) -> Result<SolveReport> {
    let n = model.num_states();
    let mut recorder = Recorder::new(cfg);
    let mut report;
    if objective.payoff == Payoff::LongRunAverage {
        let mut jacobi = cfg.clone();
        jacobi.sweep_order = SweepOrder::Jacobi;
        let sweeper = Sweeper::new(model, objective.direction, 1.0, vec![false; n], &jacobi);
        let mut x = vec![0.0; n];
        let mut avg = vec![0.0; n];
        let mut i = 0u64;
        loop {
            if i >= cfg.max_iterations {
                return Err(Error::IterationLimit(i));
            }
            sweeper.sweep(&mut x, Update::Plain)?;
            i += 1;
            let next: Vec<f64> = x.iter().map(|v| v / i as f64).collect();
            let change = next
                .iter()
                .zip(&avg)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            avg = next;
            if recorder.active() {
                recorder.record(i, avg.clone(), vec![f64::INFINITY; n]);
            }
            if i > 1 && change < eps_hint {
                break;
            }
        }
        report = SolveReport::new(BoundsPair::new(avg, vec![f64::INFINITY; n]), Algorithm::Vi);
        report.iterations = i;
    } else {
        let (frozen, mut x) = if objective.is_total_reward() {
            let infinite = graph::infinite_value_states(model, objective, cfg)?;
            let targets = objective.target_mask(n);
            let x: Vec<f64> = (0..n)
                .map(|s| if infinite[s] { f64::INFINITY } else { 0.0 })
                .collect();
            ((0..n).map(|s| infinite[s] || targets[s]).collect(), x)
        } else {
            (vec![false; n], vec![0.0; n])
        };
        let sweeper = Sweeper::for_objective(model, objective, frozen.clone(), cfg);
        let mut i = 0u64;
        loop {
            if i >= cfg.max_iterations {
                return Err(Error::IterationLimit(i));
            }
            let stats = sweeper.sweep(&mut x, Update::Lower)?;
            i += 1;
            if recorder.active() {
                let upper = (0..n)
                    .map(|s| if frozen[s] { x[s] } else { f64::INFINITY })
                    .collect();
                recorder.record(i, x.clone(), upper);
            }
            if stats.max_change < eps_hint {
                break;
            }
        }
        let upper = (0..n)
            .map(|s| if frozen[s] { x[s] } else { f64::INFINITY })
            .collect();
        report = SolveReport::new(BoundsPair::new(x, upper), Algorithm::Vi);
        report.iterations = i;
    }
    report.bounds.iteration = report.iterations;
    report
        .diagnostics
        .push("value iteration gives no error guarantee; upper bounds are not computed".into());
    recorder.finish(&mut report);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ActionRecord, Direction};

    #[test]
    fn zero_cycle_from_below() {
        let mut m = Rmdp::new(vec!["p".into(), "q".into(), "s".into()], 0);
        m.add_action(0, ActionRecord::singleton("stay", 0.0, vec![1], vec![1.0]));
        m.add_action(1, ActionRecord::singleton("stay", 0.0, vec![0], vec![1.0]));
        m.add_action(1, ActionRecord::singleton("exit", 1.0, vec![2], vec![1.0]));
        m.add_action(2, ActionRecord::singleton("stay", 0.0, vec![2], vec![1.0]));
        let r = solve_vi(
            &m,
            &Objective::total_reward(Direction::Max),
            1e-6,
            &SolverConfig::default(),
        )
        .unwrap();
        assert!(!r.converged);
        assert!((r.bounds.lower[0] - 1.0).abs() <= 1e-6);
        assert_eq!(r.bounds.upper[0], f64::INFINITY);
    }

    #[test]
    fn lra_self_loop() {
        let mut m = Rmdp::with_states(1);
        m.add_action(0, ActionRecord::singleton("a", 3.0, vec![0], vec![1.0]));
        let r = solve_vi(
            &m,
            &Objective::long_run_average(Direction::Max),
            1e-9,
            &SolverConfig::default(),
        )
        .unwrap();
        assert_eq!(r.bounds.lower[0], 3.0);
    }
}
