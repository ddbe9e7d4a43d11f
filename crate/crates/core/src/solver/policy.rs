//! Memoryless policies from converged bounds.

use std::collections::VecDeque;

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::model::{Direction, Objective, Payoff, PolicyPair, Rmdp, StateId, TrSemantics};
use crate::uncertainty;

use super::sweep::Sweeper;
use super::SolveReport;

/// Markov chain obtained by fixing both players.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedChain {
    /// Successor distribution of every state, duplicates merged.
    pub rows: Vec<Vec<(StateId, f64)>>,
    pub rewards: Vec<f64>,
}

/// Fixes the agent's action and the environment's witness in every state.
pub fn induced_chain(model: &Rmdp, policies: &PolicyPair) -> InducedChain {
    let mut rows = Vec::with_capacity(model.num_states());
    let mut rewards = Vec::with_capacity(model.num_states());
    for s in 0..model.num_states() {
        let a = policies.agent[s];
        let act = &model.actions[s][a];
        let mut row: Vec<(StateId, f64)> = Vec::new();
        for (&t, &p) in act.support.iter().zip(&policies.environment[s][a]) {
            if p <= 0.0 {
                continue;
            }
            match row.iter_mut().find(|(u, _)| *u == t) {
                Some(e) => e.1 += p,
                None => row.push((t, p)),
            }
        }
        rows.push(row);
        rewards.push(act.reward);
    }
    InducedChain { rows, rewards }
}

/// Agent policy and environment witnesses for a converged total-reward or
/// discounted report.
///
/// The agent picks, among actions whose Bellman value is within the final gap
/// of the optimum, one that makes progress: for maximization towards reward or
/// zero-value states, for minimization with a target towards the targets. This
/// rules out spurious choices inside zero-reward end components.
pub fn extract_policies(
    model: &Rmdp,
    objective: &Objective,
    report: &SolveReport,
    cfg: &SolverConfig,
) -> Result<PolicyPair> {
    if !report.converged {
        return Err(Error::NotConverged);
    }
    if objective.payoff == Payoff::LongRunAverage {
        return Err(Error::UnsupportedObjective(
            "policy extraction for long-run average".into(),
        ));
    }
    let n = model.num_states();
    let x: &[f64] = match objective.direction {
        Direction::Max => &report.bounds.lower,
        Direction::Min => &report.bounds.upper,
    };
    let targets = objective.target_mask(n);
    let sweeper = Sweeper::for_objective(model, objective, vec![false; n], cfg);
    let gap = report.max_gap();

    let mut environment = Vec::with_capacity(n);
    let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut best_action = vec![0; n];
    for s in 0..n {
        let mut witnesses = Vec::with_capacity(model.actions[s].len());
        let mut qs = Vec::with_capacity(model.actions[s].len());
        for (a, act) in model.actions[s].iter().enumerate() {
            let vals: Vec<f64> = act.support.iter().map(|&t| x[t]).collect();
            witnesses
                .push(uncertainty::optimize(&act.uncertainty, &vals, sweeper.env, cfg)?.witness);
            qs.push(sweeper.q_value(s, a, x)?);
        }
        let (best, first) = sweeper.state_value(s, x)?;
        best_action[s] = first;
        let tol = 2.0 * gap + 1e-9 * (1.0 + best.abs());
        let near: Vec<usize> = (0..qs.len())
            .filter(|&a| qs[a] == best || (qs[a] - best).abs() <= tol)
            .collect();
        candidates.push(near);
        environment.push(witnesses);
    }

    let progress_towards: Option<Vec<bool>> = match (
        objective.payoff,
        objective.direction,
        objective.effective_semantics(),
    ) {
        (Payoff::Discounted { .. }, _, _) => None,
        (_, Direction::Max, TrSemantics::Cumulative) => Some(
            (0..n)
                .map(|s| {
                    x[s].is_infinite()
                        || x[s] <= 1e-9
                        || candidates[s]
                            .iter()
                            .any(|&a| model.actions[s][a].reward > 0.0)
                })
                .collect(),
        ),
        (_, Direction::Min, TrSemantics::Infinite) => {
            Some((0..n).map(|s| targets[s] || x[s].is_infinite()).collect())
        }
        _ => None,
    };
    let mut agent = best_action;
    if let Some(mut goal) = progress_towards {
        for s in 0..n {
            if goal[s] {
                if let Some(&a) = candidates[s]
                    .iter()
                    .find(|&&a| model.actions[s][a].reward > 0.0)
                {
                    agent[s] = a;
                }
            }
        }
        // Backward attractor under the fixed witnesses.
        let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for s in 0..n {
            for act in &model.actions[s] {
                for &t in &act.support {
                    preds[t].push(s);
                }
            }
        }
        let mut queue: VecDeque<StateId> = (0..n).filter(|&s| goal[s]).collect();
        while let Some(t) = queue.pop_front() {
            for &s in &preds[t] {
                if goal[s] {
                    continue;
                }
                let progress = candidates[s].iter().copied().find(|&a| {
                    let act = &model.actions[s][a];
                    act.support
                        .iter()
                        .zip(&environment[s][a])
                        .any(|(&u, &p)| goal[u] && p > cfg.mass_tolerance)
                });
                if let Some(a) = progress {
                    agent[s] = a;
                    goal[s] = true;
                    queue.push_back(s);
                }
            }
        }
    }
    Ok(PolicyPair { agent, environment })
}
