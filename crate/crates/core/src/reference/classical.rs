//! Textbook oracles for models without uncertainty and for Markov chains.

use crate::error::{Error, Result};
use crate::model::{Direction, Objective, Payoff, Rmdp, UncertaintySet};
use crate::solver::InducedChain;

use super::mdp::{Choice, ExplicitMdp};

/// The nominal distribution of a set without uncertainty: a singleton, a
/// one-vertex polytope or a ball of radius 0.
fn nominal(set: &UncertaintySet) -> Option<&[f64]> {
    match set {
        UncertaintySet::Singleton { dist } => Some(dist),
        UncertaintySet::PolytopeV { vertices } if vertices.len() == 1 => Some(&vertices[0]),
        UncertaintySet::Ball { center, radius, .. } if *radius == 0.0 => Some(center),
        _ => None,
    }
}

/// Reads a model without uncertainty as an explicit MDP; targets become absorbing.
pub fn classical_mdp(model: &Rmdp, targets: &[bool]) -> Result<ExplicitMdp> {
    let mut choices = Vec::with_capacity(model.num_states());
    for (s, acts) in model.actions.iter().enumerate() {
        if targets.get(s).copied().unwrap_or(false) {
            choices.push(vec![Choice {
                reward: 0.0,
                dist: vec![(s, 1.0)],
            }]);
            continue;
        }
        let mut row = Vec::with_capacity(acts.len());
        for (a, act) in acts.iter().enumerate() {
            let dist = nominal(&act.uncertainty).ok_or(Error::NotVRep {
                state: s,
                action: a,
            })?;
            let mut merged: Vec<(usize, f64)> = Vec::new();
            for (&t, &p) in act.support.iter().zip(dist) {
                if p <= 0.0 {
                    continue;
                }
                match merged.iter_mut().find(|(u, _)| *u == t) {
                    Some(e) => e.1 += p,
                    None => merged.push((t, p)),
                }
            }
            row.push(Choice {
                reward: act.reward,
                dist: merged,
            });
        }
        choices.push(row);
    }
    Ok(ExplicitMdp { choices })
}

/// Exact value of a model without uncertainty (total reward or long-run average).
pub fn mdp_value(model: &Rmdp, objective: &Objective) -> Result<Vec<f64>> {
    let n = model.num_states();
    let lra = objective.payoff == Payoff::LongRunAverage;
    if let Payoff::Discounted { .. } = objective.payoff {
        return Err(Error::UnsupportedObjective(
            "use the discounted iteration".into(),
        ));
    }
    let targets = if lra {
        vec![false; n]
    } else {
        objective.target_mask(n)
    };
    let mdp = classical_mdp(model, &targets)?;
    mdp.optimal_values(
        lra,
        objective.effective_semantics(),
        objective.direction == Direction::Max,
        &targets,
    )
}

fn bellman(mdp: &ExplicitMdp, x: &[f64], maximize: bool, discount: f64) -> Vec<f64> {
    mdp.choices
        .iter()
        .map(|row| {
            let q = row.iter().map(|c| {
                c.reward
                    + discount
                        * c.dist
                            .iter()
                            .map(|&(t, p)| if p == 0.0 { 0.0 } else { p * x[t] })
                            .sum::<f64>()
            });
            if maximize {
                q.fold(f64::NEG_INFINITY, f64::max)
            } else {
                q.fold(f64::INFINITY, f64::min)
            }
        })
        .collect()
}

/// One textbook Bellman update of a model without uncertainty.
pub fn classical_bellman(
    model: &Rmdp,
    x: &[f64],
    direction: Direction,
    discount: f64,
) -> Result<Vec<f64>> {
    let mdp = classical_mdp(model, &[])?;
    Ok(bellman(&mdp, x, direction == Direction::Max, discount))
}

/// Textbook value iteration from 0 for `iterations` steps.
pub fn classical_vi(
    model: &Rmdp,
    direction: Direction,
    discount: f64,
    iterations: usize,
) -> Result<Vec<f64>> {
    let mdp = classical_mdp(model, &[])?;
    let mut x = vec![0.0; model.num_states()];
    for _ in 0..iterations {
        x = bellman(&mdp, &x, direction == Direction::Max, discount);
    }
    Ok(x)
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
fn linear_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap_or(col);
        if a[pivot][col].abs() < 1e-14 {
            return Err(Error::NumericalFailure("singular linear system".into()));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for i in col + 1..n {
            let f = a[i][col] / a[col][col];
            if f != 0.0 {
                for j in col..n {
                    a[i][j] -= f * a[col][j];
                }
                b[i] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Ok(x)
}

/// Total reward (`discount = 1`) or discounted reward of a Markov chain.
///
/// With `discount = 1`, targets are absorbing at 0 and states that reach a
/// recurrent class collecting reward with positive probability are infinite.
pub fn chain_value(chain: &InducedChain, targets: &[bool], discount: f64) -> Result<Vec<f64>> {
    let n = chain.rows.len();
    let is_target = |s: usize| targets.get(s).copied().unwrap_or(false);
    let mut infinite = vec![false; n];
    if discount >= 1.0 {
        let mdp = ExplicitMdp {
            choices: (0..n)
                .map(|s| {
                    vec![if is_target(s) {
                        Choice {
                            reward: 0.0,
                            dist: vec![(s, 1.0)],
                        }
                    } else {
                        Choice {
                            reward: chain.rewards[s],
                            dist: chain.rows[s].clone(),
                        }
                    }]
                })
                .collect(),
        };
        let mask: Vec<bool> = (0..n).map(is_target).collect();
        let values =
            mdp.optimal_values(false, crate::model::TrSemantics::Cumulative, true, &mask)?;
        for s in 0..n {
            infinite[s] = values[s].is_infinite();
        }
    }
    // states whose value is 0 for structural reasons are pinned
    let solve_for: Vec<usize> = (0..n).filter(|&s| !infinite[s] && !is_target(s)).collect();
    let index: Vec<Option<usize>> = {
        let mut idx = vec![None; n];
        for (i, &s) in solve_for.iter().enumerate() {
            idx[s] = Some(i);
        }
        idx
    };
    let m = solve_for.len();
    let mut a = vec![vec![0.0; m]; m];
    let mut b = vec![0.0; m];
    for (i, &s) in solve_for.iter().enumerate() {
        a[i][i] += 1.0;
        b[i] = chain.rewards[s];
        for &(t, p) in &chain.rows[s] {
            if let Some(j) = index[t] {
                a[i][j] -= discount * p;
            }
        }
    }
    if discount >= 1.0 {
        // recurrent zero-reward classes make I - P singular; pin them to 0
        let reach_reward = recurrent_free(chain, &solve_for, &index);
        for (i, keep) in reach_reward.iter().enumerate() {
            if !keep {
                a[i] = vec![0.0; m];
                a[i][i] = 1.0;
                b[i] = 0.0;
            }
        }
    }
    let x = linear_solve(a, b)?;
    let mut values: Vec<f64> = (0..n)
        .map(|s| if infinite[s] { f64::INFINITY } else { 0.0 })
        .collect();
    for (i, &s) in solve_for.iter().enumerate() {
        values[s] = x[i];
    }
    Ok(values)
}

/// Among `states`, those that can still reach a reward or leave the set.
fn recurrent_free(chain: &InducedChain, states: &[usize], index: &[Option<usize>]) -> Vec<bool> {
    let m = states.len();
    let mut live: Vec<bool> = states
        .iter()
        .map(|&s| chain.rewards[s] > 0.0 || chain.rows[s].iter().any(|&(t, _)| index[t].is_none()))
        .collect();
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..m {
            if live[i] {
                continue;
            }
            if chain.rows[states[i]]
                .iter()
                .any(|&(t, p)| p > 0.0 && index[t].map_or(false, |j| live[j]))
            {
                live[i] = true;
                changed = true;
            }
        }
    }
    live
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ActionRecord;

    #[test]
    fn chain_with_loop() {
        // 0 pays 1 and loops w.p. 0.5; 1 is an absorbing zero state
        let chain = InducedChain {
            rows: vec![vec![(0, 0.5), (1, 0.5)], vec![(1, 1.0)]],
            rewards: vec![1.0, 0.0],
        };
        let v = chain_value(&chain, &[], 1.0).unwrap();
        assert!((v[0] - 2.0).abs() < 1e-12 && v[1] == 0.0);
        let v = chain_value(&chain, &[], 0.5).unwrap();
        assert!((v[0] - 1.0 / 0.75).abs() < 1e-12);
        let paying = InducedChain {
            rows: vec![vec![(0, 1.0)]],
            rewards: vec![1.0],
        };
        assert_eq!(chain_value(&paying, &[], 1.0).unwrap()[0], f64::INFINITY);
    }

    #[test]
    fn mdp_matches_vi() {
        let mut m = Rmdp::with_states(3);
        m.add_action(
            0,
            ActionRecord::singleton("a", 1.0, vec![0, 2], vec![0.5, 0.5]),
        );
        m.add_action(0, ActionRecord::singleton("b", 1.5, vec![1], vec![1.0]));
        m.add_action(1, ActionRecord::singleton("c", 0.0, vec![2], vec![1.0]));
        m.add_action(2, ActionRecord::singleton("z", 0.0, vec![2], vec![1.0]));
        let v = mdp_value(&m, &Objective::total_reward(Direction::Max)).unwrap();
        let w = classical_vi(&m, Direction::Max, 1.0, 200).unwrap();
        assert!((v[0] - 2.0).abs() < 1e-12 && (w[0] - 2.0).abs() < 1e-12);
    }
}
