//! The explicit induced stochastic game and an exact solver for it.
//!
//! The solver enumerates the agent's memoryless deterministic strategies. For
//! each one the environment faces a finite MDP, which is analysed
//! qualitatively (infinite values, end components) and then solved as a
//! linear program. Turn-based games with these objectives admit uniformly
//! optimal memoryless agent strategies, so the pointwise optimum over the
//! enumerated strategies is the game value.

use crate::error::{Error, Result};
use crate::model::{BoundsPair, Direction, Objective, Payoff, Rmdp, UncertaintySet};

use super::mdp::{Choice, ExplicitMdp};

/// Upper limit on the number of agent strategies [`solve_sg`] enumerates.
pub const MAX_STRATEGIES: u64 = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Player {
    Agent,
    Environment,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SgAction {
    pub label: String,
    pub reward: f64,
    pub successors: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SgState {
    pub name: String,
    pub owner: Player,
    pub actions: Vec<SgAction>,
}

/// Turn-based game: agent states `0..num_model_states`, then one environment
/// state per state-action pair.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticGame {
    pub states: Vec<SgState>,
    pub num_model_states: usize,
    /// `(state, action)` of each environment state, in order.
    pub pairs: Vec<(usize, usize)>,
}

impl StochasticGame {
    pub fn num_states(&self) -> usize {
        self.states.len()
    }
}

/// Builds the induced game. Environment actions are the vertices of the
/// uncertainty sets; neutral rewards are 0 for total reward and repeat the
/// agent reward for long-run average.
pub fn build_induced_sg(model: &Rmdp, objective: &Objective) -> Result<StochasticGame> {
    let n = model.num_states();
    let neutral = objective.payoff == Payoff::LongRunAverage;
    let mut states: Vec<SgState> = model
        .state_names
        .iter()
        .map(|name| SgState {
            name: name.clone(),
            owner: Player::Agent,
            actions: Vec::new(),
        })
        .collect();
    let mut pairs = Vec::new();
    for (s, acts) in model.actions.iter().enumerate() {
        for (a, act) in acts.iter().enumerate() {
            let vertices: Vec<&Vec<f64>> = match &act.uncertainty {
                UncertaintySet::Singleton { dist } => vec![dist],
                UncertaintySet::PolytopeV { vertices } => vertices.iter().collect(),
                _ => {
                    return Err(Error::NotVRep {
                        state: s,
                        action: a,
                    })
                }
            };
            let env = n + pairs.len();
            pairs.push((s, a));
            states[s].actions.push(SgAction {
                label: act.label.clone(),
                reward: act.reward,
                successors: vec![(env, 1.0)],
            });
            let actions = vertices
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let mut successors: Vec<(usize, f64)> = Vec::new();
                    for (&t, &p) in act.support.iter().zip(v.iter()) {
                        if p <= 0.0 {
                            continue;
                        }
                        match successors.iter_mut().find(|(u, _)| *u == t) {
                            Some(e) => e.1 += p,
                            None => successors.push((t, p)),
                        }
                    }
                    SgAction {
                        label: format!("v{i}"),
                        reward: if neutral { act.reward } else { 0.0 },
                        successors,
                    }
                })
                .collect();
            states.push(SgState {
                name: format!("{}.{}", model.state_names[s], act.label),
                owner: Player::Environment,
                actions,
            });
        }
    }
    Ok(StochasticGame {
        states,
        num_model_states: n,
        pairs,
    })
}

/// Environment MDP over the agent states once the agent strategy is fixed.
fn env_mdp(game: &StochasticGame, sigma: &[usize], targets: &[bool], lra: bool) -> ExplicitMdp {
    let choices = (0..game.num_model_states)
        .map(|s| {
            if targets[s] {
                return vec![Choice {
                    reward: 0.0,
                    dist: vec![(s, 1.0)],
                }];
            }
            let act = &game.states[s].actions[sigma[s]];
            let (env, _) = act.successors[0];
            game.states[env]
                .actions
                .iter()
                .map(|e| {
                    let reward = if lra {
                        0.5 * (act.reward + e.reward)
                    } else {
                        act.reward + e.reward
                    };
                    Choice {
                        reward,
                        dist: e.successors.clone(),
                    }
                })
                .collect()
        })
        .collect();
    ExplicitMdp { choices }
}

/// Game value at every model state, as a degenerate bounds pair (`L = U`).
///
/// Supports total reward (both directions and semantics, with targets) and
/// long-run average. `eps` is accepted for interface symmetry; the answer is
/// exact up to floating-point LP accuracy.
pub fn solve_sg(game: &StochasticGame, objective: &Objective, eps: f64) -> Result<BoundsPair> {
    let _ = eps;
    if let Payoff::Discounted { .. } = objective.payoff {
        return Err(Error::UnsupportedObjective(
            "the game oracle does not handle discounting".into(),
        ));
    }
    let n = game.num_model_states;
    let lra = objective.payoff == Payoff::LongRunAverage;
    let targets = if lra {
        vec![false; n]
    } else {
        objective.target_mask(n)
    };
    let counts: Vec<usize> = (0..n)
        .map(|s| {
            if targets[s] {
                1
            } else {
                game.states[s].actions.len()
            }
        })
        .collect();
    let total = counts
        .iter()
        .try_fold(1u64, |acc, &c| acc.checked_mul(c as u64))
        .filter(|&t| t <= MAX_STRATEGIES)
        .ok_or_else(|| Error::TooLarge(format!("more than {MAX_STRATEGIES} agent strategies")))?;
    let agent_max = objective.direction == Direction::Max;
    let mut best: Vec<f64> = vec![
        if agent_max {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        };
        n
    ];
    let mut sigma = vec![0usize; n];
    for _ in 0..total {
        let mdp = env_mdp(game, &sigma, &targets, lra);
        let env_max = objective.direction == Direction::Min;
        let values = mdp.optimal_values(lra, objective.effective_semantics(), env_max, &targets)?;
        for s in 0..n {
            if (agent_max && values[s] > best[s]) || (!agent_max && values[s] < best[s]) {
                best[s] = values[s];
            }
        }
        // odometer over strategies
        for s in 0..n {
            sigma[s] += 1;
            if sigma[s] < counts[s] {
                break;
            }
            sigma[s] = 0;
        }
    }
    Ok(BoundsPair::new(best.clone(), best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ActionRecord, Objective};

    fn zero_cycle() -> Rmdp {
        let mut m = Rmdp::new(vec!["p".into(), "q".into(), "s".into()], 0);
        m.add_action(0, ActionRecord::singleton("stay", 0.0, vec![1], vec![1.0]));
        m.add_action(1, ActionRecord::singleton("stay", 0.0, vec![0], vec![1.0]));
        m.add_action(1, ActionRecord::singleton("exit", 1.0, vec![2], vec![1.0]));
        m.add_action(2, ActionRecord::singleton("stay", 0.0, vec![2], vec![1.0]));
        m
    }

    #[test]
    fn zero_cycle_game() {
        let obj = Objective::total_reward(Direction::Max);
        let g = build_induced_sg(&zero_cycle(), &obj).unwrap();
        assert_eq!(g.num_states(), 7);
        let v = solve_sg(&g, &obj, 1e-6).unwrap();
        assert_eq!(v.lower, vec![1.0, 1.0, 0.0]);
        // the minimizing agent never leaves the zero cycle
        let v = solve_sg(&g, &Objective::total_reward(Direction::Min), 1e-6).unwrap();
        assert_eq!(v.lower, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn robust_chain_vertex() {
        // s0 pays 1 and then either loops back (p) or stops (q)
        let (p, qq) = (0.4, 0.6);
        let mut m = Rmdp::with_states(2);
        m.add_action(
            0,
            ActionRecord::new(
                "a",
                1.0,
                vec![0, 1],
                UncertaintySet::PolytopeV {
                    vertices: vec![vec![p, qq], vec![0.2, 0.8]],
                },
            ),
        );
        m.add_action(1, ActionRecord::singleton("stop", 0.0, vec![1], vec![1.0]));
        let obj = Objective::total_reward(Direction::Max);
        let v = solve_sg(&build_induced_sg(&m, &obj).unwrap(), &obj, 1e-9).unwrap();
        // environment picks the vertex that stops sooner: 1 / (1 - 0.2)
        assert!((v.lower[0] - 1.25).abs() < 1e-12);
    }

    #[test]
    fn min_with_targets_and_avoidance() {
        // 0 -> {1 target, 2 trap} depending on the environment
        let mut m = Rmdp::with_states(3);
        m.add_action(
            0,
            ActionRecord::new(
                "a",
                1.0,
                vec![1, 2],
                UncertaintySet::PolytopeV {
                    vertices: vec![vec![1.0, 0.0], vec![0.9, 0.1]],
                },
            ),
        );
        m.add_action(0, ActionRecord::singleton("b", 5.0, vec![1], vec![1.0]));
        m.add_action(1, ActionRecord::singleton("done", 0.0, vec![1], vec![1.0]));
        m.add_action(2, ActionRecord::singleton("trap", 0.0, vec![2], vec![1.0]));
        let obj = Objective::reach_total_reward(Direction::Min, vec![1]);
        let v = solve_sg(&build_induced_sg(&m, &obj).unwrap(), &obj, 1e-9).unwrap();
        assert_eq!(v.lower[2], f64::INFINITY);
        assert!((v.lower[0] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn lra_two_loops() {
        let mut m = Rmdp::with_states(3);
        m.add_action(0, ActionRecord::singleton("l", 0.0, vec![1], vec![1.0]));
        m.add_action(0, ActionRecord::singleton("r", 0.0, vec![2], vec![1.0]));
        m.add_action(1, ActionRecord::singleton("a", 2.0, vec![1], vec![1.0]));
        m.add_action(2, ActionRecord::singleton("a", 5.0, vec![2], vec![1.0]));
        let obj = Objective::long_run_average(Direction::Max);
        let v = solve_sg(&build_induced_sg(&m, &obj).unwrap(), &obj, 1e-9).unwrap();
        assert!((v.lower[0] - 5.0).abs() < 1e-9 && (v.lower[1] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_balls() {
        let mut m = Rmdp::with_states(1);
        m.add_action(
            0,
            ActionRecord::new("a", 0.0, vec![0], UncertaintySet::interval(vec![1.0], 0.0)),
        );
        assert_eq!(
            build_induced_sg(&m, &Objective::total_reward(Direction::Max)).unwrap_err(),
            Error::NotVRep {
                state: 0,
                action: 0
            }
        );
    }
}
