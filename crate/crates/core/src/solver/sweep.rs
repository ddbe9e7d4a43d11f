//! Robust Bellman sweeps.

use rayon::prelude::*;

use crate::config::{SolverConfig, SweepOrder};
use crate::error::Result;
use crate::graph;
use crate::model::{Direction, Objective, Payoff, PolicyPair, Rmdp, StateId, UncertaintySet};
use crate::uncertainty::{self, OptDirection};

/// How a sweep combines the new value with the old one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Update {
    /// `x <- T x`
    Plain,
    /// `x <- max(x, T x)`, keeps a lower bound monotone.
    Lower,
    /// `x <- min(x, T x)`, keeps an upper bound monotone.
    Upper,
}

/// Statistics of one sweep.
#[derive(Debug, Clone, Copy, Default)]
pub struct SweepStats {
    /// Largest `|new - old|` over updated states (`inf - inf` counts as 0).
    pub max_change: f64,
    /// `true` if no state had `T x (s) > x(s)`.
    pub pre_fixpoint: bool,
}

/// Bellman operator of one model and objective, with a fixed state order.
pub(crate) struct Sweeper<'a> {
    pub model: &'a Rmdp,
    pub agent: Direction,
    pub env: OptDirection,
    pub discount: f64,
    /// States that keep their value (targets, infinite states, ...).
    pub frozen: Vec<bool>,
    order: Vec<StateId>,
    sweep_order: SweepOrder,
    pool: Option<rayon::ThreadPool>,
    cfg: &'a SolverConfig,
}

fn env_direction(agent: Direction) -> OptDirection {
    match agent {
        Direction::Max => OptDirection::Min,
        Direction::Min => OptDirection::Max,
    }
}

/// Sinks-first order of the support graph's SCCs.
pub(crate) fn gauss_seidel_order(model: &Rmdp) -> Vec<StateId> {
    let adj: Vec<Vec<usize>> = model
        .actions
        .iter()
        .map(|acts| {
            let mut v: Vec<usize> = acts
                .iter()
                .flat_map(|a| a.support.iter().copied())
                .collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    graph::sccs(&adj).into_iter().flatten().collect()
}

impl<'a> Sweeper<'a> {
    pub fn new(
        model: &'a Rmdp,
        direction: Direction,
        discount: f64,
        frozen: Vec<bool>,
        cfg: &'a SolverConfig,
    ) -> Self {
        let order = match cfg.sweep_order {
            SweepOrder::GaussSeidel => gauss_seidel_order(model),
            SweepOrder::Jacobi => (0..model.num_states()).collect(),
        };
        let pool = if cfg.sweep_order == SweepOrder::Jacobi && cfg.threads > 1 {
            rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.threads)
                .build()
                .ok()
        } else {
            None
        };
        Sweeper {
            model,
            agent: direction,
            env: env_direction(direction),
            discount,
            frozen,
            order,
            sweep_order: cfg.sweep_order,
            pool,
            cfg,
        }
    }

    pub fn for_objective(
        model: &'a Rmdp,
        objective: &Objective,
        frozen: Vec<bool>,
        cfg: &'a SolverConfig,
    ) -> Self {
        let discount = match objective.payoff {
            Payoff::Discounted { gamma } => gamma,
            _ => 1.0,
        };
        Sweeper::new(model, objective.direction, discount, frozen, cfg)
    }

    pub fn config(&self) -> &SolverConfig {
        self.cfg
    }

    /// `r(s,a) + discount * opt_P P.x`.
    pub fn q_value(&self, s: StateId, a: usize, x: &[f64]) -> Result<f64> {
        let act = &self.model.actions[s][a];
        let inner = match &act.uncertainty {
            UncertaintySet::Singleton { dist } => act
                .support
                .iter()
                .zip(dist)
                .map(|(&t, &p)| if p == 0.0 { 0.0 } else { p * x[t] })
                .sum(),
            set => {
                let vals: Vec<f64> = act.support.iter().map(|&t| x[t]).collect();
                uncertainty::optimize(set, &vals, self.env, self.cfg)?.value
            }
        };
        Ok(act.reward + self.discount * inner)
    }

    /// Optimal action value and the first optimal action.
    pub fn state_value(&self, s: StateId, x: &[f64]) -> Result<(f64, usize)> {
        let mut best = (0.0, usize::MAX);
        for a in 0..self.model.actions[s].len() {
            let q = self.q_value(s, a, x)?;
            if best.1 == usize::MAX || self.agent.better(q, best.0) {
                best = (q, a);
            }
        }
        Ok(best)
    }

    fn combine(update: Update, old: f64, new: f64) -> f64 {
        match update {
            Update::Plain => new,
            Update::Lower => old.max(new),
            Update::Upper => old.min(new),
        }
    }

    /// One sweep over all non-frozen states.
    pub fn sweep(&self, x: &mut [f64], update: Update) -> Result<SweepStats> {
        let mut pre_fixpoint = true;
        let mut change = 0.0f64;
        let mut store = |x: &mut [f64], s: usize, v: f64| {
            let old = x[s];
            if v > old {
                pre_fixpoint = false;
            }
            let next = Self::combine(update, old, v);
            if next != old {
                change = change.max((next - old).abs());
            }
            x[s] = next;
        };
        match self.sweep_order {
            SweepOrder::GaussSeidel => {
                for &s in &self.order {
                    if !self.frozen[s] {
                        let (v, _) = self.state_value(s, x)?;
                        store(x, s, v);
                    }
                }
            }
            SweepOrder::Jacobi => {
                let old = x.to_vec();
                let compute = |s: usize| -> Result<f64> {
                    if self.frozen[s] {
                        Ok(old[s])
                    } else {
                        Ok(self.state_value(s, &old)?.0)
                    }
                };
                let values: Vec<f64> = match &self.pool {
                    Some(pool) => pool.install(|| {
                        (0..old.len())
                            .into_par_iter()
                            .map(compute)
                            .collect::<Result<Vec<_>>>()
                    })?,
                    None => (0..old.len()).map(compute).collect::<Result<Vec<_>>>()?,
                };
                for (s, &v) in values.iter().enumerate() {
                    if !self.frozen[s] {
                        store(x, s, v);
                    }
                }
            }
        }
        Ok(SweepStats {
            max_change: change,
            pre_fixpoint,
        })
    }

    /// Greedy actions and environment witnesses for every pair at `x`.
    pub fn policies(&self, x: &[f64]) -> Result<PolicyPair> {
        let n = self.model.num_states();
        let mut agent = vec![0; n];
        let mut environment = Vec::with_capacity(n);
        for s in 0..n {
            let mut per_action = Vec::with_capacity(self.model.actions[s].len());
            for act in &self.model.actions[s] {
                let vals: Vec<f64> = act.support.iter().map(|&t| x[t]).collect();
                per_action.push(
                    uncertainty::optimize(&act.uncertainty, &vals, self.env, self.cfg)?.witness,
                );
            }
            environment.push(per_action);
            agent[s] = self.state_value(s, x)?.1;
        }
        Ok(PolicyPair { agent, environment })
    }
}

/// One Jacobi Bellman sweep `T x` with greedy actions and environment witnesses.
///
/// For discounted objectives the inner value is scaled by the discount factor.
pub fn bellman_sweep(
    model: &Rmdp,
    x: &[f64],
    objective: &Objective,
    cfg: &SolverConfig,
) -> Result<(Vec<f64>, PolicyPair)> {
    let mut jacobi = cfg.clone();
    jacobi.sweep_order = SweepOrder::Jacobi;
    let sweeper =
        Sweeper::for_objective(model, objective, vec![false; model.num_states()], &jacobi);
    let mut next = x.to_vec();
    sweeper.sweep(&mut next, Update::Plain)?;
    let policies = sweeper.policies(x)?;
    Ok((next, policies))
}
