//! Model rewrites that make the Bellman fixpoint unique.
//!
//! Collapsing replaces every zero-reward end component by one representative
//! state. The representative keeps all actions that leave the component and
//! gets an extra `stay` action into a fresh absorbing sink. Successor slots of
//! other actions are redirected to the representative; a set may then list the
//! same successor in several slots, which the solver handles transparently.

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::graph::{self, EndComponent};
use crate::model::{check_constant_support, ActionRecord, Direction, Rmdp, StateId};
use crate::uncertainty::{self, OptDirection};

pub const STAY_LABEL: &str = "stay";
pub const SINK_NAME: &str = "__sink";

/// Where an action of a collapsed model came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionOrigin {
    Original {
        state: StateId,
        action: usize,
    },
    /// The representative's action into the sink.
    Stay,
    /// The sink's self-loop.
    Sink,
}

/// Relation between an original model and its collapsed form.
#[derive(Debug, Clone, PartialEq)]
pub struct CollapseMap {
    /// New state of every original state.
    pub new_of_old: Vec<StateId>,
    /// Collapsed components, indexed like `representatives`.
    pub components: Vec<EndComponent>,
    pub representatives: Vec<StateId>,
    pub sink: StateId,
    /// Origin of every action of the collapsed model.
    pub origins: Vec<Vec<ActionOrigin>>,
}

impl CollapseMap {
    /// Pulls a vector over collapsed states back to the original states.
    pub fn pull_back(&self, values: &[f64]) -> Vec<f64> {
        self.new_of_old.iter().map(|&t| values[t]).collect()
    }

    /// Component containing an original state, if any.
    pub fn component_of(&self, s: StateId) -> Option<usize> {
        let t = self.new_of_old[s];
        self.representatives.iter().position(|&r| r == t)
    }
}

/// Collapses the zero-reward MECs of a constant-support model.
///
/// States in `excluded` (targets, states with known value) are never collapsed.
pub fn collapse(model: &Rmdp, excluded: &[bool]) -> Result<(Rmdp, CollapseMap)> {
    if !check_constant_support(model).all {
        return Err(Error::NotConstantSupport);
    }
    Ok(collapse_unchecked(model, excluded))
}

pub(crate) fn collapse_unchecked(model: &Rmdp, excluded: &[bool]) -> (Rmdp, CollapseMap) {
    let mecs = graph::zero_reward_mecs(model, excluded);
    rebuild(model, mecs, |_| 0.0, false)
}

/// Collapses *all* MECs for long-run average: the `stay` action of component
/// `i` earns `stay_values[i]` and every other reward is dropped.
///
/// `components` must come from [`graph::mec_decomposition`] on the same model.
pub fn collapse_lra(
    model: &Rmdp,
    components: &[EndComponent],
    stay_values: &[f64],
) -> Result<(Rmdp, CollapseMap)> {
    if stay_values.len() != components.len() {
        return Err(Error::MissingStayValue(
            stay_values.len().min(components.len()),
        ));
    }
    if let Some(i) = stay_values.iter().position(|v| !v.is_finite()) {
        return Err(Error::MissingStayValue(i));
    }
    Ok(rebuild(
        model,
        components.to_vec(),
        |i| stay_values[i],
        true,
    ))
}

fn rebuild(
    model: &Rmdp,
    components: Vec<EndComponent>,
    stay_reward: impl Fn(usize) -> f64,
    drop_rewards: bool,
) -> (Rmdp, CollapseMap) {
    let n = model.num_states();
    let mut comp_of: Vec<Option<usize>> = vec![None; n];
    for (i, c) in components.iter().enumerate() {
        for &s in &c.states {
            comp_of[s] = Some(i);
        }
    }
    let mut new_of_old = vec![usize::MAX; n];
    let mut representatives = vec![usize::MAX; components.len()];
    let mut names = Vec::new();
    for s in 0..n {
        match comp_of[s] {
            Some(i) if representatives[i] != usize::MAX => new_of_old[s] = representatives[i],
            Some(i) => {
                representatives[i] = names.len();
                new_of_old[s] = names.len();
                names.push(model.state_names[s].clone());
            }
            None => {
                new_of_old[s] = names.len();
                names.push(model.state_names[s].clone());
            }
        }
    }
    let sink = names.len();
    names.push(SINK_NAME.to_string());
    let mut out = Rmdp::new(names, new_of_old[model.initial]);
    let mut origins: Vec<Vec<ActionOrigin>> = vec![Vec::new(); sink + 1];
    let remap = |act: &ActionRecord| ActionRecord {
        label: act.label.clone(),
        reward: if drop_rewards { 0.0 } else { act.reward },
        support: act.support.iter().map(|&t| new_of_old[t]).collect(),
        uncertainty: act.uncertainty.clone(),
    };
    for s in 0..n {
        let t = new_of_old[s];
        match comp_of[s] {
            None => {
                for (a, act) in model.actions[s].iter().enumerate() {
                    out.actions[t].push(remap(act));
                    origins[t].push(ActionOrigin::Original {
                        state: s,
                        action: a,
                    });
                }
            }
            Some(i) => {
                let c = &components[i];
                let pos = c.states.iter().position(|&x| x == s).expect("member");
                for (a, act) in model.actions[s].iter().enumerate() {
                    if c.actions[pos].contains(&a) {
                        continue;
                    }
                    out.actions[t].push(remap(act));
                    origins[t].push(ActionOrigin::Original {
                        state: s,
                        action: a,
                    });
                }
            }
        }
    }
    for (i, &r) in representatives.iter().enumerate() {
        out.actions[r].push(ActionRecord::singleton(
            STAY_LABEL,
            stay_reward(i),
            vec![sink],
            vec![1.0],
        ));
        origins[r].push(ActionOrigin::Stay);
    }
    out.actions[sink].push(ActionRecord::singleton(
        STAY_LABEL,
        0.0,
        vec![sink],
        vec![1.0],
    ));
    origins[sink].push(ActionOrigin::Sink);
    let map = CollapseMap {
        new_of_old,
        components,
        representatives,
        sink,
        origins,
    };
    (out, map)
}

/// Bellman-difference bounds on the long-run average value of one MEC.
///
/// Runs robust total-reward sweeps restricted to the component's actions on
/// the aperiodic version `P' = (delta_s + P) / 2`, which has the same gain.
/// After each sweep `min Δ <= gain <= max Δ`; the bounds only tighten.
#[derive(Debug, Clone)]
pub struct StayBounds {
    states: Vec<StateId>,
    local: Vec<Option<usize>>,
    actions: Vec<Vec<usize>>,
    x: Vec<f64>,
    pub lo: f64,
    pub hi: f64,
    pub sweeps: u64,
    direction: Direction,
}

impl StayBounds {
    pub fn new(model: &Rmdp, component: &EndComponent, direction: Direction) -> Self {
        let mut local = vec![None; model.num_states()];
        for (i, &s) in component.states.iter().enumerate() {
            local[s] = Some(i);
        }
        StayBounds {
            states: component.states.clone(),
            local,
            actions: component.actions.clone(),
            x: vec![0.0; component.states.len()],
            lo: 0.0,
            hi: model.max_reward(),
            sweeps: 0,
            direction,
        }
    }

    pub fn gap(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn advance(&mut self, model: &Rmdp, sweeps: u64, cfg: &SolverConfig) -> Result<()> {
        let (agent, env) = match self.direction {
            Direction::Max => (Direction::Max, OptDirection::Min),
            Direction::Min => (Direction::Min, OptDirection::Max),
        };
        let k = self.states.len();
        let mut next = vec![0.0; k];
        for _ in 0..sweeps {
            for (i, &s) in self.states.iter().enumerate() {
                let mut best: Option<f64> = None;
                for &a in &self.actions[i] {
                    let act = &model.actions[s][a];
                    let vals: Vec<f64> = act
                        .support
                        .iter()
                        .map(|&t| self.x[self.local[t].expect("closed component")])
                        .collect();
                    let e = uncertainty::optimize(&act.uncertainty, &vals, env, cfg)?.value;
                    let q = act.reward + 0.5 * self.x[i] + 0.5 * e;
                    if best.map_or(true, |b| agent.better(q, b)) {
                        best = Some(q);
                    }
                }
                next[i] = best
                    .ok_or_else(|| Error::NotAnEc(format!("state {s} has no component action")))?;
            }
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for i in 0..k {
                let d = next[i] - self.x[i];
                lo = lo.min(d);
                hi = hi.max(d);
            }
            self.lo = self.lo.max(lo);
            self.hi = self.hi.min(hi);
            // keep iterates bounded; differences are shift invariant
            let base = next[0];
            for i in 0..k {
                self.x[i] = next[i] - base;
            }
            self.sweeps += 1;
        }
        if self.lo > self.hi {
            // rounding only; the true gain lies in both brackets
            let mid = 0.5 * (self.lo + self.hi);
            self.lo = mid;
            self.hi = mid;
        }
        Ok(())
    }
}

/// `(lo, hi)` bracketing the long-run average value of a MEC after `sweeps` sweeps.
pub fn mec_stay_bounds(
    model: &Rmdp,
    component: &EndComponent,
    sweeps: u64,
    direction: Direction,
    cfg: &SolverConfig,
) -> Result<(f64, f64)> {
    let mut b = StayBounds::new(model, component, direction);
    b.advance(model, sweeps, cfg)?;
    Ok((b.lo, b.hi))
}
