//! Qualitative analysis: end components, sure/almost-sure predecessors and
//! the states whose value is infinite.
//!
//! State sets are `Vec<bool>` masks over the model's states.

use std::collections::VecDeque;

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::model::{check_constant_support, Direction, Objective, Rmdp, StateId, TrSemantics};
use crate::uncertainty;

/// Quantifier over agent actions or over admissible distributions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantifier {
    Exists,
    Forall,
}

/// The player trying to reach (or visit infinitely often) a region.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protagonist {
    Agent,
    Environment,
}

impl Protagonist {
    /// Agent and environment quantifiers when this player is the protagonist.
    pub fn quantifiers(self) -> (Quantifier, Quantifier) {
        match self {
            Protagonist::Agent => (Quantifier::Exists, Quantifier::Forall),
            Protagonist::Environment => (Quantifier::Forall, Quantifier::Exists),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EndComponent {
    pub states: Vec<StateId>,
    /// `actions[i]` lists the actions of `states[i]` that stay inside the component.
    pub actions: Vec<Vec<usize>>,
    pub zero_reward: bool,
}

impl EndComponent {
    pub fn contains(&self, s: StateId) -> bool {
        self.states.contains(&s)
    }
}

fn slot_mask(support: &[StateId], states: &[bool]) -> Vec<bool> {
    support.iter().map(|&t| states[t]).collect()
}

/// `(min, max)` mass an action can put on a state set.
fn action_mass(
    model: &Rmdp,
    s: StateId,
    a: usize,
    x: &[bool],
    cfg: &SolverConfig,
) -> Result<(f64, f64)> {
    let act = &model.actions[s][a];
    let mask = slot_mask(&act.support, x);
    if mask.iter().all(|&b| b) {
        return Ok((1.0, 1.0));
    }
    if !mask.iter().any(|&b| b) {
        return Ok((0.0, 0.0));
    }
    uncertainty::mass_extrema(&act.uncertainty, &mask, cfg)
}

/// Largest mass on `y` among admissible distributions supported inside `x`.
fn face_mass(
    model: &Rmdp,
    s: StateId,
    a: usize,
    x: &[bool],
    y: &[bool],
    cfg: &SolverConfig,
) -> Result<Option<f64>> {
    let act = &model.actions[s][a];
    let allowed = slot_mask(&act.support, x);
    let target = slot_mask(&act.support, y);
    uncertainty::face_max_mass(&act.uncertainty, &target, &allowed, cfg)
}

fn quantify(q: Quantifier, n: usize, mut f: impl FnMut(usize) -> Result<bool>) -> Result<bool> {
    for a in 0..n {
        let v = f(a)?;
        match q {
            Quantifier::Exists if v => return Ok(true),
            Quantifier::Forall if !v => return Ok(false),
            _ => {}
        }
    }
    Ok(q == Quantifier::Forall)
}

/// Sure predecessor: states from which `x` is reached in one step with certainty.
///
/// `env = Exists` asks whether some admissible distribution stays inside `x`,
/// `env = Forall` whether all of them do.
pub fn spre(
    model: &Rmdp,
    x: &[bool],
    agent: Quantifier,
    env: Quantifier,
    cfg: &SolverConfig,
) -> Result<Vec<bool>> {
    let sure = 1.0 - cfg.mass_tolerance;
    (0..model.num_states())
        .map(|s| {
            quantify(agent, model.actions[s].len(), |a| {
                let (lo, hi) = action_mass(model, s, a, x, cfg)?;
                Ok(match env {
                    Quantifier::Exists => hi >= sure,
                    Quantifier::Forall => lo >= sure,
                })
            })
        })
        .collect()
}

fn apre_pair(
    model: &Rmdp,
    s: StateId,
    a: usize,
    x: &[bool],
    y: &[bool],
    env: Quantifier,
    cfg: &SolverConfig,
) -> Result<bool> {
    let tol = cfg.mass_tolerance;
    match env {
        Quantifier::Forall => {
            let (lo_x, _) = action_mass(model, s, a, x, cfg)?;
            if lo_x < 1.0 - tol {
                return Ok(false);
            }
            let (lo_y, _) = action_mass(model, s, a, y, cfg)?;
            Ok(lo_y > tol)
        }
        Quantifier::Exists => Ok(face_mass(model, s, a, x, y, cfg)?.map_or(false, |m| m > tol)),
    }
}

/// Almost-sure predecessor: states with a step that stays inside `x` and has
/// positive probability of entering `y`.
pub fn apre(
    model: &Rmdp,
    x: &[bool],
    y: &[bool],
    agent: Quantifier,
    env: Quantifier,
    cfg: &SolverConfig,
) -> Result<Vec<bool>> {
    (0..model.num_states())
        .map(|s| {
            quantify(agent, model.actions[s].len(), |a| {
                apre_pair(model, s, a, x, y, env, cfg)
            })
        })
        .collect()
}

fn predecessors(model: &Rmdp) -> Vec<Vec<StateId>> {
    let mut preds = vec![Vec::new(); model.num_states()];
    for (s, acts) in model.actions.iter().enumerate() {
        for act in acts {
            for &t in &act.support {
                if preds[t].last() != Some(&s) {
                    preds[t].push(s);
                }
            }
        }
    }
    preds
}

/// Least fixpoint `mu Y. base ∪ {s in domain : holds(s, Y)}` with a worklist.
///
/// `holds` must be monotone in `Y`.
fn worklist_lfp(
    preds: &[Vec<StateId>],
    domain: &[bool],
    base: &[bool],
    mut holds: impl FnMut(StateId, &[bool]) -> Result<bool>,
) -> Result<Vec<bool>> {
    let n = domain.len();
    let mut y: Vec<bool> = (0..n).map(|s| base[s] && domain[s]).collect();
    let mut queued = vec![false; n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        if domain[s] && !y[s] {
            queued[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(s) = queue.pop_front() {
        queued[s] = false;
        if y[s] || !holds(s, &y)? {
            continue;
        }
        y[s] = true;
        for &p in &preds[s] {
            if domain[p] && !y[p] && !queued[p] {
                queued[p] = true;
                queue.push_back(p);
            }
        }
    }
    Ok(y)
}

/// One step of the almost-sure Büchi / reachability fixpoint.
///
/// A pair counts as a "goal move" if it earns positive reward (`buchi`).
fn as_step(
    model: &Rmdp,
    s: StateId,
    z: &[bool],
    y: &[bool],
    buchi: bool,
    who: Protagonist,
    cfg: &SolverConfig,
) -> Result<bool> {
    let (agent, env) = who.quantifiers();
    quantify(agent, model.actions[s].len(), |a| {
        let goal = buchi && model.actions[s][a].reward > 0.0;
        if !goal {
            return apre_pair(model, s, a, z, y, env, cfg);
        }
        match env {
            Quantifier::Forall => {
                Ok(action_mass(model, s, a, z, cfg)?.0 >= 1.0 - cfg.mass_tolerance)
            }
            Quantifier::Exists => Ok(face_mass(model, s, a, z, z, cfg)?.is_some()),
        }
    })
}

fn almost_sure(
    model: &Rmdp,
    targets: &[bool],
    buchi: bool,
    who: Protagonist,
    cfg: &SolverConfig,
) -> Result<Vec<bool>> {
    let n = model.num_states();
    let preds = predecessors(model);
    let mut z = vec![true; n];
    loop {
        let next = worklist_lfp(&preds, &z, targets, |s, y| {
            as_step(model, s, &z, y, buchi, who, cfg)
        })?;
        if next == z {
            return Ok(z);
        }
        z = next;
    }
}

/// States from which `who` reaches `targets` with probability one.
pub fn almost_sure_reach(
    model: &Rmdp,
    targets: &[bool],
    who: Protagonist,
    cfg: &SolverConfig,
) -> Result<Vec<bool>> {
    almost_sure(model, targets, false, who, cfg)
}

/// States from which `who` sees positive reward infinitely often with probability one.
pub fn almost_sure_buchi(model: &Rmdp, who: Protagonist, cfg: &SolverConfig) -> Result<Vec<bool>> {
    almost_sure(model, &vec![false; model.num_states()], true, who, cfg)
}

/// States from which `who` reaches `targets` with positive probability.
pub fn positive_reach(
    model: &Rmdp,
    targets: &[bool],
    who: Protagonist,
    cfg: &SolverConfig,
) -> Result<Vec<bool>> {
    let preds = predecessors(model);
    let domain = vec![true; model.num_states()];
    let tol = cfg.mass_tolerance;
    let (agent, _) = who.quantifiers();
    worklist_lfp(&preds, &domain, targets, |s, x| {
        quantify(agent, model.actions[s].len(), |a| {
            let (lo, hi) = action_mass(model, s, a, x, cfg)?;
            Ok(match who {
                Protagonist::Agent => lo > tol,
                Protagonist::Environment => hi > tol,
            })
        })
    })
}

/// States with value `+inf` for a total-reward objective.
///
/// Cumulative semantics: the player who profits from reward can make positive
/// reward recur forever with positive probability. Infinite semantics: the
/// player who profits can avoid the targets with positive probability.
pub fn infinite_value_states(
    model: &Rmdp,
    objective: &Objective,
    cfg: &SolverConfig,
) -> Result<Vec<bool>> {
    let n = model.num_states();
    if !objective.is_total_reward() {
        return Ok(vec![false; n]);
    }
    let profiteer = match objective.direction {
        Direction::Max => Protagonist::Agent,
        Direction::Min => Protagonist::Environment,
    };
    match objective.effective_semantics() {
        TrSemantics::Cumulative => {
            let recur = almost_sure_buchi(model, profiteer, cfg)?;
            positive_reach(model, &recur, profiteer, cfg)
        }
        TrSemantics::Infinite => {
            let reacher = match profiteer {
                Protagonist::Agent => Protagonist::Environment,
                Protagonist::Environment => Protagonist::Agent,
            };
            let targets = objective.target_mask(n);
            let sure = almost_sure_reach(model, &targets, reacher, cfg)?;
            Ok(sure.into_iter().map(|b| !b).collect())
        }
    }
}

/// Iterative Tarjan SCC on an explicit adjacency list. Returns component ids.
fn tarjan(adj: &[Vec<usize>], alive: &[bool]) -> Vec<usize> {
    let n = adj.len();
    const UNSET: usize = usize::MAX;
    let mut index = vec![UNSET; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSET; n];
    let mut stack = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let mut counter = 0;
    let mut ncomp = 0;
    for root in 0..n {
        if !alive[root] || index[root] != UNSET {
            continue;
        }
        call.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut next)) = call.last_mut() {
            if *next < adj[v].len() {
                let w = adj[v][*next];
                *next += 1;
                if !alive[w] {
                    continue;
                }
                if index[w] == UNSET {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    while let Some(w) = stack.pop() {
                        on_stack[w] = false;
                        comp[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }
    comp
}

/// Strongly connected components as state lists, in reverse topological order
/// (every edge leaving a component points to an earlier one).
pub fn sccs(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let alive = vec![true; adj.len()];
    let comp = tarjan(adj, &alive);
    let count = comp.iter().copied().max().map_or(0, |m| m + 1);
    let mut out = vec![Vec::new(); count];
    for (s, &c) in comp.iter().enumerate() {
        out[c].push(s);
    }
    out
}

/// Maximal end components of the game graph given by `succ(s, a)`.
///
/// Only states in `domain` and actions with `enabled(s, a)` are considered.
pub fn mecs_with(
    n: usize,
    num_actions: impl Fn(StateId) -> usize,
    domain: &[bool],
    enabled: impl Fn(StateId, usize) -> bool,
    succ: impl Fn(StateId, usize) -> Vec<StateId>,
) -> Vec<(Vec<StateId>, Vec<Vec<usize>>)> {
    let mut alive_state: Vec<bool> = domain.to_vec();
    let mut actions: Vec<Vec<(usize, Vec<StateId>)>> = (0..n)
        .map(|s| {
            if !alive_state[s] {
                return Vec::new();
            }
            (0..num_actions(s))
                .filter(|&a| enabled(s, a))
                .map(|a| (a, succ(s, a)))
                .collect()
        })
        .collect();
    let comp = loop {
        for s in 0..n {
            if alive_state[s] && actions[s].is_empty() {
                alive_state[s] = false;
            }
        }
        let adj: Vec<Vec<usize>> = (0..n)
            .map(|s| {
                if !alive_state[s] {
                    return Vec::new();
                }
                let mut v: Vec<usize> = actions[s]
                    .iter()
                    .flat_map(|(_, t)| t.iter().copied())
                    .collect();
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect();
        let comp = tarjan(&adj, &alive_state);
        let mut changed = false;
        for s in 0..n {
            if !alive_state[s] {
                continue;
            }
            let before = actions[s].len();
            actions[s].retain(|(_, ts)| ts.iter().all(|&t| alive_state[t] && comp[t] == comp[s]));
            if actions[s].len() != before {
                changed = true;
            }
            if actions[s].is_empty() {
                alive_state[s] = false;
                changed = true;
            }
        }
        if !changed {
            break comp;
        }
    };
    let mut groups: Vec<(usize, Vec<StateId>, Vec<Vec<usize>>)> = Vec::new();
    let mut slot = std::collections::HashMap::new();
    for s in 0..n {
        if !alive_state[s] {
            continue;
        }
        let g = *slot.entry(comp[s]).or_insert_with(|| {
            groups.push((comp[s], Vec::new(), Vec::new()));
            groups.len() - 1
        });
        groups[g].1.push(s);
        groups[g]
            .2
            .push(actions[s].iter().map(|(a, _)| *a).collect());
    }
    groups.into_iter().map(|(_, s, a)| (s, a)).collect()
}

fn declared_successors(model: &Rmdp, s: StateId, a: usize) -> Vec<StateId> {
    model.actions[s][a].support.clone()
}

fn to_components(model: &Rmdp, raw: Vec<(Vec<StateId>, Vec<Vec<usize>>)>) -> Vec<EndComponent> {
    raw.into_iter()
        .map(|(states, actions)| {
            let zero_reward = states
                .iter()
                .zip(&actions)
                .all(|(&s, acts)| acts.iter().all(|&a| model.actions[s][a].reward == 0.0));
            EndComponent {
                states,
                actions,
                zero_reward,
            }
        })
        .collect()
}

/// Maximal end components of a constant-support model.
pub fn mec_decomposition(model: &Rmdp) -> Result<Vec<EndComponent>> {
    if !check_constant_support(model).all {
        return Err(Error::NotConstantSupport);
    }
    Ok(mec_decomposition_unchecked(model))
}

/// MEC decomposition on the declared supports, without the support check.
pub fn mec_decomposition_unchecked(model: &Rmdp) -> Vec<EndComponent> {
    let n = model.num_states();
    let raw = mecs_with(
        n,
        |s| model.actions[s].len(),
        &vec![true; n],
        |_, _| true,
        |s, a| declared_successors(model, s, a),
    );
    to_components(model, raw)
}

/// Maximal end components using only zero-reward actions, outside `excluded`.
pub fn zero_reward_mecs(model: &Rmdp, excluded: &[bool]) -> Vec<EndComponent> {
    let n = model.num_states();
    let domain: Vec<bool> = excluded.iter().map(|&b| !b).collect();
    let raw = mecs_with(
        n,
        |s| model.actions[s].len(),
        &domain,
        |s, a| model.actions[s][a].reward == 0.0,
        |s, a| declared_successors(model, s, a),
    );
    to_components(model, raw)
}

/// Zero-reward MECs of the MDP obtained by fixing the environment to `witness`.
///
/// `witness[s][a]` is indexed by the support slots of `(s, a)`; slots with
/// mass above the tolerance count as successors.
pub fn sec_candidates(
    model: &Rmdp,
    witness: &[Vec<Vec<f64>>],
    excluded: &[bool],
    cfg: &SolverConfig,
) -> Result<Vec<EndComponent>> {
    if !model.is_polytopic() {
        return Err(Error::NotPolytopic);
    }
    let n = model.num_states();
    let domain: Vec<bool> = excluded.iter().map(|&b| !b).collect();
    let tol = cfg.mass_tolerance;
    let raw = mecs_with(
        n,
        |s| model.actions[s].len(),
        &domain,
        |s, a| model.actions[s][a].reward == 0.0,
        |s, a| {
            let act = &model.actions[s][a];
            act.support
                .iter()
                .zip(&witness[s][a])
                .filter(|(_, &p)| p > tol)
                .map(|(&t, _)| t)
                .collect()
        },
    );
    Ok(to_components(model, raw))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ActionRecord, UncertaintySet};

    fn zero_cycle() -> Rmdp {
        let mut m = Rmdp::new(vec!["p".into(), "q".into(), "s".into()], 0);
        m.add_action(0, ActionRecord::singleton("stay", 0.0, vec![1], vec![1.0]));
        m.add_action(1, ActionRecord::singleton("stay", 0.0, vec![0], vec![1.0]));
        m.add_action(1, ActionRecord::singleton("exit", 1.0, vec![2], vec![1.0]));
        m.add_action(2, ActionRecord::singleton("stay", 0.0, vec![2], vec![1.0]));
        m
    }

    fn set(states: &[usize], n: usize) -> Vec<bool> {
        let mut v = vec![false; n];
        for &s in states {
            v[s] = true;
        }
        v
    }

    #[test]
    fn zero_cycle_mecs() {
        let mecs = mec_decomposition(&zero_cycle()).unwrap();
        let mut states: Vec<Vec<usize>> = mecs.iter().map(|m| m.states.clone()).collect();
        states.sort();
        assert_eq!(states, vec![vec![0, 1], vec![2]]);
        assert!(mecs.iter().all(|m| m.zero_reward));
        let pq = mecs.iter().find(|m| m.states == vec![0, 1]).unwrap();
        assert_eq!(pq.actions, vec![vec![0], vec![0]]);
    }

    #[test]
    fn chain_has_only_sink_mec() {
        let mut m = Rmdp::with_states(3);
        m.add_action(0, ActionRecord::singleton("a", 1.0, vec![1], vec![1.0]));
        m.add_action(1, ActionRecord::singleton("a", 1.0, vec![2], vec![1.0]));
        m.add_action(2, ActionRecord::singleton("a", 0.0, vec![2], vec![1.0]));
        let mecs = mec_decomposition(&m).unwrap();
        assert_eq!(mecs.len(), 1);
        assert_eq!(mecs[0].states, vec![2]);
    }

    #[test]
    fn zero_cycle_values_are_finite() {
        let cfg = SolverConfig::default();
        let inf = infinite_value_states(
            &zero_cycle(),
            &Objective::total_reward(Direction::Max),
            &cfg,
        )
        .unwrap();
        assert_eq!(inf, vec![false; 3]);
    }

    #[test]
    fn reward_loop_is_infinite() {
        let mut m = zero_cycle();
        m.actions[2][0].reward = 1.0;
        let cfg = SolverConfig::default();
        let inf =
            infinite_value_states(&m, &Objective::total_reward(Direction::Max), &cfg).unwrap();
        assert_eq!(inf, vec![true; 3]);
        // the minimizing agent avoids the exit forever
        let inf =
            infinite_value_states(&m, &Objective::total_reward(Direction::Min), &cfg).unwrap();
        assert_eq!(inf, vec![false, false, true]);
    }

    #[test]
    fn random_loop_is_infinite_under_almost_sure_buchi() {
        // state 0 moves to 0 or 1 at random, both loops pay: reward recurs surely
        let mut m = Rmdp::with_states(2);
        m.add_action(
            0,
            ActionRecord::singleton("a", 1.0, vec![0, 1], vec![0.5, 0.5]),
        );
        m.add_action(
            1,
            ActionRecord::singleton("a", 0.0, vec![0, 1], vec![0.5, 0.5]),
        );
        let cfg = SolverConfig::default();
        let inf =
            infinite_value_states(&m, &Objective::total_reward(Direction::Max), &cfg).unwrap();
        assert_eq!(inf, vec![true, true]);
    }

    #[test]
    fn ssp_unreachable_target() {
        let mut m = Rmdp::with_states(3);
        m.add_action(0, ActionRecord::singleton("a", 1.0, vec![1], vec![1.0]));
        m.add_action(1, ActionRecord::singleton("a", 0.0, vec![1], vec![1.0]));
        m.add_action(2, ActionRecord::singleton("a", 0.0, vec![2], vec![1.0]));
        let cfg = SolverConfig::default();
        let inf = infinite_value_states(&m, &Objective::ssp(vec![2]), &cfg).unwrap();
        assert_eq!(inf, vec![true, true, false]);
    }

    #[test]
    fn environment_can_block_target() {
        // an interval that lets the environment drop the target probability to 0
        let mut m = Rmdp::with_states(2);
        m.add_action(
            0,
            ActionRecord::new(
                "a",
                1.0,
                vec![0, 1],
                UncertaintySet::interval(vec![0.5, 0.5], 0.5),
            ),
        );
        m.add_action(1, ActionRecord::singleton("a", 0.0, vec![1], vec![1.0]));
        let cfg = SolverConfig::default();
        let inf = infinite_value_states(&m, &Objective::ssp(vec![1]), &cfg).unwrap();
        assert_eq!(inf, vec![true, false]);
        let narrow = {
            let mut m = m.clone();
            m.actions[0][0].uncertainty = UncertaintySet::interval(vec![0.5, 0.5], 0.2);
            m
        };
        let inf = infinite_value_states(&narrow, &Objective::ssp(vec![1]), &cfg).unwrap();
        assert_eq!(inf, vec![false, false]);
    }

    #[test]
    fn spre_and_apre_examples() {
        let cfg = SolverConfig::default();
        let mut m = Rmdp::with_states(2);
        m.add_action(
            0,
            ActionRecord::new(
                "a",
                0.0,
                vec![0, 1],
                UncertaintySet::interval(vec![0.9, 0.1], 0.2),
            ),
        );
        m.add_action(1, ActionRecord::singleton("a", 0.0, vec![1], vec![1.0]));
        let x = set(&[0], 2);
        let can = spre(&m, &x, Quantifier::Exists, Quantifier::Exists, &cfg).unwrap();
        let must = spre(&m, &x, Quantifier::Exists, Quantifier::Forall, &cfg).unwrap();
        assert_eq!(can, vec![true, false]);
        assert_eq!(must, vec![false, false]);
        let all = vec![true; 2];
        assert_eq!(
            spre(&m, &all, Quantifier::Forall, Quantifier::Forall, &cfg).unwrap(),
            all
        );
        // staying in {0,1} while hitting {1}: the environment may avoid 1 entirely
        let y = set(&[1], 2);
        assert_eq!(
            apre(&m, &all, &y, Quantifier::Exists, Quantifier::Forall, &cfg).unwrap(),
            vec![false, true]
        );
        assert_eq!(
            apre(&m, &all, &y, Quantifier::Exists, Quantifier::Exists, &cfg).unwrap(),
            vec![true, true]
        );
    }

    #[test]
    fn sec_candidate_follows_witness() {
        // p,q share a vertex set {(1,0),(0,1)} over (p,q).
        let mut m = Rmdp::new(vec!["p".into(), "q".into(), "sink".into()], 0);
        let stay = UncertaintySet::PolytopeV {
            vertices: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        };
        m.add_action(0, ActionRecord::new("stay", 0.0, vec![0, 1], stay.clone()));
        m.add_action(0, ActionRecord::singleton("exit", 1.0, vec![2], vec![1.0]));
        m.add_action(1, ActionRecord::new("stay", 0.0, vec![0, 1], stay));
        m.add_action(1, ActionRecord::singleton("exit", 2.0, vec![2], vec![1.0]));
        m.add_action(2, ActionRecord::singleton("loop", 0.0, vec![2], vec![1.0]));
        let cfg = SolverConfig::default();
        let to_p = vec![
            vec![vec![1.0, 0.0], vec![1.0]],
            vec![vec![1.0, 0.0], vec![1.0]],
            vec![vec![1.0]],
        ];
        let excluded = set(&[2], 3);
        let c = sec_candidates(&m, &to_p, &excluded, &cfg).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].states, vec![0]);
        assert_eq!(c[0].actions, vec![vec![0]]);
    }

    #[test]
    fn sccs_are_reverse_topological() {
        let adj = vec![vec![1], vec![2], vec![1]];
        let comps = sccs(&adj);
        assert_eq!(comps, vec![vec![1, 2], vec![0]]);
    }
}
