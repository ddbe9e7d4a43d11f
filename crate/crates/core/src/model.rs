//! Robust MDP data model, objectives and structural predicates.
//!
//! A model is a list of states, each with a non-empty list of actions. Every
//! action declares a successor list (its *support slots*) and an uncertainty
//! set whose members are distributions over exactly those slots. Internally
//! produced models (see [`crate::transform`]) may map several slots to the same
//! state; user models are rejected by [`validate`] if they do.

use std::fmt;

use crate::config::SolverConfig;
use crate::uncertainty::{self, OptDirection};

/// Sum-to-one tolerance for user-supplied distributions.
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-9;

pub type StateId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    L1,
    L2,
    /// Weighted Lp norm for an integer exponent `p >= 1`.
    Lp(u32),
    LInf,
}

impl Norm {
    /// Exponent of the norm, `None` for the maximum norm.
    pub fn exponent(self) -> Option<u32> {
        match self {
            Norm::L1 => Some(1),
            Norm::L2 => Some(2),
            Norm::Lp(p) => Some(p),
            Norm::LInf => None,
        }
    }

    pub fn is_polyhedral(self) -> bool {
        matches!(self.exponent(), Some(1) | None)
    }
}

/// Admissible successor distributions of one state-action pair.
///
/// All vectors are indexed by the action's support slots.
#[derive(Debug, Clone, PartialEq)]
pub enum UncertaintySet {
    Singleton {
        dist: Vec<f64>,
    },
    /// `{ x in simplex : ||x - center||_w <= radius }` with the weighted norm
    /// `(sum_i (w_i |x_i - c_i|)^p)^(1/p)`, resp. `max_i w_i |x_i - c_i|`.
    Ball {
        norm: Norm,
        center: Vec<f64>,
        radius: f64,
        weights: Vec<f64>,
    },
    /// `{ x in simplex : a x + b <= 0 }`.
    PolytopeH {
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
    },
    /// Convex hull of the listed distributions.
    PolytopeV {
        vertices: Vec<Vec<f64>>,
    },
}

impl UncertaintySet {
    /// Interval set `[c - r/w, c + r/w]` with unit weights.
    pub fn interval(center: Vec<f64>, radius: f64) -> Self {
        let weights = vec![1.0; center.len()];
        UncertaintySet::Ball {
            norm: Norm::LInf,
            center,
            radius,
            weights,
        }
    }

    pub fn ball(norm: Norm, center: Vec<f64>, radius: f64) -> Self {
        let weights = vec![1.0; center.len()];
        UncertaintySet::Ball {
            norm,
            center,
            radius,
            weights,
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            UncertaintySet::Singleton { dist } => dist.len(),
            UncertaintySet::Ball { center, .. } => center.len(),
            UncertaintySet::PolytopeH { a, b } => a.first().map_or(b.len().min(0), Vec::len),
            UncertaintySet::PolytopeV { vertices } => vertices.first().map_or(0, Vec::len),
        }
    }

    pub fn is_polytopic(&self) -> bool {
        match self {
            UncertaintySet::Ball { norm, .. } => norm.is_polyhedral(),
            _ => true,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            UncertaintySet::Singleton { .. } => "singleton",
            UncertaintySet::Ball { .. } => "ball",
            UncertaintySet::PolytopeH { .. } => "polytope-h",
            UncertaintySet::PolytopeV { .. } => "polytope-v",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActionRecord {
    pub label: String,
    pub reward: f64,
    /// Successor state of every slot of the uncertainty set.
    pub support: Vec<StateId>,
    pub uncertainty: UncertaintySet,
}

impl ActionRecord {
    /// Deterministic action with a point distribution.
    pub fn singleton(label: &str, reward: f64, support: Vec<StateId>, dist: Vec<f64>) -> Self {
        ActionRecord {
            label: label.to_string(),
            reward,
            support,
            uncertainty: UncertaintySet::Singleton { dist },
        }
    }

    pub fn new(label: &str, reward: f64, support: Vec<StateId>, set: UncertaintySet) -> Self {
        ActionRecord {
            label: label.to_string(),
            reward,
            support,
            uncertainty: set,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rmdp {
    pub state_names: Vec<String>,
    pub initial: StateId,
    pub actions: Vec<Vec<ActionRecord>>,
}

impl Rmdp {
    pub fn new(state_names: Vec<String>, initial: StateId) -> Self {
        let n = state_names.len();
        Rmdp {
            state_names,
            initial,
            actions: vec![Vec::new(); n],
        }
    }

    /// Model with states named `s0 .. s{n-1}`.
    pub fn with_states(n: usize) -> Self {
        Rmdp::new((0..n).map(|i| format!("s{i}")).collect(), 0)
    }

    pub fn add_action(&mut self, state: StateId, action: ActionRecord) -> &mut Self {
        self.actions[state].push(action);
        self
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn num_actions(&self) -> usize {
        self.actions.iter().map(Vec::len).sum()
    }

    pub fn state_index(&self, name: &str) -> Option<StateId> {
        self.state_names.iter().position(|n| n == name)
    }

    pub fn max_reward(&self) -> f64 {
        self.actions
            .iter()
            .flatten()
            .map(|a| a.reward)
            .fold(0.0, f64::max)
    }

    pub fn is_polytopic(&self) -> bool {
        check_polytopic(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Payoff {
    TotalReward,
    StochasticShortestPath,
    LongRunAverage,
    Discounted { gamma: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Max,
    Min,
}

impl Direction {
    pub fn opposite(self) -> Direction {
        match self {
            Direction::Max => Direction::Min,
            Direction::Min => Direction::Max,
        }
    }

    /// `true` if `a` is strictly better than `b` for this direction.
    pub fn better(self, a: f64, b: f64) -> bool {
        match self {
            Direction::Max => a > b,
            Direction::Min => a < b,
        }
    }

    pub fn as_opt(self) -> OptDirection {
        match self {
            Direction::Max => OptDirection::Max,
            Direction::Min => OptDirection::Min,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Max => "max",
            Direction::Min => "min",
        })
    }
}

/// Payoff of paths that never reach a target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrSemantics {
    /// Paths keep whatever reward they accumulate.
    Cumulative,
    /// Paths missing the target set are worth `+inf`.
    Infinite,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Objective {
    pub payoff: Payoff,
    pub direction: Direction,
    pub semantics: TrSemantics,
    pub targets: Vec<StateId>,
}

impl Objective {
    pub fn total_reward(direction: Direction) -> Self {
        Objective {
            payoff: Payoff::TotalReward,
            direction,
            semantics: TrSemantics::Cumulative,
            targets: Vec::new(),
        }
    }

    /// Total reward where missing the targets costs `+inf`.
    pub fn reach_total_reward(direction: Direction, targets: Vec<StateId>) -> Self {
        Objective {
            payoff: Payoff::TotalReward,
            direction,
            semantics: TrSemantics::Infinite,
            targets,
        }
    }

    pub fn ssp(targets: Vec<StateId>) -> Self {
        Objective {
            payoff: Payoff::StochasticShortestPath,
            direction: Direction::Min,
            semantics: TrSemantics::Infinite,
            targets,
        }
    }

    pub fn long_run_average(direction: Direction) -> Self {
        Objective {
            payoff: Payoff::LongRunAverage,
            direction,
            semantics: TrSemantics::Cumulative,
            targets: Vec::new(),
        }
    }

    pub fn discounted(direction: Direction, gamma: f64) -> Self {
        Objective {
            payoff: Payoff::Discounted { gamma },
            direction,
            semantics: TrSemantics::Cumulative,
            targets: Vec::new(),
        }
    }

    pub fn is_total_reward(&self) -> bool {
        matches!(
            self.payoff,
            Payoff::TotalReward | Payoff::StochasticShortestPath
        )
    }

    /// SSP always uses the `+inf` convention.
    pub fn effective_semantics(&self) -> TrSemantics {
        match self.payoff {
            Payoff::StochasticShortestPath => TrSemantics::Infinite,
            _ => self.semantics,
        }
    }

    /// Target mask; empty unless targets are meaningful for this objective.
    pub fn target_mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        if self.is_total_reward() && self.effective_semantics() == TrSemantics::Infinite {
            for &t in &self.targets {
                if t < n {
                    mask[t] = true;
                }
            }
        }
        mask
    }
}

/// Per-state lower and upper value bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsPair {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub iteration: u64,
}

impl BoundsPair {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        BoundsPair {
            lower,
            upper,
            iteration: 0,
        }
    }

    /// `U(s) - L(s)` with `inf - inf = 0`.
    pub fn gap_at(&self, s: StateId) -> f64 {
        extended_gap(self.lower[s], self.upper[s])
    }

    pub fn max_gap(&self) -> f64 {
        (0..self.lower.len())
            .map(|s| self.gap_at(s))
            .fold(0.0, f64::max)
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    /// Checks `0 <= lower <= upper` and the absence of NaN.
    pub fn is_consistent(&self) -> bool {
        self.lower
            .iter()
            .zip(&self.upper)
            .all(|(&l, &u)| !l.is_nan() && !u.is_nan() && l >= 0.0 && l <= u)
    }
}

pub(crate) fn extended_gap(lower: f64, upper: f64) -> f64 {
    if lower.is_infinite() && upper.is_infinite() {
        0.0
    } else {
        upper - lower
    }
}

/// Memoryless agent choice and per-pair environment witnesses.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyPair {
    pub agent: Vec<usize>,
    /// `environment[s][a]` is a member of the set of action `a` at state `s`,
    /// indexed by its support slots.
    pub environment: Vec<Vec<Vec<f64>>>,
}

/// One violated model invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub state: Option<StateId>,
    pub action: Option<usize>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.state, self.action) {
            (Some(s), Some(a)) => write!(f, "state {s}, action {a}: {}", self.message),
            (Some(s), None) => write!(f, "state {s}: {}", self.message),
            _ => f.write_str(&self.message),
        }
    }
}

fn is_distribution(v: &[f64]) -> bool {
    v.iter()
        .all(|&x| x.is_finite() && x >= -DISTRIBUTION_TOLERANCE)
        && (v.iter().sum::<f64>() - 1.0).abs() <= DISTRIBUTION_TOLERANCE
}

/// Checks every structural invariant; the result is empty iff the model is valid.
pub fn validate(model: &Rmdp) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let n = model.num_states();
    let mut push = |state: Option<usize>, action: Option<usize>, message: String| {
        out.push(Diagnostic {
            state,
            action,
            message,
        })
    };
    if n == 0 {
        push(None, None, "model has no states".into());
        return out;
    }
    if model.actions.len() != n {
        push(
            None,
            None,
            "action table does not match the state count".into(),
        );
        return out;
    }
    if model.initial >= n {
        push(
            None,
            None,
            format!("initial state {} out of range", model.initial),
        );
    }
    for (s, actions) in model.actions.iter().enumerate() {
        if actions.is_empty() {
            push(Some(s), None, "state has no actions".into());
        }
        for (ai, action) in actions.iter().enumerate() {
            let at = |m: String| (Some(s), Some(ai), m);
            let mut local = Vec::new();
            if !(action.reward.is_finite() && action.reward >= 0.0) {
                local.push(at(format!(
                    "reward {} is not a non-negative number",
                    action.reward
                )));
            }
            if action.support.is_empty() {
                local.push(at("empty successor list".into()));
            }
            let mut seen = vec![false; n];
            for &t in &action.support {
                if t >= n {
                    local.push(at(format!("successor {t} out of range")));
                } else if seen[t] {
                    local.push(at(format!("duplicate successor {t}")));
                } else {
                    seen[t] = true;
                }
            }
            let k = action.support.len();
            for message in set_diagnostics(&action.uncertainty, k) {
                local.push(at(message));
            }
            for (st, ac, m) in local {
                push(st, ac, m);
            }
        }
    }
    out
}

fn set_diagnostics(set: &UncertaintySet, k: usize) -> Vec<String> {
    let mut out = Vec::new();
    match set {
        UncertaintySet::Singleton { dist } => {
            if dist.len() != k {
                out.push(format!(
                    "distribution has {} entries, expected {k}",
                    dist.len()
                ));
            } else if !is_distribution(dist) {
                out.push("singleton is not a distribution".into());
            }
        }
        UncertaintySet::Ball {
            norm,
            center,
            radius,
            weights,
        } => {
            if center.len() != k || weights.len() != k {
                out.push(format!("center/weights length mismatch, expected {k}"));
                return out;
            }
            if !is_distribution(center) {
                out.push("center not a distribution".into());
            }
            if !(radius.is_finite() && *radius >= 0.0) {
                out.push(format!("radius {radius} must be a non-negative number"));
            }
            if weights.iter().any(|&w| !(w.is_finite() && w > 0.0)) {
                out.push("weights must be positive".into());
            }
            if let Norm::Lp(0) = norm {
                out.push("norm exponent must be at least 1".into());
            }
        }
        UncertaintySet::PolytopeV { vertices } => {
            if vertices.is_empty() {
                out.push("vertex list is empty".into());
            }
            for (i, v) in vertices.iter().enumerate() {
                if v.len() != k {
                    out.push(format!("vertex {i} has {} entries, expected {k}", v.len()));
                } else if !is_distribution(v) {
                    out.push(format!("vertex {i} is not a distribution"));
                }
            }
        }
        UncertaintySet::PolytopeH { a, b } => {
            if a.len() != b.len() {
                out.push("constraint matrix and offset differ in length".into());
                return out;
            }
            if a.iter().any(|row| row.len() != k) {
                out.push(format!("constraint rows must have {k} entries"));
                return out;
            }
            if a.iter().flatten().chain(b).any(|x| !x.is_finite()) {
                out.push("constraints must be finite".into());
                return out;
            }
            if !crate::lp::polytope_h_feasible(a, b, &SolverConfig::default()) {
                out.push("empty feasible region".into());
            }
        }
    }
    out
}

/// Per-action and global result of the constant-support check.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportReport {
    pub per_action: Vec<Vec<bool>>,
    pub all: bool,
}

/// Whether every member of every set keeps all declared successors positive.
///
/// Decided per slot by minimizing that coordinate over the set.
pub fn check_constant_support(model: &Rmdp) -> SupportReport {
    let config = SolverConfig::default();
    let per_action: Vec<Vec<bool>> = model
        .actions
        .iter()
        .map(|acts| {
            acts.iter()
                .map(|a| set_has_constant_support(&a.uncertainty, &config))
                .collect()
        })
        .collect();
    let all = per_action.iter().flatten().all(|&b| b);
    SupportReport { per_action, all }
}

pub(crate) fn set_has_constant_support(set: &UncertaintySet, config: &SolverConfig) -> bool {
    match set {
        UncertaintySet::Singleton { dist } => dist.iter().all(|&p| p > 0.0),
        UncertaintySet::PolytopeV { vertices } => {
            vertices.iter().all(|v| v.iter().all(|&p| p > 0.0))
        }
        _ => match uncertainty::coordinate_minima(set, config) {
            Ok(minima) => {
                let threshold = match set {
                    UncertaintySet::PolytopeH { .. } => config.lp_tolerance,
                    _ => 0.0,
                };
                minima.iter().all(|&m| m > threshold)
            }
            Err(_) => false,
        },
    }
}

/// `true` iff every set is a singleton, an L1/L-inf ball or a polytope.
pub fn check_polytopic(model: &Rmdp) -> bool {
    model
        .actions
        .iter()
        .flatten()
        .all(|a| a.uncertainty.is_polytopic())
}
