//! Value-iteration solvers.
//!
//! Every solver returns a [`SolveReport`] whose bounds are indexed by the
//! states of the model that was passed in, whatever internal rewriting
//! happened.

mod bvi;
mod deflate;
mod discounted;
mod init;
mod lra;
mod policy;
mod sweep;
mod vi;

pub use bvi::solve_bvi_tr;
pub use deflate::solve_bvi_deflate;
pub use discounted::solve_discounted;
pub use init::{init_tr, InitReport};
pub use lra::solve_bvi_lra;
pub use policy::{extract_policies, induced_chain, InducedChain};
pub use sweep::{bellman_sweep, SweepStats, Update};
pub use vi::solve_vi;

use std::fmt;

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::model::{self, BoundsPair, Direction, Objective, Payoff, PolicyPair, Rmdp, TrSemantics};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// Best-effort value iteration without a stopping guarantee.
    Vi,
    /// Bounded value iteration on the collapsed model (constant support).
    Bvi,
    /// Bounded value iteration with deflation (polytopic sets).
    Deflate,
    /// Discounted value iteration with a-priori bounds.
    Discounted,
    /// Pick the strongest applicable algorithm.
    Auto,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Vi => "vi",
            Algorithm::Bvi => "bvi",
            Algorithm::Deflate => "deflate",
            Algorithm::Discounted => "discounted",
            Algorithm::Auto => "auto",
        })
    }
}

/// Outcome of a solver run.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub bounds: BoundsPair,
    /// Agent choices and environment witnesses, when extraction applies.
    pub policies: Option<PolicyPair>,
    pub iterations: u64,
    pub converged: bool,
    /// `(iteration, max gap)` after every sweep, if tracing is on.
    pub trace: Vec<(u64, f64)>,
    /// Full bounds after every sweep, if `record_bounds` is on.
    pub bound_trace: Vec<BoundsPair>,
    /// Soundness caveats and notes (p_min floor used, algorithm fallback, ...).
    pub diagnostics: Vec<String>,
    pub algorithm: Algorithm,
}

impl SolveReport {
    pub(crate) fn new(bounds: BoundsPair, algorithm: Algorithm) -> Self {
        SolveReport {
            bounds,
            policies: None,
            iterations: 0,
            converged: false,
            trace: Vec::new(),
            bound_trace: Vec::new(),
            diagnostics: Vec::new(),
            algorithm,
        }
    }

    pub fn lower(&self, s: usize) -> f64 {
        self.bounds.lower[s]
    }

    pub fn upper(&self, s: usize) -> f64 {
        self.bounds.upper[s]
    }

    pub fn max_gap(&self) -> f64 {
        self.bounds.max_gap()
    }
}

/// Gap used by the stopping rule.
pub(crate) fn stop_gap(lower: &[f64], upper: &[f64], cfg: &SolverConfig) -> f64 {
    lower
        .iter()
        .zip(upper)
        .map(|(&l, &u)| {
            let g = model::extended_gap(l, u);
            if cfg.relative_gap {
                g / l.abs().max(1.0)
            } else {
                g
            }
        })
        .fold(0.0, f64::max)
}

/// Collects traces in original-state coordinates.
pub(crate) struct Recorder {
    pub trace: Vec<(u64, f64)>,
    pub bounds: Vec<BoundsPair>,
    trace_on: bool,
    bounds_on: bool,
}

impl Recorder {
    pub fn new(cfg: &SolverConfig) -> Self {
        Recorder {
            trace: Vec::new(),
            bounds: Vec::new(),
            trace_on: cfg.trace || cfg.record_bounds,
            bounds_on: cfg.record_bounds,
        }
    }

    pub fn active(&self) -> bool {
        self.trace_on || self.bounds_on
    }

    pub fn record(&mut self, iteration: u64, lower: Vec<f64>, upper: Vec<f64>) {
        let mut b = BoundsPair::new(lower, upper);
        b.iteration = iteration;
        if self.trace_on {
            self.trace.push((iteration, b.max_gap()));
        }
        if self.bounds_on {
            self.bounds.push(b);
        }
    }

    pub fn finish(self, report: &mut SolveReport) {
        report.trace = self.trace;
        report.bound_trace = self.bounds;
    }
}

/// Algorithm chosen by [`Algorithm::Auto`], with a caveat when no guarantee applies.
pub fn select_algorithm(model: &Rmdp, objective: &Objective) -> (Algorithm, Option<String>) {
    if let Payoff::Discounted { .. } = objective.payoff {
        return (Algorithm::Discounted, None);
    }
    if model::check_constant_support(model).all {
        return (Algorithm::Bvi, None);
    }
    if model.is_polytopic() && deflate_supports(objective) {
        return (Algorithm::Deflate, None);
    }
    (
        Algorithm::Vi,
        Some("no sound stopping criterion for this model and objective; value iteration result is best effort".into()),
    )
}

pub(crate) fn deflate_supports(objective: &Objective) -> bool {
    if !objective.is_total_reward() {
        return false;
    }
    matches!(
        (objective.direction, objective.effective_semantics()),
        (Direction::Max, TrSemantics::Cumulative) | (Direction::Min, TrSemantics::Infinite)
    )
}

/// Runs the requested algorithm, validating the model first.
pub fn solve(
    model: &Rmdp,
    objective: &Objective,
    algorithm: Algorithm,
    epsilon: f64,
    cfg: &SolverConfig,
) -> Result<SolveReport> {
    let diagnostics = model::validate(model);
    if !diagnostics.is_empty() {
        let text: Vec<String> = diagnostics.iter().map(|d| d.to_string()).collect();
        return Err(Error::Validation(text.join("\n")));
    }
    let (algorithm, caveat) = match algorithm {
        Algorithm::Auto => select_algorithm(model, objective),
        other => (other, None),
    };
    let mut report = match algorithm {
        Algorithm::Vi => solve_vi(model, objective, epsilon, cfg),
        Algorithm::Bvi => match objective.payoff {
            Payoff::LongRunAverage => solve_bvi_lra(model, objective.direction, epsilon, cfg),
            Payoff::Discounted { gamma } => {
                solve_discounted(model, gamma, objective.direction, epsilon, cfg)
            }
            _ => solve_bvi_tr(model, objective, epsilon, cfg),
        },
        Algorithm::Deflate => solve_bvi_deflate(model, objective, epsilon, cfg),
        Algorithm::Discounted => match objective.payoff {
            Payoff::Discounted { gamma } => {
                solve_discounted(model, gamma, objective.direction, epsilon, cfg)
            }
            _ => Err(Error::UnsupportedObjective(
                "discounted algorithm needs a discounted objective".into(),
            )),
        },
        Algorithm::Auto => unreachable!("resolved above"),
    }?;
    if let Some(c) = caveat {
        report.diagnostics.insert(0, c);
    }
    Ok(report)
}
