//! Deterministic benchmark models with norm-ball uncertainty.
//!
//! Radii are shrunk per action where needed so that every member of a ball
//! keeps all nominal successors positive (constant support).

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::io::ModelDocument;
use crate::model::{ActionRecord, Norm, Rmdp, StateId, UncertaintySet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Frozen-lake-like `size x size` grid.
    Grid,
    /// Contamination-style chain of `size` states.
    Chain,
    /// `size` states with few random successors each.
    RandomSparse,
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "grid" => Ok(Family::Grid),
            "chain" => Ok(Family::Chain),
            "random-sparse" => Ok(Family::RandomSparse),
            other => Err(Error::Usage(format!(
                "unknown family {other:?} (grid, chain, random-sparse)"
            ))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Grid => "grid",
            Family::Chain => "chain",
            Family::RandomSparse => "random-sparse",
        })
    }
}

/// Generated model and the targets its family suggests.
#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub model: Rmdp,
    pub targets: Option<Vec<StateId>>,
}

/// Largest radius that keeps every coordinate of the ball positive.
pub fn support_preserving_radius(center: &[f64], weights: &[f64], radius: f64) -> f64 {
    let slack = center
        .iter()
        .zip(weights)
        .map(|(c, w)| c * w)
        .fold(f64::INFINITY, f64::min);
    radius.min(0.5 * slack)
}

/// Merges duplicate successors and builds the ball action.
fn ball_action(
    label: &str,
    reward: f64,
    succ: &[(StateId, f64)],
    norm: Norm,
    radius: f64,
) -> ActionRecord {
    let mut merged: Vec<(StateId, f64)> = Vec::new();
    for &(t, p) in succ {
        if p <= 0.0 {
            continue;
        }
        match merged.iter_mut().find(|(u, _)| *u == t) {
            Some(e) => e.1 += p,
            None => merged.push((t, p)),
        }
    }
    let support: Vec<StateId> = merged.iter().map(|e| e.0).collect();
    let center: Vec<f64> = merged.iter().map(|e| e.1).collect();
    if support.len() == 1 {
        return ActionRecord::singleton(label, reward, support, vec![1.0]);
    }
    let weights = vec![1.0; center.len()];
    let r = support_preserving_radius(&center, &weights, radius);
    ActionRecord::new(
        label,
        reward,
        support,
        UncertaintySet::Ball {
            norm,
            center,
            radius: r,
            weights,
        },
    )
}

pub fn generate_model(
    family: Family,
    size: usize,
    radius: f64,
    seed: u64,
    norm: Norm,
) -> Generated {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match family {
        Family::Grid => grid(size.max(2), radius, norm, &mut rng),
        Family::Chain => chain(size.max(2), radius, norm),
        Family::RandomSparse => random_sparse(size.max(1), radius, norm, &mut rng),
    }
}

/// Generates an L1-ball model document.
pub fn generate(family: Family, size: usize, radius: f64, seed: u64) -> ModelDocument {
    let g = generate_model(family, size, radius, seed, Norm::L1);
    ModelDocument::from_model(&g.model, g.targets.as_deref())
}

/// Start top-left, goal bottom-right, holes at random (never on the start or
/// goal) plus the lake corner. A move goes where intended w.p. 0.75, slips
/// sideways w.p. 0.1 each and breaks through the ice into the lake w.p. 0.05.
/// The goal's only action collects reward 1 and ends in the lake.
fn grid(side: usize, radius: f64, norm: Norm, rng: &mut ChaCha8Rng) -> Generated {
    let n = side * side;
    let id = |r: usize, c: usize| r * side + c;
    let start = id(0, 0);
    let goal = id(side - 1, side - 1);
    let lake = id(side - 1, 0);
    let mut hole = vec![false; n];
    for (s, h) in hole.iter_mut().enumerate() {
        *h = s != start && s != goal && rng.gen::<f64>() < 0.1;
    }
    hole[lake] = true;
    let names = (0..n)
        .map(|s| format!("c{}_{}", s / side, s % side))
        .collect();
    let mut m = Rmdp::new(names, start);
    let step = |r: usize, c: usize, d: usize| -> StateId {
        let (dr, dc): (isize, isize) = [(-1, 0), (0, 1), (1, 0), (0, -1)][d];
        let (nr, nc) = (r as isize + dr, c as isize + dc);
        if nr < 0 || nc < 0 || nr >= side as isize || nc >= side as isize {
            id(r, c)
        } else {
            id(nr as usize, nc as usize)
        }
    };
    for s in 0..n {
        if s == goal {
            m.add_action(
                s,
                ActionRecord::singleton("collect", 1.0, vec![lake], vec![1.0]),
            );
        } else if hole[s] {
            m.add_action(s, ActionRecord::singleton("stuck", 0.0, vec![s], vec![1.0]));
        } else {
            let (r, c) = (s / side, s % side);
            for (d, label) in ["north", "east", "south", "west"].iter().enumerate() {
                let succ = [
                    (step(r, c, d), 0.75),
                    (step(r, c, (d + 1) % 4), 0.1),
                    (step(r, c, (d + 3) % 4), 0.1),
                    (lake, 0.05),
                ];
                m.add_action(s, ball_action(label, 0.0, &succ, norm, radius));
            }
        }
    }
    Generated {
        model: m,
        targets: None,
    }
}

/// Contamination-style chain: advancing is cheap but may slide back, cleaning
/// is expensive but reliable. The last state is the clean target.
fn chain(n: usize, radius: f64, norm: Norm) -> Generated {
    let names = (0..n).map(|i| format!("x{i}")).collect();
    let mut m = Rmdp::new(names, 0);
    for i in 0..n - 1 {
        let back = i.saturating_sub(1);
        m.add_action(
            i,
            ball_action(
                "advance",
                1.0,
                &[(i + 1, 0.6), (i, 0.3), (back, 0.1)],
                norm,
                radius,
            ),
        );
        m.add_action(
            i,
            ball_action("clean", 2.0, &[(i + 1, 0.9), (i, 0.1)], norm, radius),
        );
    }
    m.add_action(
        n - 1,
        ActionRecord::singleton("done", 0.0, vec![n - 1], vec![1.0]),
    );
    Generated {
        model: m,
        targets: Some(vec![n - 1]),
    }
}

/// One to three actions per state, two to four successors per action, and
/// centers bounded away from 0. State 0 is absorbing with reward 0.
fn random_sparse(n: usize, radius: f64, norm: Norm, rng: &mut ChaCha8Rng) -> Generated {
    let names = (0..n).map(|i| format!("s{i}")).collect();
    let mut m = Rmdp::new(names, n.min(2) - 1);
    m.add_action(0, ActionRecord::singleton("stop", 0.0, vec![0], vec![1.0]));
    for s in 1..n {
        for a in 0..rng.gen_range(1..=3) {
            let k = rng.gen_range(2..=4usize).min(n);
            let mut succ: Vec<StateId> = Vec::with_capacity(k);
            while succ.len() < k {
                let t = rng.gen_range(0..n);
                if !succ.contains(&t) {
                    succ.push(t);
                }
            }
            let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(1.0..4.0)).collect();
            let total: f64 = raw.iter().sum();
            let dist: Vec<(StateId, f64)> = succ
                .iter()
                .zip(&raw)
                .map(|(&t, &w)| (t, w / total))
                .collect();
            let reward = if rng.gen_bool(0.3) {
                0.0
            } else {
                (rng.gen_range(0.0..1.0f64) * 100.0).round() / 100.0
            };
            m.add_action(
                s,
                ball_action(&format!("a{a}"), reward, &dist, norm, radius),
            );
        }
    }
    Generated {
        model: m,
        targets: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{check_constant_support, validate};

    #[test]
    fn grid_contract() {
        let g = generate_model(Family::Grid, 10, 0.05, 7, Norm::L1);
        assert_eq!(g.model.num_states(), 100);
        assert!(validate(&g.model).is_empty());
        assert!(check_constant_support(&g.model).all);
    }

    #[test]
    fn chain_and_sparse_are_valid() {
        for family in [Family::Chain, Family::RandomSparse] {
            for norm in [Norm::L1, Norm::L2, Norm::LInf] {
                let g = generate_model(family, 50, 0.2, 3, norm);
                assert_eq!(g.model.num_states(), 50);
                assert!(validate(&g.model).is_empty(), "{family}");
                assert!(check_constant_support(&g.model).all, "{family} {norm:?}");
            }
        }
    }

    #[test]
    fn deterministic() {
        let a = serde_json::to_string(&generate(Family::RandomSparse, 30, 0.1, 42)).unwrap();
        let b = serde_json::to_string(&generate(Family::RandomSparse, 30, 0.1, 42)).unwrap();
        assert_eq!(a, b);
    }
}
