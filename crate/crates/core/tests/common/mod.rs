//! Random instances shared by the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rmdp::model::{ActionRecord, Norm, Rmdp, UncertaintySet};

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random distribution over `k` slots with every entry at least `floor`.
pub fn distribution(rng: &mut ChaCha8Rng, k: usize, floor: f64) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..1.0)).collect();
    let total: f64 = raw.iter().sum::<f64>().max(1e-12);
    let free = 1.0 - floor * k as f64;
    let mut d: Vec<f64> = raw.iter().map(|r| floor + free * r / total).collect();
    let s: f64 = d.iter().sum();
    d.iter_mut().for_each(|x| *x /= s);
    d
}

/// Distribution that may put zero mass on some (but not all) slots.
fn sparse_distribution(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let mut d = distribution(rng, k, 0.05);
    let keep = rng.gen_range(0..k);
    for (i, x) in d.iter_mut().enumerate() {
        if i != keep && rng.gen_bool(0.3) {
            *x = 0.0;
        }
    }
    let s: f64 = d.iter().sum();
    d.iter_mut().for_each(|x| *x /= s);
    d
}

fn reward(rng: &mut ChaCha8Rng) -> f64 {
    if rng.gen_bool(0.4) {
        0.0
    } else {
        rng.gen_range(1..=20) as f64 / 10.0
    }
}

fn successors(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(rng);
    all.truncate(k);
    all
}

/// Random V-polytope model with at most 8 states, 3 actions and 4 vertices.
/// State 0 is absorbing with reward 0. With `constant`, every vertex is
/// positive on its support.
pub fn random_vrep(rng: &mut ChaCha8Rng, constant: bool) -> Rmdp {
    let n = rng.gen_range(3..=8);
    let mut m = Rmdp::with_states(n);
    m.add_action(0, ActionRecord::singleton("stop", 0.0, vec![0], vec![1.0]));
    for s in 1..n {
        for a in 0..rng.gen_range(1..=3) {
            let k = rng.gen_range(1..=3usize.min(n));
            let mut support = successors(rng, n, k);
            if rng.gen_bool(0.4) && !support.contains(&0) {
                support[0] = 0;
            }
            let vertices: Vec<Vec<f64>> = (0..rng.gen_range(1..=4))
                .map(|_| {
                    if constant || k == 1 {
                        distribution(rng, k, 0.05)
                    } else {
                        sparse_distribution(rng, k)
                    }
                })
                .collect();
            let r = reward(rng);
            m.add_action(
                s,
                ActionRecord::new(
                    &format!("a{a}"),
                    r,
                    support,
                    UncertaintySet::PolytopeV { vertices },
                ),
            );
        }
    }
    m
}

/// Constant-support V-polytope model with at least two closed clusters.
pub fn random_multichain(rng: &mut ChaCha8Rng) -> Rmdp {
    let clusters = rng.gen_range(2..=3);
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    for _ in 0..clusters {
        let size = rng.gen_range(1..=2);
        groups.push((next..next + size).collect());
        next += size;
    }
    let transient: Vec<usize> = (next..next + rng.gen_range(1..=2)).collect();
    let n = next + transient.len();
    let mut m = Rmdp::with_states(n);
    let vrep = |rng: &mut ChaCha8Rng, k: usize| UncertaintySet::PolytopeV {
        vertices: (0..rng.gen_range(1..=3))
            .map(|_| distribution(rng, k, 0.05))
            .collect(),
    };
    for g in &groups {
        for &s in g {
            for a in 0..rng.gen_range(1..=2) {
                let r = rng.gen_range(0..=10) as f64 / 2.0;
                let set = vrep(rng, g.len());
                m.add_action(s, ActionRecord::new(&format!("a{a}"), r, g.clone(), set));
            }
        }
    }
    for &s in &transient {
        for a in 0..rng.gen_range(1..=3) {
            let k = rng.gen_range(2..=3usize.min(n));
            let support = successors(rng, n, k);
            let r = rng.gen_range(0..=10) as f64 / 2.0;
            let set = vrep(rng, k);
            m.add_action(s, ActionRecord::new(&format!("a{a}"), r, support, set));
        }
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetFamily {
    Interval,
    L1,
    WeightedL1,
    WeightedLInf,
    L2,
    L3,
    PolytopeH,
    PolytopeV,
}

impl SetFamily {
    pub const ALL: [SetFamily; 8] = [
        SetFamily::Interval,
        SetFamily::L1,
        SetFamily::WeightedL1,
        SetFamily::WeightedLInf,
        SetFamily::L2,
        SetFamily::L3,
        SetFamily::PolytopeH,
        SetFamily::PolytopeV,
    ];

    pub fn is_smooth(self) -> bool {
        matches!(self, SetFamily::L2 | SetFamily::L3)
    }
}

/// Random non-empty set of the family over `k` slots.
pub fn random_set(rng: &mut ChaCha8Rng, family: SetFamily, k: usize) -> UncertaintySet {
    random_set_and_point(rng, family, k).0
}

/// Random set together with a distribution inside it.
pub fn random_set_and_point(
    rng: &mut ChaCha8Rng,
    family: SetFamily,
    k: usize,
) -> (UncertaintySet, Vec<f64>) {
    let center = distribution(rng, k, 0.0);
    let radius = rng.gen_range(0.0..0.5);
    let weights = |rng: &mut ChaCha8Rng| {
        (0..k)
            .map(|_| rng.gen_range(0.5..2.0))
            .collect::<Vec<f64>>()
    };
    let ball = |norm, weights| UncertaintySet::Ball {
        norm,
        center: center.clone(),
        radius,
        weights,
    };
    let set = match family {
        SetFamily::Interval => ball(Norm::LInf, vec![1.0; k]),
        SetFamily::L1 => ball(Norm::L1, vec![1.0; k]),
        SetFamily::WeightedL1 => ball(Norm::L1, weights(rng)),
        SetFamily::WeightedLInf => ball(Norm::LInf, weights(rng)),
        SetFamily::L2 => ball(Norm::L2, weights(rng)),
        SetFamily::L3 => ball(Norm::Lp(3), weights(rng)),
        SetFamily::PolytopeV => UncertaintySet::PolytopeV {
            vertices: (0..rng.gen_range(1..=5))
                .map(|_| distribution(rng, k, 0.0))
                .collect(),
        },
        SetFamily::PolytopeH => {
            // constraints a x + b <= 0 that keep the center feasible
            let rows = rng.gen_range(1..=4);
            let mut a = Vec::new();
            let mut b = Vec::new();
            for _ in 0..rows {
                let row: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let at: f64 = row.iter().zip(&center).map(|(x, y)| x * y).sum();
                b.push(-at - rng.gen_range(0.0..0.2));
                a.push(row);
            }
            UncertaintySet::PolytopeH { a, b }
        }
    };
    let point = match &set {
        UncertaintySet::PolytopeV { vertices } => vertices[0].clone(),
        _ => center,
    };
    (set, point)
}
