//! Brute-force inner optimization.
//!
//! Polytopic sets are solved as exact rational LPs. Lp balls (`p >= 2`) take
//! the best of random boundary samples and an enumeration of stationary points
//! over all clamped coordinate subsets.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lp::Cmp;
use crate::model::UncertaintySet;
use crate::uncertainty::{ball_distance, OptDirection};

use super::simplex::{DenseLp, DenseOutcome, Scalar};

/// Largest support the oracle accepts.
pub const MAX_SUCCESSORS: usize = 6;
/// Default number of random samples for Lp balls.
pub const DEFAULT_SAMPLES: usize = 1_000_000;

type Q = BigRational;

fn q(x: f64) -> Q {
    Q::from_f64(x)
}

/// `opt_{x in set} values . x`, computed independently of the production path.
pub fn brute_force_inner(set: &UncertaintySet, values: &[f64], dir: OptDirection) -> Result<f64> {
    brute_force_inner_with(set, values, dir, DEFAULT_SAMPLES, 0)
}

/// As [`brute_force_inner`] with an explicit sample budget and seed for Lp balls.
pub fn brute_force_inner_with(
    set: &UncertaintySet,
    values: &[f64],
    dir: OptDirection,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let k = set.dimension();
    if k > MAX_SUCCESSORS {
        return Err(Error::TooLarge(format!(
            "{k} successors (limit {MAX_SUCCESSORS})"
        )));
    }
    if values.len() != k || values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NumericalFailure(
            "oracle needs one finite value per slot".into(),
        ));
    }
    // everything below maximizes
    let v: Vec<f64> = match dir {
        OptDirection::Max => values.to_vec(),
        OptDirection::Min => values.iter().map(|x| -x).collect(),
    };
    let best = match set {
        UncertaintySet::Singleton { dist } => exact_dot(&v, dist),
        UncertaintySet::Ball {
            norm,
            center,
            radius,
            weights,
        } => match norm.exponent() {
            Some(p) if p >= 2 => {
                let sampled = sample_max(center, *radius, weights, p, &v, samples, seed);
                let stationary = kkt_max(center, *radius, weights, p, &v);
                match (sampled, stationary) {
                    (Some(a), Some(b)) => a.max(b),
                    (a, b) => a
                        .or(b)
                        .ok_or_else(|| Error::DegenerateSet("empty ball".into()))?,
                }
            }
            _ => rational_lp(polyhedral_program(set, &v))?,
        },
        _ => rational_lp(polyhedral_program(set, &v))?,
    };
    Ok(match dir {
        OptDirection::Max => best,
        OptDirection::Min => -best,
    })
}

fn exact_dot(v: &[f64], x: &[f64]) -> f64 {
    v.iter()
        .zip(x)
        .fold(Q::zero(), |acc, (a, b)| acc + q(*a) * q(*b))
        .to_f64()
}

fn rational_lp(lp: DenseLp<Q>) -> Result<f64> {
    match lp.solve() {
        DenseOutcome::Optimal { value, .. } => Ok(value.to_f64()),
        DenseOutcome::Infeasible => Err(Error::DegenerateSet("empty uncertainty set".into())),
        DenseOutcome::Unbounded => Err(Error::NumericalFailure("unbounded oracle LP".into())),
    }
}

/// Maximize `v . x` over a polyhedral set as an LP in exact arithmetic.
fn polyhedral_program(set: &UncertaintySet, v: &[f64]) -> DenseLp<Q> {
    let k = set.dimension();
    let simplex_row = |width: usize| {
        let mut row = vec![Q::zero(); width];
        row[..k].iter_mut().for_each(|c| *c = Q::one());
        row
    };
    match set {
        UncertaintySet::PolytopeV { vertices } => {
            // convex weights over the vertices
            let obj: Vec<Q> = vertices
                .iter()
                .map(|p| {
                    p.iter()
                        .zip(v)
                        .fold(Q::zero(), |acc, (a, b)| acc + q(*a) * q(*b))
                })
                .collect();
            let m = obj.len();
            let mut lp = DenseLp::new(obj, true);
            lp.row(vec![Q::one(); m], Cmp::Eq, Q::one());
            lp
        }
        UncertaintySet::PolytopeH { a, b } => {
            let mut lp = DenseLp::new(v.iter().map(|x| q(*x)).collect(), true);
            lp.row(simplex_row(k), Cmp::Eq, Q::one());
            for (row, off) in a.iter().zip(b) {
                lp.row(row.iter().map(|x| q(*x)).collect(), Cmp::Le, -q(*off));
            }
            lp
        }
        UncertaintySet::Ball {
            norm,
            center,
            radius,
            weights,
        } if norm.exponent().is_none() => {
            let mut lp = DenseLp::new(v.iter().map(|x| q(*x)).collect(), true);
            lp.row(simplex_row(k), Cmp::Eq, Q::one());
            for i in 0..k {
                let slack = q(*radius) / q(weights[i]);
                let mut e = vec![Q::zero(); k];
                e[i] = Q::one();
                lp.row(e.clone(), Cmp::Le, q(center[i]) + slack.clone());
                lp.row(e, Cmp::Ge, q(center[i]) - slack);
            }
            lp
        }
        UncertaintySet::Ball {
            center,
            radius,
            weights,
            ..
        } => {
            // L1: variables x then u with u_i >= |x_i - c_i|
            let mut obj: Vec<Q> = v.iter().map(|x| q(*x)).collect();
            obj.resize(2 * k, Q::zero());
            let mut lp = DenseLp::new(obj, true);
            lp.row(simplex_row(2 * k), Cmp::Eq, Q::one());
            for i in 0..k {
                let mut up = vec![Q::zero(); 2 * k];
                up[i] = Q::one();
                up[k + i] = -Q::one();
                lp.row(up, Cmp::Le, q(center[i]));
                let mut down = vec![Q::zero(); 2 * k];
                down[i] = -Q::one();
                down[k + i] = -Q::one();
                lp.row(down, Cmp::Le, -q(center[i]));
            }
            let mut budget = vec![Q::zero(); 2 * k];
            for i in 0..k {
                budget[k + i] = q(weights[i]);
            }
            lp.row(budget, Cmp::Le, q(*radius));
            lp
        }
        UncertaintySet::Singleton { dist } => {
            let mut lp = DenseLp::new(v.iter().map(|x| q(*x)).collect(), true);
            for i in 0..k {
                let mut e = vec![Q::zero(); k];
                e[i] = Q::one();
                lp.row(e, Cmp::Eq, q(dist[i]));
            }
            lp
        }
    }
}

fn lp_norm(center: &[f64], weights: &[f64], p: u32, x: &[f64]) -> f64 {
    ball_distance(crate::model::Norm::Lp(p), center, weights, x)
}

/// Best value over random points of the feasible boundary, followed by a
/// shrinking local search around the incumbent.
fn sample_max(
    center: &[f64],
    radius: f64,
    weights: &[f64],
    p: u32,
    v: &[f64],
    samples: usize,
    seed: u64,
) -> Option<f64> {
    let k = center.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let value = |x: &[f64]| x.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
    // push x away from the center as far as the ball and the simplex allow
    let to_boundary = |x: &[f64]| -> Vec<f64> {
        let d: Vec<f64> = x.iter().zip(center).map(|(a, c)| a - c).collect();
        let len = lp_norm(center, weights, p, x);
        if len <= 0.0 {
            return center.to_vec();
        }
        let mut t = radius / len;
        for i in 0..k {
            if d[i] < 0.0 {
                t = t.min(center[i] / -d[i]);
            }
        }
        (0..k).map(|i| (center[i] + t * d[i]).max(0.0)).collect()
    };
    let mut best: Option<(f64, Vec<f64>)> = center
        .iter()
        .all(|c| *c >= 0.0)
        .then(|| (value(center), center.to_vec()));
    let global = samples / 2;
    for _ in 0..global {
        // uniform point of the simplex
        let e: Vec<f64> = (0..k).map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
        let s: f64 = e.iter().sum();
        let x: Vec<f64> = to_boundary(&e.iter().map(|a| a / s).collect::<Vec<_>>());
        let val = value(&x);
        if best.as_ref().map_or(true, |(b, _)| val > *b) {
            best = Some((val, x));
        }
    }
    let (_, mut incumbent) = best.clone()?;
    let local = samples - global;
    let mut step = radius.max(1e-12);
    let rounds = 64usize;
    for r in 0..local {
        if r % (local / rounds).max(1) == 0 {
            step *= 0.75;
        }
        let mut y: Vec<f64> = incumbent
            .iter()
            .map(|a| a + step * (rng.gen::<f64>() - 0.5))
            .collect();
        let mean = (y.iter().sum::<f64>() - 1.0) / k as f64;
        y.iter_mut().for_each(|a| *a = (*a - mean).max(0.0));
        let s: f64 = y.iter().sum();
        if s <= 0.0 {
            continue;
        }
        y.iter_mut().for_each(|a| *a /= s);
        let x = to_boundary(&y);
        let val = value(&x);
        if val > best.as_ref().map_or(f64::NEG_INFINITY, |b| b.0) {
            incumbent = x.clone();
            best = Some((val, x));
        }
    }
    best.map(|b| b.0)
}

fn feasible(center: &[f64], radius: f64, weights: &[f64], p: u32, x: &[f64]) -> bool {
    x.iter().all(|&a| a >= -1e-12)
        && (x.iter().sum::<f64>() - 1.0).abs() <= 1e-9
        && lp_norm(center, weights, p, x) <= radius * (1.0 + 1e-9) + 1e-15
}

/// Best stationary point among all choices of coordinates clamped to zero.
fn kkt_max(center: &[f64], radius: f64, weights: &[f64], p: u32, v: &[f64]) -> Option<f64> {
    let k = center.len();
    let pf = p as f64;
    let value = |x: &[f64]| x.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
    let mut best: Option<f64> = None;
    let mut offer = |x: Vec<f64>| {
        if feasible(center, radius, weights, p, &x) {
            let val = value(&x);
            if best.map_or(true, |b| val > b) {
                best = Some(val);
            }
        }
    };
    // simplex vertices with the norm constraint slack
    for i in 0..k {
        let mut e = vec![0.0; k];
        e[i] = 1.0;
        offer(e);
    }
    let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mid = 0.5 * (lo + hi);
    let scale = (hi - lo).max(1.0);
    for zero_mask in 0u32..(1 << k) {
        let free: Vec<usize> = (0..k).filter(|i| zero_mask & (1 << i) == 0).collect();
        if free.len() < 2 {
            continue;
        }
        let zeroed: Vec<usize> = (0..k).filter(|i| zero_mask & (1 << i) != 0).collect();
        let m_z: f64 = zeroed.iter().map(|&i| center[i]).sum();
        let r_z: f64 = zeroed
            .iter()
            .map(|&i| (weights[i] * center[i]).powf(pf))
            .sum();
        let room = radius.powf(pf) - r_z;
        if room < 0.0 {
            continue;
        }
        let phi = |lambda: f64, i: usize| {
            let d = v[i] - lambda;
            d.signum() * d.abs().powf(1.0 / (pf - 1.0)) / weights[i].powf(pf / (pf - 1.0))
        };
        let point = |lambda: f64| -> Option<(f64, Vec<f64>)> {
            let norm_p: f64 = free
                .iter()
                .map(|&i| (weights[i] * phi(lambda, i).abs()).powf(pf))
                .sum();
            if norm_p <= 0.0 {
                return None;
            }
            let t = (room / norm_p).powf(1.0 / pf);
            let sum_phi: f64 = free.iter().map(|&i| phi(lambda, i)).sum();
            let mut x = vec![0.0; k];
            for &i in &free {
                x[i] = center[i] + t * phi(lambda, i);
            }
            Some((t * sum_phi - m_z, x))
        };
        // scan lambda over the real line, refine every sign change
        const GRID: usize = 600;
        let lam = |j: usize| {
            let theta = -std::f64::consts::FRAC_PI_2
                + std::f64::consts::PI * (j as f64 + 0.5) / GRID as f64;
            mid + scale * theta.tan()
        };
        let mut prev: Option<(f64, f64)> = None;
        for j in 0..GRID {
            let l = lam(j);
            let Some((g, _)) = point(l) else {
                prev = None;
                continue;
            };
            if let Some((pl, pg)) = prev {
                if pg == 0.0 || pg.signum() != g.signum() {
                    let (mut a, mut b, mut ga) = (pl, l, pg);
                    for _ in 0..200 {
                        let c = 0.5 * (a + b);
                        match point(c) {
                            Some((gc, _)) if gc.signum() == ga.signum() && gc != 0.0 => {
                                a = c;
                                ga = gc;
                            }
                            _ => b = c,
                        }
                    }
                    for root in [a, b] {
                        if let Some((_, x)) = point(root) {
                            offer(x.into_iter().map(|c| c.max(0.0)).collect());
                        }
                    }
                }
            }
            prev = Some((l, g));
        }
    }
    best
}

/// Violation of the KKT conditions of `max values . x` over an Lp ball at `x`.
///
/// Combines primal infeasibility with the smallest stationarity residual over
/// multipliers, relative to the spread of `values`.
pub fn kkt_residual(
    set: &UncertaintySet,
    values: &[f64],
    x: &[f64],
    dir: OptDirection,
) -> Result<f64> {
    let UncertaintySet::Ball {
        norm,
        center,
        radius,
        weights,
    } = set
    else {
        return Err(Error::UnsupportedObjective(
            "KKT check is for norm balls".into(),
        ));
    };
    let p = norm
        .exponent()
        .filter(|&p| p >= 2)
        .ok_or_else(|| Error::UnsupportedObjective("KKT check needs a smooth norm".into()))?;
    let k = center.len();
    let v: Vec<f64> = match dir {
        OptDirection::Max => values.to_vec(),
        OptDirection::Min => values.iter().map(|a| -a).collect(),
    };
    let scale = v.iter().map(|a| a.abs()).fold(1.0, f64::max);
    let dist = lp_norm(center, weights, p, x);
    let primal = x
        .iter()
        .map(|&a| (-a).max(0.0))
        .fold((x.iter().sum::<f64>() - 1.0).abs(), f64::max)
        .max((dist - radius).max(0.0));
    let pf = p as f64;
    let mut grad: Vec<f64> = (0..k)
        .map(|i| {
            let d = x[i] - center[i];
            weights[i].powf(pf) * d.abs().powf(pf - 1.0) * d.signum()
        })
        .collect();
    let gmax = grad.iter().map(|g| g.abs()).fold(0.0, f64::max);
    if gmax > 0.0 {
        grad.iter_mut().for_each(|g| *g /= gmax);
    }
    let active = dist >= radius * (1.0 - 1e-7);
    // variables: lambda+ lambda- mu s; minimize s
    let mut lp = DenseLp::new(vec![0.0, 0.0, 0.0, 1.0], false);
    for i in 0..k {
        let row = vec![1.0, -1.0, grad[i], 1.0];
        // v_i - lambda - mu g_i <= s
        lp.row(row, Cmp::Ge, v[i]);
        if x[i] > 1e-9 {
            lp.row(vec![1.0, -1.0, grad[i], -1.0], Cmp::Le, v[i]);
        }
    }
    if !active {
        lp.row(vec![0.0, 0.0, 1.0, 0.0], Cmp::Eq, 0.0);
    }
    let stationarity = match lp.solve() {
        DenseOutcome::Optimal { value, .. } => value.max(0.0),
        _ => f64::INFINITY,
    };
    Ok(primal.max(stationarity / scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Norm;

    #[test]
    fn spec_examples() {
        let l1 = UncertaintySet::ball(Norm::L1, vec![0.5, 0.5], 0.2);
        assert!(
            (brute_force_inner(&l1, &[0.0, 1.0], OptDirection::Max).unwrap() - 0.6).abs() < 1e-15
        );
        let linf = UncertaintySet::interval(vec![0.5, 0.5], 0.2);
        assert!(
            (brute_force_inner(&linf, &[0.0, 1.0], OptDirection::Max).unwrap() - 0.7).abs() < 1e-15
        );
        let l2 = UncertaintySet::ball(Norm::L2, vec![0.5, 0.5], 0.1);
        let v = brute_force_inner_with(&l2, &[0.0, 1.0], OptDirection::Max, 1000, 1).unwrap();
        assert!((v - (0.5 + 0.1 / 2f64.sqrt())).abs() < 1e-9, "{v}");
        let s = UncertaintySet::Singleton {
            dist: vec![0.25, 0.75],
        };
        assert_eq!(
            brute_force_inner(&s, &[4.0, 8.0], OptDirection::Min).unwrap(),
            7.0
        );
    }

    #[test]
    fn kkt_of_known_optimum() {
        let l2 = UncertaintySet::ball(Norm::L2, vec![0.5, 0.5], 0.1);
        let h = 0.1 / 2f64.sqrt();
        let x = [0.5 - h, 0.5 + h];
        assert!(kkt_residual(&l2, &[0.0, 1.0], &x, OptDirection::Max).unwrap() < 1e-9);
        let wrong = [0.5 + h, 0.5 - h];
        assert!(kkt_residual(&l2, &[0.0, 1.0], &wrong, OptDirection::Max).unwrap() > 0.1);
    }

    #[test]
    fn too_many_successors() {
        let s = UncertaintySet::Singleton {
            dist: vec![1.0 / 7.0; 7],
        };
        assert!(matches!(
            brute_force_inner(&s, &[0.0; 7], OptDirection::Max),
            Err(Error::TooLarge(_))
        ));
    }
}
