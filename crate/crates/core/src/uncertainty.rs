//! Inner optimization: extremal expectations over an uncertainty set.
//!
//! Every routine works on *slot vectors*: `values[i]` is the value of the
//! successor in slot `i` of the set. Values may be `+inf`; the returned value
//! is then `+inf` whenever some admissible (max) or every admissible (min)
//! distribution puts positive mass on an infinite slot.

use std::cmp::Ordering;

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::lp::{self, LpOutcome};
use crate::model::{Norm, UncertaintySet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptDirection {
    Max,
    Min,
}

/// Optimal value and a distribution attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerResult {
    pub value: f64,
    pub witness: Vec<f64>,
}

/// Smallest positive transition probability of a set, when it is bounded away from 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Pmin {
    Known(f64),
    Unknown,
}

fn dot(v: &[f64], x: &[f64]) -> f64 {
    v.iter().zip(x).map(|(a, b)| a * b).sum()
}

/// Expected value with the convention `0 * inf = 0`.
pub fn expectation(values: &[f64], dist: &[f64]) -> f64 {
    values
        .iter()
        .zip(dist)
        .map(|(&v, &p)| if p == 0.0 { 0.0 } else { v * p })
        .sum()
}

/// `opt_{x in set} values . x`.
pub fn optimize(
    set: &UncertaintySet,
    values: &[f64],
    dir: OptDirection,
    config: &SolverConfig,
) -> Result<InnerResult> {
    let k = values.len();
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::NumericalFailure(
            "NaN value in inner optimization".into(),
        ));
    }
    let infinite: Vec<bool> = values.iter().map(|v| v.is_infinite()).collect();
    if infinite.iter().any(|&b| b) {
        let indicator: Vec<f64> = infinite
            .iter()
            .map(|&b| if b { 1.0 } else { 0.0 })
            .collect();
        let probe = match dir {
            OptDirection::Max => maximize(set, &indicator, &[], config)?,
            OptDirection::Min => minimize(set, &indicator, &[], config)?,
        }
        .ok_or_else(|| Error::DegenerateSet("empty uncertainty set".into()))?;
        if dot(&indicator, &probe) > config.mass_tolerance {
            return Ok(InnerResult {
                value: f64::INFINITY,
                witness: probe,
            });
        }
        let finite: Vec<f64> = values
            .iter()
            .map(|&v| if v.is_infinite() { 0.0 } else { v })
            .collect();
        let witness = match dir {
            OptDirection::Max => maximize(set, &finite, &infinite, config)?,
            OptDirection::Min => minimize(set, &finite, &infinite, config)?,
        }
        .ok_or_else(|| {
            Error::NumericalFailure("face without infinite successors is empty".into())
        })?;
        let value = expectation(&finite, &witness);
        return Ok(InnerResult { value, witness });
    }
    debug_assert_eq!(k, set.dimension());
    let witness = match dir {
        OptDirection::Max => maximize(set, values, &[], config)?,
        OptDirection::Min => minimize(set, values, &[], config)?,
    }
    .ok_or_else(|| Error::DegenerateSet("empty uncertainty set".into()))?;
    Ok(InnerResult {
        value: dot(values, &witness),
        witness,
    })
}

/// Minimum and maximum probability mass the set can put on `mask`.
pub fn mass_extrema(
    set: &UncertaintySet,
    mask: &[bool],
    config: &SolverConfig,
) -> Result<(f64, f64)> {
    let indicator: Vec<f64> = mask.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
    let lo = minimize(set, &indicator, &[], config)?
        .ok_or_else(|| Error::DegenerateSet("empty uncertainty set".into()))?;
    let hi = maximize(set, &indicator, &[], config)?
        .ok_or_else(|| Error::DegenerateSet("empty uncertainty set".into()))?;
    Ok((dot(&indicator, &lo), dot(&indicator, &hi)))
}

/// Maximum mass on `target` among members that put all their mass on `allowed`.
///
/// `None` if no member is supported inside `allowed`.
pub fn face_max_mass(
    set: &UncertaintySet,
    target: &[bool],
    allowed: &[bool],
    config: &SolverConfig,
) -> Result<Option<f64>> {
    let indicator: Vec<f64> = target.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
    let forbidden: Vec<bool> = allowed.iter().map(|&b| !b).collect();
    Ok(maximize(set, &indicator, &forbidden, config)?.map(|x| dot(&indicator, &x)))
}

/// Minimum of every coordinate over the set.
pub fn coordinate_minima(set: &UncertaintySet, config: &SolverConfig) -> Result<Vec<f64>> {
    let k = set.dimension();
    (0..k)
        .map(|i| {
            let mut e = vec![0.0; k];
            e[i] = 1.0;
            let x = minimize(set, &e, &[], config)?
                .ok_or_else(|| Error::DegenerateSet("empty uncertainty set".into()))?;
            Ok(x[i].max(0.0))
        })
        .collect()
}

pub fn min_positive_probability(set: &UncertaintySet, config: &SolverConfig) -> Pmin {
    let positive_min =
        |it: &mut dyn Iterator<Item = f64>| it.filter(|&p| p > 0.0).fold(f64::INFINITY, f64::min);
    let m = match set {
        UncertaintySet::Singleton { dist } => positive_min(&mut dist.iter().copied()),
        UncertaintySet::PolytopeV { vertices } => {
            positive_min(&mut vertices.iter().flatten().copied())
        }
        _ => match coordinate_minima(set, config) {
            Ok(minima) if minima.iter().all(|&m| m > config.lp_tolerance) => {
                minima.into_iter().fold(f64::INFINITY, f64::min)
            }
            _ => return Pmin::Unknown,
        },
    };
    if m.is_finite() {
        Pmin::Known(m)
    } else {
        Pmin::Unknown
    }
}

/// Maximizer of `values . x` over the face `{x in set : x_i = 0 for forced i}`.
///
/// Returns `None` if that face is empty. `values` must be finite.
pub(crate) fn maximize(
    set: &UncertaintySet,
    values: &[f64],
    forced: &[bool],
    config: &SolverConfig,
) -> Result<Option<Vec<f64>>> {
    let is_forced = |i: usize| forced.get(i).copied().unwrap_or(false);
    let tol = config.mass_tolerance;
    match set {
        UncertaintySet::Singleton { dist } => {
            if (0..dist.len()).any(|i| is_forced(i) && dist[i] > tol) {
                Ok(None)
            } else {
                Ok(Some(dist.clone()))
            }
        }
        UncertaintySet::PolytopeV { vertices } => {
            let mut best: Option<(f64, &Vec<f64>)> = None;
            for v in vertices {
                if (0..v.len()).any(|i| is_forced(i) && v[i] > tol) {
                    continue;
                }
                let val = dot(values, v);
                if best.map_or(true, |(b, _)| val > b) {
                    best = Some((val, v));
                }
            }
            Ok(best.map(|(_, v)| v.clone()))
        }
        UncertaintySet::PolytopeH { a, b } => {
            let exact = lp::polytope_h_program(a, b, values, true, forced, 0.0).solve()?;
            if exact != LpOutcome::Infeasible {
                return lp_witness(exact, values.len());
            }
            // nearly empty faces: accept points within the LP tolerance
            let relaxed = lp::polytope_h_program(a, b, values, true, forced, config.lp_tolerance);
            lp_witness(relaxed.solve()?, values.len())
        }
        UncertaintySet::Ball {
            norm,
            center,
            radius,
            weights,
        } => match norm.exponent() {
            None => Ok(linf_greedy(center, *radius, weights, values, forced, tol)),
            Some(1) if weights.iter().all(|&w| w == weights[0]) => {
                Ok(l1_greedy(center, *radius / weights[0], values, forced, tol))
            }
            Some(1) => {
                let program =
                    lp::weighted_l1_program(center, *radius, weights, values, true, forced);
                lp_witness(program.solve()?, values.len())
            }
            Some(p) => Ok(lp_ball_maximize(
                center, *radius, weights, p, values, forced, tol,
            )),
        },
    }
}

pub(crate) fn minimize(
    set: &UncertaintySet,
    values: &[f64],
    forced: &[bool],
    config: &SolverConfig,
) -> Result<Option<Vec<f64>>> {
    let negated: Vec<f64> = values.iter().map(|v| -v).collect();
    maximize(set, &negated, forced, config)
}

fn lp_witness(outcome: LpOutcome, k: usize) -> Result<Option<Vec<f64>>> {
    match outcome {
        LpOutcome::Optimal { x, .. } => {
            let mut x: Vec<f64> = x.into_iter().take(k).map(|v| v.max(0.0)).collect();
            let s: f64 = x.iter().sum();
            if s > 0.0 {
                x.iter_mut().for_each(|v| *v /= s);
            }
            Ok(Some(x))
        }
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => Err(Error::NumericalFailure(
            "unbounded LP over a probability simplex".into(),
        )),
    }
}

/// Slot order by decreasing value, ties by index.
fn by_value_desc(values: &[f64], idx: &mut [usize]) {
    idx.sort_by(|&i, &j| {
        values[j]
            .partial_cmp(&values[i])
            .unwrap_or(Ordering::Equal)
            .then(i.cmp(&j))
    });
}

/// Weighted L-inf ball: a box `[l, u]` intersected with the simplex.
fn linf_greedy(
    center: &[f64],
    radius: f64,
    weights: &[f64],
    values: &[f64],
    forced: &[bool],
    tol: f64,
) -> Option<Vec<f64>> {
    let k = center.len();
    let mut lower = vec![0.0; k];
    let mut upper = vec![0.0; k];
    for i in 0..k {
        let slack = radius / weights[i];
        lower[i] = (center[i] - slack).max(0.0);
        upper[i] = (center[i] + slack).min(1.0);
        if forced.get(i).copied().unwrap_or(false) {
            if lower[i] > tol {
                return None;
            }
            lower[i] = 0.0;
            upper[i] = 0.0;
        }
    }
    let base: f64 = lower.iter().sum();
    if upper.iter().sum::<f64>() < 1.0 - tol || base > 1.0 + tol {
        return None;
    }
    let mut x = lower;
    let mut remaining = 1.0 - base;
    let mut idx: Vec<usize> = (0..k).collect();
    by_value_desc(values, &mut idx);
    for &i in &idx {
        if remaining <= 0.0 {
            break;
        }
        let add = (upper[i] - x[i]).min(remaining);
        x[i] += add;
        remaining -= add;
    }
    Some(x)
}

/// L1 ball with uniform weight; `budget` is the unweighted radius.
///
/// Moves up to `budget / 2` probability mass from the lowest-valued slots to the
/// best slot. Forced slots are drained first and must be drained completely.
fn l1_greedy(
    center: &[f64],
    budget: f64,
    values: &[f64],
    forced: &[bool],
    tol: f64,
) -> Option<Vec<f64>> {
    let k = center.len();
    let is_forced = |i: usize| forced.get(i).copied().unwrap_or(false);
    let mut movable = budget / 2.0;
    let mut x = center.to_vec();
    let mut freed = 0.0;
    for i in 0..k {
        if is_forced(i) {
            freed += x[i];
            x[i] = 0.0;
        }
    }
    if freed > movable + tol {
        return None;
    }
    movable = (movable - freed).max(0.0);
    let mut idx: Vec<usize> = (0..k).filter(|&i| !is_forced(i)).collect();
    if idx.is_empty() {
        return None;
    }
    by_value_desc(values, &mut idx);
    let best = idx[0];
    for &i in idx.iter().skip(1).rev() {
        if movable <= 0.0 {
            break;
        }
        if values[i] >= values[best] {
            break;
        }
        let take = x[i].min(movable);
        x[i] -= take;
        freed += take;
        movable -= take;
    }
    x[best] += freed;
    Some(x)
}

/// Weighted Lp ball (`1 < p < inf`) via the KKT conditions.
///
/// On free slots the optimum is `x_i = max(0, c_i + t phi_i(lambda))` with
/// `phi_i(l) = sign(v_i - l) (|v_i - l| / w_i^p)^(1/(p-1))`; `lambda` balances the
/// mass and `t` makes the norm constraint tight.
fn lp_ball_maximize(
    center: &[f64],
    radius: f64,
    weights: &[f64],
    p: u32,
    values: &[f64],
    forced: &[bool],
    tol: f64,
) -> Option<Vec<f64>> {
    let k = center.len();
    let pf = p as f64;
    let is_forced = |i: usize| forced.get(i).copied().unwrap_or(false);
    let free: Vec<usize> = (0..k).filter(|&i| !is_forced(i)).collect();
    if free.is_empty() {
        return None;
    }
    // Mass that must be moved onto the free slots, and the norm it already used.
    let moved: f64 = (0..k).filter(|&i| is_forced(i)).map(|i| center[i]).sum();
    let used: f64 = (0..k)
        .filter(|&i| is_forced(i))
        .map(|i| (weights[i] * center[i]).powf(pf))
        .sum();
    let budget = radius.powf(pf) - used;
    let q = pf / (pf - 1.0);
    let norm_of = |x: &[f64]| -> f64 {
        free.iter()
            .map(|&i| (weights[i] * (x[i] - center[i]).abs()).powf(pf))
            .sum()
    };
    let mut x = center.to_vec();
    for i in 0..k {
        if is_forced(i) {
            x[i] = 0.0;
        }
    }
    // Cheapest way to absorb the moved mass.
    let inv_sum: f64 = free.iter().map(|&i| weights[i].powf(-q)).sum();
    let min_cost = moved.powf(pf) * inv_sum.powf(1.0 - pf);
    if moved > 0.0 && min_cost > budget + tol {
        return None;
    }
    let vmax = free
        .iter()
        .map(|&i| values[i])
        .fold(f64::NEG_INFINITY, f64::max);
    let vmin = free
        .iter()
        .map(|&i| values[i])
        .fold(f64::INFINITY, f64::min);
    // values equal up to rounding: every point of the ball is optimal
    let flat = vmax - vmin <= 16.0 * f64::EPSILON * vmax.abs().max(vmin.abs());
    if vmax - vmin <= 0.0 || flat || budget <= 0.0 {
        for &i in &free {
            x[i] += moved * weights[i].powf(-q) / inv_sum;
        }
        return Some(x);
    }
    // Vertex solution already inside the ball: the norm constraint is slack.
    let best = *free
        .iter()
        .find(|&&i| values[i] == vmax)
        .expect("non-empty free set");
    let mut vertex = vec![0.0; k];
    vertex[best] = 1.0;
    if norm_of(&vertex) <= budget {
        return Some(vertex);
    }
    let phi = |i: usize, l: f64| -> f64 {
        let d = values[i] - l;
        d.signum() * (d.abs() / weights[i].powf(pf)).powf(1.0 / (pf - 1.0))
    };
    let spread = (vmax - vmin).max(1.0);
    let point = |t: f64, l: f64, out: &mut Vec<f64>| {
        for &i in &free {
            out[i] = (center[i] + t * phi(i, l)).max(0.0);
        }
    };
    let mass = |x: &[f64]| free.iter().map(|&i| x[i]).sum::<f64>();
    // For fixed t, find lambda with sum_free x = 1 (mass is decreasing in lambda).
    let solve_lambda = |t: f64, out: &mut Vec<f64>| {
        let mut hi = vmax;
        let mut lo = vmin - spread;
        point(t, lo, out);
        let mut guard = 0;
        while mass(out) < 1.0 && guard < 200 {
            lo -= spread * 2f64.powi(guard);
            point(t, lo, out);
            guard += 1;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            point(t, mid, out);
            if mass(out) > 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        point(t, lo, out);
        let m = mass(out);
        if m > 0.0 {
            for &i in &free {
                out[i] /= m;
            }
        }
    };
    let mut trial = x.clone();
    // Closed form when no slot hits zero: sum phi(lambda) = 0 and t from the norm.
    if moved == 0.0 {
        let mut lo = vmin;
        let mut hi = vmax;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let s: f64 = free.iter().map(|&i| phi(i, mid)).sum();
            if s > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let l = 0.5 * (lo + hi);
        let scale: f64 = free
            .iter()
            .map(|&i| (weights[i] * phi(i, l).abs()).powf(pf))
            .sum::<f64>();
        if scale > 0.0 {
            let t = (budget / scale).powf(1.0 / pf);
            if free.iter().all(|&i| center[i] + t * phi(i, l) >= 0.0) {
                for &i in &free {
                    trial[i] = center[i] + t * phi(i, l);
                }
                // the bisection on lambda can stall on nearly equal values
                if (mass(&trial) - 1.0).abs() <= tol {
                    return Some(trial);
                }
            }
        }
    }
    // General case: bisection on t, keeping the feasible side.
    let mut t_lo = 0.0;
    let mut t_hi = 1.0;
    let mut guard = 0;
    loop {
        solve_lambda(t_hi, &mut trial);
        if norm_of(&trial) >= budget || guard >= 200 {
            break;
        }
        t_lo = t_hi;
        t_hi *= 2.0;
        guard += 1;
    }
    if norm_of(&trial) < budget {
        return Some(trial);
    }
    for _ in 0..200 {
        let mid = 0.5 * (t_lo + t_hi);
        if mid <= t_lo || mid >= t_hi {
            break;
        }
        solve_lambda(mid, &mut trial);
        if norm_of(&trial) > budget {
            t_hi = mid;
        } else {
            t_lo = mid;
        }
    }
    solve_lambda(t_lo, &mut trial);
    Some(trial)
}

/// Whether `x` belongs to the set, up to `tol`.
pub fn contains(set: &UncertaintySet, x: &[f64], tol: f64, config: &SolverConfig) -> bool {
    if x.len() != set.dimension()
        || x.iter().any(|&v| v < -tol)
        || (x.iter().sum::<f64>() - 1.0).abs() > tol
    {
        return false;
    }
    match set {
        UncertaintySet::Singleton { dist } => dist.iter().zip(x).all(|(a, b)| (a - b).abs() <= tol),
        UncertaintySet::Ball {
            norm,
            center,
            radius,
            weights,
        } => ball_distance(*norm, center, weights, x) <= radius + tol,
        UncertaintySet::PolytopeH { a, b } => {
            a.iter().zip(b).all(|(row, off)| dot(row, x) + off <= tol)
        }
        UncertaintySet::PolytopeV { vertices } => {
            // x in conv(V): feasibility LP over convex weights.
            let m = vertices.len();
            let mut program = lp::LinearProgram::new(vec![0.0; m], true);
            program.constrain(vec![1.0; m], lp::Cmp::Eq, 1.0);
            for i in 0..x.len() {
                let row: Vec<f64> = vertices.iter().map(|v| v[i]).collect();
                program.constrain(row.clone(), lp::Cmp::Le, x[i] + tol);
                program.constrain(row, lp::Cmp::Ge, x[i] - tol);
            }
            let _ = config;
            matches!(program.solve(), Ok(LpOutcome::Optimal { .. }))
        }
    }
}

/// Weighted distance `||x - center||_w`.
pub fn ball_distance(norm: Norm, center: &[f64], weights: &[f64], x: &[f64]) -> f64 {
    let terms = center
        .iter()
        .zip(weights)
        .zip(x)
        .map(|((c, w), v)| w * (v - c).abs());
    match norm.exponent() {
        None => terms.fold(0.0, f64::max),
        Some(p) => terms
            .map(|d| d.powi(p as i32))
            .sum::<f64>()
            .powf(1.0 / p as f64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn l1_greedy_moves_half_the_radius() {
        let set = UncertaintySet::ball(Norm::L1, vec![0.5, 0.3, 0.2], 0.2);
        let r = optimize(&set, &[1.0, 2.0, 0.0], OptDirection::Max, &cfg()).unwrap();
        // 0.1 of mass moves from slot 2 to slot 1
        assert!(close(r.value, 0.5 + 0.8));
        assert!(close(r.witness[2], 0.1));
        let r = optimize(&set, &[1.0, 2.0, 0.0], OptDirection::Min, &cfg()).unwrap();
        assert!(close(r.value, 0.5 + 0.4));
    }

    #[test]
    fn linf_box() {
        let set = UncertaintySet::interval(vec![0.5, 0.5], 0.1);
        let r = optimize(&set, &[0.0, 1.0], OptDirection::Max, &cfg()).unwrap();
        assert!(close(r.value, 0.6));
        let r = optimize(&set, &[0.0, 1.0], OptDirection::Min, &cfg()).unwrap();
        assert!(close(r.value, 0.4));
    }

    #[test]
    fn l2_closed_form() {
        // unweighted p = 2: x = c + zeta (v - mean) / ||v - mean||
        let set = UncertaintySet::ball(Norm::L2, vec![0.4, 0.3, 0.3], 0.1);
        let v = [1.0, 0.0, 0.5];
        let r = optimize(&set, &v, OptDirection::Max, &cfg()).unwrap();
        let mean = 0.5;
        let dev: Vec<f64> = v.iter().map(|x| x - mean).collect();
        let n = dev.iter().map(|d| d * d).sum::<f64>().sqrt();
        let expect =
            0.4 * 1.0 + 0.3 * 0.5 + 0.1 * dev.iter().zip(&v).map(|(d, x)| d * x).sum::<f64>() / n;
        assert!(close(r.value, expect), "{} vs {}", r.value, expect);
    }

    #[test]
    fn l2_nearly_equal_values() {
        let set = UncertaintySet::ball(Norm::L2, vec![0.45, 0.55], 0.1);
        for v in [[98.00999999999993, 98.00999999999992], [1.0, 1.0 + 1e-15]] {
            let r = optimize(&set, &v, OptDirection::Min, &cfg()).unwrap();
            assert!(close(r.witness.iter().sum::<f64>(), 1.0), "{:?}", r.witness);
            assert!(r.value <= v[0].max(v[1]) + 1e-12);
        }
    }

    #[test]
    fn l2_clipped_at_zero() {
        let set = UncertaintySet::ball(Norm::L2, vec![0.9, 0.05, 0.05], 0.5);
        let r = optimize(&set, &[0.0, 1.0, 1.0], OptDirection::Max, &cfg()).unwrap();
        assert!(r.witness.iter().all(|&x| x >= 0.0));
        assert!(close(r.witness.iter().sum::<f64>(), 1.0));
        let d = ball_distance(Norm::L2, &[0.9, 0.05, 0.05], &[1.0; 3], &r.witness);
        assert!(d <= 0.5 + 1e-9);
        // symmetric optimum splits 0.9 - 0.5/sqrt(2) ... within the ball
        assert!(close(r.witness[1], r.witness[2]));
    }

    #[test]
    fn vertex_ties_pick_lowest_index() {
        let set = UncertaintySet::PolytopeV {
            vertices: vec![vec![0.0, 1.0], vec![1.0, 0.0], vec![0.5, 0.5]],
        };
        let r = optimize(&set, &[1.0, 1.0], OptDirection::Max, &cfg()).unwrap();
        assert_eq!(r.witness, vec![0.0, 1.0]);
    }

    #[test]
    fn infinite_values() {
        let inf = f64::INFINITY;
        let set = UncertaintySet::interval(vec![0.5, 0.5], 0.5);
        assert_eq!(
            optimize(&set, &[1.0, inf], OptDirection::Max, &cfg())
                .unwrap()
                .value,
            inf
        );
        // min can avoid the infinite slot entirely
        let r = optimize(&set, &[1.0, inf], OptDirection::Min, &cfg()).unwrap();
        assert!(close(r.value, 1.0));
        assert_eq!(r.witness[1], 0.0);
        let tight = UncertaintySet::interval(vec![0.5, 0.5], 0.4);
        assert_eq!(
            optimize(&tight, &[1.0, inf], OptDirection::Min, &cfg())
                .unwrap()
                .value,
            inf
        );
    }

    #[test]
    fn h_polytope_matches_box() {
        let set = UncertaintySet::PolytopeH {
            a: vec![vec![1.0, 0.0], vec![-1.0, 0.0]],
            b: vec![-0.6, 0.4],
        };
        let r = optimize(&set, &[2.0, 1.0], OptDirection::Max, &cfg()).unwrap();
        assert!((r.value - 1.6).abs() < 1e-7);
    }

    #[test]
    fn face_and_masses() {
        let set = UncertaintySet::interval(vec![0.5, 0.3, 0.2], 0.2);
        let (lo, hi) = mass_extrema(&set, &[true, false, false], &cfg()).unwrap();
        assert!(close(lo, 0.3) && close(hi, 0.7));
        // slot 2 can drop to 0, then slot 1 gets at most 0.5
        let m = face_max_mass(&set, &[false, true, false], &[true, true, false], &cfg()).unwrap();
        assert!(close(m.unwrap(), 0.5));
        let none =
            face_max_mass(&set, &[true, false, false], &[true, false, false], &cfg()).unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn minima_and_pmin() {
        let set = UncertaintySet::interval(vec![0.5, 0.3, 0.2], 0.1);
        let m = coordinate_minima(&set, &cfg()).unwrap();
        assert!(close(m[0], 0.4) && close(m[1], 0.2) && close(m[2], 0.1));
        assert_eq!(min_positive_probability(&set, &cfg()), Pmin::Known(m[2]));
        let loose = UncertaintySet::interval(vec![0.5, 0.5], 0.5);
        assert_eq!(min_positive_probability(&loose, &cfg()), Pmin::Unknown);
    }
}
