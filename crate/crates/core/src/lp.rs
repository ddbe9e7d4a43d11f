//! Thin wrapper around `microlp` for the small simplex-restricted LPs used by
//! the inner optimization and by model validation.

use microlp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem};

use crate::config::SolverConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

/// Dense linear constraint `coeffs . x  cmp  rhs`.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub cmp: Cmp,
    pub rhs: f64,
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub maximize: bool,
    pub bounds: Vec<(f64, f64)>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>, maximize: bool) -> Self {
        let n = objective.len();
        LinearProgram {
            objective,
            maximize,
            bounds: vec![(0.0, f64::INFINITY); n],
            constraints: Vec::new(),
        }
    }

    pub fn constrain(&mut self, coeffs: Vec<f64>, cmp: Cmp, rhs: f64) {
        self.constraints.push(Constraint { coeffs, cmp, rhs });
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        let dir = if self.maximize {
            OptimizationDirection::Maximize
        } else {
            OptimizationDirection::Minimize
        };
        let mut problem = Problem::new(dir);
        let vars: Vec<_> = self
            .objective
            .iter()
            .zip(&self.bounds)
            .map(|(&c, &b)| problem.add_var(c, b))
            .collect();
        for c in &self.constraints {
            let mut expr = LinearExpr::empty();
            for (v, &a) in vars.iter().zip(&c.coeffs) {
                if a != 0.0 {
                    expr.add(*v, a);
                }
            }
            let op = match c.cmp {
                Cmp::Le => ComparisonOp::Le,
                Cmp::Ge => ComparisonOp::Ge,
                Cmp::Eq => ComparisonOp::Eq,
            };
            problem.add_constraint(expr, op, c.rhs);
        }
        match problem.solve() {
            Ok(outcome) => {
                let sol = outcome
                    .solution()
                    .ok_or_else(|| Error::NumericalFailure("LP solve interrupted".into()))?;
                let x = vars.iter().map(|&v| sol.var_value(v)).collect();
                Ok(LpOutcome::Optimal {
                    x,
                    value: sol.objective(),
                })
            }
            Err(microlp::Error::Infeasible) => Ok(LpOutcome::Infeasible),
            Err(microlp::Error::Unbounded) => Ok(LpOutcome::Unbounded),
            Err(e) => Err(Error::NumericalFailure(e.to_string())),
        }
    }
}

/// LP over `{x in simplex : a x + b <= 0, x_i = 0 for forced i}`.
pub fn polytope_h_program(
    a: &[Vec<f64>],
    b: &[f64],
    objective: &[f64],
    maximize: bool,
    forced_zero: &[bool],
    tolerance: f64,
) -> LinearProgram {
    let k = objective.len();
    let mut lp = LinearProgram::new(objective.to_vec(), maximize);
    for (i, bound) in lp.bounds.iter_mut().enumerate() {
        *bound = if forced_zero.get(i).copied().unwrap_or(false) {
            (0.0, 0.0)
        } else {
            (0.0, 1.0)
        };
    }
    lp.constrain(vec![1.0; k], Cmp::Eq, 1.0);
    for (row, &off) in a.iter().zip(b) {
        lp.constrain(row.clone(), Cmp::Le, -off + tolerance);
    }
    lp
}

/// Whether `{x in simplex : a x + b <= 0}` is non-empty (up to the LP tolerance).
pub fn polytope_h_feasible(a: &[Vec<f64>], b: &[f64], config: &SolverConfig) -> bool {
    let k = a.first().map_or(0, Vec::len);
    if k == 0 {
        return false;
    }
    let lp = polytope_h_program(a, b, &vec![0.0; k], true, &[], config.lp_tolerance);
    matches!(lp.solve(), Ok(LpOutcome::Optimal { .. }))
}

/// LP over a weighted L1 ball intersected with the simplex.
///
/// Variables are `x` followed by deviations `d >= |x - c|`.
pub fn weighted_l1_program(
    center: &[f64],
    radius: f64,
    weights: &[f64],
    objective: &[f64],
    maximize: bool,
    forced_zero: &[bool],
) -> LinearProgram {
    let k = center.len();
    let mut obj = objective.to_vec();
    obj.extend(std::iter::repeat(0.0).take(k));
    let mut lp = LinearProgram::new(obj, maximize);
    for i in 0..k {
        if forced_zero.get(i).copied().unwrap_or(false) {
            lp.bounds[i] = (0.0, 0.0);
        } else {
            lp.bounds[i] = (0.0, 1.0);
        }
    }
    let mut sum = vec![0.0; 2 * k];
    sum[..k].iter_mut().for_each(|v| *v = 1.0);
    lp.constrain(sum, Cmp::Eq, 1.0);
    for i in 0..k {
        let mut up = vec![0.0; 2 * k];
        up[i] = 1.0;
        up[k + i] = -1.0;
        lp.constrain(up, Cmp::Le, center[i]);
        let mut down = vec![0.0; 2 * k];
        down[i] = -1.0;
        down[k + i] = -1.0;
        lp.constrain(down, Cmp::Le, -center[i]);
    }
    let mut budget = vec![0.0; 2 * k];
    budget[k..].copy_from_slice(weights);
    lp.constrain(budget, Cmp::Le, radius);
    lp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_lp() {
        // max x + 2y s.t. x + y <= 1
        let mut lp = LinearProgram::new(vec![1.0, 2.0], true);
        lp.constrain(vec![1.0, 1.0], Cmp::Le, 1.0);
        match lp.solve().unwrap() {
            LpOutcome::Optimal { x, value } => {
                assert!((value - 2.0).abs() < 1e-9);
                assert!((x[1] - 1.0).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(vec![1.0], true);
        assert_eq!(lp.solve().unwrap(), LpOutcome::Unbounded);
        lp.constrain(vec![1.0], Cmp::Le, -1.0);
        assert_eq!(lp.solve().unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn h_feasibility() {
        let cfg = SolverConfig::default();
        assert!(polytope_h_feasible(&[vec![1.0, 0.0]], &[-0.5], &cfg));
        assert!(!polytope_h_feasible(&[vec![-1.0, 0.0]], &[2.0], &cfg));
    }

    #[test]
    fn weighted_l1_moves_budget() {
        // weight 2 on coordinate 1: moving mass t costs t*1 + t*2 <= 0.3 -> t = 0.1
        let lp = weighted_l1_program(&[0.5, 0.5], 0.3, &[1.0, 2.0], &[1.0, 0.0], true, &[]);
        match lp.solve().unwrap() {
            LpOutcome::Optimal { value, .. } => assert!((value - 0.6).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
    }
}
