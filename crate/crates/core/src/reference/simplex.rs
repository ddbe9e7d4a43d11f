//! Dense two-phase tableau simplex with Bland's rule, generic over the field.
//!
//! Deliberately naive: it exists so that oracle answers do not come from the
//! production LP backend. With [`BigRational`] it is exact.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::lp::Cmp;

pub trait Scalar:
    Clone
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn is_nonzero(&self) -> bool {
        self.is_pos() || self.is_neg()
    }
}

const F64_EPS: f64 = 1e-11;

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_pos(&self) -> bool {
        *self > F64_EPS
    }
    fn is_neg(&self) -> bool {
        *self < -F64_EPS
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).unwrap_or_else(|| BigRational::from_integer(BigInt::zero()))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// `opt c.x` subject to the rows, with `x >= 0`.
#[derive(Debug, Clone)]
pub struct DenseLp<T> {
    pub objective: Vec<T>,
    pub maximize: bool,
    pub rows: Vec<(Vec<T>, Cmp, T)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DenseOutcome<T> {
    Optimal { x: Vec<T>, value: T },
    Infeasible,
    Unbounded,
}

impl<T: Scalar> DenseLp<T> {
    pub fn new(objective: Vec<T>, maximize: bool) -> Self {
        DenseLp {
            objective,
            maximize,
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, coeffs: Vec<T>, cmp: Cmp, rhs: T) {
        debug_assert_eq!(coeffs.len(), self.objective.len());
        self.rows.push((coeffs, cmp, rhs));
    }

    pub fn solve(&self) -> DenseOutcome<T> {
        Tableau::build(self).run(self)
    }
}

impl DenseLp<f64> {
    /// Floating-point solve, retried in exact arithmetic if it does not
    /// report an optimum (rounding can fake unboundedness or infeasibility).
    pub fn solve_robust(&self) -> DenseOutcome<f64> {
        match self.solve() {
            DenseOutcome::Optimal { x, value } => DenseOutcome::Optimal { x, value },
            _ => {
                let q = |v: &[f64]| {
                    v.iter()
                        .map(|x| <BigRational as Scalar>::from_f64(*x))
                        .collect::<Vec<_>>()
                };
                let mut exact = DenseLp::new(q(&self.objective), self.maximize);
                for (row, cmp, rhs) in &self.rows {
                    exact.row(q(row), *cmp, <BigRational as Scalar>::from_f64(*rhs));
                }
                match exact.solve() {
                    DenseOutcome::Optimal { x, value } => DenseOutcome::Optimal {
                        x: x.iter().map(Scalar::to_f64).collect(),
                        value: Scalar::to_f64(&value),
                    },
                    DenseOutcome::Infeasible => DenseOutcome::Infeasible,
                    DenseOutcome::Unbounded => DenseOutcome::Unbounded,
                }
            }
        }
    }
}

struct Tableau<T> {
    t: Vec<Vec<T>>,
    basis: Vec<usize>,
    n: usize,
    width: usize,
    artificial_from: usize,
}

impl<T: Scalar> Tableau<T> {
    fn build(lp: &DenseLp<T>) -> Self {
        let n = lp.objective.len();
        let rows: Vec<(Vec<T>, Cmp, T)> = lp
            .rows
            .iter()
            .map(|(c, cmp, b)| {
                if b.is_neg() {
                    let flipped = match cmp {
                        Cmp::Le => Cmp::Ge,
                        Cmp::Ge => Cmp::Le,
                        Cmp::Eq => Cmp::Eq,
                    };
                    (c.iter().map(|v| -v.clone()).collect(), flipped, -b.clone())
                } else {
                    (c.clone(), *cmp, b.clone())
                }
            })
            .collect();
        let slacks = rows.iter().filter(|r| r.1 != Cmp::Eq).count();
        let artificials = rows.iter().filter(|r| r.1 != Cmp::Le).count();
        let width = n + slacks + artificials;
        let artificial_from = n + slacks;
        let mut t = Vec::with_capacity(rows.len());
        let mut basis = Vec::with_capacity(rows.len());
        let (mut next_slack, mut next_art) = (n, artificial_from);
        for (c, cmp, b) in rows {
            let mut row = c;
            row.resize(width + 1, T::zero());
            row[width] = b;
            match cmp {
                Cmp::Le => {
                    row[next_slack] = T::one();
                    basis.push(next_slack);
                    next_slack += 1;
                }
                Cmp::Ge => {
                    row[next_slack] = -T::one();
                    next_slack += 1;
                    row[next_art] = T::one();
                    basis.push(next_art);
                    next_art += 1;
                }
                Cmp::Eq => {
                    row[next_art] = T::one();
                    basis.push(next_art);
                    next_art += 1;
                }
            }
            t.push(row);
        }
        Tableau {
            t,
            basis,
            n,
            width,
            artificial_from,
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c].clone();
        for v in self.t[r].iter_mut() {
            *v = v.clone() / p.clone();
        }
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || !row[c].is_nonzero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if pv.is_nonzero() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost . x` over columns `< limit`; false when unbounded.
    fn optimize(&mut self, cost: &[T], limit: usize) -> bool {
        loop {
            let mut entering = None;
            for j in 0..limit {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut d = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if cost[b].is_nonzero() && self.t[i][j].is_nonzero() {
                        d = d - cost[b].clone() * self.t[i][j].clone();
                    }
                }
                if d.is_pos() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else { return true };
            let mut leave: Option<(usize, T)> = None;
            for i in 0..self.t.len() {
                if !self.t[i][j].is_pos() {
                    continue;
                }
                let ratio = self.t[i][self.width].clone() / self.t[i][j].clone();
                let better = match &leave {
                    None => true,
                    Some((k, best)) => {
                        ratio < *best
                            || (!(ratio.clone() - best.clone()).is_nonzero()
                                && self.basis[i] < self.basis[*k])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((i, _)) => self.pivot(i, j),
                None => return false,
            }
        }
    }

    fn run(mut self, lp: &DenseLp<T>) -> DenseOutcome<T> {
        if self.artificial_from < self.width {
            let mut phase1 = vec![T::zero(); self.width];
            for c in phase1.iter_mut().skip(self.artificial_from) {
                *c = -T::one();
            }
            self.optimize(&phase1, self.width);
            let infeasibility = self
                .basis
                .iter()
                .enumerate()
                .filter(|(_, &b)| b >= self.artificial_from)
                .fold(T::zero(), |acc, (i, _)| acc + self.t[i][self.width].clone());
            if infeasibility.is_pos() {
                return DenseOutcome::Infeasible;
            }
            // drive zero-valued artificials out of the basis
            let mut i = 0;
            while i < self.t.len() {
                if self.basis[i] >= self.artificial_from {
                    match (0..self.artificial_from).find(|&j| self.t[i][j].is_nonzero()) {
                        Some(j) => self.pivot(i, j),
                        None => {
                            self.t.remove(i);
                            self.basis.remove(i);
                            continue;
                        }
                    }
                }
                i += 1;
            }
        }
        let mut cost = vec![T::zero(); self.width];
        for (c, o) in cost.iter_mut().zip(&lp.objective) {
            *c = if lp.maximize { o.clone() } else { -o.clone() };
        }
        if !self.optimize(&cost, self.artificial_from) {
            return DenseOutcome::Unbounded;
        }
        let mut x = vec![T::zero(); self.n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n {
                x[b] = self.t[i][self.width].clone();
            }
        }
        let value = x
            .iter()
            .zip(&lp.objective)
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone());
        DenseOutcome::Optimal { x, value }
    }
}
