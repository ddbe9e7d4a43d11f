//! Explicit single-player MDPs: qualitative analysis and LP solutions.

use crate::error::{Error, Result};
use crate::lp::Cmp;
use crate::model::TrSemantics;

use super::simplex::{DenseLp, DenseOutcome};

/// One choice of the deciding player: a reward and a successor distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct Choice {
    pub reward: f64,
    pub dist: Vec<(usize, f64)>,
}

/// Explicit finite MDP with a single deciding player.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitMdp {
    pub choices: Vec<Vec<Choice>>,
}

impl ExplicitMdp {
    pub fn len(&self) -> usize {
        self.choices.len()
    }

    fn inside(&self, c: &Choice, set: &[bool]) -> bool {
        c.dist.iter().all(|&(t, _)| set[t])
    }

    /// States of end components built from states in `allowed` and choices
    /// accepted by `ok`; returned per component with the choices kept.
    fn end_components(
        &self,
        allowed: &[bool],
        ok: impl Fn(&Choice) -> bool,
    ) -> Vec<(Vec<usize>, Vec<(usize, usize)>)> {
        let n = self.len();
        let mut block: Vec<Option<usize>> = (0..n).map(|s| allowed[s].then_some(0)).collect();
        loop {
            let same = |s: usize, t: usize, block: &[Option<usize>]| {
                block[t].is_some() && block[t] == block[s]
            };
            let enabled: Vec<Vec<usize>> = (0..n)
                .map(|s| {
                    if block[s].is_none() {
                        return Vec::new();
                    }
                    (0..self.choices[s].len())
                        .filter(|&j| {
                            let c = &self.choices[s][j];
                            ok(c) && c.dist.iter().all(|&(t, _)| same(s, t, &block))
                        })
                        .collect()
                })
                .collect();
            // reachability closure along enabled choices
            let mut reach = vec![vec![false; n]; n];
            for s in 0..n {
                reach[s][s] = block[s].is_some() && !enabled[s].is_empty();
                for &j in &enabled[s] {
                    for &(t, _) in &self.choices[s][j].dist {
                        reach[s][t] = true;
                    }
                }
            }
            for k in 0..n {
                for i in 0..n {
                    if reach[i][k] {
                        for j in 0..n {
                            if reach[k][j] {
                                reach[i][j] = true;
                            }
                        }
                    }
                }
            }
            let mut next: Vec<Option<usize>> = vec![None; n];
            for s in 0..n {
                if block[s].is_none() || enabled[s].is_empty() {
                    continue;
                }
                // component id: smallest mutually reachable state
                next[s] = (0..n).find(|&t| reach[s][t] && reach[t][s]);
            }
            if next == block {
                let mut comps: Vec<(Vec<usize>, Vec<(usize, usize)>)> = Vec::new();
                for s in 0..n {
                    if block[s] == Some(s) {
                        let states: Vec<usize> = (0..n).filter(|&t| block[t] == Some(s)).collect();
                        let kept = states
                            .iter()
                            .flat_map(|&t| enabled[t].iter().map(move |&j| (t, j)))
                            .collect();
                        comps.push((states, kept));
                    }
                }
                return comps;
            }
            block = next;
        }
    }

    /// States from which the environment can reach `goal` almost surely.
    fn almost_sure_reach(&self, goal: &[bool]) -> Vec<bool> {
        let n = self.len();
        let mut x = vec![true; n];
        loop {
            let mut r = goal.to_vec();
            let mut changed = true;
            while changed {
                changed = false;
                for s in 0..n {
                    if r[s] || !x[s] {
                        continue;
                    }
                    if self.choices[s]
                        .iter()
                        .any(|c| self.inside(c, &x) && c.dist.iter().any(|&(t, _)| r[t]))
                    {
                        r[s] = true;
                        changed = true;
                    }
                }
            }
            if r == x {
                return x;
            }
            x = r;
        }
    }

    /// States that reach `goal` with positive probability through `through`.
    fn positive_reach(&self, goal: &[bool], through: &[bool]) -> Vec<bool> {
        let n = self.len();
        let mut r = goal.to_vec();
        let mut changed = true;
        while changed {
            changed = false;
            for s in 0..n {
                if r[s] || !through[s] {
                    continue;
                }
                if self.choices[s]
                    .iter()
                    .any(|c| c.dist.iter().any(|&(t, _)| r[t]))
                {
                    r[s] = true;
                    changed = true;
                }
            }
        }
        r
    }

    /// Total reward with some states fixed at 0 and the rest either infinite
    /// or solved by LP. `env_max` selects the environment's direction.
    fn total_reward(&self, zero: &[bool], infinite: &[bool], env_max: bool) -> Result<Vec<f64>> {
        let n = self.len();
        let var: Vec<Option<usize>> = {
            let mut next = 0;
            (0..n)
                .map(|s| {
                    (!zero[s] && !infinite[s]).then(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect()
        };
        let m = var.iter().flatten().count();
        let mut values: Vec<f64> = (0..n)
            .map(|s| if infinite[s] { f64::INFINITY } else { 0.0 })
            .collect();
        if m == 0 {
            return Ok(values);
        }
        // env max: least pre-fixpoint; env min: greatest post-fixpoint
        let mut lp = DenseLp::new(vec![1.0; m], !env_max);
        for s in 0..n {
            let Some(i) = var[s] else { continue };
            for c in &self.choices[s] {
                if c.dist.iter().any(|&(t, p)| infinite[t] && p > 0.0) {
                    // only avoidable choices remain for a minimizing environment
                    debug_assert!(!env_max);
                    continue;
                }
                let mut row = vec![0.0; m];
                row[i] += 1.0;
                for &(t, p) in &c.dist {
                    if let Some(j) = var[t] {
                        row[j] -= p;
                    }
                }
                lp.row(row, if env_max { Cmp::Ge } else { Cmp::Le }, c.reward);
            }
        }
        match lp.solve_robust() {
            DenseOutcome::Optimal { x, .. } => {
                for s in 0..n {
                    if let Some(i) = var[s] {
                        values[s] = x[i].max(0.0);
                    }
                }
                Ok(values)
            }
            other => Err(Error::NumericalFailure(format!(
                "oracle total-reward LP: {other:?}"
            ))),
        }
    }

    /// Optimal gain inside one maximal end component, restricted to the
    /// choices that stay in it; the bias of the first state is pinned to 0.
    fn component_gain(
        &self,
        states: &[usize],
        kept: &[(usize, usize)],
        env_max: bool,
    ) -> Result<f64> {
        let r_min = kept
            .iter()
            .map(|&(s, j)| self.choices[s][j].reward)
            .fold(f64::INFINITY, f64::min);
        let mut col = vec![None; self.len()];
        for (k, &s) in states.iter().enumerate().skip(1) {
            col[s] = Some(2 * k - 1);
        }
        // variables: g - r_min, then h+ and h- for every state but the first
        let width = 2 * states.len() - 1;
        let mut obj = vec![0.0; width];
        obj[0] = 1.0;
        let mut lp = DenseLp::new(obj, !env_max);
        for &(s, j) in kept {
            let c = &self.choices[s][j];
            let mut row = vec![0.0; width];
            row[0] = 1.0;
            let mut add = |t: usize, w: f64| {
                if let Some(k) = col[t] {
                    row[k] += w;
                    row[k + 1] -= w;
                }
            };
            add(s, 1.0);
            for &(t, p) in &c.dist {
                add(t, -p);
            }
            lp.row(
                row,
                if env_max { Cmp::Ge } else { Cmp::Le },
                c.reward - r_min,
            );
        }
        match lp.solve_robust() {
            DenseOutcome::Optimal { x, .. } => Ok(x[0] + r_min),
            other => Err(Error::NumericalFailure(format!(
                "oracle component gain LP: {other:?}"
            ))),
        }
    }

    /// Optimal gain vector: every run settles in a maximal end component, so
    /// the value is an optimal stopping problem over the component gains.
    fn gain(&self, env_max: bool) -> Result<Vec<f64>> {
        let n = self.len();
        let mut stop: Vec<Option<f64>> = vec![None; n];
        for (states, kept) in self.end_components(&vec![true; n], |_| true) {
            let g = self.component_gain(&states, &kept, env_max)?;
            states.iter().for_each(|&s| stop[s] = Some(g));
        }
        let shift = stop.iter().flatten().fold(0.0f64, |a, &g| a.min(g));
        // env max: least V >= stop, V >= PV; env min: greatest V <= stop, V <= PV
        let cmp = if env_max { Cmp::Ge } else { Cmp::Le };
        let mut lp = DenseLp::new(vec![1.0; n], !env_max);
        for s in 0..n {
            if let Some(g) = stop[s] {
                let mut row = vec![0.0; n];
                row[s] = 1.0;
                lp.row(row, cmp, g - shift);
            }
            for c in &self.choices[s] {
                let mut row = vec![0.0; n];
                row[s] += 1.0;
                for &(t, p) in &c.dist {
                    row[t] -= p;
                }
                lp.row(row, cmp, 0.0);
            }
        }
        match lp.solve_robust() {
            DenseOutcome::Optimal { x, .. } => Ok(x.iter().map(|v| v + shift).collect()),
            other => Err(Error::NumericalFailure(format!(
                "oracle gain LP: {other:?}"
            ))),
        }
    }

    /// Optimal values of the deciding player. Targets must be absorbing with
    /// reward 0; `lra` selects long-run average over total reward.
    pub fn optimal_values(
        &self,
        lra: bool,
        semantics: TrSemantics,
        maximize: bool,
        targets: &[bool],
    ) -> Result<Vec<f64>> {
        let n = self.len();
        let env_max = maximize;
        let none = vec![false; n];
        if lra {
            return self.gain(env_max);
        }
        match (semantics, env_max) {
            (TrSemantics::Cumulative, false) => {
                let mut zero = vec![false; n];
                for (states, _) in self.end_components(&vec![true; n], |c| c.reward == 0.0) {
                    states.iter().for_each(|&s| zero[s] = true);
                }
                let finite = self.almost_sure_reach(&zero);
                let infinite: Vec<bool> = finite.iter().map(|f| !f).collect();
                self.total_reward(&zero, &infinite, false)
            }
            (TrSemantics::Cumulative, true) => {
                let mut paying = vec![false; n];
                for (states, kept) in self.end_components(&vec![true; n], |_| true) {
                    if kept.iter().any(|&(s, j)| self.choices[s][j].reward > 0.0) {
                        states.iter().for_each(|&s| paying[s] = true);
                    }
                }
                let infinite = self.positive_reach(&paying, &vec![true; n]);
                self.total_reward(targets, &infinite, true)
            }
            (TrSemantics::Infinite, false) => {
                let finite = self.almost_sure_reach(targets);
                let infinite: Vec<bool> = finite.iter().map(|f| !f).collect();
                self.total_reward(targets, &infinite, false)
            }
            (TrSemantics::Infinite, true) => {
                let outside: Vec<bool> = targets.iter().map(|t| !t).collect();
                let mut trapped = none;
                for (states, _) in self.end_components(&outside, |_| true) {
                    states.iter().for_each(|&s| trapped[s] = true);
                }
                let infinite = self.positive_reach(&trapped, &outside);
                self.total_reward(targets, &infinite, true)
            }
        }
    }
}
