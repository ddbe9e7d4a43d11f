//! Long-run average reward through total reward on collapsed models.
//!
//! Every MEC becomes one state whose `stay` action pays the MEC's average
//! value. Those values are only known up to brackets `[lo, hi]`, so two
//! collapsed models are solved: one with the `lo` values from below and one
//! with the `hi` values from above. Brackets are refined on demand.

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::graph::{self, EndComponent};
use crate::model::{check_constant_support, BoundsPair, Direction, Rmdp};
use crate::transform::{self, CollapseMap, StayBounds};

use super::sweep::{Sweeper, Update};
use super::{stop_gap, Algorithm, Recorder, SolveReport};

const INITIAL_MEC_SWEEPS: u64 = 16;

fn set_stay_rewards(model: &mut Rmdp, map: &CollapseMap, values: impl Fn(usize) -> f64) {
    for (i, &r) in map.representatives.iter().enumerate() {
        let stay = model.actions[r]
            .iter_mut()
            .rev()
            .find(|a| a.label == transform::STAY_LABEL)
            .expect("representative has a stay action");
        stay.reward = values(i);
    }
}

/// Bounded value iteration for long-run average on constant-support models.
pub fn solve_bvi_lra(
    model: &Rmdp,
    direction: Direction,
    eps: f64,
    cfg: &SolverConfig,
) -> Result<SolveReport> {
    if !check_constant_support(model).all {
        return Err(Error::NotConstantSupport);
    }
    let components: Vec<EndComponent> = graph::mec_decomposition_unchecked(model);
    let mut stays: Vec<StayBounds> = components
        .iter()
        .map(|c| StayBounds::new(model, c, direction))
        .collect();
    for b in &mut stays {
        b.advance(model, INITIAL_MEC_SWEEPS, cfg)?;
    }
    let lo: Vec<f64> = stays.iter().map(|b| b.lo).collect();
    let (mut lo_model, map) = transform::collapse_lra(model, &components, &lo)?;
    let mut hi_model = lo_model.clone();
    set_stay_rewards(&mut hi_model, &map, |i| stays[i].hi);

    let m = lo_model.num_states();
    let mut frozen = vec![false; m];
    frozen[map.sink] = true;
    let mut lower = vec![0.0; m];
    let mut upper = vec![model.max_reward(); m];
    upper[map.sink] = 0.0;

    let mut recorder = Recorder::new(cfg);
    if recorder.active() {
        recorder.record(0, map.pull_back(&lower), map.pull_back(&upper));
    }
    let mut refine_sweeps = INITIAL_MEC_SWEEPS;
    let mut iteration = 0u64;
    let mut mec_sweeps = INITIAL_MEC_SWEEPS;
    let converged = loop {
        if stop_gap(&map.pull_back(&lower), &map.pull_back(&upper), cfg) <= eps {
            break true;
        }
        if iteration >= cfg.max_iterations {
            break false;
        }
        let (dl, du) = {
            let lo_sweeper = Sweeper::new(&lo_model, direction, 1.0, frozen.clone(), cfg);
            let hi_sweeper = Sweeper::new(&hi_model, direction, 1.0, frozen.clone(), cfg);
            let mut dl = 0.0f64;
            let mut du = 0.0f64;
            // a batch of outer sweeps between refinements
            for _ in 0..refine_sweeps.min(cfg.max_iterations - iteration) {
                dl = lo_sweeper.sweep(&mut lower, Update::Lower)?.max_change;
                du = hi_sweeper.sweep(&mut upper, Update::Upper)?.max_change;
                iteration += 1;
                if recorder.active() {
                    recorder.record(iteration, map.pull_back(&lower), map.pull_back(&upper));
                }
                if dl < 0.25 * eps && du < 0.25 * eps {
                    break;
                }
            }
            (dl, du)
        };
        if stop_gap(&map.pull_back(&lower), &map.pull_back(&upper), cfg) <= eps {
            break true;
        }
        if dl < 0.25 * eps && du < 0.25 * eps {
            // The outer iteration stalled: the stay brackets are too wide.
            for b in stays.iter_mut().filter(|b| b.gap() > 0.5 * eps) {
                b.advance(model, mec_sweeps, cfg)?;
            }
            mec_sweeps = mec_sweeps.saturating_mul(2);
            set_stay_rewards(&mut lo_model, &map, |i| stays[i].lo);
            set_stay_rewards(&mut hi_model, &map, |i| stays[i].hi);
        } else {
            refine_sweeps = refine_sweeps.saturating_mul(2);
        }
    };
    let mut bounds = BoundsPair::new(map.pull_back(&lower), map.pull_back(&upper));
    bounds.iteration = iteration;
    let mut report = SolveReport::new(bounds, Algorithm::Bvi);
    report.iterations = iteration;
    report.converged = converged;
    report.diagnostics.push(format!(
        "{} end components, {} sweeps inside the largest refinement",
        components.len(),
        stays.iter().map(|b| b.sweeps).max().unwrap_or(0)
    ));
    recorder.finish(&mut report);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ActionRecord, UncertaintySet};

    #[test]
    fn two_mecs_pick_the_better() {
        // 0 chooses between MEC {1} paying 2 and MEC {2,3} averaging 5
        let mut m = Rmdp::with_states(4);
        m.add_action(0, ActionRecord::singleton("left", 0.0, vec![1], vec![1.0]));
        m.add_action(0, ActionRecord::singleton("right", 0.0, vec![2], vec![1.0]));
        m.add_action(1, ActionRecord::singleton("a", 2.0, vec![1], vec![1.0]));
        m.add_action(2, ActionRecord::singleton("a", 10.0, vec![3], vec![1.0]));
        m.add_action(3, ActionRecord::singleton("a", 0.0, vec![2], vec![1.0]));
        let cfg = SolverConfig::default();
        let r = solve_bvi_lra(&m, Direction::Max, 1e-6, &cfg).unwrap();
        assert!(r.converged);
        for s in [0, 2, 3] {
            assert!(r.bounds.lower[s] <= 5.0 + 1e-12 && r.bounds.upper[s] >= 5.0 - 1e-12);
            assert!(r.bounds.gap_at(s) <= 1e-6);
        }
        assert!((r.bounds.lower[1] - 2.0).abs() <= 1e-6);
        let r = solve_bvi_lra(&m, Direction::Min, 1e-6, &cfg).unwrap();
        assert!((r.bounds.upper[0] - 2.0).abs() <= 1e-6);
    }

    #[test]
    fn interval_unichain() {
        // two states swapping with uncertain probabilities; rewards 1 and 0
        let mut m = Rmdp::with_states(2);
        let set = UncertaintySet::interval(vec![0.5, 0.5], 0.2);
        m.add_action(0, ActionRecord::new("a", 1.0, vec![0, 1], set.clone()));
        m.add_action(1, ActionRecord::new("a", 0.0, vec![0, 1], set));
        let cfg = SolverConfig::default();
        let r = solve_bvi_lra(&m, Direction::Max, 1e-6, &cfg).unwrap();
        // environment: leave 0 w.p. 0.7, return to 0 w.p. 0.3 -> gain 0.3 / (0.3 + 0.7)
        let g = 0.3;
        assert!(r.converged);
        assert!(
            r.bounds.lower[0] <= g + 1e-9 && r.bounds.upper[0] >= g - 1e-9,
            "{:?}",
            r.bounds
        );
        assert!(r.bounds.upper[0] <= model_max(&m));
    }

    fn model_max(m: &Rmdp) -> f64 {
        m.max_reward()
    }
}
