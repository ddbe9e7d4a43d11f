//! Long-run average reward on a multichain model with interval uncertainty.
//!
//! From `start` the agent picks one of two closed loops; the environment
//! controls how often each loop visits its rewarding state.

use rmdp::model::{ActionRecord, Direction, Rmdp, UncertaintySet};
use rmdp::solver::solve_bvi_lra;
use rmdp::SolverConfig;

fn main() -> rmdp::Result<()> {
    let names = ["start", "a_pay", "a_idle", "b_pay", "b_idle"];
    let mut m = Rmdp::new(names.iter().map(|s| s.to_string()).collect(), 0);
    m.add_action(0, ActionRecord::singleton("go_a", 0.0, vec![1], vec![1.0]));
    m.add_action(0, ActionRecord::singleton("go_b", 0.0, vec![3], vec![1.0]));
    // loop A: pays 1, enters the paying state w.p. in [0.3, 0.7]
    for s in [1, 2] {
        let r = if s == 1 { 1.0 } else { 0.0 };
        m.add_action(
            s,
            ActionRecord::new(
                "step",
                r,
                vec![1, 2],
                UncertaintySet::interval(vec![0.5, 0.5], 0.2),
            ),
        );
    }
    // loop B: pays 0.6, enters the paying state w.p. in [0.75, 0.85]
    for s in [3, 4] {
        let r = if s == 3 { 0.6 } else { 0.0 };
        m.add_action(
            s,
            ActionRecord::new(
                "step",
                r,
                vec![3, 4],
                UncertaintySet::interval(vec![0.8, 0.2], 0.05),
            ),
        );
    }

    let cfg = SolverConfig::default();
    for direction in [Direction::Max, Direction::Min] {
        let report = solve_bvi_lra(&m, direction, 1e-6, &cfg)?;
        println!(
            "{direction}: gain from start in [{:.6}, {:.6}] after {} sweeps",
            report.lower(0),
            report.upper(0),
            report.iterations
        );
    }
    Ok(())
}
