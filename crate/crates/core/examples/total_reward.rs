//! Maximal total reward on a model with a zero-reward cycle.
//!
//! `p` and `q` can bounce between each other forever at no reward; plain value
//! iteration started from an upper bound would never drop below it, while
//! bounded value iteration collapses the cycle and certifies `V = 1`.

use rmdp::model::{ActionRecord, Direction, Objective, Rmdp};
use rmdp::solver::{solve, Algorithm};
use rmdp::SolverConfig;

fn main() -> rmdp::Result<()> {
    let mut m = Rmdp::new(vec!["p".into(), "q".into(), "done".into()], 0);
    m.add_action(0, ActionRecord::singleton("stay", 0.0, vec![1], vec![1.0]));
    m.add_action(1, ActionRecord::singleton("stay", 0.0, vec![0], vec![1.0]));
    m.add_action(1, ActionRecord::singleton("exit", 1.0, vec![2], vec![1.0]));
    m.add_action(2, ActionRecord::singleton("loop", 0.0, vec![2], vec![1.0]));

    let objective = Objective::total_reward(Direction::Max);
    let cfg = SolverConfig {
        trace: true,
        ..SolverConfig::default()
    };
    let report = solve(&m, &objective, Algorithm::Bvi, 1e-6, &cfg)?;
    println!(
        "converged after {} sweeps: {}",
        report.iterations, report.converged
    );
    for (s, name) in m.state_names.iter().enumerate() {
        println!("  {name}: [{}, {}]", report.lower(s), report.upper(s));
    }
    if let Some(p) = &report.policies {
        println!("agent actions: {:?}", p.agent);
    }
    Ok(())
}
