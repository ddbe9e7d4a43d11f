//! Polytopic uncertainty without constant support: the environment may put
//! all mass on either state of a zero-reward cycle. Deflation repeatedly
//! lowers the upper bound on end components the environment can trap the
//! agent in, which is what makes the stopping criterion sound here.

use rmdp::model::{ActionRecord, Direction, Objective, Rmdp, UncertaintySet};
use rmdp::solver::{select_algorithm, solve, Algorithm};
use rmdp::SolverConfig;

fn main() -> rmdp::Result<()> {
    let mut m = Rmdp::new(vec!["p".into(), "q".into(), "sink".into()], 0);
    let either = || UncertaintySet::PolytopeV {
        vertices: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
    };
    m.add_action(0, ActionRecord::new("stay", 0.0, vec![0, 1], either()));
    m.add_action(0, ActionRecord::singleton("exit", 1.0, vec![2], vec![1.0]));
    m.add_action(1, ActionRecord::new("stay", 0.0, vec![0, 1], either()));
    m.add_action(1, ActionRecord::singleton("exit", 2.0, vec![2], vec![1.0]));
    m.add_action(2, ActionRecord::singleton("loop", 0.0, vec![2], vec![1.0]));

    let objective = Objective::total_reward(Direction::Max);
    let (chosen, caveat) = select_algorithm(&m, &objective);
    println!(
        "auto selects {chosen}{}",
        caveat.map(|c| format!(" ({c})")).unwrap_or_default()
    );

    let report = solve(
        &m,
        &objective,
        Algorithm::Deflate,
        1e-6,
        &SolverConfig::default(),
    )?;
    for (s, name) in m.state_names.iter().enumerate() {
        println!("  {name}: [{}, {}]", report.lower(s), report.upper(s));
    }
    Ok(())
}
