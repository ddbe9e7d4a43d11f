//! The brute-force oracles used by the test suite: inner optimization over a
//! single uncertainty set, and the induced stochastic game of a V-polytope model.

use rmdp::model::{ActionRecord, Direction, Norm, Objective, Rmdp, UncertaintySet};
use rmdp::reference::{brute_force_inner, build_induced_sg, solve_sg};
use rmdp::solver::{solve, Algorithm};
use rmdp::uncertainty::{optimize, OptDirection};
use rmdp::SolverConfig;

fn main() -> rmdp::Result<()> {
    let cfg = SolverConfig::default();
    let values = [3.0, 1.0, 0.0];
    for (name, set) in [
        (
            "L1 ball",
            UncertaintySet::ball(Norm::L1, vec![0.2, 0.5, 0.3], 0.2),
        ),
        (
            "L2 ball",
            UncertaintySet::ball(Norm::L2, vec![0.2, 0.5, 0.3], 0.2),
        ),
        (
            "interval",
            UncertaintySet::interval(vec![0.2, 0.5, 0.3], 0.1),
        ),
    ] {
        let fast = optimize(&set, &values, OptDirection::Min, &cfg)?;
        let slow = brute_force_inner(&set, &values, OptDirection::Min)?;
        println!("{name:>8}: inner {:.9}, oracle {:.9}", fast.value, slow);
    }

    let mut m = Rmdp::with_states(3);
    let hull = UncertaintySet::PolytopeV {
        vertices: vec![vec![0.5, 0.5], vec![0.9, 0.1]],
    };
    m.add_action(0, ActionRecord::new("gamble", 1.0, vec![0, 1], hull));
    m.add_action(0, ActionRecord::singleton("cash", 1.5, vec![2], vec![1.0]));
    m.add_action(1, ActionRecord::singleton("done", 0.0, vec![2], vec![1.0]));
    m.add_action(2, ActionRecord::singleton("done", 0.0, vec![2], vec![1.0]));
    let objective = Objective::total_reward(Direction::Max);
    let game = build_induced_sg(&m, &objective)?;
    let exact = solve_sg(&game, &objective, 1e-9)?;
    let report = solve(&m, &objective, Algorithm::Bvi, 1e-6, &cfg)?;
    println!(
        "game with {} states: V(s0) = {}",
        game.num_states(),
        exact.lower[0]
    );
    println!(
        "bounded value iteration: [{}, {}]",
        report.lower(0),
        report.upper(0)
    );
    Ok(())
}
