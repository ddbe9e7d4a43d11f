//! Solves generated frozen-lake grids of increasing size and reports timings.
//!
//! `cargo run --release --example grid_scaling -- 100 317`

use std::time::Instant;

use rmdp::generate::{generate_model, Family};
use rmdp::model::{Direction, Norm, Objective};
use rmdp::solver::{solve, Algorithm};
use rmdp::SolverConfig;

fn main() {
    let sides: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let sides = if sides.is_empty() {
        vec![50, 100, 200]
    } else {
        sides
    };
    let cfg = SolverConfig::default();
    let objective = Objective::total_reward(Direction::Max);
    for side in sides {
        let t = Instant::now();
        let g = generate_model(Family::Grid, side, 0.01, 1, Norm::L1);
        let built = t.elapsed();
        let t = Instant::now();
        let report = solve(&g.model, &objective, Algorithm::Bvi, 1e-6, &cfg).expect("solvable");
        let m = &g.model;
        println!(
            "{:>8} states  build {:>6.2?}  solve {:>8.2?}  sweeps {:>5}  converged {}  V(start) in [{:.6}, {:.6}]",
            m.num_states(),
            built,
            t.elapsed(),
            report.iterations,
            report.converged,
            report.lower(m.initial),
            report.upper(m.initial),
        );
    }
}
