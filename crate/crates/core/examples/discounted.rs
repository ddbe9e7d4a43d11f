//! Discounted reward on a generated chain, with the a-priori error bound
//! `gamma^i * r_max / (1 - gamma)` next to the certified gap.

use rmdp::generate::{generate_model, Family};
use rmdp::model::{Direction, Norm};
use rmdp::solver::solve_discounted;
use rmdp::SolverConfig;

fn main() -> rmdp::Result<()> {
    let g = generate_model(Family::Chain, 20, 0.05, 0, Norm::L2);
    let gamma = 0.9;
    let cfg = SolverConfig {
        trace: true,
        ..SolverConfig::default()
    };
    let report = solve_discounted(&g.model, gamma, Direction::Min, 1e-8, &cfg)?;
    let r_max = g.model.max_reward();
    for &(i, gap) in report.trace.iter().step_by(20) {
        let bound = gamma.powi(i as i32) * r_max / (1.0 - gamma);
        println!("sweep {i:4}: gap {gap:.3e} <= {bound:.3e}");
    }
    println!(
        "cleaning cost from x0 in [{:.8}, {:.8}]",
        report.lower(0),
        report.upper(0)
    );
    Ok(())
}
