//! Generate a benchmark model, write it as JSON, read it back, solve it and
//! print the result document.

use std::time::Instant;

use rmdp::generate::{generate_model, Family};
use rmdp::io::{emit_model, parse_model_str, ResultDocument};
use rmdp::model::{Norm, Objective};
use rmdp::solver::{solve, Algorithm};
use rmdp::SolverConfig;

fn main() -> rmdp::Result<()> {
    let g = generate_model(Family::Chain, 4, 0.1, 1, Norm::LInf);
    let text = emit_model(&g.model, g.targets.as_deref());
    println!("{text}");

    let loaded = parse_model_str(&text)?;
    let objective = Objective::ssp(loaded.targets.clone().unwrap_or_default());
    let cfg = SolverConfig::default();
    let started = Instant::now();
    let report = solve(&loaded.model, &objective, Algorithm::Auto, 1e-6, &cfg)?;
    let doc = ResultDocument::new(
        &loaded.model,
        &objective,
        &report,
        1e-6,
        &cfg,
        started.elapsed().as_secs_f64(),
    );
    println!("{}", doc.to_json());
    Ok(())
}
