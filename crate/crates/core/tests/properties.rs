mod common;

use proptest::prelude::*;
use rand::Rng;
use rmdp::generate::{generate_model, Family};
use rmdp::io::{emit_model, parse_model_str};
use rmdp::model::{Direction, Norm, Objective};
use rmdp::reference::{build_induced_sg, solve_sg};
use rmdp::solver::{solve, Algorithm};
use rmdp::transform::collapse;
use rmdp::uncertainty::{contains, expectation, optimize, OptDirection};
use rmdp::SolverConfig;

use common::SetFamily;

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![
        Just(Family::Grid),
        Just(Family::Chain),
        Just(Family::RandomSparse)
    ]
}

fn norm() -> impl Strategy<Value = Norm> {
    prop_oneof![Just(Norm::L1), Just(Norm::L2), Just(Norm::LInf)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn documents_round_trip(family in family(), size in 2usize..12, radius in 0.0f64..0.3, seed in any::<u64>(), norm in norm()) {
        let g = generate_model(family, size, radius, seed, norm);
        let text = emit_model(&g.model, g.targets.as_deref());
        let back = parse_model_str(&text).unwrap();
        prop_assert_eq!(&back.model, &g.model);
        prop_assert_eq!(back.targets, g.targets);
        prop_assert_eq!(emit_model(&back.model, None), emit_model(&g.model, None));
    }

    #[test]
    fn inner_witness_is_feasible_and_beats_the_center(seed in any::<u64>(), which in 0usize..8, k in 1usize..7, max in any::<bool>()) {
        let mut rng = common::rng(seed);
        let family = SetFamily::ALL[which];
        let (set, inside) = common::random_set_and_point(&mut rng, family, k);
        let values: Vec<f64> = (0..k).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let cfg = SolverConfig::default();
        let dir = if max { OptDirection::Max } else { OptDirection::Min };
        let r = optimize(&set, &values, dir, &cfg).unwrap();
        prop_assert!(contains(&set, &r.witness, 1e-7, &cfg), "{:?} not in {:?}", r.witness, set);
        prop_assert!((expectation(&values, &r.witness) - r.value).abs() <= 1e-9);
        let c = expectation(&values, &inside);
        match dir {
            OptDirection::Max => prop_assert!(r.value >= c - 1e-9),
            OptDirection::Min => prop_assert!(r.value <= c + 1e-9),
        }
    }

    #[test]
    fn bounds_bracket_the_game_value(seed in any::<u64>(), max in any::<bool>()) {
        let mut rng = common::rng(seed);
        let model = common::random_vrep(&mut rng, true);
        let objective = if max {
            Objective::total_reward(Direction::Max)
        } else {
            Objective::reach_total_reward(Direction::Min, vec![0])
        };
        let cfg = SolverConfig { max_iterations: 40, ..SolverConfig::default() };
        // stopped early on purpose: the bounds must be sound at any point
        let r = solve(&model, &objective, Algorithm::Bvi, 1e-12, &cfg).unwrap();
        let game = build_induced_sg(&model, &objective).unwrap();
        let v = solve_sg(&game, &objective, 1e-9).unwrap().lower;
        for s in 0..v.len() {
            let (l, u) = (r.bounds.lower[s], r.bounds.upper[s]);
            prop_assert!(l <= u, "state {}: [{}, {}]", s, l, u);
            if v[s].is_finite() {
                prop_assert!(l <= v[s] + 1e-9 && v[s] <= u + 1e-9, "state {}: {} not in [{}, {}]", s, v[s], l, u);
            } else {
                prop_assert!(u.is_infinite(), "state {}: infinite value, upper {}", s, u);
            }
        }
    }

    #[test]
    fn collapsing_keeps_the_value(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let model = common::random_vrep(&mut rng, true);
        let objective = Objective::total_reward(Direction::Max);
        let (collapsed, map) = collapse(&model, &vec![false; model.num_states()]).unwrap();
        let before = solve_sg(&build_induced_sg(&model, &objective).unwrap(), &objective, 1e-9).unwrap().lower;
        let after = solve_sg(&build_induced_sg(&collapsed, &objective).unwrap(), &objective, 1e-9).unwrap().lower;
        let pulled = map.pull_back(&after);
        for s in 0..before.len() {
            let same = if before[s].is_infinite() {
                pulled[s].is_infinite()
            } else {
                (before[s] - pulled[s]).abs() <= 1e-7 * before[s].abs().max(1.0)
            };
            prop_assert!(same, "state {}: {} before, {} after", s, before[s], pulled[s]);
        }
    }
}
