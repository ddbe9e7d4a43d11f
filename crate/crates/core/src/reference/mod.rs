//! Independent oracles for testing the solvers on small instances.
//!
//! Nothing here is used by the production path: the explicit induced game and
//! its exact solver, textbook MDP and Markov chain solvers, and brute-force
//! inner optimization. The linear programs are solved by a separate dense
//! simplex (exact rationals for inner optimization), not by the solver's LP
//! backend.

mod classical;
mod inner;
mod mdp;
mod sg;
pub mod simplex;

pub use classical::{chain_value, classical_bellman, classical_mdp, classical_vi, mdp_value};
pub use inner::{
    brute_force_inner, brute_force_inner_with, kkt_residual, DEFAULT_SAMPLES, MAX_SUCCESSORS,
};
pub use mdp::{Choice, ExplicitMdp};
pub use sg::{
    build_induced_sg, solve_sg, Player, SgAction, SgState, StochasticGame, MAX_STRATEGIES,
};
