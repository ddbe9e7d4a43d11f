//! Certified value iteration for robust Markov decision processes.

pub mod cli;
pub mod config;
pub mod error;
pub mod generate;
pub mod graph;
pub mod io;
pub mod lp;
pub mod model;
pub mod reference;
pub mod solver;
pub mod transform;
pub mod uncertainty;

pub use config::{SolverConfig, SweepOrder};
pub use error::{Error, Result};
