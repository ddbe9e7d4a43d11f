/// Order in which a Bellman sweep visits states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepOrder {
    /// In-place updates, sinks of the support graph first.
    GaussSeidel,
    /// All states read the previous vector. Parallel when `threads > 1`.
    Jacobi,
}

/// Numerical and algorithmic knobs shared by every module.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Primal feasibility tolerance of the LP backend and set-membership checks.
    pub lp_tolerance: f64,
    /// Probability mass above this threshold counts as "positive".
    pub mass_tolerance: f64,
    /// Fallback for the minimum positive transition probability.
    pub pmin_floor: Option<f64>,
    pub max_iterations: u64,
    pub sweep_order: SweepOrder,
    /// Stop on `U - L <= eps * max(1, |L|)` instead of the absolute gap.
    pub relative_gap: bool,
    /// Try to replace a useless a-priori upper bound by a certified pre-fixpoint.
    pub certify_upper: bool,
    /// Record `(iteration, max gap)` after every sweep.
    pub trace: bool,
    /// Record full bound vectors after every sweep (expensive, test use).
    pub record_bounds: bool,
    pub threads: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            lp_tolerance: 1e-9,
            mass_tolerance: 1e-9,
            pmin_floor: Some(1e-6),
            max_iterations: 10_000_000,
            sweep_order: SweepOrder::GaussSeidel,
            relative_gap: false,
            certify_upper: true,
            trace: false,
            record_bounds: false,
            threads: 1,
        }
    }
}
