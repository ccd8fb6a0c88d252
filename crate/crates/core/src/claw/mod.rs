//! Method-of-lines finite-difference solver for 1D conservation laws
//! `u_t + f(u)_x = 0`.
//!
//! Interface fluxes are built from split fluxes `f = f+ + f-`, each
//! reconstructed at `x_{i+1/2}` with the cell-average WENO kernel (left
//! biased for `f+`, mirrored for `f-`). Time integration is the three-stage
//! SSP Runge-Kutta scheme.

mod euler;
mod exact;
mod grid;
mod problem;
mod solver;
mod split;

pub use euler::{euler_1d_flux, primitive_to_conserved, conserved_to_primitive, EulerFlux};
pub use exact::{characteristics_oracle, QuadraticFlux};
pub use grid::Grid1D;
pub use problem::{Boundary, Equation, InitialCondition, Problem, ProblemKind};
pub use solver::{
    range_check, solution_dump, solve, ssp_rk_step, total_variation, ErrorNorms, Solver, SolveOutput, SolverState,
    StepMode,
};
pub use split::{llf_split, Splitting};
