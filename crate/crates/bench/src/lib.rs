//! Benchmark fixtures.

use oweno::claw::{Grid1D, Problem, ProblemKind, Solver};
use oweno::{build_tables, DataMode, Scalar, Variant, WeightParams, WenoKernel};

/// Cell-average kernel with default weights.
pub fn kernel<S: Scalar>(r: usize, variant: Variant) -> WenoKernel<S> {
    let tables = build_tables(r, DataMode::CellAverages).expect("supported r");
    WenoKernel::new(&tables, WeightParams::default_for(variant, r)).expect("default params are valid")
}

/// `count` overlapping windows of smooth data with a kink in the middle, so
/// the weights see both smooth and nonsmooth stencils.
pub fn windows<S: Scalar>(r: usize, count: usize) -> Vec<Vec<S>> {
    let w = 2 * r - 1;
    let data: Vec<f64> = (0..count + w)
        .map(|i| {
            let x = i as f64 / count as f64 - 0.5;
            (3.0 * x).sin() + x.abs()
        })
        .collect();
    (0..count).map(|i| data[i..i + w].iter().map(|&v| S::from_f64(v)).collect()).collect()
}

pub fn solver(kind: ProblemKind, n: usize, variant: Variant) -> Solver {
    let problem = Problem::preset(kind);
    let grid = Grid1D::new(problem.domain.0, problem.domain.1, n, 3).expect("grid");
    let tables = build_tables(3, DataMode::CellAverages).expect("tables");
    Solver::new(problem, grid, &tables, WeightParams::default_for(variant, 3)).expect("solver")
}
