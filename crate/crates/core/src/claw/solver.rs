use std::fmt::Write as _;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::claw::euler::{conserved_to_primitive, euler_1d_flux};
use crate::claw::grid::Grid1D;
use crate::claw::problem::{Boundary, Equation, Problem};
use crate::claw::split::{llf_split, Splitting};
use crate::error::{Error, Result};
use crate::recon::{WeightParams, WenoKernel};
use crate::tables::{build_tables, DataMode, SchemeTables};

/// Time-step rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepMode {
    /// `dt = CFL min(h^{(2r-1)/3}, h / alpha)`, so the third-order integrator
    /// does not mask the spatial order.
    Convergence,
    /// `dt = CFL h / alpha`.
    Cfl,
}

impl StepMode {
    pub fn as_str(self) -> &'static str {
        match self {
            StepMode::Convergence => "convergence",
            StepMode::Cfl => "cfl",
        }
    }
}

impl FromStr for StepMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "convergence" => Ok(StepMode::Convergence),
            "cfl" => Ok(StepMode::Cfl),
            _ => Err(format!("unknown step mode `{s}` (expected convergence or cfl)")),
        }
    }
}

/// Conserved variables stored component-major: `u[c * n + i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverState {
    pub m: usize,
    pub n: usize,
    pub u: Vec<f64>,
    pub t: f64,
    pub steps: usize,
}

impl SolverState {
    pub fn component(&self, c: usize) -> &[f64] {
        &self.u[c * self.n..(c + 1) * self.n]
    }

    /// `h sum_i u_i` per component.
    pub fn totals(&self, h: f64) -> Vec<f64> {
        (0..self.m).map(|c| h * self.component(c).iter().sum::<f64>()).collect()
    }

    fn check_finite(&self) -> Result<()> {
        match self.u.iter().position(|v| !v.is_finite()) {
            Some(k) => Err(Error::BlowUp { time: self.t, cell: k % self.n, component: k / self.n }),
            None => Ok(()),
        }
    }
}

/// One step of the three-stage SSP Runge-Kutta scheme. `work` needs two
/// buffers of the state's length.
pub fn ssp_rk_step<F>(u: &mut [f64], dt: f64, work: &mut [Vec<f64>; 2], mut rhs: F) -> Result<()>
where
    F: FnMut(&[f64], f64, &mut [f64]) -> Result<()>,
{
    let [stage, k] = work;
    stage.resize(u.len(), 0.0);
    k.resize(u.len(), 0.0);
    rhs(u, 0.0, k)?;
    for i in 0..u.len() {
        stage[i] = u[i] + dt * k[i];
    }
    rhs(stage, dt, k)?;
    for i in 0..u.len() {
        stage[i] = 0.75 * u[i] + 0.25 * (stage[i] + dt * k[i]);
    }
    rhs(stage, 0.5 * dt, k)?;
    for i in 0..u.len() {
        u[i] = (u[i] + 2.0 * (stage[i] + dt * k[i])) / 3.0;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorNorms {
    pub l1: f64,
    pub linf: f64,
}

#[derive(Clone, Debug)]
pub struct SolveOutput {
    pub state: SolverState,
    pub errors: Option<ErrorNorms>,
    /// Relative change of `h sum u` per component; periodic runs only.
    pub conservation_drift: Option<Vec<f64>>,
    /// Wall clock of the time loop.
    pub elapsed: Duration,
}

/// Finite-difference WENO semi-discretization with owned scratch space.
pub struct Solver {
    problem: Problem,
    grid: Grid1D,
    kernel: WenoKernel<f64>,
    speed_bound: f64,
    ghost: usize,
    ext: Vec<f64>,
    flux: Vec<f64>,
    plus: Vec<f64>,
    minus: Vec<f64>,
    iface: Vec<f64>,
    work: [Vec<f64>; 2],
}

impl Solver {
    pub fn new(problem: Problem, grid: Grid1D, tables: &SchemeTables, params: WeightParams<f64>) -> Result<Self> {
        problem.validate()?;
        if tables.mode != DataMode::CellAverages {
            return Err(Error::InvalidProblem("the solver reconstructs split fluxes from cell averages".into()));
        }
        let r = tables.r;
        Grid1D::new(grid.a, grid.b, grid.n, r)?;
        if let (Equation::Euler { .. }, Splitting::Upwind) = (problem.equation, problem.splitting) {
            return Err(Error::InvalidProblem("upwind splitting needs a scalar flux".into()));
        }
        let kernel = WenoKernel::new(tables, params)?.with_discriminant_from(&build_tables(r, DataMode::PointValues)?)?;
        let ghost = r + 1;
        let len = grid.n + 2 * ghost;
        let m = problem.equation.components();
        Ok(Self {
            speed_bound: problem.speed_bound().unwrap_or(0.0),
            problem,
            grid,
            kernel,
            ghost,
            ext: vec![0.0; m * len],
            flux: vec![0.0; m * len],
            plus: vec![0.0; len],
            minus: vec![0.0; len],
            iface: vec![0.0; grid.n + 1],
            work: [Vec::new(), Vec::new()],
        })
    }

    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn initial_state(&self) -> SolverState {
        let (m, n) = (self.problem.equation.components(), self.grid.n);
        let mut u = vec![0.0; m * n];
        for i in 0..n {
            let q = self.problem.initial.conserved(self.grid.center(i), &self.problem.equation);
            for c in 0..m {
                u[c * n + i] = q[c];
            }
        }
        SolverState { m, n, u, t: 0.0, steps: 0 }
    }

    /// Fills ghost cells and physical fluxes; returns the splitting speed, the
    /// largest wave speed on the grid but at least the problem's a priori
    /// bound.
    fn extend(&mut self, u: &[f64]) -> Result<f64> {
        let (n, g) = (self.grid.n, self.ghost);
        let len = n + 2 * g;
        let m = self.problem.equation.components();
        for c in 0..m {
            let src = &u[c * n..(c + 1) * n];
            let dst = &mut self.ext[c * len..(c + 1) * len];
            dst[g..g + n].copy_from_slice(src);
            match &self.problem.boundary {
                Boundary::Periodic => {
                    for k in 0..g {
                        dst[k] = src[(n - g + k) % n];
                        dst[g + n + k] = src[k % n];
                    }
                }
                Boundary::InflowOutflow { left } => {
                    dst[..g].fill(left[c]);
                    let last = src[n - 1];
                    dst[g + n..].fill(last);
                }
            }
        }
        let mut alpha = 0.0f64;
        match self.problem.equation {
            Equation::Scalar(f) => {
                for (i, (&q, fl)) in self.ext[..len].iter().zip(&mut self.flux[..len]).enumerate() {
                    if !q.is_finite() {
                        return Err(Error::NonFiniteInput { index: i });
                    }
                    *fl = f.eval(q);
                    alpha = alpha.max(f.speed(q).abs());
                }
            }
            Equation::Euler { gamma } => {
                for i in 0..len {
                    let q = [self.ext[i], self.ext[len + i], self.ext[2 * len + i]];
                    let e = euler_1d_flux(q, gamma, i.saturating_sub(g).min(n - 1))?;
                    for c in 0..3 {
                        self.flux[c * len + i] = e.flux[c];
                    }
                    alpha = alpha.max(e.max_speed);
                }
            }
        }
        Ok(alpha.max(self.speed_bound))
    }

    /// Splitting speed for the current state.
    pub fn max_speed(&mut self, u: &[f64]) -> Result<f64> {
        self.extend(u)
    }

    /// Numerical flux at one interface from the `2r - 1` values of `f+` around
    /// the left cell and of `f-` around the right cell, both listed left to
    /// right.
    pub fn interface_flux(&self, plus: &[f64], minus: &[f64]) -> f64 {
        let mut mirrored = [0.0; 2 * crate::tables::MAX_R - 1];
        let w = minus.len();
        for (k, v) in minus.iter().rev().enumerate() {
            mirrored[k] = *v;
        }
        self.kernel.reconstruct_value(plus) + self.kernel.reconstruct_value(&mirrored[..w])
    }

    /// `du/dt = -(F_{i+1/2} - F_{i-1/2}) / h`.
    pub fn spatial_rhs(&mut self, u: &[f64], out: &mut [f64]) -> Result<()> {
        let m = self.problem.equation.components();
        let (n, g) = (self.grid.n, self.ghost);
        if u.len() != m * n || out.len() != m * n {
            return Err(Error::DimensionMismatch { expected: m * n, got: u.len().min(out.len()) });
        }
        let alpha = self.extend(u)?;
        let len = n + 2 * g;
        let r = self.kernel.r();
        let w = 2 * r - 1;
        let inv_h = 1.0 / self.grid.h();
        let upwind = self.problem.splitting == Splitting::Upwind;
        for c in 0..m {
            let fl = &self.flux[c * len..(c + 1) * len];
            if upwind {
                self.plus.copy_from_slice(fl);
            } else {
                llf_split(fl, &self.ext[c * len..(c + 1) * len], alpha, &mut self.plus, &mut self.minus)?;
            }
            // interface j sits between extended cells g + j - 1 and g + j
            for j in 0..=n {
                let left = g + j - 1;
                let mut f = self.kernel.reconstruct_value(&self.plus[left + 1 - r..left + r]);
                if !upwind {
                    let mut mirrored = [0.0; 2 * crate::tables::MAX_R - 1];
                    for (k, v) in self.minus[left + 2 - r..left + r + 1].iter().rev().enumerate() {
                        mirrored[k] = *v;
                    }
                    f += self.kernel.reconstruct_value(&mirrored[..w]);
                }
                self.iface[j] = f;
            }
            let dst = &mut out[c * n..(c + 1) * n];
            for i in 0..n {
                dst[i] = -(self.iface[i + 1] - self.iface[i]) * inv_h;
            }
        }
        Ok(())
    }

    /// Step size from the current state, before truncation at the final time.
    pub fn time_step(&mut self, state: &SolverState) -> Result<f64> {
        let alpha = self.extend(&state.u)?;
        let h = self.grid.h();
        let cfl = self.problem.cfl;
        let by_speed = if alpha > 0.0 { cfl * h / alpha } else { f64::INFINITY };
        let dt = match self.problem.step_mode {
            StepMode::Cfl => by_speed,
            StepMode::Convergence => {
                let order = (2 * self.kernel.r() - 1) as f64;
                by_speed.min(cfl * h.powf(order / 3.0))
            }
        };
        if !dt.is_finite() {
            return Err(Error::InvalidProblem("zero wave speed: CFL step undefined".into()));
        }
        Ok(dt)
    }

    pub fn step(&mut self, state: &mut SolverState, dt: f64) -> Result<()> {
        let mut work = std::mem::take(&mut self.work);
        let mut u = std::mem::take(&mut state.u);
        let res = ssp_rk_step(&mut u, dt, &mut work, |v, _, out| self.spatial_rhs(v, out));
        state.u = u;
        self.work = work;
        state.t += dt;
        state.steps += 1;
        match res {
            Err(Error::NonFiniteInput { index }) => {
                let len = self.grid.n + 2 * self.ghost;
                let cell = (index % len).saturating_sub(self.ghost).min(self.grid.n - 1);
                Err(Error::BlowUp { time: state.t, cell, component: index / len })
            }
            other => other.and_then(|_| state.check_finite()),
        }
    }

    /// Advances to the problem's final time, truncating the last step.
    pub fn run(&mut self, state: &mut SolverState) -> Result<()> {
        let t_final = self.problem.t_final;
        while state.t < t_final {
            let mut dt = self.time_step(state)?;
            let last = state.t + dt >= t_final * (1.0 - 1e-14);
            if last {
                dt = t_final - state.t;
            }
            self.step(state, dt)?;
            if last {
                state.t = t_final;
            }
        }
        Ok(())
    }

    pub fn errors(&self, state: &SolverState) -> Result<Option<ErrorNorms>> {
        if !self.problem.has_exact() {
            return Ok(None);
        }
        let h = self.grid.h();
        let (mut l1, mut linf) = (0.0, 0.0f64);
        for (i, &v) in state.component(0).iter().enumerate() {
            let e = (v - self.problem.exact(self.grid.center(i), state.t)?).abs();
            l1 += e;
            linf = linf.max(e);
        }
        Ok(Some(ErrorNorms { l1: h * l1, linf }))
    }
}

/// Runs `problem` on `grid` to its final time.
pub fn solve(problem: &Problem, grid: Grid1D, tables: &SchemeTables, params: WeightParams<f64>) -> Result<SolveOutput> {
    let mut solver = Solver::new(problem.clone(), grid, tables, params)?;
    let mut state = solver.initial_state();
    let before = state.totals(grid.h());
    let start = Instant::now();
    solver.run(&mut state)?;
    let elapsed = start.elapsed();
    let conservation_drift = match problem.boundary {
        Boundary::Periodic => Some(
            before
                .iter()
                .zip(state.totals(grid.h()))
                .map(|(b, a)| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE))
                .collect(),
        ),
        Boundary::InflowOutflow { .. } => None,
    };
    let errors = solver.errors(&state)?;
    Ok(SolveOutput { state, errors, conservation_drift, elapsed })
}

/// Plain-text columns `x u` for scalar laws or `x rho v p` for Euler.
pub fn solution_dump(problem: &Problem, grid: &Grid1D, state: &SolverState) -> String {
    let mut out = String::new();
    for i in 0..state.n {
        let x = grid.center(i);
        match problem.equation {
            Equation::Scalar(_) => {
                let _ = writeln!(out, "{x:.16e} {:.16e}", state.u[i]);
            }
            Equation::Euler { gamma } => {
                let q = [state.u[i], state.u[state.n + i], state.u[2 * state.n + i]];
                let [rho, v, p] = conserved_to_primitive(q, gamma);
                let _ = writeln!(out, "{x:.16e} {rho:.16e} {v:.16e} {p:.16e}");
            }
        }
    }
    out
}

/// Whether `values` stays inside the range of `reference` widened by `rel`
/// times its span.
pub fn range_check(values: &[f64], reference: &[f64], rel: f64) -> bool {
    let (lo, hi) = min_max(reference);
    let (vlo, vhi) = min_max(values);
    let slack = rel * (hi - lo);
    vlo >= lo - slack && vhi <= hi + slack
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)))
}

/// `sum |u_{i+1} - u_i|`.
pub fn total_variation(values: &[f64]) -> f64 {
    values.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::claw::exact::QuadraticFlux;
    use crate::claw::problem::{InitialCondition, ProblemKind};
    use crate::recon::Variant;
    use crate::tables::build_tables;
    use std::f64::consts::PI;

    fn solver(problem: Problem, n: usize, v: Variant) -> Solver {
        let r = 3;
        let (a, b) = problem.domain;
        let grid = Grid1D::new(a, b, n, r).unwrap();
        let tables = build_tables(r, DataMode::CellAverages).unwrap();
        Solver::new(problem, grid, &tables, WeightParams::default_for(v, r)).unwrap()
    }

    #[test]
    fn rk3_is_third_order() {
        let lambda = -1.3;
        let mut errs = Vec::new();
        for dt in [0.1, 0.05] {
            let mut u = vec![1.0];
            let mut work = [Vec::new(), Vec::new()];
            ssp_rk_step(&mut u, dt, &mut work, |v, _, out| {
                out[0] = lambda * v[0];
                Ok(())
            })
            .unwrap();
            errs.push((u[0] - (lambda * dt).exp()).abs());
        }
        let slope = (errs[0] / errs[1]).log2();
        assert!((slope - 4.0).abs() < 0.1, "{slope}");
    }

    #[test]
    fn zero_rhs_keeps_state() {
        let mut u = vec![0.3, -2.0];
        let mut work = [Vec::new(), Vec::new()];
        ssp_rk_step(&mut u, 0.7, &mut work, |_, _, out| {
            out.fill(0.0);
            Ok(())
        })
        .unwrap();
        assert_eq!(u, vec![0.3, -2.0]);
    }

    #[test]
    fn constant_state_is_preserved() {
        for kind in [ProblemKind::Burgers, ProblemKind::ShuOsher] {
            let mut p = Problem::preset(kind);
            p.initial = match kind {
                ProblemKind::ShuOsher => {
                    p.boundary = Boundary::Periodic;
                    p.initial
                }
                _ => InitialCondition::Sine { offset: 0.4, amplitude: 0.0, wavenumber: 1.0 },
            };
            let mut s = solver(p.clone(), 40, Variant::Oweno);
            let mut state = s.initial_state();
            if kind == ProblemKind::ShuOsher {
                let n = state.n;
                for c in 0..3 {
                    let v = state.u[c * n + n / 2];
                    state.u[c * n..(c + 1) * n].fill(v);
                }
            }
            let mut rhs = vec![1.0; state.u.len()];
            s.spatial_rhs(&state.u, &mut rhs).unwrap();
            assert!(rhs.iter().all(|&d| d == 0.0), "{kind}");
        }
    }

    #[test]
    fn interface_flux_is_consistent() {
        let s = solver(Problem::preset(ProblemKind::Advection), 40, Variant::JiangShu);
        let c = 0.37;
        // f+ = f- = c / 2 on both sides
        assert!((s.interface_flux(&[c / 2.0; 5], &[c / 2.0; 5]) - c).abs() < 1e-16);
    }

    #[test]
    fn advection_rhs_is_fifth_order() {
        let mut errs = Vec::new();
        for n in [80, 160] {
            let mut p = Problem::preset(ProblemKind::Advection);
            p.initial = InitialCondition::Sine { offset: 0.0, amplitude: 1.0, wavenumber: 1.0 };
            let mut s = solver(p, n, Variant::Oweno);
            let state = s.initial_state();
            let mut rhs = vec![0.0; n];
            s.spatial_rhs(&state.u, &mut rhs).unwrap();
            let g = *s.grid();
            let e = (0..n).map(|i| (rhs[i] + PI * (PI * g.center(i)).cos()).abs()).fold(0.0, f64::max);
            errs.push(e);
        }
        assert!(errs[0] < 1e-6, "{errs:?}");
        assert!((errs[0] / errs[1]).log2() > 4.5, "{errs:?}");
    }

    #[test]
    fn periodic_runs_conserve() {
        let mut p = Problem::preset(ProblemKind::BurgersShock);
        p.t_final = 1.5;
        let grid = Grid1D::new(-1.0, 1.0, 40, 3).unwrap();
        let tables = build_tables(3, DataMode::CellAverages).unwrap();
        let out = solve(&p, grid, &tables, WeightParams::default_for(Variant::Oweno, 3)).unwrap();
        assert!(out.errors.is_none());
        assert!(out.conservation_drift.unwrap()[0] < 1e-13);
        assert_eq!(out.state.t, 1.5);
    }

    #[test]
    fn blow_up_reported() {
        let mut p = Problem::preset(ProblemKind::Burgers);
        p.equation = Equation::Scalar(QuadraticFlux { a: 0.5, b: 0.0 });
        let mut s = solver(p, 40, Variant::Oweno);
        let mut state = s.initial_state();
        state.u[7] = f64::NAN;
        assert!(matches!(s.step(&mut state, 1e-3), Err(Error::BlowUp { cell: 7, component: 0, .. })));
    }

    #[test]
    fn euler_rejects_upwind() {
        let mut p = Problem::preset(ProblemKind::ShuOsher);
        p.splitting = Splitting::Upwind;
        let grid = Grid1D::new(-5.0, 5.0, 40, 3).unwrap();
        let tables = build_tables(3, DataMode::CellAverages).unwrap();
        assert!(Solver::new(p, grid, &tables, WeightParams::default_for(Variant::Oweno, 3)).is_err());
    }

    #[test]
    fn helpers() {
        assert_eq!(total_variation(&[0.0, 1.0, 0.5]), 1.5);
        assert!(range_check(&[0.0, 1.005], &[0.0, 1.0], 0.01));
        assert!(!range_check(&[-0.02, 1.0], &[0.0, 1.0], 0.01));
    }
}
