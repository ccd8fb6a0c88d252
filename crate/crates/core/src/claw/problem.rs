use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::claw::euler::primitive_to_conserved;
use crate::claw::exact::{characteristics_oracle, QuadraticFlux};
use crate::claw::split::Splitting;
use crate::claw::solver::StepMode;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Equation {
    Scalar(QuadraticFlux),
    Euler { gamma: f64 },
}

impl Equation {
    pub fn components(&self) -> usize {
        match self {
            Equation::Scalar(_) => 1,
            Equation::Euler { .. } => 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InitialCondition {
    /// `offset + amplitude sin(wavenumber pi x)`.
    Sine { offset: f64, amplitude: f64, wavenumber: f64 },
    /// Mach 3 shock at `x = -4` running into a density sine wave.
    ShuOsher,
}

impl InitialCondition {
    pub fn scalar_value(&self, x: f64) -> f64 {
        match *self {
            InitialCondition::Sine { offset, amplitude, wavenumber } => offset + amplitude * (wavenumber * PI * x).sin(),
            InitialCondition::ShuOsher => f64::NAN,
        }
    }

    pub fn scalar_slope(&self, x: f64) -> f64 {
        match *self {
            InitialCondition::Sine { amplitude, wavenumber, .. } => {
                amplitude * wavenumber * PI * (wavenumber * PI * x).cos()
            }
            InitialCondition::ShuOsher => f64::NAN,
        }
    }

    /// `(min, max)` of a scalar profile.
    pub fn scalar_range(&self) -> Option<(f64, f64)> {
        match *self {
            InitialCondition::Sine { offset, amplitude, .. } => {
                Some((offset - amplitude.abs(), offset + amplitude.abs()))
            }
            InitialCondition::ShuOsher => None,
        }
    }

    pub fn min_slope(&self) -> f64 {
        match *self {
            InitialCondition::Sine { amplitude, wavenumber, .. } => -(amplitude * wavenumber * PI).abs(),
            InitialCondition::ShuOsher => f64::NAN,
        }
    }

    pub fn max_slope(&self) -> f64 {
        -self.min_slope()
    }

    /// Conserved variables at `x`.
    pub fn conserved(&self, x: f64, equation: &Equation) -> Vec<f64> {
        match (self, equation) {
            (InitialCondition::ShuOsher, Equation::Euler { gamma }) => {
                let (rho, v, p) = if x <= -4.0 {
                    (27.0 / 7.0, 4.0 * 35f64.sqrt() / 9.0, 31.0 / 3.0)
                } else {
                    (1.0 + (5.0 * x).sin() / 5.0, 0.0, 1.0)
                };
                primitive_to_conserved(rho, v, p, *gamma).to_vec()
            }
            _ => vec![self.scalar_value(x)],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Boundary {
    Periodic,
    /// Frozen conserved state on the left, zero-order extrapolation on the right.
    InflowOutflow { left: Vec<f64> },
}

/// Built-in test problems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    Advection,
    Burgers,
    BurgersShock,
    CubicZero,
    ShuOsher,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 5] = [
        ProblemKind::Advection,
        ProblemKind::Burgers,
        ProblemKind::BurgersShock,
        ProblemKind::CubicZero,
        ProblemKind::ShuOsher,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProblemKind::Advection => "advection",
            ProblemKind::Burgers => "burgers",
            ProblemKind::BurgersShock => "burgers-shock",
            ProblemKind::CubicZero => "cubic-zero",
            ProblemKind::ShuOsher => "shu-osher",
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        ProblemKind::ALL.into_iter().find(|k| k.as_str() == s).ok_or_else(|| {
            let names: Vec<_> = ProblemKind::ALL.iter().map(|k| k.as_str()).collect();
            format!("unknown problem `{s}` (expected one of {})", names.join(", "))
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub kind: ProblemKind,
    pub equation: Equation,
    pub initial: InitialCondition,
    pub boundary: Boundary,
    pub domain: (f64, f64),
    pub t_final: f64,
    pub cfl: f64,
    pub splitting: Splitting,
    pub step_mode: StepMode,
}

const SINE: InitialCondition = InitialCondition::Sine { offset: 0.25, amplitude: 0.5, wavenumber: 1.0 };

impl Problem {
    pub fn preset(kind: ProblemKind) -> Self {
        let scalar = |a, b, t_final, splitting, step_mode| Problem {
            kind,
            equation: Equation::Scalar(QuadraticFlux { a, b }),
            initial: SINE,
            boundary: Boundary::Periodic,
            domain: (-1.0, 1.0),
            t_final,
            cfl: 0.5,
            splitting,
            step_mode,
        };
        match kind {
            ProblemKind::Advection => scalar(0.0, 1.0, 1.0, Splitting::Upwind, StepMode::Convergence),
            ProblemKind::Burgers => scalar(0.5, 0.0, 0.3, Splitting::LaxFriedrichs, StepMode::Convergence),
            ProblemKind::BurgersShock => scalar(0.5, 0.0, 12.0, Splitting::LaxFriedrichs, StepMode::Cfl),
            ProblemKind::CubicZero => scalar(0.5, 0.25, 0.3, Splitting::Upwind, StepMode::Convergence),
            ProblemKind::ShuOsher => {
                let equation = Equation::Euler { gamma: 1.4 };
                let left = InitialCondition::ShuOsher.conserved(-5.0, &equation);
                Problem {
                    kind,
                    equation,
                    initial: InitialCondition::ShuOsher,
                    boundary: Boundary::InflowOutflow { left },
                    domain: (-5.0, 5.0),
                    t_final: 1.8,
                    cfl: 0.5,
                    splitting: Splitting::LaxFriedrichs,
                    step_mode: StepMode::Cfl,
                }
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::InvalidProblem(format!("CFL {} outside (0, 1]", self.cfl)));
        }
        if !(self.t_final >= 0.0) || !self.t_final.is_finite() {
            return Err(Error::InvalidProblem(format!("final time {} must be nonnegative", self.t_final)));
        }
        match (&self.boundary, self.equation.components()) {
            (Boundary::InflowOutflow { left }, m) if left.len() != m => {
                Err(Error::DimensionMismatch { expected: m, got: left.len() })
            }
            _ => Ok(()),
        }
    }

    /// `max |f'(u)|` over the range of the scalar initial data. Entropy
    /// solutions stay in that range, so the bound holds for all times.
    pub fn speed_bound(&self) -> Option<f64> {
        match self.equation {
            Equation::Scalar(f) => {
                let (lo, hi) = self.initial.scalar_range()?;
                Some(f.speed(lo).abs().max(f.speed(hi).abs()))
            }
            Equation::Euler { .. } => None,
        }
    }

    /// Whether [`Problem::exact`] is available at the final time.
    pub fn has_exact(&self) -> bool {
        match (self.equation, self.initial, &self.boundary) {
            (Equation::Scalar(f), InitialCondition::Sine { .. }, Boundary::Periodic) => {
                let curvature = 2.0 * f.a * self.t_final;
                let steepest = if curvature > 0.0 { self.initial.min_slope() } else { self.initial.max_slope() };
                1.0 + curvature * steepest > 0.0
            }
            _ => false,
        }
    }

    /// Exact solution of a smooth scalar problem.
    pub fn exact(&self, x: f64, t: f64) -> Result<f64> {
        match self.equation {
            Equation::Scalar(f) => characteristics_oracle(f, &self.initial, x, t, 1e-15),
            Equation::Euler { .. } => Err(Error::InvalidProblem("no closed-form solution for Euler".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        for k in ProblemKind::ALL {
            let p = Problem::preset(k);
            p.validate().unwrap();
            assert_eq!(p.kind.as_str().parse::<ProblemKind>().unwrap(), k);
        }
        assert!(Problem::preset(ProblemKind::Burgers).has_exact());
        assert!(Problem::preset(ProblemKind::Advection).has_exact());
        assert!(!Problem::preset(ProblemKind::BurgersShock).has_exact());
        assert!(!Problem::preset(ProblemKind::ShuOsher).has_exact());
    }

    #[test]
    fn cubic_zero_speeds_are_nonnegative() {
        let p = Problem::preset(ProblemKind::CubicZero);
        let Equation::Scalar(f) = p.equation else { unreachable!() };
        let (lo, _) = p.initial.scalar_range().unwrap();
        assert_eq!(f.speed(lo), 0.0);
    }

    #[test]
    fn burgers_speed_bound() {
        assert_eq!(Problem::preset(ProblemKind::Burgers).speed_bound(), Some(0.75));
        assert_eq!(Problem::preset(ProblemKind::ShuOsher).speed_bound(), None);
    }

    #[test]
    fn shu_osher_states() {
        let p = Problem::preset(ProblemKind::ShuOsher);
        let q = p.initial.conserved(0.0, &p.equation);
        assert_eq!(&q[..2], &[1.0, 0.0]);
        assert!((q[2] - 2.5).abs() < 1e-15);
        let Boundary::InflowOutflow { left } = &p.boundary else { unreachable!() };
        assert!((left[0] - 27.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn bad_cfl() {
        let mut p = Problem::preset(ProblemKind::Advection);
        p.cfl = 1.5;
        assert!(p.validate().is_err());
    }
}
