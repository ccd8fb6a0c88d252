use crate::claw::problem::InitialCondition;
use crate::error::{Error, Result};

/// `f(u) = a u^2 + b u`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadraticFlux {
    pub a: f64,
    pub b: f64,
}

impl QuadraticFlux {
    #[inline]
    pub fn eval(&self, u: f64) -> f64 {
        (self.a * u + self.b) * u
    }

    #[inline]
    pub fn speed(&self, u: f64) -> f64 {
        2.0 * self.a * u + self.b
    }
}

/// Smooth solution `u(x, t)` of a scalar law with quadratic flux, from the
/// implicit relation `u = u0(x - f'(u) t)`.
///
/// The residual is increasing in `u` before characteristics cross, so a
/// Newton iteration safeguarded by the bracket `[min u0, max u0]` always
/// converges.
pub fn characteristics_oracle(flux: QuadraticFlux, initial: &InitialCondition, x: f64, t: f64, tol: f64) -> Result<f64> {
    let (lo0, hi0) = initial
        .scalar_range()
        .ok_or_else(|| Error::InvalidProblem("characteristics need a scalar initial condition".into()))?;
    if t == 0.0 {
        return Ok(initial.scalar_value(x));
    }
    let curvature = 2.0 * flux.a * t;
    let steepest = if curvature > 0.0 { initial.min_slope() } else { initial.max_slope() };
    if 1.0 + curvature * steepest <= 0.0 {
        return Err(Error::PostShock { t, breaking_time: -1.0 / (2.0 * flux.a * steepest) });
    }
    let residual = |u: f64| {
        let xi = x - flux.speed(u) * t;
        (u - initial.scalar_value(xi), 1.0 + initial.scalar_slope(xi) * curvature)
    };
    let (mut lo, mut hi) = (lo0, hi0);
    let mut u = initial.scalar_value(x - flux.speed(0.5 * (lo + hi)) * t);
    for _ in 0..200 {
        let (g, dg) = residual(u);
        if g.abs() < tol {
            return Ok(u);
        }
        if g < 0.0 {
            lo = u;
        } else {
            hi = u;
        }
        let next = u - g / dg;
        u = if next > lo && next < hi && dg > 0.0 { next } else { 0.5 * (lo + hi) };
        if hi - lo < tol * 1e-3 {
            return Ok(u);
        }
    }
    Err(Error::NoConvergence { x, t })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sine() -> InitialCondition {
        InitialCondition::Sine { offset: 0.25, amplitude: 0.5, wavenumber: 1.0 }
    }

    const BURGERS: QuadraticFlux = QuadraticFlux { a: 0.5, b: 0.0 };

    fn bisect(x: f64, t: f64) -> f64 {
        let ic = sine();
        let g = |u: f64| u - ic.scalar_value(x - u * t);
        let (mut lo, mut hi) = (-0.25, 0.75);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn initial_time_returns_data() {
        let u = characteristics_oracle(BURGERS, &sine(), 0.3, 0.0, 1e-15).unwrap();
        assert_eq!(u, sine().scalar_value(0.3));
    }

    #[test]
    fn linear_flux_is_a_shift() {
        let adv = QuadraticFlux { a: 0.0, b: 1.0 };
        let u = characteristics_oracle(adv, &sine(), 0.1, 0.7, 1e-15).unwrap();
        assert!((u - sine().scalar_value(0.1 - 0.7)).abs() < 1e-15);
    }

    #[test]
    fn burgers_matches_bisection() {
        for x in [0.0, -0.5, 0.5, 0.9, -0.99] {
            let u = characteristics_oracle(BURGERS, &sine(), x, 0.3, 1e-16).unwrap();
            assert!((u - bisect(x, 0.3)).abs() < 1e-14, "x = {x}");
        }
    }

    #[test]
    fn shock_time_detected() {
        // breaking at t = 1 / (0.5 pi)
        match characteristics_oracle(BURGERS, &sine(), 0.0, 0.7, 1e-15) {
            Err(Error::PostShock { breaking_time, .. }) => {
                assert!((breaking_time - 2.0 / std::f64::consts::PI).abs() < 1e-15)
            }
            other => panic!("{other:?}"),
        }
        assert!(characteristics_oracle(BURGERS, &sine(), 0.0, 0.6, 1e-15).is_ok());
    }
}
