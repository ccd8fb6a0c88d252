use crate::error::{Error, Result};

/// Physical flux of the 1D Euler equations and the largest wave speed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerFlux {
    pub flux: [f64; 3],
    pub max_speed: f64,
}

/// Flux of the conserved state `(rho, rho v, E)` with `p = (gamma - 1)(E - rho v^2 / 2)`.
pub fn euler_1d_flux(state: [f64; 3], gamma: f64, cell: usize) -> Result<EulerFlux> {
    let [rho, mom, energy] = state;
    let v = mom / rho;
    let p = (gamma - 1.0) * (energy - 0.5 * mom * v);
    if !(rho > 0.0) || !(p > 0.0) {
        return Err(Error::NonPhysicalState { cell, density: rho, pressure: p });
    }
    let c = (gamma * p / rho).sqrt();
    Ok(EulerFlux { flux: [mom, mom * v + p, v * (energy + p)], max_speed: v.abs() + c })
}

pub fn primitive_to_conserved(rho: f64, v: f64, p: f64, gamma: f64) -> [f64; 3] {
    [rho, rho * v, p / (gamma - 1.0) + 0.5 * rho * v * v]
}

/// `(rho, v, p)`.
pub fn conserved_to_primitive(state: [f64; 3], gamma: f64) -> [f64; 3] {
    let [rho, mom, energy] = state;
    let v = mom / rho;
    [rho, v, (gamma - 1.0) * (energy - 0.5 * mom * v)]
}
