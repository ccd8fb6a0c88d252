use crate::error::{Error, Result};

/// How the physical flux is divided into right- and left-going parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Splitting {
    /// `f+ = f`, `f- = 0`; valid when every characteristic speed is nonnegative.
    Upwind,
    /// `f+- = (f +- alpha u) / 2` with `alpha` the largest wave speed on the grid.
    LaxFriedrichs,
}

impl Splitting {
    pub fn as_str(self) -> &'static str {
        match self {
            Splitting::Upwind => "upwind",
            Splitting::LaxFriedrichs => "llf",
        }
    }
}

impl std::str::FromStr for Splitting {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "upwind" => Ok(Splitting::Upwind),
            "llf" | "lax-friedrichs" => Ok(Splitting::LaxFriedrichs),
            _ => Err(format!("unknown splitting `{s}` (expected upwind or llf)")),
        }
    }
}

/// `f+- = (f +- alpha u) / 2`, elementwise.
pub fn llf_split(flux: &[f64], u: &[f64], alpha: f64, plus: &mut [f64], minus: &mut [f64]) -> Result<()> {
    if flux.len() != u.len() {
        return Err(Error::DimensionMismatch { expected: u.len(), got: flux.len() });
    }
    for (i, (&f, &q)) in flux.iter().zip(u).enumerate() {
        if !f.is_finite() || !q.is_finite() {
            return Err(Error::NonFiniteInput { index: i });
        }
        plus[i] = 0.5 * (f + alpha * q);
        minus[i] = 0.5 * (f - alpha * q);
    }
    Ok(())
}
