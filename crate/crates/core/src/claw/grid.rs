use crate::error::{Error, Result};

/// `n` uniform cells on `(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid1D {
    pub a: f64,
    pub b: f64,
    pub n: usize,
}

impl Grid1D {
    /// Requires room for at least `2(r + 1)` cells.
    pub fn new(a: f64, b: f64, n: usize, r: usize) -> Result<Self> {
        if !(b > a) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidProblem(format!("empty domain ({a}, {b})")));
        }
        if n < 2 * (r + 1) {
            return Err(Error::InvalidProblem(format!("{n} cells is fewer than 2(r + 1) = {}", 2 * (r + 1))));
        }
        Ok(Self { a, b, n })
    }

    pub fn h(&self) -> f64 {
        (self.b - self.a) / self.n as f64
    }

    /// Centre of cell `i` (zero based).
    pub fn center(&self, i: usize) -> f64 {
        self.a + (i as f64 + 0.5) * self.h()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.center(i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centers_and_width() {
        let g = Grid1D::new(-1.0, 1.0, 40, 3).unwrap();
        assert_eq!(g.h(), 0.05);
        assert_eq!(g.center(0), -0.975);
        assert!((g.center(39) - 0.975).abs() < 1e-15);
    }

    #[test]
    fn too_few_cells() {
        assert!(Grid1D::new(0.0, 1.0, 7, 3).is_err());
        assert!(Grid1D::new(0.0, 1.0, 8, 3).is_ok());
        assert!(Grid1D::new(1.0, 1.0, 8, 3).is_err());
    }
}
