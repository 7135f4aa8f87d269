use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite stand-in for the half-line `[T, ∞)`: the closed interval `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailWindow {
    pub start: f64,
    pub end: f64,
}

impl TailWindow {
    pub fn new(start: f64, end: f64) -> Result<Self> {
        if !(start.is_finite() && end.is_finite()) || start < 0.0 || start >= end {
            return Err(Error::InvalidWindow { start, end });
        }
        Ok(Self { start, end })
    }

    pub fn span(&self) -> f64 {
        self.end - self.start
    }

    /// Time at fraction `q` of the way through the window.
    pub fn at_fraction(&self, q: f64) -> f64 {
        self.start + q * self.span()
    }

    pub fn contains(&self, t: f64) -> bool {
        self.start <= t && t <= self.end
    }

    /// Same end, later start. Fails when `start` is not inside the window.
    pub fn with_start(&self, start: f64) -> Result<Self> {
        Self::new(start, self.end)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_bounds() {
        assert!(TailWindow::new(1.0, 1.0).is_err());
        assert!(TailWindow::new(-1.0, 1.0).is_err());
        assert!(TailWindow::new(0.0, f64::INFINITY).is_err());
        assert!(TailWindow::new(0.0, 1.0).is_ok());
    }

    #[test]
    fn fractions() {
        let w = TailWindow::new(2.0, 12.0).unwrap();
        assert_eq!(w.at_fraction(0.5), 7.0);
        assert_eq!(w.span(), 10.0);
    }
}
