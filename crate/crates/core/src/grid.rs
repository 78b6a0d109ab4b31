use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ascending geometric grid `lo = x_0 < x_1 < ... < x_{n-1} = hi`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometricGrid {
    values: Vec<f64>,
}

impl GeometricGrid {
    pub fn new(lo: f64, hi: f64, steps: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo <= 0.0 || hi < lo {
            return Err(Error::invalid(format!(
                "geometric grid needs 0 < lo <= hi, got [{lo}, {hi}]"
            )));
        }
        if steps == 0 {
            return Err(Error::invalid("geometric grid needs at least one step"));
        }
        if steps == 1 || lo == hi {
            return Ok(GeometricGrid { values: vec![lo] });
        }
        let ratio = (hi / lo).ln() / (steps - 1) as f64;
        let mut values: Vec<f64> = (0..steps)
            .map(|i| lo * (ratio * i as f64).exp())
            .collect();
        values[steps - 1] = hi;
        Ok(GeometricGrid { values })
    }

    /// Grid with `per_decade` points per factor of ten, endpoints included.
    pub fn per_decade(lo: f64, hi: f64, per_decade: usize) -> Result<Self> {
        if lo <= 0.0 || hi <= lo {
            return Err(Error::invalid("per-decade grid needs 0 < lo < hi"));
        }
        let decades = (hi / lo).log10();
        let steps = (decades * per_decade as f64).round() as usize + 1;
        Self::new(lo, hi, steps.max(2))
    }

    /// Wrap explicit values; they must be positive and strictly ascending.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("empty grid"));
        }
        if values.iter().any(|v| !v.is_finite() || *v <= 0.0)
            || values.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(Error::invalid("grid values must be positive and ascending"));
        }
        Ok(GeometricGrid { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Number of decades spanned.
    pub fn decades(&self) -> f64 {
        (self.max() / self.min()).log10()
    }

    /// Multiplicative ratio between neighbouring values (1 for a single point).
    pub fn ratio(&self) -> f64 {
        if self.values.len() < 2 {
            1.0
        } else {
            self.values[1] / self.values[0]
        }
    }

    /// Width of the grid step just above `x` (or below it at the top end).
    pub fn step_at(&self, x: f64) -> f64 {
        let i = self.values.partition_point(|v| *v <= x);
        if i == 0 {
            self.values.get(1).map_or(0.0, |v| v - self.values[0])
        } else if i >= self.values.len() {
            let n = self.values.len();
            if n < 2 {
                0.0
            } else {
                self.values[n - 1] - self.values[n - 2]
            }
        } else {
            self.values[i] - self.values[i - 1]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_and_ratio() {
        let g = GeometricGrid::new(1e-3, 1e-1, 9).unwrap();
        assert_eq!(g.min(), 1e-3);
        assert_eq!(g.max(), 1e-1);
        assert!((g.ratio() - 10f64.powf(0.25)).abs() < 1e-12);
        assert!((g.decades() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn per_decade_count() {
        let g = GeometricGrid::per_decade(1e-3, 1e-1, 8).unwrap();
        assert_eq!(g.len(), 17);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(GeometricGrid::new(0.0, 1.0, 4).is_err());
        assert!(GeometricGrid::new(2.0, 1.0, 4).is_err());
        assert!(GeometricGrid::from_values(vec![0.1, 0.1]).is_err());
    }
}
