use serde::{Deserialize, Serialize};

use crate::scheme::SchemeError;

/// Uniform grid on `[r_min, r_max]` with `n` interior gridpoints and `n + 1`
/// cells of width `Δx = (r_max - r_min)/(n + 1)`.
///
/// Cell `i` spans `[x_{i-½}, x_{i+½}]`; edges are numbered `0..=n+1` with edge
/// `0` at `r_min` and edge `n + 1` at `r_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mesh {
    pub r_min: f64,
    pub r_max: f64,
    pub n: usize,
}

impl Mesh {
    pub fn new(r_min: f64, r_max: f64, n: usize) -> Result<Self, SchemeError> {
        let mesh = Self { r_min, r_max, n };
        mesh.validate()?;
        Ok(mesh)
    }

    pub fn validate(&self) -> Result<(), SchemeError> {
        if !(self.r_min.is_finite() && self.r_max.is_finite() && self.r_min < self.r_max) {
            return Err(SchemeError::InvalidMesh(format!(
                "need finite r_min < r_max, got [{}, {}]",
                self.r_min, self.r_max
            )));
        }
        if self.n < 2 {
            return Err(SchemeError::InvalidMesh(format!("need n >= 2 gridpoints, got {}", self.n)));
        }
        Ok(())
    }

    pub fn cells(&self) -> usize {
        self.n + 1
    }

    pub fn dx(&self) -> f64 {
        (self.r_max - self.r_min) / (self.n + 1) as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        self.r_min + (i as f64 + 0.5) * self.dx()
    }

    pub fn edge(&self, k: usize) -> f64 {
        if k == self.n + 1 {
            self.r_max
        } else {
            self.r_min + k as f64 * self.dx()
        }
    }

    pub fn centers(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.cells()).map(|i| self.center(i))
    }

    /// Index of the cell containing `x`, clamped to the grid.
    pub fn locate(&self, x: f64) -> usize {
        let k = ((x - self.r_min) / self.dx()).floor();
        if k < 0.0 {
            0
        } else {
            (k as usize).min(self.n)
        }
    }
}
