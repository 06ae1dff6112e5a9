use serde::{Deserialize, Serialize};

use crate::quadrature::{breakpoints, gauss4};
use crate::scheme::{Mesh, SchemeError};
use crate::state::{ConservedState, StateVec};

/// Named initial-data profiles. Cells are initialised with exact or
/// high-order cell averages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialProfile {
    Constant { state: StateVec },
    /// A single jump at `x0`.
    Riemann { x0: f64, left: StateVec, right: StateVec },
    /// `base + amplitude·exp(-((x - center)/width)²)`.
    Gaussian { base: StateVec, amplitude: StateVec, center: f64, width: f64 },
    /// `base + amplitude·sin(wavenumber·x)`.
    Sine { base: StateVec, amplitude: StateVec, wavenumber: f64 },
    /// One value per cell, used verbatim.
    Tabulated { cells: Vec<StateVec> },
}

impl InitialProfile {
    pub fn dim(&self) -> usize {
        match self {
            InitialProfile::Constant { state } => state.len(),
            InitialProfile::Riemann { left, .. } => left.len(),
            InitialProfile::Gaussian { base, .. } | InitialProfile::Sine { base, .. } => base.len(),
            InitialProfile::Tabulated { cells } => cells.first().map_or(0, |c| c.len()),
        }
    }

    /// Pointwise value; `None` for tabulated data.
    pub fn value(&self, x: f64) -> Option<ConservedState> {
        Some(match self {
            InitialProfile::Constant { state } => *state,
            InitialProfile::Riemann { x0, left, right } => {
                if x < *x0 {
                    *left
                } else {
                    *right
                }
            }
            InitialProfile::Gaussian { base, amplitude, center, width } => {
                let z = (x - center) / width;
                *base + *amplitude * (-z * z).exp()
            }
            InitialProfile::Sine { base, amplitude, wavenumber } => *base + *amplitude * (wavenumber * x).sin(),
            InitialProfile::Tabulated { .. } => return None,
        })
    }

    pub fn validate(&self) -> Result<(), String> {
        let same_dim = |a: &StateVec, b: &StateVec| {
            if a.len() == b.len() {
                Ok(())
            } else {
                Err(format!("component counts differ: {} vs {}", a.len(), b.len()))
            }
        };
        match self {
            InitialProfile::Constant { .. } => Ok(()),
            InitialProfile::Riemann { x0, left, right } => {
                if !x0.is_finite() {
                    return Err("x0 must be finite".into());
                }
                same_dim(left, right)
            }
            InitialProfile::Gaussian { base, amplitude, width, .. } => {
                if !(*width > 0.0) {
                    return Err("width must be positive".into());
                }
                same_dim(base, amplitude)
            }
            InitialProfile::Sine { base, amplitude, .. } => same_dim(base, amplitude),
            InitialProfile::Tabulated { cells } => {
                let Some(first) = cells.first() else {
                    return Err("tabulated profile needs at least one cell".into());
                };
                cells.iter().try_for_each(|c| same_dim(first, c))
            }
        }
    }

    /// Cell averages on `mesh`. Constant and Riemann data are exact.
    pub fn cell_averages(&self, mesh: &Mesh) -> Result<Vec<ConservedState>, SchemeError> {
        self.validate().map_err(SchemeError::InvalidInitialData)?;
        if let InitialProfile::Tabulated { cells } = self {
            if cells.len() != mesh.cells() {
                return Err(SchemeError::InvalidInitialData(format!(
                    "tabulated profile has {} cells, mesh has {}",
                    cells.len(),
                    mesh.cells()
                )));
            }
            return Ok(cells.clone());
        }
        if let InitialProfile::Constant { state } = self {
            return Ok(vec![*state; mesh.cells()]);
        }
        let dx = mesh.dx();
        if let InitialProfile::Riemann { x0, left, right } = self {
            return Ok((0..mesh.cells())
                .map(|i| {
                    let (a, b) = (mesh.edge(i), mesh.edge(i + 1));
                    if *x0 <= a {
                        *right
                    } else if *x0 >= b {
                        *left
                    } else {
                        let frac = (x0 - a) / (b - a);
                        *left * frac + *right * (1.0 - frac)
                    }
                })
                .collect());
        }
        Ok((0..mesh.cells())
            .map(|i| {
                let (a, b) = (mesh.edge(i), mesh.edge(i + 1));
                let mid = 0.5 * (a + b);
                let pts = breakpoints(a, b, [mid]);
                let mut sum = StateVec::zeros(self.dim());
                for w in pts.windows(2) {
                    for (x, wt) in gauss4(w[0], w[1]) {
                        sum += self.value(x).expect("pointwise profile") * wt;
                    }
                }
                sum * (1.0 / dx)
            })
            .collect())
    }
}
