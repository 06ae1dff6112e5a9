//! Balance-law models `u_t + f(A,u)_x = g(A,u,x)` with the metric law `A' = h(A,u,x)`.
//!
//! A model supplies the flux, its analytic metric gradient `∇_A f`, the source,
//! the metric right-hand side, the characteristic speeds and an exact Riemann
//! solver for the frozen-metric homogeneous system. The scheme and the
//! verification tools only ever talk to a model through [`BalanceLaw`], so a
//! new system (for example the Einstein-Euler equations in Standard
//! Schwarzschild Coordinates) plugs in by implementing that trait.

mod isothermal;
mod synthetic;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::riemann::{RiemannError, RiemannFan};
use crate::state::{ConservedState, MetricState, SmallMatrix};

pub use isothermal::{IsothermalBounds, IsothermalModel};
pub use synthetic::{SyntheticBounds, SyntheticModel};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("inadmissible conserved state {state}: {reason}")]
    InadmissibleState { state: ConservedState, reason: &'static str },
    #[error("inadmissible metric {metric}: {reason}")]
    InadmissibleMetric { metric: MetricState, reason: &'static str },
    #[error("inadmissible coordinate x = {x}: {reason}")]
    InadmissibleCoordinate { x: f64, reason: &'static str },
    #[error("system is not hyperbolic at {state}")]
    NonHyperbolic { state: ConservedState },
    #[error("expected a {expected}-component {what}, got {got}")]
    Dimension { what: &'static str, expected: usize, got: usize },
}

/// The model interface shared by the scheme, the Riemann solvers and the
/// verification harness.
///
/// Every method is a pure function of its arguments. Inadmissible inputs are
/// reported as errors and never clamped.
pub trait BalanceLaw: Send + Sync + fmt::Debug {
    /// Stable identifier written into checkpoints and snapshots.
    fn id(&self) -> &'static str;
    fn state_dim(&self) -> usize;
    fn metric_dim(&self) -> usize;

    fn check_state(&self, u: &ConservedState) -> Result<(), ModelError>;
    fn check_metric(&self, a: &MetricState) -> Result<(), ModelError>;

    /// `f(A, u)`.
    fn flux(&self, a: &MetricState, u: &ConservedState) -> Result<ConservedState, ModelError>;

    /// `∇_A f(A, u)` as a `d × m` matrix; column `k` is `∂f/∂A_k`.
    fn flux_grad_metric(&self, a: &MetricState, u: &ConservedState) -> Result<SmallMatrix, ModelError>;

    /// `∂f/∂u(A, u)` as a `d × d` matrix.
    fn flux_jacobian(&self, a: &MetricState, u: &ConservedState) -> Result<SmallMatrix, ModelError>;

    /// `g(A, u, x)`.
    fn source(&self, a: &MetricState, u: &ConservedState, x: f64) -> Result<ConservedState, ModelError>;

    /// `h(A, u, x)`, the spatial derivative law for the metric.
    fn metric_rhs(&self, a: &MetricState, u: &ConservedState, x: f64) -> Result<MetricState, ModelError>;

    /// Eigenvalues of `∂f/∂u`, sorted ascending.
    fn wave_speeds(&self, a: &MetricState, u: &ConservedState) -> Result<ConservedState, ModelError>;

    /// Exact solution of `u_t + f(A, u)_x = 0` with `A` frozen, centred at the origin.
    fn solve_riemann(
        &self,
        a: &MetricState,
        left: &ConservedState,
        right: &ConservedState,
    ) -> Result<RiemannFan, RiemannError>;

    /// Largest absolute characteristic speed.
    fn max_abs_speed(&self, a: &MetricState, u: &ConservedState) -> Result<f64, ModelError> {
        Ok(self.wave_speeds(a, u)?.norm_inf())
    }
}

pub(crate) fn check_dim(what: &'static str, expected: usize, got: usize) -> Result<(), ModelError> {
    if expected == got {
        Ok(())
    } else {
        Err(ModelError::Dimension { what, expected, got })
    }
}

/// Model selection and parameters as they appear in a run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelParams {
    /// `f = A u²/2`, `g = -β u h`, `h = κ A u²`.
    Synthetic {
        #[serde(default = "default_kappa")]
        kappa: f64,
        #[serde(default = "default_coupling")]
        source_coupling: f64,
        #[serde(default = "default_u_max")]
        u_max: f64,
    },
    /// `f = A (m, m²/ρ + σ²ρ)`, `g = β (0, -ρ/x)`, `h = κ A ρ`.
    Isothermal {
        sound_speed: f64,
        #[serde(default)]
        kappa: f64,
        #[serde(default)]
        source_coupling: f64,
        #[serde(default = "default_density_min")]
        density_min: f64,
    },
}

fn default_kappa() -> f64 {
    0.1
}
fn default_coupling() -> f64 {
    1.0
}
fn default_u_max() -> f64 {
    1.0e6
}
fn default_density_min() -> f64 {
    1.0e-12
}

impl ModelParams {
    pub fn id(&self) -> &'static str {
        match self {
            ModelParams::Synthetic { .. } => synthetic::ID,
            ModelParams::Isothermal { .. } => isothermal::ID,
        }
    }

    /// Returns the name of the offending field when the parameters are invalid.
    pub fn validate(&self) -> Result<(), (&'static str, String)> {
        let finite = |name: &'static str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err((name, format!("must be finite, got {v}")))
            }
        };
        match *self {
            ModelParams::Synthetic { kappa, source_coupling, u_max } => {
                finite("kappa", kappa)?;
                finite("source_coupling", source_coupling)?;
                if !(u_max > 0.0) {
                    return Err(("u_max", format!("must be positive, got {u_max}")));
                }
            }
            ModelParams::Isothermal { sound_speed, kappa, source_coupling, density_min } => {
                if !(sound_speed > 0.0 && sound_speed < 1.0) {
                    return Err(("sound_speed", format!("must lie in (0, 1), got {sound_speed}")));
                }
                finite("kappa", kappa)?;
                finite("source_coupling", source_coupling)?;
                if !(density_min > 0.0 && density_min.is_finite()) {
                    return Err(("density_min", format!("must be positive, got {density_min}")));
                }
            }
        }
        Ok(())
    }

    pub fn build(&self) -> Arc<dyn BalanceLaw> {
        match *self {
            ModelParams::Synthetic { kappa, source_coupling, u_max } => Arc::new(SyntheticModel {
                kappa,
                source_coupling,
                bounds: SyntheticBounds { u_max, ..SyntheticBounds::default() },
            }),
            ModelParams::Isothermal { sound_speed, kappa, source_coupling, density_min } => {
                Arc::new(IsothermalModel {
                    sound_speed,
                    kappa,
                    source_coupling,
                    bounds: IsothermalBounds { density_min, ..IsothermalBounds::default() },
                })
            }
        }
    }
}
