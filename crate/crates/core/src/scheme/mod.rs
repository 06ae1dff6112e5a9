//! The locally inertial Godunov method with dynamical time dilation.
//!
//! One step from `t_j` to `t_{j+1}`:
//!
//! 1. solve an exact Riemann problem at every cell interface, with the metric
//!    frozen at the interface mean `½(A_i + A_{i+1})`;
//! 2. choose `Δt_j = cfl·Δx / max speed` (capped at `t_end`);
//! 3. Godunov-average each cell using its own frozen metric `A_i` in both
//!    interface fluxes, so flux jumps between cells come only from the metric;
//! 4. integrate `û' = g(A_i, û, x_i) - A'_i·∇_A f(A_i, û)` over `Δt_j` in each
//!    cell, the second term cancelling those metric-induced flux jumps;
//! 5. re-integrate the metric `A' = h(A, u, x)` from `r_min` across the new data.
//!
//! Both boundaries hold the initial data of the end cells as fixed ghost states.

mod initial;
mod mesh;
mod run;
mod step;

use thiserror::Error;

use crate::model::ModelError;
use crate::riemann::RiemannError;
use crate::state::{ConservedState, MetricState};

pub use initial::InitialProfile;
pub use mesh::Mesh;
pub use run::{run, RunFailure, RunReport, Simulation, Trajectory};
pub use step::{
    advance, cfl_time_step, godunov_average, max_wave_speed, metric_update, ode_rate, ode_step,
    riemann_sweep, MetricField, Sweep,
};

/// Substeps of the classical four-stage Runge-Kutta integrator per `Δt_j`.
pub const ODE_SUBSTEPS: usize = 4;
/// Default Runge-Kutta substeps per cell when integrating the metric.
pub const METRIC_SUBSTEPS: usize = 2;
pub const DEFAULT_CFL: f64 = 0.45;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SchemeError {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("invalid initial data: {0}")]
    InvalidInitialData(String),
    #[error("step {step}: Riemann problem at interface {interface} failed: {source}")]
    Riemann { step: usize, interface: usize, source: RiemannError },
    #[error("step {step}: {stage} in cell {cell}: {source}")]
    Inadmissible { step: usize, cell: usize, stage: &'static str, source: ModelError },
    #[error("step {step}: fan at interface {interface} with speed {speed} escapes its half cell (dt = {dt}, dx = {dx})")]
    FanEscape { step: usize, interface: usize, speed: f64, dt: f64, dx: f64 },
    #[error("cannot advance past t_end = {t_end}")]
    Finished { t_end: f64 },
}

/// Controls fixed for the lifetime of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeOptions {
    pub t_start: f64,
    pub t_end: f64,
    pub cfl: f64,
    /// Include `-A'·∇_A f` in the ODE step. Switching it off is an ablation.
    pub correction: bool,
    pub metric_substeps: usize,
}

impl SchemeOptions {
    pub fn new(t_end: f64) -> Self {
        Self { t_start: 0.0, t_end, cfl: DEFAULT_CFL, correction: true, metric_substeps: METRIC_SUBSTEPS }
    }
}

/// Solution and metric at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    pub time: f64,
    /// Index `j` of this time level.
    pub step: usize,
    /// Cell values `u_i`, `n + 1` entries.
    pub u: Vec<ConservedState>,
    /// Frozen per-cell metric `A_i` (midpoint of the reconstruction).
    pub metric: Vec<MetricState>,
    /// Metric values at the `n + 2` cell edges.
    pub metric_edges: Vec<MetricState>,
    /// Per-cell slope `A'_i` of the piecewise-linear metric reconstruction.
    pub metric_slope: Vec<MetricState>,
    /// Fixed ghost states at `r_min` and `r_max`.
    pub boundary: [ConservedState; 2],
}

impl GridState {
    pub fn cells(&self) -> usize {
        self.u.len()
    }

    /// `Σ |u_{i+1} - u_i|₁` over the cells.
    pub fn total_variation(&self) -> f64 {
        self.u.windows(2).map(|w| (w[1] - w[0]).norm1()).sum()
    }

    /// Piecewise-linear metric reconstruction `A_Δx(x)`.
    pub fn metric_at(&self, mesh: &Mesh, x: f64) -> MetricState {
        let i = mesh.locate(x);
        let s = (x - mesh.edge(i)) / mesh.dx();
        self.metric_edges[i] + (self.metric_edges[i + 1] - self.metric_edges[i]) * s
    }

    /// State seen left of interface `k` (ghost for `k = 0`).
    pub fn interface_left(&self, k: usize) -> (ConservedState, MetricState) {
        if k == 0 {
            (self.boundary[0], self.metric[0])
        } else {
            (self.u[k - 1], self.metric[k - 1])
        }
    }

    /// State seen right of interface `k` (ghost for `k = n + 1`).
    pub fn interface_right(&self, k: usize) -> (ConservedState, MetricState) {
        if k == self.u.len() {
            (self.boundary[1], self.metric[k - 1])
        } else {
            (self.u[k], self.metric[k])
        }
    }
}

/// Per-step data kept alongside a [`GridState`] for the residual diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub dt: f64,
    /// `false` when the step was shortened to land on `t_end`.
    pub cfl_limited: bool,
    /// Pre-ODE Godunov averages `ū_i` at `t_{j+1}`.
    pub averages: Vec<ConservedState>,
    /// Interface traces `u*_{i+½} = fan(ξ = 0)`, `n + 2` entries.
    pub traces: Vec<ConservedState>,
}

/// A time level together with the step taken from it (absent at `t_end`).
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub state: GridState,
    pub step: Option<StepRecord>,
}
