//! Diagnostics of computed solutions: total variation, the weak-form
//! residual `ε`, the time-level jump residual `ε₁`, refinement studies with
//! fitted orders, and executable checks of the two averaging lemmas the
//! convergence argument rests on.

mod fit;
mod lemmas;
mod residual;
mod study;
mod testfn;

use thiserror::Error;

use crate::model::ModelError;
use crate::riemann::RiemannError;
use crate::scheme::{GridState, SchemeError, Trajectory};
use crate::state::StateVec;

pub use fit::{fit_log2, SlopeFit};
pub use lemmas::{
    check_average_bound, lemma_average_bound_check, lemma_ode_average_check, lemma_ode_average_study,
    step_average, AverageBound, OdeAverageBound, OdeAverageStudy, RiemannCell,
};
pub use residual::{residual, residuals, Residual, QUADRATURE_BUDGET};
pub use study::{
    cells_at, convergence_study, l1_distance, project, run_level, spread, summarize, LevelReport,
    ResidualReport, StudyFailure, StudySetup, FIT_LEVELS,
};
pub use testfn::{make_test_functions, BumpFunction, LinearCombination, SupportBox, TestFunction};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("invalid test-function box: {0}")]
    InvalidBox(String),
    #[error("test-function support ends at t = {t_b} but the trajectory stops at t = {final_time}")]
    SupportNotCovered { t_b: f64, final_time: f64 },
    #[error("trajectory is missing time levels near snapshot {index}; residuals need every level")]
    SparseTrajectory { index: usize },
    #[error("quadrature would need about {points} evaluations, budget is {budget}")]
    QuadratureBudget { points: usize, budget: usize },
    #[error("a study needs at least 4 mesh levels, got {0}")]
    TooFewLevels(usize),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Riemann(#[from] RiemannError),
}

/// `Σ ‖v_{k+1} - v_k‖₁`.
pub fn total_variation(samples: &[StateVec]) -> f64 {
    samples.windows(2).map(|w| (w[1] - w[0]).norm1()).sum()
}

/// Total variation of `u_Δx(t_j, ·)` at each stored level.
#[derive(Debug, Clone, PartialEq)]
pub struct TVReport {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    /// Running maximum over all levels.
    pub max: f64,
}

impl TVReport {
    pub fn from_trajectory(traj: &Trajectory) -> Self {
        let times = traj.snapshots.iter().map(|s| s.state.time).collect();
        let values: Vec<f64> = traj.snapshots.iter().map(|s| s.state.total_variation()).collect();
        let max = values.iter().copied().fold(0.0, f64::max);
        Self { times, values, max }
    }

    /// `‖u_{i+1} - u_i‖₁` at each interior edge.
    pub fn per_cell(state: &GridState) -> Vec<f64> {
        state.u.windows(2).map(|w| (w[1] - w[0]).norm1()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_counted_variation() {
        let s = |v: &[f64]| v.iter().map(|&x| StateVec::scalar(x)).collect::<Vec<_>>();
        assert_eq!(total_variation(&s(&[1.0, 1.0, 1.0])), 0.0);
        assert_eq!(total_variation(&s(&[0.0, 1.0, 0.0])), 2.0);
        assert_eq!(total_variation(&s(&[4.0])), 0.0);
    }
}
