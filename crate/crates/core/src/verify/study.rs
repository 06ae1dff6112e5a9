use std::sync::Arc;
use std::time::Duration;

use rayon::prelude::*;

use crate::model::BalanceLaw;
use crate::scheme::{run, GridState, InitialProfile, Mesh, SchemeOptions, Simulation, Trajectory};
use crate::state::{ConservedState, MetricState, StateVec};
use crate::verify::{fit_log2, make_test_functions, residuals, Residual, SlopeFit, SupportBox, TestFunction, TVReport, VerifyError};

/// Slopes are fitted over this many of the finest levels.
pub const FIT_LEVELS: usize = 4;

/// One physical setup run at several resolutions.
#[derive(Debug, Clone)]
pub struct StudySetup {
    pub model: Arc<dyn BalanceLaw>,
    pub r_min: f64,
    pub r_max: f64,
    pub initial: InitialProfile,
    pub metric_boundary: MetricState,
    pub options: SchemeOptions,
    /// Interior gridpoint counts `n`, one per level.
    pub levels: Vec<usize>,
    pub boxes: Vec<SupportBox>,
}

#[derive(Debug, Clone)]
pub struct LevelReport {
    pub n: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub dx: f64,
    pub steps: usize,
    pub dt_min: f64,
    pub dt_max: f64,
    pub dt_ratio: f64,
    pub tv: TVReport,
    /// One entry per support box.
    pub residuals: Vec<Residual>,
    pub final_state: GridState,
    pub wall_time: Duration,
}

impl LevelReport {
    pub fn mesh(&self) -> Mesh {
        Mesh { r_min: self.r_min, r_max: self.r_max, n: self.n }
    }
}

/// Diagnostics of a refinement study.
#[derive(Debug, Clone)]
pub struct ResidualReport {
    pub levels: Vec<LevelReport>,
    /// `‖u_k - P u_{k+1}‖_{L¹}` at `t_end`, `P` the overlap average onto level `k`.
    pub l1_cauchy: Vec<f64>,
    /// Ratios of successive Cauchy differences.
    pub cauchy_ratios: Vec<f64>,
    /// Per support box: fit of `‖ε‖₁` and of `‖ε₁‖₁`.
    pub epsilon_fits: Vec<Option<SlopeFit>>,
    pub jump_fits: Vec<Option<SlopeFit>>,
    pub l1_fit: Option<SlopeFit>,
    /// `(max - min)/min` of the per-level maximal total variation.
    pub tv_spread: f64,
    /// `(max - min)/min` of `Δt/Δx` across levels.
    pub dt_over_dx_spread: f64,
}

impl ResidualReport {
    pub fn dx(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.dx).collect()
    }

    pub fn epsilon(&self, k: usize) -> Vec<f64> {
        self.levels.iter().map(|l| l.residuals[k].epsilon.norm1()).collect()
    }

    pub fn jump(&self, k: usize) -> Vec<f64> {
        self.levels.iter().map(|l| l.residuals[k].jump.norm1()).collect()
    }

    /// Every ε and ε₁ fit reaches `threshold`.
    pub fn meets(&self, threshold: f64) -> bool {
        let ok = |f: &Option<SlopeFit>| f.is_some_and(|f| f.slope >= threshold);
        self.epsilon_fits.iter().all(ok) && self.jump_fits.iter().all(ok)
    }
}

/// A level that failed, with the levels that finished.
#[derive(Debug)]
pub struct StudyFailure {
    pub n: usize,
    pub error: VerifyError,
    pub completed: Vec<LevelReport>,
}

impl std::fmt::Display for StudyFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "level n = {}: {} ({} levels completed)", self.n, self.error, self.completed.len())
    }
}

impl std::error::Error for StudyFailure {}

/// Runs one level and evaluates its residuals.
pub fn run_level(setup: &StudySetup, n: usize) -> Result<(LevelReport, Trajectory), VerifyError> {
    let mesh = Mesh::new(setup.r_min, setup.r_max, n)?;
    let u0 = setup.initial.cell_averages(&mesh)?;
    let sim = Simulation::new(setup.model.clone(), mesh, setup.options, setup.metric_boundary, u0)?;
    let traj = run(sim, 1).map_err(|f| VerifyError::Scheme(f.error))?;
    let phis = make_test_functions(&setup.boxes, &mesh, setup.options.t_start, setup.options.t_end)?;
    let refs: Vec<&dyn TestFunction> = phis.iter().map(|p| p as &dyn TestFunction).collect();
    let res = residuals(setup.model.as_ref(), &traj, &refs)?;
    let r = &traj.report;
    let level = LevelReport {
        n,
        dx: mesh.dx(),
        r_min: mesh.r_min,
        r_max: mesh.r_max,
        steps: r.steps,
        dt_min: r.dt_min,
        dt_max: r.dt_max,
        dt_ratio: r.dt_ratio,
        tv: TVReport::from_trajectory(&traj),
        residuals: res,
        final_state: traj.final_state().clone(),
        wall_time: r.wall_time,
    };
    Ok((level, traj))
}

/// Runs every level in parallel and fits convergence orders.
pub fn convergence_study(setup: &StudySetup) -> Result<ResidualReport, StudyFailure> {
    if setup.levels.len() < FIT_LEVELS {
        return Err(StudyFailure { n: 0, error: VerifyError::TooFewLevels(setup.levels.len()), completed: Vec::new() });
    }
    let mut levels = setup.levels.clone();
    levels.sort_unstable();
    let outcomes: Vec<(usize, Result<LevelReport, VerifyError>)> =
        levels.par_iter().map(|&n| (n, run_level(setup, n).map(|(l, _)| l))).collect();
    let mut done = Vec::new();
    let mut failure = None;
    for (n, r) in outcomes {
        match r {
            Ok(l) => done.push(l),
            Err(e) if failure.is_none() => failure = Some((n, e)),
            Err(_) => {}
        }
    }
    if let Some((n, error)) = failure {
        return Err(StudyFailure { n, error, completed: done });
    }
    Ok(summarize(done, setup.boxes.len()))
}

/// Fits and spreads for a set of finished levels, ordered coarse to fine.
pub fn summarize(levels: Vec<LevelReport>, boxes: usize) -> ResidualReport {
    let dx: Vec<f64> = levels.iter().map(|l| l.dx).collect();
    let l1_cauchy: Vec<f64> = levels
        .windows(2)
        .map(|w| {
            let coarse = w[0].mesh();
            let projected = project(&w[1].mesh(), &w[1].final_state.u, &coarse);
            l1_distance(&coarse, &w[0].final_state.u, &projected)
        })
        .collect();
    let cauchy_ratios = l1_cauchy.windows(2).map(|w| w[0] / w[1]).collect();
    let fit = |vals: Vec<f64>| fit_log2(&dx, &vals, FIT_LEVELS);
    let epsilon_fits = (0..boxes).map(|k| fit(levels.iter().map(|l| l.residuals[k].epsilon.norm1()).collect())).collect();
    let jump_fits = (0..boxes).map(|k| fit(levels.iter().map(|l| l.residuals[k].jump.norm1()).collect())).collect();
    let l1_fit = fit_log2(&dx[..dx.len().saturating_sub(1)], &l1_cauchy, FIT_LEVELS);
    let tv_spread = spread(levels.iter().map(|l| l.tv.max));
    let dt_over_dx_spread = spread(levels.iter().map(|l| l.dt_min / l.dx));
    ResidualReport { levels, l1_cauchy, cauchy_ratios, epsilon_fits, jump_fits, l1_fit, tv_spread, dt_over_dx_spread }
}

/// `(max - min)/min`.
pub fn spread(values: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if lo > 0.0 {
        (hi - lo) / lo
    } else if hi == lo {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Averages a piecewise-constant function on `from` over the cells of `to`.
pub fn project(from: &Mesh, u: &[ConservedState], to: &Mesh) -> Vec<ConservedState> {
    let d = u.first().map_or(1, |v| v.len());
    (0..to.cells())
        .map(|i| {
            let (a, b) = (to.edge(i), to.edge(i + 1));
            let mut sum = StateVec::zeros(d);
            let mut covered = 0.0;
            let first = from.locate(a);
            let last = from.locate(b);
            for k in first..=last {
                let lo = a.max(from.edge(k));
                let hi = b.min(from.edge(k + 1));
                if hi > lo {
                    sum += u[k] * (hi - lo);
                    covered += hi - lo;
                }
            }
            if covered > 0.0 {
                sum * (1.0 / covered)
            } else {
                sum
            }
        })
        .collect()
}

/// `Σ ‖u_i - v_i‖₁ Δx`.
pub fn l1_distance(mesh: &Mesh, u: &[ConservedState], v: &[ConservedState]) -> f64 {
    u.iter().zip(v).map(|(a, b)| (*a - *b).norm1()).sum::<f64>() * mesh.dx()
}

/// Cell values at time `t`, interpolated linearly between the bracketing
/// stored levels.
pub fn cells_at(traj: &Trajectory, t: f64) -> Vec<ConservedState> {
    let snaps = &traj.snapshots;
    let k = snaps.partition_point(|s| s.state.time <= t);
    if k == 0 {
        return snaps[0].state.u.clone();
    }
    if k == snaps.len() {
        return snaps[k - 1].state.u.clone();
    }
    let (a, b) = (&snaps[k - 1].state, &snaps[k].state);
    let w = (t - a.time) / (b.time - a.time);
    a.u.iter().zip(&b.u).map(|(ua, ub)| *ua * (1.0 - w) + *ub * w).collect()
}
