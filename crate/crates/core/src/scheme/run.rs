use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::model::BalanceLaw;
use crate::scheme::{advance, metric_update, GridState, Mesh, SchemeError, SchemeOptions, Snapshot};
use crate::state::{ConservedState, MetricState};

/// Summary statistics of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub steps: usize,
    /// Smallest CFL-limited step; the final step shortened to land on `t_end`
    /// is excluded. Falls back to the overall minimum when no step was limited.
    pub dt_min: f64,
    pub dt_max: f64,
    /// `max Δt_j / Δt`.
    pub dt_ratio: f64,
    pub final_time: f64,
    pub max_total_variation: f64,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, Default)]
struct Stats {
    steps: usize,
    dt_min_limited: Option<f64>,
    dt_min_any: Option<f64>,
    dt_max: f64,
    max_tv: f64,
}

impl Stats {
    fn record(&mut self, dt: f64, cfl_limited: bool) {
        self.steps += 1;
        self.dt_max = self.dt_max.max(dt);
        self.dt_min_any = Some(self.dt_min_any.map_or(dt, |m| m.min(dt)));
        if cfl_limited {
            self.dt_min_limited = Some(self.dt_min_limited.map_or(dt, |m| m.min(dt)));
        }
    }
}

/// A simulation in progress.
#[derive(Debug, Clone)]
pub struct Simulation {
    model: Arc<dyn BalanceLaw>,
    mesh: Mesh,
    options: SchemeOptions,
    metric_boundary: MetricState,
    state: GridState,
    stats: Stats,
}

impl Simulation {
    /// Sets up level 0 from cell averages. The ghost states are the end cells.
    pub fn new(
        model: Arc<dyn BalanceLaw>,
        mesh: Mesh,
        options: SchemeOptions,
        metric_boundary: MetricState,
        initial: Vec<ConservedState>,
    ) -> Result<Self, SchemeError> {
        mesh.validate()?;
        if initial.len() != mesh.cells() {
            return Err(SchemeError::InvalidInitialData(format!(
                "{} cell values for {} cells",
                initial.len(),
                mesh.cells()
            )));
        }
        if !(options.t_start.is_finite() && options.t_end.is_finite() && options.t_start <= options.t_end) {
            return Err(SchemeError::InvalidInitialData(format!(
                "need finite t_start <= t_end, got [{}, {}]",
                options.t_start, options.t_end
            )));
        }
        if !(options.cfl > 0.0 && options.cfl <= 0.5) {
            return Err(SchemeError::InvalidInitialData(format!("cfl must lie in (0, 0.5], got {}", options.cfl)));
        }
        for (i, u) in initial.iter().enumerate() {
            model
                .check_state(u)
                .map_err(|source| SchemeError::Inadmissible { step: 0, cell: i, stage: "initial data", source })?;
        }
        let field = metric_update(model.as_ref(), &mesh, &initial, &metric_boundary, options.metric_substeps, 0)?;
        let boundary = [initial[0], initial[initial.len() - 1]];
        let state = GridState {
            time: options.t_start,
            step: 0,
            u: initial,
            metric: field.centers,
            metric_edges: field.edges,
            metric_slope: field.slopes,
            boundary,
        };
        let stats = Stats { max_tv: state.total_variation(), ..Stats::default() };
        Ok(Self { model, mesh, options, metric_boundary, state, stats })
    }

    /// Resumes from a saved level. Statistics restart from that level.
    pub fn resume(
        model: Arc<dyn BalanceLaw>,
        mesh: Mesh,
        options: SchemeOptions,
        metric_boundary: MetricState,
        state: GridState,
    ) -> Result<Self, SchemeError> {
        mesh.validate()?;
        if state.cells() != mesh.cells() || state.metric.len() != mesh.cells() || state.metric_edges.len() != mesh.cells() + 1 {
            return Err(SchemeError::InvalidInitialData("saved state does not match the mesh".into()));
        }
        let stats = Stats { max_tv: state.total_variation(), ..Stats::default() };
        Ok(Self { model, mesh, options, metric_boundary, state, stats })
    }

    pub fn model(&self) -> &Arc<dyn BalanceLaw> {
        &self.model
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn options(&self) -> &SchemeOptions {
        &self.options
    }

    pub fn metric_boundary(&self) -> &MetricState {
        &self.metric_boundary
    }

    pub fn state(&self) -> &GridState {
        &self.state
    }

    pub fn is_finished(&self) -> bool {
        self.state.time >= self.options.t_end
    }

    /// Advances one step and returns the snapshot of the level just left.
    pub fn step(&mut self) -> Result<Snapshot, SchemeError> {
        let (next, snapshot) =
            advance(self.model.as_ref(), &self.mesh, &self.state, &self.options, &self.metric_boundary)?;
        let record = snapshot.step.as_ref().expect("advance records its step");
        self.stats.record(record.dt, record.cfl_limited);
        self.stats.max_tv = self.stats.max_tv.max(next.total_variation());
        self.state = next;
        Ok(snapshot)
    }

    fn report(&self, wall_time: Duration) -> RunReport {
        let dt_min = self.stats.dt_min_limited.or(self.stats.dt_min_any).unwrap_or(0.0);
        RunReport {
            steps: self.stats.steps,
            dt_min,
            dt_max: self.stats.dt_max,
            dt_ratio: if dt_min > 0.0 { self.stats.dt_max / dt_min } else { 1.0 },
            final_time: self.state.time,
            max_total_variation: self.stats.max_tv,
            wall_time,
        }
    }
}

/// Stored time levels of a completed run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub mesh: Mesh,
    pub options: SchemeOptions,
    /// Every `cadence`-th level plus the final one, whose `step` is `None`.
    pub snapshots: Vec<Snapshot>,
    pub report: RunReport,
}

impl Trajectory {
    pub fn final_state(&self) -> &GridState {
        &self.snapshots.last().expect("a trajectory holds the final level").state
    }
}

/// A run that stopped early; `partial` holds what was computed.
#[derive(Debug, Clone)]
pub struct RunFailure {
    pub partial: Trajectory,
    pub error: SchemeError,
}

impl std::fmt::Display for RunFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (stopped at t = {})", self.error, self.partial.report.final_time)
    }
}

impl std::error::Error for RunFailure {}

/// Runs to `t_end`, keeping every `cadence`-th level. The residual
/// diagnostics need `cadence = 1`.
pub fn run(mut sim: Simulation, cadence: usize) -> Result<Trajectory, RunFailure> {
    let cadence = cadence.max(1);
    let start = Instant::now();
    let mut snapshots = Vec::new();
    while !sim.is_finished() {
        match sim.step() {
            Ok(snap) => {
                if snap.state.step % cadence == 0 {
                    snapshots.push(snap);
                }
            }
            Err(error) => {
                snapshots.push(Snapshot { state: sim.state.clone(), step: None });
                let partial = Trajectory { mesh: sim.mesh, options: sim.options, snapshots, report: sim.report(start.elapsed()) };
                return Err(RunFailure { partial, error });
            }
        }
    }
    snapshots.push(Snapshot { state: sim.state.clone(), step: None });
    Ok(Trajectory { mesh: sim.mesh, options: sim.options, snapshots, report: sim.report(start.elapsed()) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SyntheticModel;
    use crate::scheme::InitialProfile;
    use crate::state::StateVec;

    fn burgers_sim(n: usize, t_end: f64) -> Simulation {
        let mesh = Mesh::new(0.0, 1.0, n).unwrap();
        let profile = InitialProfile::Riemann { x0: 0.3, left: StateVec::scalar(1.0), right: StateVec::scalar(0.0) };
        let u0 = profile.cell_averages(&mesh).unwrap();
        Simulation::new(Arc::new(SyntheticModel::burgers()), mesh, SchemeOptions::new(t_end), StateVec::scalar(1.0), u0)
            .unwrap()
    }

    #[test]
    fn run_lands_on_t_end() {
        let traj = run(burgers_sim(49, 0.2), 1).unwrap();
        assert_eq!(traj.report.final_time, 0.2);
        assert_eq!(traj.snapshots.len(), traj.report.steps + 1);
        assert!(traj.snapshots.last().unwrap().step.is_none());
        assert!(traj.report.dt_ratio >= 1.0);
    }

    #[test]
    fn cadence_keeps_final_level() {
        let traj = run(burgers_sim(49, 0.2), 7).unwrap();
        assert_eq!(traj.final_state().time, 0.2);
        assert!(traj.snapshots.iter().rev().skip(1).all(|s| s.state.step % 7 == 0));
    }

    #[test]
    fn zero_length_run_keeps_the_initial_level() {
        let traj = run(burgers_sim(9, 0.0), 1).unwrap();
        assert_eq!(traj.snapshots.len(), 1);
        assert_eq!(traj.report.steps, 0);
    }

    #[test]
    fn bad_cfl_is_rejected() {
        let mesh = Mesh::new(0.0, 1.0, 9).unwrap();
        let mut opts = SchemeOptions::new(1.0);
        opts.cfl = 1.5;
        let r = Simulation::new(
            Arc::new(SyntheticModel::burgers()),
            mesh,
            opts,
            StateVec::scalar(1.0),
            vec![StateVec::scalar(0.5); 10],
        );
        assert!(r.is_err());
    }
}
