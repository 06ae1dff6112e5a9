use crate::model::{BalanceLaw, ModelError};
use crate::riemann::RiemannFan;
use crate::scheme::{GridState, Mesh, SchemeError, SchemeOptions, Snapshot, StepRecord, ODE_SUBSTEPS};
use crate::state::{ConservedState, MetricState};

/// Interface Riemann solutions for one time level.
#[derive(Debug, Clone)]
pub struct Sweep {
    /// `n + 2` fans; fan `k` sits at edge `k` with origin `(t_j, x_k)`.
    pub fans: Vec<RiemannFan>,
    /// `fan_k(ξ = 0)`.
    pub traces: Vec<ConservedState>,
}

impl Sweep {
    pub fn max_abs_speed(&self) -> f64 {
        self.fans.iter().fold(0.0, |m, f| m.max(f.max_abs_speed()))
    }
}

/// Largest characteristic speed over all cells and both ghost states.
pub fn max_wave_speed(model: &dyn BalanceLaw, state: &GridState) -> Result<f64, SchemeError> {
    let mut max = 0.0f64;
    let n_cells = state.cells();
    let ghosts = [(state.boundary[0], state.metric[0]), (state.boundary[1], state.metric[n_cells - 1])];
    let cells = state.u.iter().copied().zip(state.metric.iter().copied());
    for (i, (u, a)) in cells.chain(ghosts).enumerate() {
        let s = model.max_abs_speed(&a, &u).map_err(|source| SchemeError::Inadmissible {
            step: state.step,
            cell: i.min(n_cells - 1),
            stage: "wave speed",
            source,
        })?;
        max = max.max(s);
    }
    Ok(max)
}

/// `Δt_j = min(cfl·Δx / max_speed, remaining)`; a motionless state takes the cap.
pub fn cfl_time_step(dx: f64, max_speed: f64, cfl: f64, remaining: f64) -> f64 {
    if max_speed > 0.0 {
        (cfl * dx / max_speed).min(remaining)
    } else {
        remaining
    }
}

/// Solves the Riemann problem at every interface with the metric frozen at
/// `½(A_i + A_{i+1})`; boundary interfaces see the ghost states.
pub fn riemann_sweep(model: &dyn BalanceLaw, mesh: &Mesh, state: &GridState) -> Result<Sweep, SchemeError> {
    let interfaces = state.cells() + 1;
    let mut fans = Vec::with_capacity(interfaces);
    let mut traces = Vec::with_capacity(interfaces);
    for k in 0..interfaces {
        let (ul, al) = state.interface_left(k);
        let (ur, ar) = state.interface_right(k);
        let frozen = (al + ar) * 0.5;
        let fan = model
            .solve_riemann(&frozen, &ul, &ur)
            .map_err(|source| SchemeError::Riemann { step: state.step, interface: k, source })?
            .with_origin(state.time, mesh.edge(k));
        traces.push(fan.sample(0.0));
        fans.push(fan);
    }
    Ok(Sweep { fans, traces })
}

/// `ū_i = u_i - (Δt/Δx)·(f(A_i, u*_{i+½}) - f(A_i, u*_{i-½}))`.
pub fn godunov_average(
    model: &dyn BalanceLaw,
    mesh: &Mesh,
    state: &GridState,
    traces: &[ConservedState],
    dt: f64,
) -> Result<Vec<ConservedState>, SchemeError> {
    let lambda = dt / mesh.dx();
    let err = |cell: usize| move |source: ModelError| SchemeError::Inadmissible {
        step: state.step,
        cell,
        stage: "Godunov average",
        source,
    };
    (0..state.cells())
        .map(|i| {
            let a = &state.metric[i];
            let f_left = model.flux(a, &traces[i]).map_err(err(i))?;
            let f_right = model.flux(a, &traces[i + 1]).map_err(err(i))?;
            let avg = state.u[i] - (f_right - f_left) * lambda;
            model.check_state(&avg).map_err(err(i))?;
            Ok(avg)
        })
        .collect()
}

/// `G(u) = g(A, u, x) - ∇_A f(A, u)·A'`, or just `g` without the correction.
pub fn ode_rate(
    model: &dyn BalanceLaw,
    metric: &MetricState,
    slope: &MetricState,
    u: &ConservedState,
    x: f64,
    correction: bool,
) -> Result<ConservedState, ModelError> {
    let g = model.source(metric, u, x)?;
    if correction {
        Ok(g - model.flux_grad_metric(metric, u)?.mul_vec(slope))
    } else {
        Ok(g)
    }
}

/// Integrates `û' = G(û)` from `û(0) = start` over `dt` with classical RK4
/// in [`ODE_SUBSTEPS`] equal substeps.
pub fn ode_step(
    model: &dyn BalanceLaw,
    start: &ConservedState,
    metric: &MetricState,
    slope: &MetricState,
    x: f64,
    dt: f64,
    correction: bool,
) -> Result<ConservedState, ModelError> {
    rk4(|u| ode_rate(model, metric, slope, u, x, correction), *start, dt, ODE_SUBSTEPS)
}

pub(crate) fn rk4<E>(
    rate: impl Fn(&ConservedState) -> Result<ConservedState, E>,
    start: ConservedState,
    span: f64,
    substeps: usize,
) -> Result<ConservedState, E> {
    let h = span / substeps as f64;
    let mut u = start;
    for _ in 0..substeps {
        let k1 = rate(&u)?;
        let k2 = rate(&(u + k1 * (0.5 * h)))?;
        let k3 = rate(&(u + k2 * (0.5 * h)))?;
        let k4 = rate(&(u + k3 * h))?;
        u = u + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0);
    }
    Ok(u)
}

/// Metric values on the grid after integrating `A' = h(A, u, x)` from `r_min`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricField {
    pub edges: Vec<MetricState>,
    pub centers: Vec<MetricState>,
    pub slopes: Vec<MetricState>,
}

/// Left-to-right RK4 scan of `A' = h(A, u_i, x)` with `u` held constant in
/// each cell, followed by the piecewise-linear reconstruction through the
/// edge values.
pub fn metric_update(
    model: &dyn BalanceLaw,
    mesh: &Mesh,
    u: &[ConservedState],
    boundary: &MetricState,
    substeps: usize,
    step: usize,
) -> Result<MetricField, SchemeError> {
    let dx = mesh.dx();
    let h = dx / substeps as f64;
    let mut edges = Vec::with_capacity(u.len() + 1);
    let mut a = *boundary;
    model
        .check_metric(&a)
        .map_err(|source| SchemeError::Inadmissible { step, cell: 0, stage: "metric boundary", source })?;
    edges.push(a);
    for (i, ui) in u.iter().enumerate() {
        let err = |source| SchemeError::Inadmissible { step, cell: i, stage: "metric update", source };
        let x0 = mesh.edge(i);
        for s in 0..substeps {
            let x = x0 + s as f64 * h;
            let rate = |x: f64, a: &MetricState| model.metric_rhs(a, ui, x);
            let k1 = rate(x, &a).map_err(err)?;
            let k2 = rate(x + 0.5 * h, &(a + k1 * (0.5 * h))).map_err(err)?;
            let k3 = rate(x + 0.5 * h, &(a + k2 * (0.5 * h))).map_err(err)?;
            let k4 = rate(x + h, &(a + k3 * h)).map_err(err)?;
            a = a + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0);
        }
        model.check_metric(&a).map_err(err)?;
        edges.push(a);
    }
    let centers = edges.windows(2).map(|w| (w[0] + w[1]) * 0.5).collect();
    let slopes = edges.windows(2).map(|w| (w[1] - w[0]) * (1.0 / dx)).collect();
    Ok(MetricField { edges, centers, slopes })
}

/// One full step; returns the new level and the snapshot of the old one.
pub fn advance(
    model: &dyn BalanceLaw,
    mesh: &Mesh,
    state: &GridState,
    options: &SchemeOptions,
    metric_boundary: &MetricState,
) -> Result<(GridState, Snapshot), SchemeError> {
    let remaining = options.t_end - state.time;
    if !(remaining > 0.0) {
        return Err(SchemeError::Finished { t_end: options.t_end });
    }
    let dx = mesh.dx();
    let sweep = riemann_sweep(model, mesh, state)?;
    let speed = max_wave_speed(model, state)?.max(sweep.max_abs_speed());
    let dt = cfl_time_step(dx, speed, options.cfl, remaining);
    let cfl_limited = dt < remaining;

    for (k, fan) in sweep.fans.iter().enumerate() {
        let s = fan.max_abs_speed();
        if s * dt > 0.5 * dx {
            return Err(SchemeError::FanEscape { step: state.step, interface: k, speed: s, dt, dx });
        }
    }

    let averages = godunov_average(model, mesh, state, &sweep.traces, dt)?;
    let mut u = Vec::with_capacity(averages.len());
    for (i, avg) in averages.iter().enumerate() {
        let next = ode_step(
            model,
            avg,
            &state.metric[i],
            &state.metric_slope[i],
            mesh.center(i),
            dt,
            options.correction,
        )
        .and_then(|v| model.check_state(&v).map(|_| v))
        .map_err(|source| SchemeError::Inadmissible { step: state.step, cell: i, stage: "ODE step", source })?;
        u.push(next);
    }
    let field = metric_update(model, mesh, &u, metric_boundary, options.metric_substeps, state.step + 1)?;
    let time = if cfl_limited { state.time + dt } else { options.t_end };
    let next = GridState {
        time,
        step: state.step + 1,
        u,
        metric: field.centers,
        metric_edges: field.edges,
        metric_slope: field.slopes,
        boundary: state.boundary,
    };
    let snapshot = Snapshot {
        state: state.clone(),
        step: Some(StepRecord { dt, cfl_limited, averages, traces: sweep.traces }),
    };
    Ok((next, snapshot))
}
