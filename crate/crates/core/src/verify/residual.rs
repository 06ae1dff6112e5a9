use rayon::prelude::*;

use crate::model::BalanceLaw;
use crate::quadrature::{breakpoints, gauss4};
use crate::riemann::RiemannFan;
use crate::scheme::{ode_step, riemann_sweep, GridState, Mesh, Trajectory};
use crate::state::{ConservedState, StateVec};
use crate::verify::{TestFunction, VerifyError};

/// Upper limit on integrand evaluations for one residual computation.
pub const QUADRATURE_BUDGET: usize = 2_000_000_000;

/// Weak-form residual of a computed trajectory against one test function.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    /// `∫∫ -u φ_t - f(A_i, u) φ_x - g(A_i, u, x) φ`.
    pub bulk: ConservedState,
    /// `I₁ = ∫ u(t₀⁺, x) φ(t₀, x) dx`.
    pub initial: ConservedState,
    /// `I₂ = ∫ f(A, u(t, r_min⁺)) φ(t, r_min) - f(A, u(t, r_max⁻)) φ(t, r_max) dt`.
    pub boundary: ConservedState,
    /// `ε = bulk - I₁ - I₂`.
    pub epsilon: ConservedState,
    /// `ε₁ = Σ_{j≥1} ∫ φ(t_j, x)·(u(t_j⁺, x) - u(t_j⁻, x)) dx`.
    pub jump: ConservedState,
}

impl Residual {
    fn zeros(d: usize) -> Self {
        let z = StateVec::zeros(d);
        Self { bulk: z, initial: z, boundary: z, epsilon: z, jump: z }
    }

    fn add(&mut self, other: &Residual) {
        self.bulk += other.bulk;
        self.initial += other.initial;
        self.boundary += other.boundary;
        self.jump += other.jump;
    }
}

/// The fractional-step solution `u_Δx` inside one time strip.
struct Strip<'a> {
    model: &'a dyn BalanceLaw,
    mesh: &'a Mesh,
    state: &'a GridState,
    fans: Vec<RiemannFan>,
    correction: bool,
}

impl Strip<'_> {
    /// `û(t - t_j, u^RP(t, x))` in cell `i`; `left_half` picks the fan.
    fn value(&self, i: usize, t: f64, x: f64, left_half: bool) -> Result<ConservedState, VerifyError> {
        let fan = if left_half { &self.fans[i] } else { &self.fans[i + 1] };
        let u_rp = fan.value_at(t, x);
        self.ode(i, &u_rp, t - self.state.time)
    }

    fn ode(&self, i: usize, u: &ConservedState, tau: f64) -> Result<ConservedState, VerifyError> {
        Ok(ode_step(
            self.model,
            u,
            &self.state.metric[i],
            &self.state.metric_slope[i],
            self.mesh.center(i),
            tau,
            self.correction,
        )?)
    }

    /// Quadrature pieces of cell `i` at `τ` after the strip start: split at
    /// the centre, at wave edges and at the test-function kinks.
    fn pieces(&self, i: usize, tau: f64, kinks: &[f64]) -> Vec<(f64, f64, bool)> {
        let (a, b) = (self.mesh.edge(i), self.mesh.edge(i + 1));
        let mid = self.mesh.center(i);
        let mut out = Vec::new();
        for (lo, hi, fan, left) in [(a, mid, &self.fans[i], true), (mid, b, &self.fans[i + 1], false)] {
            let x0 = fan.origin.1;
            let waves = fan.edge_speeds().into_iter().map(|s| x0 + s * tau);
            let pts = breakpoints(lo, hi, waves.chain(kinks.iter().copied()));
            out.extend(pts.windows(2).map(|w| (w[0], w[1], left)));
        }
        out
    }
}

/// Residual terms for each test function, from one pass over the trajectory.
///
/// `u_Δx` is rebuilt exactly as the scheme produced it: in the strip
/// `[t_j, t_{j+1})` it is the ODE solution started from the exact interface
/// Riemann fans, using the cell's frozen metric and slope. The trajectory
/// must keep every time level.
pub fn residuals(
    model: &dyn BalanceLaw,
    traj: &Trajectory,
    phis: &[&dyn TestFunction],
) -> Result<Vec<Residual>, VerifyError> {
    let d = model.state_dim();
    if phis.is_empty() {
        return Ok(Vec::new());
    }
    check_dense(traj)?;
    let final_time = traj.final_state().time;
    for phi in phis {
        let b = phi.support();
        if b.t_b > final_time {
            return Err(VerifyError::SupportNotCovered { t_b: b.t_b, final_time });
        }
    }
    let mesh = &traj.mesh;
    let support = phis.iter().map(|p| p.support()).reduce(|a, b| a.union(&b)).expect("nonempty");
    let kinks_t: Vec<f64> = phis.iter().flat_map(|p| p.kinks_t()).collect();
    let kinks_x: Vec<f64> = phis.iter().flat_map(|p| p.kinks_x()).collect();
    let first_cell = mesh.locate(support.x_a);
    let last_cell = mesh.locate(support.x_b);
    let touches_boundary = support.x_a <= mesh.r_min || support.x_b >= mesh.r_max;

    let strips: Vec<usize> = (0..traj.snapshots.len() - 1)
        .filter(|&j| {
            let t0 = traj.snapshots[j].state.time;
            let t1 = traj.snapshots[j + 1].state.time;
            t1 > support.t_a && t0 < support.t_b
        })
        .collect();
    let estimate = strips.len() * (last_cell - first_cell + 1) * 64;
    if estimate > QUADRATURE_BUDGET {
        return Err(VerifyError::QuadratureBudget { points: estimate, budget: QUADRATURE_BUDGET });
    }

    let per_strip: Vec<Vec<Residual>> = strips
        .par_iter()
        .map(|&j| -> Result<Vec<Residual>, VerifyError> {
            let snap = &traj.snapshots[j];
            let next = &traj.snapshots[j + 1].state;
            let sweep = riemann_sweep(model, mesh, &snap.state)?;
            let strip = Strip { model, mesh, state: &snap.state, fans: sweep.fans, correction: traj.options.correction };
            let (t0, t1) = (snap.state.time, next.time);
            let mut acc = vec![Residual::zeros(d); phis.len()];

            for w in breakpoints(t0, t1, kinks_t.iter().copied()).windows(2) {
                for (t, wt) in gauss4(w[0], w[1]) {
                    for i in first_cell..=last_cell {
                        let a = &snap.state.metric[i];
                        for (lo, hi, left) in strip.pieces(i, t - t0, &kinks_x) {
                            for (x, wx) in gauss4(lo, hi) {
                                let u = strip.value(i, t, x, left)?;
                                let f = model.flux(a, &u)?;
                                let g = model.source(a, &u, x)?;
                                for (k, phi) in phis.iter().enumerate() {
                                    let v = phi.value(t, x);
                                    let (vt, vx) = (phi.dt(t, x), phi.dx(t, x));
                                    if v == 0.0 && vt == 0.0 && vx == 0.0 {
                                        continue;
                                    }
                                    acc[k].bulk -= (u * vt + f * vx + g * v) * (wt * wx);
                                }
                            }
                        }
                    }
                    if touches_boundary {
                        let n = mesh.cells() - 1;
                        let u_min = strip.value(0, t, mesh.r_min, true)?;
                        let u_max = strip.value(n, t, mesh.r_max, false)?;
                        let f_min = model.flux(&snap.state.metric[0], &u_min)?;
                        let f_max = model.flux(&snap.state.metric[n], &u_max)?;
                        for (k, phi) in phis.iter().enumerate() {
                            acc[k].boundary +=
                                (f_min * phi.value(t, mesh.r_min) - f_max * phi.value(t, mesh.r_max)) * wt;
                        }
                    }
                }
            }

            // jump from the fractional-step limit to the new cell values at t_{j+1}
            if phis.iter().any(|p| {
                let b = p.support();
                t1 > b.t_a && t1 < b.t_b
            }) {
                for i in first_cell..=last_cell {
                    for (lo, hi, left) in strip.pieces(i, t1 - t0, &kinks_x) {
                        for (x, wx) in gauss4(lo, hi) {
                            let u_minus = strip.value(i, t1, x, left)?;
                            let du = next.u[i] - u_minus;
                            for (k, phi) in phis.iter().enumerate() {
                                acc[k].jump += du * (phi.value(t1, x) * wx);
                            }
                        }
                    }
                }
            }
            Ok(acc)
        })
        .collect::<Result<_, _>>()?;

    let mut out = vec![Residual::zeros(d); phis.len()];
    for strip in &per_strip {
        for (o, r) in out.iter_mut().zip(strip) {
            o.add(r);
        }
    }

    let first = &traj.snapshots[0].state;
    let t_start = first.time;
    for (k, phi) in phis.iter().enumerate() {
        let mut i1 = StateVec::zeros(d);
        for i in first_cell..=last_cell {
            let pts = breakpoints(mesh.edge(i), mesh.edge(i + 1), kinks_x.iter().copied());
            for w in pts.windows(2) {
                for (x, wx) in gauss4(w[0], w[1]) {
                    i1 += first.u[i] * (phi.value(t_start, x) * wx);
                }
            }
        }
        out[k].initial = i1;
        out[k].epsilon = out[k].bulk - out[k].initial - out[k].boundary;
    }
    Ok(out)
}

pub fn residual(model: &dyn BalanceLaw, traj: &Trajectory, phi: &dyn TestFunction) -> Result<Residual, VerifyError> {
    Ok(residuals(model, traj, &[phi])?.remove(0))
}

fn check_dense(traj: &Trajectory) -> Result<(), VerifyError> {
    let n = traj.snapshots.len();
    for (k, s) in traj.snapshots.iter().enumerate() {
        let step0 = traj.snapshots[0].state.step;
        if s.state.step != step0 + k || (k + 1 < n && s.step.is_none()) {
            return Err(VerifyError::SparseTrajectory { index: k });
        }
    }
    Ok(())
}
