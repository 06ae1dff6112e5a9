//! Exact self-similar Riemann fans for frozen-metric conservation laws.
//!
//! A [`RiemannFan`] records the ordered waves of the solution of
//! `u_t + f(A, u)_x = 0` with piecewise-constant data. It can be sampled at any
//! similarity coordinate `ξ = (x - x₀)/(t - t₀)` and integrated exactly over
//! any interval: constant regions and shocks are trivial, and rarefaction
//! interiors have closed-form antiderivatives for both shipped models.

mod burgers;
mod isothermal;

use thiserror::Error;

use crate::model::ModelError;
use crate::state::{ConservedState, MetricState};

pub(crate) use burgers::solve_burgers;
pub(crate) use isothermal::solve_isothermal;
pub use isothermal::{isothermal_wave_curve_velocity, IsothermalMiddle};

/// Componentwise threshold below which a wave is considered to have zero strength.
pub const ZERO_STRENGTH: f64 = 1.0e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RiemannError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("wave curves do not intersect in the admissible region (vacuum) for {left} | {right}")]
    Vacuum { left: ConservedState, right: ConservedState },
    #[error("middle-state iteration did not converge in {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("wave with speeds [{left_speed}, {right_speed}] leaves the averaging interval [{x_a}, {x_b}] at time {tau}")]
    CflViolation { left_speed: f64, right_speed: f64, x_a: f64, x_b: f64, tau: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveKind {
    Shock,
    Rarefaction,
    Contact,
}

/// Closed-form interior of a rarefaction wave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FanProfile {
    /// `f = A u²/2`: `u(ξ) = ξ / A`.
    Burgers { metric: f64 },
    /// Isothermal 1- or 2-rarefaction: `v = ξ/a ± σ`,
    /// `ρ = ρ_anchor · exp(∓(ξ - ξ_anchor)/(aσ))`.
    Isothermal { family: u8, metric: f64, sound_speed: f64, anchor_xi: f64, anchor_density: f64 },
}

impl FanProfile {
    pub fn eval(&self, xi: f64) -> ConservedState {
        match *self {
            FanProfile::Burgers { metric } => ConservedState::scalar(xi / metric),
            FanProfile::Isothermal { .. } => {
                let (rho, v) = self.isothermal_primitive(xi);
                ConservedState::pair(rho, rho * v)
            }
        }
    }

    fn isothermal_primitive(&self, xi: f64) -> (f64, f64) {
        match *self {
            FanProfile::Isothermal { family, metric, sound_speed, anchor_xi, anchor_density } => {
                let sign = self.isothermal_sign();
                let rho = anchor_density * (sign * (xi - anchor_xi) / (metric * sound_speed)).exp();
                let v = if family == 1 { xi / metric + sound_speed } else { xi / metric - sound_speed };
                (rho, v)
            }
            FanProfile::Burgers { .. } => unreachable!(),
        }
    }

    fn isothermal_sign(&self) -> f64 {
        match *self {
            FanProfile::Isothermal { family: 1, .. } => -1.0,
            _ => 1.0,
        }
    }

    /// `∫_{ξ0}^{ξ1} U(ξ) dξ` in closed form.
    pub fn integral(&self, xi0: f64, xi1: f64) -> ConservedState {
        match *self {
            FanProfile::Burgers { metric } => {
                ConservedState::scalar((xi1 - xi0) * (xi1 + xi0) / (2.0 * metric))
            }
            FanProfile::Isothermal { family, metric, sound_speed, .. } => {
                // ρ(ξ) = C e^{kξ}; ∫ρ = ρ/k, ∫ρξ = ρ(ξ/k - 1/k²).
                let k = self.isothermal_sign() / (metric * sound_speed);
                let (rho0, _) = self.isothermal_primitive(xi0);
                let (rho1, _) = self.isothermal_primitive(xi1);
                let mass = if (k * (xi1 - xi0)).abs() < 1e-6 {
                    // series form avoids cancellation for narrow slices
                    let d = xi1 - xi0;
                    rho0 * d * (1.0 + k * d / 2.0 + (k * d).powi(2) / 6.0 + (k * d).powi(3) / 24.0)
                } else {
                    (rho1 - rho0) / k
                };
                let first_moment = if (k * (xi1 - xi0)).abs() < 1e-6 {
                    let d = xi1 - xi0;
                    xi0 * mass + rho0 * d * d * (0.5 + k * d / 3.0 + (k * d).powi(2) / 8.0)
                } else {
                    let anti = |rho: f64, xi: f64| rho * (xi / k - 1.0 / (k * k));
                    anti(rho1, xi1) - anti(rho0, xi0)
                };
                let offset = if family == 1 { sound_speed } else { -sound_speed };
                ConservedState::pair(mass, first_moment / metric + offset * mass)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wave {
    pub kind: WaveKind,
    pub left_speed: f64,
    pub right_speed: f64,
    pub left_state: ConservedState,
    pub right_state: ConservedState,
    pub profile: Option<FanProfile>,
}

impl Wave {
    pub fn shock(speed: f64, left: ConservedState, right: ConservedState) -> Self {
        Self { kind: WaveKind::Shock, left_speed: speed, right_speed: speed, left_state: left, right_state: right, profile: None }
    }

    pub fn rarefaction(
        left_speed: f64,
        right_speed: f64,
        left: ConservedState,
        right: ConservedState,
        profile: FanProfile,
    ) -> Self {
        Self { kind: WaveKind::Rarefaction, left_speed, right_speed, left_state: left, right_state: right, profile: Some(profile) }
    }

    pub fn strength(&self) -> f64 {
        (self.right_state - self.left_state).norm1()
    }
}

/// Exact solution of one frozen-metric Riemann problem.
#[derive(Debug, Clone, PartialEq)]
pub struct RiemannFan {
    pub left_state: ConservedState,
    pub right_state: ConservedState,
    pub frozen_metric: MetricState,
    pub waves: Vec<Wave>,
    /// `(t₀, x₀)` of the initial discontinuity.
    pub origin: (f64, f64),
}

impl RiemannFan {
    pub fn constant(metric: MetricState, state: ConservedState) -> Self {
        Self { left_state: state, right_state: state, frozen_metric: metric, waves: Vec::new(), origin: (0.0, 0.0) }
    }

    /// Assembles a fan, dropping waves of zero strength.
    pub(crate) fn from_waves(
        metric: MetricState,
        left: ConservedState,
        right: ConservedState,
        waves: impl IntoIterator<Item = Wave>,
    ) -> Self {
        let waves = waves
            .into_iter()
            .filter(|w| {
                (w.right_state - w.left_state).iter().any(|d| d.abs() > ZERO_STRENGTH)
            })
            .collect();
        Self { left_state: left, right_state: right, frozen_metric: metric, waves, origin: (0.0, 0.0) }
    }

    pub fn with_origin(mut self, t0: f64, x0: f64) -> Self {
        self.origin = (t0, x0);
        self
    }

    pub fn is_constant(&self) -> bool {
        self.waves.is_empty()
    }

    /// Value of the fan at similarity coordinate `ξ`. Shocks take their right
    /// state at `ξ = s`.
    pub fn sample(&self, xi: f64) -> ConservedState {
        let mut state = self.left_state;
        for w in &self.waves {
            if xi < w.left_speed {
                return state;
            }
            if xi < w.right_speed {
                if let Some(p) = &w.profile {
                    return p.eval(xi);
                }
            }
            state = w.right_state;
        }
        state
    }

    /// Value at absolute `(t, x)`; returns the `t → t₀⁺` limit when `t == t₀`.
    pub fn value_at(&self, t: f64, x: f64) -> ConservedState {
        let tau = t - self.origin.0;
        let dx = x - self.origin.1;
        if tau > 0.0 {
            self.sample(dx / tau)
        } else if dx < 0.0 {
            self.left_state
        } else {
            self.right_state
        }
    }

    /// Slowest and fastest signal speeds; `(0, 0)` for a constant fan.
    pub fn speed_range(&self) -> (f64, f64) {
        match (self.waves.first(), self.waves.last()) {
            (Some(first), Some(last)) => (first.left_speed, last.right_speed),
            _ => (0.0, 0.0),
        }
    }

    pub fn max_abs_speed(&self) -> f64 {
        let (lo, hi) = self.speed_range();
        lo.abs().max(hi.abs())
    }

    /// Wave-edge speeds in increasing order; the only places where the fan is
    /// discontinuous or has a kink.
    pub fn edge_speeds(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(2 * self.waves.len());
        for w in &self.waves {
            out.push(w.left_speed);
            if w.right_speed != w.left_speed {
                out.push(w.right_speed);
            }
        }
        out
    }

    /// `∫_{ξa}^{ξb} U(ξ) dξ`, exact.
    pub fn integral_xi(&self, xi_a: f64, xi_b: f64) -> ConservedState {
        if xi_b < xi_a {
            return -self.integral_xi(xi_b, xi_a);
        }
        let mut total = self.left_state * 0.0;
        let mut cursor = xi_a;
        let mut state = self.left_state;
        for w in &self.waves {
            if cursor >= xi_b {
                break;
            }
            // constant region up to the wave's left edge
            let end = w.left_speed.min(xi_b);
            if end > cursor {
                total += state * (end - cursor);
                cursor = end;
            }
            if let Some(p) = &w.profile {
                let lo = cursor.max(w.left_speed);
                let hi = w.right_speed.min(xi_b);
                if hi > lo {
                    total += p.integral(lo, hi);
                    cursor = hi;
                }
            }
            cursor = cursor.max(w.right_speed.min(xi_b));
            state = w.right_state;
        }
        if xi_b > cursor {
            total += state * (xi_b - cursor);
        }
        total
    }

    /// `∫_{x_a}^{x_b} u(t₀ + τ, x) dx` with absolute positions, exact for `τ > 0`.
    pub fn integral(&self, x_a: f64, x_b: f64, tau: f64) -> ConservedState {
        assert!(tau > 0.0, "fan integral needs positive elapsed time");
        let x0 = self.origin.1;
        self.integral_xi((x_a - x0) / tau, (x_b - x0) / tau) * tau
    }

    /// Average of the fan over `[x_a, x_b]` at elapsed time `τ`.
    ///
    /// Fails if any wave has left the interval, since the cell average would
    /// then no longer be determined by this fan alone.
    pub fn average(&self, x_a: f64, x_b: f64, tau: f64) -> Result<ConservedState, RiemannError> {
        assert!(x_b > x_a, "empty averaging interval");
        let x0 = self.origin.1;
        for w in &self.waves {
            let lo = x0 + w.left_speed * tau;
            let hi = x0 + w.right_speed * tau;
            if lo < x_a || hi > x_b {
                return Err(RiemannError::CflViolation {
                    left_speed: w.left_speed,
                    right_speed: w.right_speed,
                    x_a,
                    x_b,
                    tau,
                });
            }
        }
        Ok(self.integral(x_a, x_b, tau) * (1.0 / (x_b - x_a)))
    }

    /// Total variation of `ξ ↦ U(ξ)` over the whole fan (vector 1-norm).
    ///
    /// Rarefaction interiors are measured along a 256-segment polyline, which
    /// is exact whenever each component is monotone across the wave.
    pub fn total_variation(&self) -> f64 {
        let mut tv = 0.0;
        for w in &self.waves {
            match &w.profile {
                None => tv += (w.right_state - w.left_state).norm1(),
                Some(p) => {
                    const SEGMENTS: usize = 256;
                    let mut prev = w.left_state;
                    for k in 1..=SEGMENTS {
                        let xi = w.left_speed + (w.right_speed - w.left_speed) * k as f64 / SEGMENTS as f64;
                        let cur = if k == SEGMENTS { w.right_state } else { p.eval(xi) };
                        tv += (cur - prev).norm1();
                        prev = cur;
                    }
                }
            }
        }
        tv
    }
}
