//! Exact Riemann solver for the isothermal system `a·(m, m²/ρ + σ²ρ)`.
//!
//! A constant metric factor `a` only rescales time, so the middle state is
//! that of the flat isothermal problem and every wave speed is multiplied by
//! `a`. The 1-wave curve through the left state and the 2-wave curve through
//! the right state are written as velocity offsets
//!
//! ```text
//! v = v_L - φ(ρ; ρ_L)     v = v_R + φ(ρ; ρ_R)
//! φ(ρ; ρ_K) = σ (ρ - ρ_K)/√(ρ ρ_K)   for ρ > ρ_K   (Lax shock branch)
//!           = σ ln(ρ/ρ_K)            for ρ ≤ ρ_K   (rarefaction branch)
//! ```
//!
//! and intersected by damped Newton in `ln ρ` inside a maintained bracket,
//! falling back to bisection whenever a Newton step leaves the bracket.
//! Both branches diverge as `ρ → 0`, so the curves always meet at positive
//! density; the vacuum error only fires on floating-point underflow.

use crate::riemann::{FanProfile, RiemannError, RiemannFan, Wave};
use crate::state::{ConservedState, MetricState, StateVec};

const RESIDUAL_TOL: f64 = 1.0e-12;
const MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsothermalMiddle {
    pub density: f64,
    pub velocity: f64,
    pub iterations: usize,
}

/// Velocity on the 1-curve (`family = 1`, through `(ρ_K, v_K)` on the left)
/// or the 2-curve (`family = 2`, through the right state) at density `ρ`.
pub fn isothermal_wave_curve_velocity(family: u8, rho: f64, rho_k: f64, v_k: f64, sigma: f64) -> f64 {
    let (phi, _) = curve_offset(rho, rho.ln(), rho_k, sigma);
    if family == 1 {
        v_k - phi
    } else {
        v_k + phi
    }
}

/// `φ(ρ; ρ_K)` and `dφ/dρ`.
fn curve_offset(rho: f64, ln_rho: f64, rho_k: f64, sigma: f64) -> (f64, f64) {
    if rho > rho_k {
        let root = (rho * rho_k).sqrt();
        (sigma * (rho - rho_k) / root, sigma * (rho + rho_k) / (2.0 * rho * root))
    } else {
        (sigma * (ln_rho - rho_k.ln()), sigma / rho)
    }
}

pub(crate) fn isothermal_middle(
    sigma: f64,
    left: &ConservedState,
    right: &ConservedState,
) -> Result<IsothermalMiddle, RiemannError> {
    let (rho_l, v_l) = (left[0], left[1] / left[0]);
    let (rho_r, v_r) = (right[0], right[1] / right[0]);
    let residual = |y: f64| -> (f64, f64) {
        let rho = y.exp();
        let (pl, dl) = curve_offset(rho, y, rho_l, sigma);
        let (pr, dr) = curve_offset(rho, y, rho_r, sigma);
        (pl + pr + v_r - v_l, rho * (dl + dr))
    };
    let scale = sigma + v_l.abs() + v_r.abs();

    // exact when both waves are rarefactions
    let mut y = 0.5 * (rho_l.ln() + rho_r.ln() + (v_l - v_r) / sigma);
    let (mut f, mut df) = residual(y);
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        if f.abs() <= RESIDUAL_TOL * scale {
            break;
        }
        if f < 0.0 {
            lo = y;
        } else {
            hi = y;
        }
        if hi - lo <= 4.0 * f64::EPSILON * y.abs().max(1.0) {
            break;
        }
        let newton = y - f / df;
        let mut next = if df > 0.0 && newton.is_finite() { newton } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = match (lo.is_finite(), hi.is_finite()) {
                (true, true) => 0.5 * (lo + hi),
                (true, false) => lo + (y - lo).abs().max(1.0) * 2.0,
                (false, true) => hi - (hi - y).abs().max(1.0) * 2.0,
                (false, false) => unreachable!(),
            };
        }
        y = next;
        (f, df) = residual(y);
        iterations += 1;
    }
    if iterations >= MAX_ITERATIONS && f.abs() > RESIDUAL_TOL * scale {
        return Err(RiemannError::NonConvergence { iterations, residual: f });
    }
    let density = y.exp();
    if !(density > f64::MIN_POSITIVE) || !density.is_finite() {
        return Err(RiemannError::Vacuum { left: *left, right: *right });
    }
    let (pl, _) = curve_offset(density, y, rho_l, sigma);
    let (pr, _) = curve_offset(density, y, rho_r, sigma);
    let velocity = 0.5 * ((v_l - pl) + (v_r + pr));
    Ok(IsothermalMiddle { density, velocity, iterations })
}

pub(crate) fn solve_isothermal(
    metric: MetricState,
    sigma: f64,
    left: &ConservedState,
    right: &ConservedState,
) -> Result<RiemannFan, RiemannError> {
    let a = metric[0];
    if left == right {
        return Ok(RiemannFan::constant(metric, *left));
    }
    let mid = isothermal_middle(sigma, left, right)?;
    let (rho_l, v_l) = (left[0], left[1] / left[0]);
    let (rho_r, v_r) = (right[0], right[1] / right[0]);
    let middle = StateVec::pair(mid.density, mid.density * mid.velocity);

    let wave1 = if mid.density > rho_l {
        Wave::shock(a * (v_l - sigma * (mid.density / rho_l).sqrt()), *left, middle)
    } else {
        let head = a * (v_l - sigma);
        let profile = FanProfile::Isothermal {
            family: 1,
            metric: a,
            sound_speed: sigma,
            anchor_xi: head,
            anchor_density: rho_l,
        };
        Wave::rarefaction(head, a * (mid.velocity - sigma), *left, middle, profile)
    };
    let wave2 = if mid.density > rho_r {
        Wave::shock(a * (v_r + sigma * (mid.density / rho_r).sqrt()), middle, *right)
    } else {
        let head = a * (v_r + sigma);
        let profile = FanProfile::Isothermal {
            family: 2,
            metric: a,
            sound_speed: sigma,
            anchor_xi: head,
            anchor_density: rho_r,
        };
        Wave::rarefaction(a * (mid.velocity + sigma), head, middle, *right, profile)
    };
    Ok(RiemannFan::from_waves(metric, *left, *right, [wave1, wave2]))
}
