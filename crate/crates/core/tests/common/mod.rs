//! Independent reference implementations shared by the integration tests.
//! Nothing here calls into the crate's Riemann solvers or scheme.

#![allow(dead_code)]

use std::path::PathBuf;

pub fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn burgers_flux(u: f64) -> f64 {
    u * u * 0.5
}

/// Godunov flux of Burgers' equation from the textbook case analysis.
pub fn burgers_godunov_flux(ul: f64, ur: f64) -> f64 {
    if ul > ur {
        let s = (ul + ur) * 0.5;
        if s >= 0.0 {
            burgers_flux(ul)
        } else {
            burgers_flux(ur)
        }
    } else if ul >= 0.0 {
        burgers_flux(ul)
    } else if ur <= 0.0 {
        burgers_flux(ur)
    } else {
        0.0
    }
}

/// Classical first-order Godunov for `u_t + (u²/2)_x = 0` with fixed ghost
/// values. Returns the cell values after each step and the step sizes.
pub fn classical_godunov(
    mut u: Vec<f64>,
    ghosts: (f64, f64),
    dx: f64,
    cfl: f64,
    steps: usize,
) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut levels = Vec::with_capacity(steps);
    let mut dts = Vec::with_capacity(steps);
    for _ in 0..steps {
        let smax = u.iter().chain([&ghosts.0, &ghosts.1]).fold(0.0f64, |m, v| m.max(v.abs()));
        let dt = cfl * dx / smax;
        let lambda = dt / dx;
        let mut ext = Vec::with_capacity(u.len() + 2);
        ext.push(ghosts.0);
        ext.extend_from_slice(&u);
        ext.push(ghosts.1);
        let fluxes: Vec<f64> = ext.windows(2).map(|w| burgers_godunov_flux(w[0], w[1])).collect();
        for (i, v) in u.iter_mut().enumerate() {
            *v -= (fluxes[i + 1] - fluxes[i]) * lambda;
        }
        levels.push(u.clone());
        dts.push(dt);
    }
    (levels, dts)
}

/// Middle state `(ρ*, v*)` of the isothermal Riemann problem.
///
/// Shock branches come from solving the Rankine-Hugoniot quadratic for the
/// momentum, rarefaction branches from integrating the integral curves with
/// RK4. The crossing is bracketed on a dense grid in `ln ρ` and refined by
/// bisection.
pub fn isothermal_middle_oracle(sigma: f64, left: (f64, f64), right: (f64, f64)) -> (f64, f64) {
    let (rho_l, v_l) = left;
    let (rho_r, v_r) = right;
    let mismatch = |s: f64| {
        let rho = s.exp();
        wave_curve_velocity(sigma, rho_l, v_l, rho, -1.0) - wave_curve_velocity(sigma, rho_r, v_r, rho, 1.0)
    };
    // scan down from the compressive end; curves far into the expansive side are costly
    let s_lo = rho_l.min(rho_r).ln() - 40.0;
    let s_hi = rho_l.max(rho_r).ln() + 10.0;
    const STEP: f64 = 0.25;
    assert!(mismatch(s_hi) < 0.0, "bracket too narrow at the high end");
    let mut b = s_hi;
    let mut a = f64::NAN;
    while b > s_lo {
        let s = b - STEP;
        if mismatch(s) > 0.0 {
            a = s;
            break;
        }
        b = s;
    }
    assert!(a.is_finite(), "bracket too narrow at the low end");
    for _ in 0..48 {
        let m = 0.5 * (a + b);
        if mismatch(m) > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    let s = 0.5 * (a + b);
    let rho = s.exp();
    (rho, wave_curve_velocity(sigma, rho_l, v_l, rho, -1.0))
}

/// Velocity reached on the 1-curve (`family = -1`) from `(ρ0, v0)` or on the
/// 2-curve (`family = 1`, traversed backwards from the right state) at density `ρ`.
pub fn wave_curve_velocity(sigma: f64, rho0: f64, v0: f64, rho: f64, family: f64) -> f64 {
    let m0 = rho0 * v0;
    if rho > rho0 {
        // (m - m0)² = (ρ - ρ0)·(m²/ρ + σ²ρ - m0²/ρ0 - σ²ρ0), quadratic in m
        let d = rho - rho0;
        let qa = 1.0 - d / rho;
        let qb = -2.0 * m0;
        let qc = m0 * m0 + d * m0 * m0 / rho0 - sigma * sigma * d * d;
        let disc = (qb * qb - 4.0 * qa * qc).max(0.0).sqrt();
        // Lax: the 1-shock slows the flow down, the 2-shock speeds it up
        let m = if family < 0.0 { (-qb - disc) / (2.0 * qa) } else { (-qb + disc) / (2.0 * qa) };
        m / rho
    } else {
        // dm/d(ln ρ) = m ∓ σρ along the eigenvector (1, v ∓ σ)
        let (s0, s1) = (rho0.ln(), rho.ln());
        let steps = ((s0 - s1).abs() * 50.0).ceil().max(8.0) as usize;
        let h = (s1 - s0) / steps as f64;
        let rate = |s: f64, m: f64| m + family * sigma * s.exp();
        let mut m = m0;
        let mut s = s0;
        for _ in 0..steps {
            let k1 = rate(s, m);
            let k2 = rate(s + 0.5 * h, m + 0.5 * h * k1);
            let k3 = rate(s + 0.5 * h, m + 0.5 * h * k2);
            let k4 = rate(s + h, m + h * k3);
            m += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            s += h;
        }
        m / rho
    }
}

/// Exact cell averages of the entropy solution of Burgers' equation from a
/// single jump at `x0`, on cells with the given edges.
pub fn burgers_riemann_averages(x0: f64, ul: f64, ur: f64, t: f64, edges: &[f64]) -> Vec<f64> {
    // antiderivative of the exact solution in x
    let prim = |x: f64| -> f64 {
        if ul > ur {
            let xs = x0 + 0.5 * (ul + ur) * t;
            if x < xs {
                ul * x
            } else {
                ul * xs + ur * (x - xs)
            }
        } else {
            let (a, b) = (x0 + ul * t, x0 + ur * t);
            if x < a {
                ul * x
            } else if x < b {
                ul * a + ((x - x0) * (x - x0) - (a - x0) * (a - x0)) / (2.0 * t)
            } else {
                ul * a + ((b - x0) * (b - x0) - (a - x0) * (a - x0)) / (2.0 * t) + ur * (x - b)
            }
        }
    };
    edges.windows(2).map(|w| (prim(w[1]) - prim(w[0])) / (w[1] - w[0])).collect()
}
