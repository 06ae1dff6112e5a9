use crate::riemann::{FanProfile, RiemannFan, Wave};
use crate::state::{MetricState, StateVec};

/// Riemann problem for `u_t + (A u²/2)_x = 0` with `A > 0` frozen.
///
/// The flux is convex, so the solution is a single Lax shock when
/// `u_L > u_R` and a centred rarefaction when `u_L < u_R`.
pub(crate) fn solve_burgers(metric: MetricState, u_left: f64, u_right: f64) -> RiemannFan {
    let a = metric[0];
    let left = StateVec::scalar(u_left);
    let right = StateVec::scalar(u_right);
    let wave = if u_left > u_right {
        Wave::shock(a * (u_left + u_right) * 0.5, left, right)
    } else {
        Wave::rarefaction(a * u_left, a * u_right, left, right, FanProfile::Burgers { metric: a })
    };
    RiemannFan::from_waves(metric, left, right, [wave])
}
