//! Isothermal Euler-type model with a scalar metric factor.
//!
//! `u = (ρ, m)`, `f(A,u) = a(A)·(m, m²/ρ + σ²ρ)` with `a(A) = A`,
//! `g = β·(0, -ρ/x)` and `h = κ·A·ρ`. The characteristic speeds are
//! `a·(v ∓ σ)` with `v = m/ρ`.

use crate::model::{check_dim, BalanceLaw, ModelError};
use crate::riemann::{self, RiemannError, RiemannFan};
use crate::state::{ConservedState, MetricState, SmallMatrix, StateVec};

pub(crate) const ID: &str = "isothermal";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsothermalBounds {
    pub density_min: f64,
    pub metric_max: f64,
}

impl Default for IsothermalBounds {
    fn default() -> Self {
        Self { density_min: 1.0e-12, metric_max: 1.0e6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsothermalModel {
    pub sound_speed: f64,
    pub kappa: f64,
    pub source_coupling: f64,
    pub bounds: IsothermalBounds,
}

impl IsothermalModel {
    /// Homogeneous, statically flat configuration.
    pub fn new(sound_speed: f64) -> Self {
        Self { sound_speed, kappa: 0.0, source_coupling: 0.0, bounds: IsothermalBounds::default() }
    }

    fn unpack(&self, a: &MetricState, u: &ConservedState) -> Result<(f64, f64, f64), ModelError> {
        self.check_metric(a)?;
        self.check_state(u)?;
        Ok((a[0], u[0], u[1]))
    }
}

impl BalanceLaw for IsothermalModel {
    fn id(&self) -> &'static str {
        ID
    }

    fn state_dim(&self) -> usize {
        2
    }

    fn metric_dim(&self) -> usize {
        1
    }

    fn check_state(&self, u: &ConservedState) -> Result<(), ModelError> {
        check_dim("conserved state", 2, u.len())?;
        if !u.is_finite() {
            return Err(ModelError::InadmissibleState { state: *u, reason: "non-finite component" });
        }
        if !(u[0] >= self.bounds.density_min) {
            return Err(ModelError::InadmissibleState { state: *u, reason: "density below density_min" });
        }
        Ok(())
    }

    fn check_metric(&self, a: &MetricState) -> Result<(), ModelError> {
        check_dim("metric", 1, a.len())?;
        if !a.is_finite() {
            return Err(ModelError::InadmissibleMetric { metric: *a, reason: "non-finite component" });
        }
        if !(a[0] > 0.0) {
            return Err(ModelError::InadmissibleMetric { metric: *a, reason: "a(A) must be positive" });
        }
        if a[0] > self.bounds.metric_max {
            return Err(ModelError::InadmissibleMetric { metric: *a, reason: "A exceeds metric_max" });
        }
        Ok(())
    }

    fn flux(&self, a: &MetricState, u: &ConservedState) -> Result<ConservedState, ModelError> {
        let (a, rho, m) = self.unpack(a, u)?;
        let c2 = self.sound_speed * self.sound_speed;
        Ok(StateVec::pair(a * m, a * (m * m / rho + c2 * rho)))
    }

    fn flux_grad_metric(&self, a: &MetricState, u: &ConservedState) -> Result<SmallMatrix, ModelError> {
        let (_, rho, m) = self.unpack(a, u)?;
        let c2 = self.sound_speed * self.sound_speed;
        Ok(SmallMatrix::from_rows(&[&[m], &[m * m / rho + c2 * rho]]))
    }

    fn flux_jacobian(&self, a: &MetricState, u: &ConservedState) -> Result<SmallMatrix, ModelError> {
        let (a, rho, m) = self.unpack(a, u)?;
        let v = m / rho;
        let c2 = self.sound_speed * self.sound_speed;
        Ok(SmallMatrix::from_rows(&[&[0.0, a], &[a * (c2 - v * v), a * 2.0 * v]]))
    }

    fn source(&self, a: &MetricState, u: &ConservedState, x: f64) -> Result<ConservedState, ModelError> {
        let (_, rho, _) = self.unpack(a, u)?;
        if self.source_coupling == 0.0 {
            return Ok(StateVec::pair(0.0, 0.0));
        }
        if !(x > 0.0) || !x.is_finite() {
            return Err(ModelError::InadmissibleCoordinate { x, reason: "geometric source needs x > 0" });
        }
        Ok(StateVec::pair(0.0, -self.source_coupling * rho / x))
    }

    fn metric_rhs(&self, a: &MetricState, u: &ConservedState, x: f64) -> Result<MetricState, ModelError> {
        let (a, rho, _) = self.unpack(a, u)?;
        if !x.is_finite() {
            return Err(ModelError::InadmissibleCoordinate { x, reason: "non-finite" });
        }
        Ok(StateVec::scalar(self.kappa * a * rho))
    }

    fn wave_speeds(&self, a: &MetricState, u: &ConservedState) -> Result<ConservedState, ModelError> {
        let (a, rho, m) = self.unpack(a, u)?;
        let v = m / rho;
        Ok(StateVec::pair(a * (v - self.sound_speed), a * (v + self.sound_speed)))
    }

    fn solve_riemann(
        &self,
        a: &MetricState,
        left: &ConservedState,
        right: &ConservedState,
    ) -> Result<RiemannFan, RiemannError> {
        self.check_metric(a)?;
        self.check_state(left)?;
        self.check_state(right)?;
        riemann::solve_isothermal(*a, self.sound_speed, left, right)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flux_example() {
        let m = IsothermalModel::new(1.0);
        let f = m.flux(&StateVec::scalar(1.0), &StateVec::pair(1.0, 0.0)).unwrap();
        assert_eq!(f, StateVec::pair(0.0, 1.0));
        let s = m.wave_speeds(&StateVec::scalar(1.0), &StateVec::pair(1.0, 0.0)).unwrap();
        assert_eq!(s, StateVec::pair(-1.0, 1.0));
    }

    #[test]
    fn wave_speeds_are_sorted() {
        let m = IsothermalModel::new(0.3);
        let s = m.wave_speeds(&StateVec::scalar(1.2), &StateVec::pair(2.0, -1.0)).unwrap();
        assert!(s[0] < s[1]);
        assert!((s[0] - 1.2 * (-0.5 - 0.3)).abs() < 1e-15);
    }

    #[test]
    fn geometric_source() {
        let m = IsothermalModel { source_coupling: 1.0, ..IsothermalModel::new(0.5) };
        let g = m.source(&StateVec::scalar(1.0), &StateVec::pair(2.0, 0.3), 4.0).unwrap();
        assert_eq!(g, StateVec::pair(0.0, -0.5));
        assert!(m.source(&StateVec::scalar(1.0), &StateVec::pair(2.0, 0.3), 0.0).is_err());
    }

    #[test]
    fn nonpositive_density_is_rejected() {
        let m = IsothermalModel::new(0.5);
        let err = m.flux(&StateVec::scalar(1.0), &StateVec::pair(-1.0, 0.0)).unwrap_err();
        assert!(matches!(err, ModelError::InadmissibleState { .. }));
    }
}
