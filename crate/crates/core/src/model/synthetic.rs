//! Scalar metric-coupled Burgers model.
//!
//! `f(A,u) = A u²/2`, `g(A,u,x) = -β u h(A,u,x)`, `h(A,u,x) = κ A u²`.
//! With `A ≡ 1`, `κ = 0` this is inviscid Burgers. Every ingredient of the
//! locally inertial method is active once `κ ≠ 0`: the flux jumps with the
//! metric, `∂_A f = u²/2` is nonzero, and `A` is driven by `u`.

use crate::model::{check_dim, BalanceLaw, ModelError};
use crate::riemann::{self, RiemannError, RiemannFan};
use crate::state::{ConservedState, MetricState, SmallMatrix, StateVec};

pub(crate) const ID: &str = "synthetic";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticBounds {
    pub u_max: f64,
    pub metric_max: f64,
}

impl Default for SyntheticBounds {
    fn default() -> Self {
        Self { u_max: 1.0e6, metric_max: 1.0e6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticModel {
    pub kappa: f64,
    /// `β` in `g = -β u h`; zero gives a homogeneous law.
    pub source_coupling: f64,
    pub bounds: SyntheticBounds,
}

impl SyntheticModel {
    /// Plain Burgers: static flat metric and no source.
    pub fn burgers() -> Self {
        Self { kappa: 0.0, source_coupling: 0.0, bounds: SyntheticBounds::default() }
    }

    pub fn new(kappa: f64, source_coupling: f64) -> Self {
        Self { kappa, source_coupling, bounds: SyntheticBounds::default() }
    }

    fn scalars(&self, a: &MetricState, u: &ConservedState) -> Result<(f64, f64), ModelError> {
        self.check_metric(a)?;
        self.check_state(u)?;
        Ok((a[0], u[0]))
    }
}

impl BalanceLaw for SyntheticModel {
    fn id(&self) -> &'static str {
        ID
    }

    fn state_dim(&self) -> usize {
        1
    }

    fn metric_dim(&self) -> usize {
        1
    }

    fn check_state(&self, u: &ConservedState) -> Result<(), ModelError> {
        check_dim("conserved state", 1, u.len())?;
        if !u.is_finite() {
            return Err(ModelError::InadmissibleState { state: *u, reason: "non-finite component" });
        }
        if u[0].abs() > self.bounds.u_max {
            return Err(ModelError::InadmissibleState { state: *u, reason: "|u| exceeds u_max" });
        }
        Ok(())
    }

    fn check_metric(&self, a: &MetricState) -> Result<(), ModelError> {
        check_dim("metric", 1, a.len())?;
        if !a.is_finite() {
            return Err(ModelError::InadmissibleMetric { metric: *a, reason: "non-finite component" });
        }
        if !(a[0] > 0.0) {
            return Err(ModelError::InadmissibleMetric { metric: *a, reason: "A must be positive" });
        }
        if a[0] > self.bounds.metric_max {
            return Err(ModelError::InadmissibleMetric { metric: *a, reason: "A exceeds metric_max" });
        }
        Ok(())
    }

    fn flux(&self, a: &MetricState, u: &ConservedState) -> Result<ConservedState, ModelError> {
        let (a, u) = self.scalars(a, u)?;
        Ok(StateVec::scalar(a * u * u * 0.5))
    }

    fn flux_grad_metric(&self, a: &MetricState, u: &ConservedState) -> Result<SmallMatrix, ModelError> {
        let (_, u) = self.scalars(a, u)?;
        Ok(SmallMatrix::from_rows(&[&[u * u * 0.5]]))
    }

    fn flux_jacobian(&self, a: &MetricState, u: &ConservedState) -> Result<SmallMatrix, ModelError> {
        let (a, u) = self.scalars(a, u)?;
        Ok(SmallMatrix::from_rows(&[&[a * u]]))
    }

    fn source(&self, a: &MetricState, u: &ConservedState, x: f64) -> Result<ConservedState, ModelError> {
        let h = self.metric_rhs(a, u, x)?;
        Ok(StateVec::scalar(-self.source_coupling * u[0] * h[0]))
    }

    fn metric_rhs(&self, a: &MetricState, u: &ConservedState, x: f64) -> Result<MetricState, ModelError> {
        let (a, u) = self.scalars(a, u)?;
        if !x.is_finite() {
            return Err(ModelError::InadmissibleCoordinate { x, reason: "non-finite" });
        }
        Ok(StateVec::scalar(self.kappa * a * u * u))
    }

    fn wave_speeds(&self, a: &MetricState, u: &ConservedState) -> Result<ConservedState, ModelError> {
        let (a, u) = self.scalars(a, u)?;
        Ok(StateVec::scalar(a * u))
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
        Ok(riemann::solve_burgers(*a, left[0], right[0]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: f64) -> StateVec {
        StateVec::scalar(x)
    }

    #[test]
    fn flux_examples() {
        let m = SyntheticModel::new(0.1, 1.0);
        assert_eq!(m.flux(&s(2.0), &s(3.0)).unwrap(), s(9.0));
        assert_eq!(m.flux(&s(1.0), &s(0.0)).unwrap(), s(0.0));
    }

    #[test]
    fn metric_gradient_examples() {
        let m = SyntheticModel::new(0.1, 1.0);
        assert_eq!(m.flux_grad_metric(&s(2.0), &s(3.0)).unwrap().get(0, 0), 4.5);
        assert_eq!(m.flux_grad_metric(&s(7.0), &s(0.0)).unwrap().get(0, 0), 0.0);
    }

    #[test]
    fn source_and_metric_rhs_examples() {
        // h = κ A u² = 0.1 · 1 · 4
        let m = SyntheticModel::new(0.1, 1.0);
        assert!((m.metric_rhs(&s(1.0), &s(2.0), 0.3).unwrap()[0] - 0.4).abs() < 1e-15);
        // g = -u h with h = 1: κ = 0.25, A = 1, u = 2 gives h = 1
        let m = SyntheticModel::new(0.25, 1.0);
        assert_eq!(m.metric_rhs(&s(1.0), &s(2.0), 0.0).unwrap(), s(1.0));
        assert_eq!(m.source(&s(1.0), &s(2.0), 0.0).unwrap(), s(-2.0));
        let flat = SyntheticModel::burgers();
        for u in [-3.0, 0.0, 0.5, 2.0] {
            assert_eq!(flat.source(&s(1.3), &s(u), 0.2).unwrap()[0], 0.0);
            assert_eq!(flat.metric_rhs(&s(1.3), &s(u), 0.2).unwrap(), s(0.0));
        }
    }

    #[test]
    fn wave_speed_example() {
        let m = SyntheticModel::burgers();
        assert_eq!(m.wave_speeds(&s(2.0), &s(3.0)).unwrap(), s(6.0));
    }

    #[test]
    fn flat_limit_is_burgers() {
        let m = SyntheticModel::burgers();
        for u in [-2.5, -0.1, 0.0, 0.7, 4.0] {
            assert_eq!(m.flux(&s(1.0), &s(u)).unwrap()[0], u * u / 2.0);
        }
    }

    #[test]
    fn inadmissible_inputs_are_errors() {
        let m = SyntheticModel::new(0.1, 1.0);
        assert!(matches!(m.flux(&s(0.0), &s(1.0)), Err(ModelError::InadmissibleMetric { .. })));
        assert!(matches!(m.flux(&s(-1.0), &s(1.0)), Err(ModelError::InadmissibleMetric { .. })));
        assert!(matches!(m.flux(&s(1.0), &s(f64::NAN)), Err(ModelError::InadmissibleState { .. })));
        assert!(m.solve_riemann(&s(1.0), &s(f64::INFINITY), &s(0.0)).is_err());
    }
}
