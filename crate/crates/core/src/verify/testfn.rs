use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::scheme::Mesh;
use crate::verify::VerifyError;

/// Space-time rectangle `[t_a, t_b] × [x_a, x_b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupportBox {
    pub t_a: f64,
    pub t_b: f64,
    pub x_a: f64,
    pub x_b: f64,
}

impl SupportBox {
    pub fn contains(&self, t: f64, x: f64) -> bool {
        t > self.t_a && t < self.t_b && x > self.x_a && x < self.x_b
    }

    pub fn union(&self, other: &SupportBox) -> SupportBox {
        SupportBox {
            t_a: self.t_a.min(other.t_a),
            t_b: self.t_b.max(other.t_b),
            x_a: self.x_a.min(other.x_a),
            x_b: self.x_b.max(other.x_b),
        }
    }

    /// Strictly inside the space-time domain, ending before `t_end`.
    pub fn validate(&self, mesh: &Mesh, t_start: f64, t_end: f64) -> Result<(), VerifyError> {
        let ok = [self.t_a, self.t_b, self.x_a, self.x_b].iter().all(|v| v.is_finite())
            && t_start <= self.t_a
            && self.t_a < self.t_b
            && self.t_b < t_end
            && mesh.r_min < self.x_a
            && self.x_a < self.x_b
            && self.x_b < mesh.r_max;
        if ok {
            Ok(())
        } else {
            Err(VerifyError::InvalidBox(format!(
                "[{}, {}] x [{}, {}] is not inside [{}, {}) x ({}, {})",
                self.t_a, self.t_b, self.x_a, self.x_b, t_start, t_end, mesh.r_min, mesh.r_max
            )))
        }
    }
}

/// A smooth compactly supported weight `φ(t, x)` with its first derivatives.
pub trait TestFunction: Send + Sync + std::fmt::Debug {
    /// Box outside which `φ`, `φ_t` and `φ_x` vanish.
    fn support(&self) -> SupportBox;
    fn value(&self, t: f64, x: f64) -> f64;
    fn dt(&self, t: f64, x: f64) -> f64;
    fn dx(&self, t: f64, x: f64) -> f64;
    /// Upper bound for `‖φ‖_∞`.
    fn sup_norm(&self) -> f64;

    /// Times where `φ` is not smooth; quadrature splits there.
    fn kinks_t(&self) -> Vec<f64> {
        let b = self.support();
        vec![b.t_a, b.t_b]
    }

    fn kinks_x(&self) -> Vec<f64> {
        let b = self.support();
        vec![b.x_a, b.x_b]
    }
}

/// `φ = N·[(t - t_a)(t_b - t)(x - x_a)(x_b - x)]³` inside the box, with `N`
/// chosen so the maximum is 1. It is C² across the box boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpFunction {
    pub support: SupportBox,
    scale: f64,
}

impl BumpFunction {
    pub fn new(support: SupportBox) -> Self {
        let ht = 0.5 * (support.t_b - support.t_a);
        let hx = 0.5 * (support.x_b - support.x_a);
        Self { support, scale: 1.0 / (ht * ht * hx * hx).powi(3) }
    }

    fn factors(&self, t: f64, x: f64) -> Option<(f64, f64, f64, f64)> {
        let b = &self.support;
        if !b.contains(t, x) {
            return None;
        }
        let p = (t - b.t_a) * (b.t_b - t);
        let q = (x - b.x_a) * (b.x_b - x);
        Some((p, b.t_a + b.t_b - 2.0 * t, q, b.x_a + b.x_b - 2.0 * x))
    }
}

impl TestFunction for BumpFunction {
    fn support(&self) -> SupportBox {
        self.support
    }

    fn value(&self, t: f64, x: f64) -> f64 {
        self.factors(t, x).map_or(0.0, |(p, _, q, _)| self.scale * (p * q).powi(3))
    }

    fn dt(&self, t: f64, x: f64) -> f64 {
        self.factors(t, x).map_or(0.0, |(p, dp, q, _)| self.scale * 3.0 * p * p * dp * q.powi(3))
    }

    fn dx(&self, t: f64, x: f64) -> f64 {
        self.factors(t, x).map_or(0.0, |(p, _, q, dq)| self.scale * 3.0 * p.powi(3) * q * q * dq)
    }

    fn sup_norm(&self) -> f64 {
        1.0
    }
}

/// `Σ c_k φ_k`.
#[derive(Debug, Clone)]
pub struct LinearCombination {
    pub terms: Vec<(f64, Arc<dyn TestFunction>)>,
}

impl TestFunction for LinearCombination {
    fn support(&self) -> SupportBox {
        let mut it = self.terms.iter().map(|(_, f)| f.support());
        let first = it.next().expect("a combination needs at least one term");
        it.fold(first, |acc, b| acc.union(&b))
    }

    fn value(&self, t: f64, x: f64) -> f64 {
        self.terms.iter().map(|(c, f)| c * f.value(t, x)).sum()
    }

    fn dt(&self, t: f64, x: f64) -> f64 {
        self.terms.iter().map(|(c, f)| c * f.dt(t, x)).sum()
    }

    fn dx(&self, t: f64, x: f64) -> f64 {
        self.terms.iter().map(|(c, f)| c * f.dx(t, x)).sum()
    }

    fn sup_norm(&self) -> f64 {
        self.terms.iter().map(|(c, f)| c.abs() * f.sup_norm()).sum()
    }

    fn kinks_t(&self) -> Vec<f64> {
        self.terms.iter().flat_map(|(_, f)| f.kinks_t()).collect()
    }

    fn kinks_x(&self) -> Vec<f64> {
        self.terms.iter().flat_map(|(_, f)| f.kinks_x()).collect()
    }
}

/// One bump per box, each checked against the domain.
pub fn make_test_functions(
    boxes: &[SupportBox],
    mesh: &Mesh,
    t_start: f64,
    t_end: f64,
) -> Result<Vec<BumpFunction>, VerifyError> {
    boxes
        .iter()
        .map(|b| {
            b.validate(mesh, t_start, t_end)?;
            Ok(BumpFunction::new(*b))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> BumpFunction {
        BumpFunction::new(SupportBox { t_a: 0.1, t_b: 0.5, x_a: 0.2, x_b: 0.8 })
    }

    #[test]
    fn peak_is_one_and_edges_vanish() {
        let f = unit();
        assert!((f.value(0.3, 0.5) - 1.0).abs() < 1e-14);
        for (t, x) in [(0.1, 0.5), (0.5, 0.5), (0.3, 0.2), (0.3, 0.8), (0.1, 0.2), (0.5, 0.8)] {
            assert_eq!(f.value(t, x), 0.0);
            assert_eq!(f.dt(t, x), 0.0);
            assert_eq!(f.dx(t, x), 0.0);
        }
    }

    #[test]
    fn derivatives_match_central_differences() {
        let f = unit();
        let h = 1e-6;
        for &(t, x) in &[(0.2, 0.3), (0.37, 0.61), (0.45, 0.75)] {
            let fd_t = (f.value(t + h, x) - f.value(t - h, x)) / (2.0 * h);
            let fd_x = (f.value(t, x + h) - f.value(t, x - h)) / (2.0 * h);
            assert!((fd_t - f.dt(t, x)).abs() < 1e-8, "{fd_t} {}", f.dt(t, x));
            assert!((fd_x - f.dx(t, x)).abs() < 1e-8);
        }
    }

    #[test]
    fn boxes_must_be_interior() {
        let mesh = Mesh::new(0.0, 1.0, 9).unwrap();
        let ok = SupportBox { t_a: 0.0, t_b: 0.5, x_a: 0.1, x_b: 0.9 };
        assert!(make_test_functions(&[ok], &mesh, 0.0, 1.0).is_ok());
        let late = SupportBox { t_b: 1.0, ..ok };
        assert!(make_test_functions(&[late], &mesh, 0.0, 1.0).is_err());
        let wide = SupportBox { x_a: 0.0, ..ok };
        assert!(make_test_functions(&[wide], &mesh, 0.0, 1.0).is_err());
    }
}
