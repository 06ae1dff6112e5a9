use std::sync::Arc;

use ligodunov::model::{IsothermalModel, SyntheticModel};
use ligodunov::scheme::run;
use ligodunov::verify::{
    convergence_study, residual, residuals, BumpFunction, LinearCombination, StudySetup, SupportBox, TestFunction,
    VerifyError,
};
use ligodunov::{BalanceLaw, InitialProfile, Mesh, SchemeOptions, Simulation, StateVec, Trajectory};

/// `(t_b - t)²(1 + x)` for `t < t_b`: nonzero at the initial time and on both
/// boundaries, so the initial and boundary terms must cancel the bulk.
#[derive(Debug)]
struct Ramp {
    t_b: f64,
}

impl TestFunction for Ramp {
    fn support(&self) -> SupportBox {
        SupportBox { t_a: 0.0, t_b: self.t_b, x_a: 0.0, x_b: 1.0 }
    }
    fn value(&self, t: f64, x: f64) -> f64 {
        if t < self.t_b {
            (self.t_b - t).powi(2) * (1.0 + x)
        } else {
            0.0
        }
    }
    fn dt(&self, t: f64, x: f64) -> f64 {
        if t < self.t_b {
            -2.0 * (self.t_b - t) * (1.0 + x)
        } else {
            0.0
        }
    }
    fn dx(&self, t: f64, _x: f64) -> f64 {
        if t < self.t_b {
            (self.t_b - t).powi(2)
        } else {
            0.0
        }
    }
    fn sup_norm(&self) -> f64 {
        2.0 * self.t_b * self.t_b
    }
}

#[derive(Debug)]
struct Zero;

impl TestFunction for Zero {
    fn support(&self) -> SupportBox {
        SupportBox { t_a: 0.1, t_b: 0.2, x_a: 0.2, x_b: 0.8 }
    }
    fn value(&self, _: f64, _: f64) -> f64 {
        0.0
    }
    fn dt(&self, _: f64, _: f64) -> f64 {
        0.0
    }
    fn dx(&self, _: f64, _: f64) -> f64 {
        0.0
    }
    fn sup_norm(&self) -> f64 {
        0.0
    }
}

fn trajectory(model: Arc<dyn BalanceLaw>, n: usize, initial: InitialProfile, t_end: f64, cadence: usize) -> Trajectory {
    let mesh = Mesh::new(0.0, 1.0, n).unwrap();
    let u0 = initial.cell_averages(&mesh).unwrap();
    run(Simulation::new(model, mesh, SchemeOptions::new(t_end), StateVec::scalar(1.0), u0).unwrap(), cadence).unwrap()
}

fn smooth() -> InitialProfile {
    InitialProfile::Gaussian { base: StateVec::scalar(1.0), amplitude: StateVec::scalar(0.3), center: 0.4, width: 0.1 }
}

#[test]
fn constant_solutions_have_no_residual() {
    let cases: [(Arc<dyn BalanceLaw>, StateVec); 2] = [
        (Arc::new(SyntheticModel::burgers()), StateVec::scalar(0.7)),
        (Arc::new(IsothermalModel::new(0.5)), StateVec::pair(1.2, 0.3)),
    ];
    for (model, state) in cases {
        let traj = trajectory(model.clone(), 40, InitialProfile::Constant { state }, 0.4, 1);
        let r = residual(model.as_ref(), &traj, &Ramp { t_b: 0.3 }).unwrap();
        assert!(r.initial.norm1() > 0.01 && r.boundary.norm1() > 0.001, "{r:?}");
        assert!(r.epsilon.norm1() <= 1e-10, "{r:?}");
        assert!(r.jump.norm1() <= 1e-12);
    }
}

#[test]
fn residual_is_linear_in_the_test_function() {
    let model: Arc<dyn BalanceLaw> = Arc::new(SyntheticModel::new(0.1, 1.0));
    let traj = trajectory(model.clone(), 80, smooth(), 0.4, 1);
    let p1: Arc<dyn TestFunction> = Arc::new(BumpFunction::new(SupportBox { t_a: 0.05, t_b: 0.3, x_a: 0.2, x_b: 0.6 }));
    let p2: Arc<dyn TestFunction> = Arc::new(BumpFunction::new(SupportBox { t_a: 0.1, t_b: 0.35, x_a: 0.4, x_b: 0.9 }));
    let (c1, c2) = (2.5, -0.75);
    let combo = LinearCombination { terms: vec![(c1, p1.clone()), (c2, p2.clone())] };
    let parts = residuals(model.as_ref(), &traj, &[p1.as_ref(), p2.as_ref()]).unwrap();
    let whole = residual(model.as_ref(), &traj, &combo).unwrap();
    let expect = parts[0].epsilon * c1 + parts[1].epsilon * c2;
    let scale = parts[0].bulk.norm1() * c1.abs() + parts[1].bulk.norm1() * c2.abs();
    assert!((whole.epsilon - expect).norm1() <= 1e-12 * scale.max(1.0));
    let expect = parts[0].jump * c1 + parts[1].jump * c2;
    assert!((whole.jump - expect).norm1() <= 1e-12 * scale.max(1.0));
}

#[test]
fn zero_test_function_gives_zero() {
    let model: Arc<dyn BalanceLaw> = Arc::new(SyntheticModel::new(0.1, 1.0));
    let traj = trajectory(model.clone(), 40, smooth(), 0.4, 1);
    let r = residual(model.as_ref(), &traj, &Zero).unwrap();
    for v in [r.bulk, r.initial, r.boundary, r.epsilon, r.jump] {
        assert_eq!(v.norm1(), 0.0);
    }
}

#[test]
fn burgers_shock_residual_converges() {
    let setup = StudySetup {
        model: Arc::new(SyntheticModel::burgers()),
        r_min: 0.0,
        r_max: 1.0,
        initial: InitialProfile::Riemann { x0: 0.3, left: StateVec::scalar(1.0), right: StateVec::scalar(0.0) },
        metric_boundary: StateVec::scalar(1.0),
        options: SchemeOptions::new(0.5),
        levels: vec![49, 99, 199, 399],
        boxes: vec![SupportBox { t_a: 0.05, t_b: 0.45, x_a: 0.2, x_b: 0.8 }],
    };
    let report = convergence_study(&setup).map_err(|f| f.error).unwrap();
    let slope = report.epsilon_fits[0].unwrap().slope;
    assert!(slope >= 0.8, "slope {slope}, residuals {:?}", report.epsilon(0));
}

#[test]
fn sparse_or_short_trajectories_are_rejected() {
    let model: Arc<dyn BalanceLaw> = Arc::new(SyntheticModel::burgers());
    let phi = BumpFunction::new(SupportBox { t_a: 0.05, t_b: 0.3, x_a: 0.2, x_b: 0.6 });
    let sparse = trajectory(model.clone(), 40, smooth(), 0.4, 5);
    assert!(matches!(residual(model.as_ref(), &sparse, &phi), Err(VerifyError::SparseTrajectory { .. })));
    let short = trajectory(model.clone(), 40, smooth(), 0.2, 1);
    assert!(matches!(residual(model.as_ref(), &short, &phi), Err(VerifyError::SupportNotCovered { .. })));
}

#[test]
fn study_needs_four_levels_and_valid_boxes() {
    let mut setup = StudySetup {
        model: Arc::new(SyntheticModel::burgers()),
        r_min: 0.0,
        r_max: 1.0,
        initial: smooth(),
        metric_boundary: StateVec::scalar(1.0),
        options: SchemeOptions::new(0.3),
        levels: vec![19, 39, 79],
        boxes: vec![SupportBox { t_a: 0.05, t_b: 0.25, x_a: 0.2, x_b: 0.8 }],
    };
    assert!(matches!(convergence_study(&setup).map_err(|f| f.error), Err(VerifyError::TooFewLevels(_))));
    setup.levels.push(159);
    setup.boxes[0].x_b = 1.5;
    assert!(matches!(convergence_study(&setup).map_err(|f| f.error), Err(VerifyError::InvalidBox(_))));
}
