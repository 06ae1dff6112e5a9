use nalgebra::{Matrix1, Matrix2};
use proptest::prelude::*;

use ligodunov::model::{IsothermalModel, SyntheticModel};
use ligodunov::{BalanceLaw, StateVec};

fn synthetic() -> SyntheticModel {
    SyntheticModel::new(0.3, 0.7)
}

fn isothermal() -> IsothermalModel {
    IsothermalModel { kappa: 0.2, source_coupling: 0.5, ..IsothermalModel::new(0.6) }
}

fn fd_gradient_ok(model: &dyn BalanceLaw, a: f64, u: StateVec) -> bool {
    let h = 1e-6 * a.max(1.0);
    let grad = model.flux_grad_metric(&StateVec::scalar(a), &u).unwrap().column(0);
    let fp = model.flux(&StateVec::scalar(a + h), &u).unwrap();
    let fm = model.flux(&StateVec::scalar(a - h), &u).unwrap();
    let fd = (fp - fm) * (0.5 / h);
    (fd - grad).norm_inf() <= 1e-6 * grad.norm_inf().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn synthetic_metric_gradient_matches_central_difference(a in 0.2f64..3.0, u in -3.0f64..3.0) {
        prop_assert!(fd_gradient_ok(&synthetic(), a, StateVec::scalar(u)));
    }

    #[test]
    fn isothermal_metric_gradient_matches_central_difference(a in 0.2f64..3.0, rho in 0.05f64..5.0, v in -2.0f64..2.0) {
        prop_assert!(fd_gradient_ok(&isothermal(), a, StateVec::pair(rho, rho * v)));
    }

    #[test]
    fn synthetic_speeds_are_jacobian_eigenvalues(a in 0.2f64..3.0, u in -3.0f64..3.0) {
        let m = synthetic();
        let (av, uv) = (StateVec::scalar(a), StateVec::scalar(u));
        let j = m.flux_jacobian(&av, &uv).unwrap();
        let eig = Matrix1::new(j.get(0, 0)).eigenvalues().unwrap();
        let speeds = m.wave_speeds(&av, &uv).unwrap();
        prop_assert!((speeds[0] - eig[0]).abs() <= 1e-12 * eig[0].abs().max(1.0));
    }

    #[test]
    fn isothermal_speeds_are_jacobian_eigenvalues(a in 0.2f64..3.0, rho in 0.05f64..5.0, v in -2.0f64..2.0) {
        let m = isothermal();
        let (av, uv) = (StateVec::scalar(a), StateVec::pair(rho, rho * v));
        let j = m.flux_jacobian(&av, &uv).unwrap();
        let jm = Matrix2::new(j.get(0, 0), j.get(0, 1), j.get(1, 0), j.get(1, 1));
        let eig = jm.eigenvalues().expect("strictly hyperbolic");
        let mut eig = [eig[0], eig[1]];
        eig.sort_by(f64::total_cmp);
        let speeds = m.wave_speeds(&av, &uv).unwrap();
        let scale = eig[0].abs().max(eig[1].abs()).max(1.0);
        for k in 0..2 {
            prop_assert!((speeds[k] - eig[k]).abs() <= 1e-10 * scale, "{:?} vs {:?}", speeds, eig);
            // residual of an eigenvector built from the returned speed
            let vec = nalgebra::Vector2::new(j.get(0, 1), speeds[k] - j.get(0, 0));
            let r = (jm * vec - vec * speeds[k]).amax();
            prop_assert!(r <= 1e-10 * scale * vec.amax().max(1.0));
        }
    }

    #[test]
    fn methods_are_pure(a in 0.2f64..3.0, rho in 0.05f64..5.0, v in -2.0f64..2.0, x in 0.0f64..2.0) {
        let m = isothermal();
        let (av, uv) = (StateVec::scalar(a), StateVec::pair(rho, rho * v));
        prop_assert_eq!(m.flux(&av, &uv).unwrap(), m.flux(&av, &uv).unwrap());
        prop_assert_eq!(m.source(&av, &uv, x).unwrap(), m.source(&av, &uv, x).unwrap());
        prop_assert_eq!(m.metric_rhs(&av, &uv, x).unwrap(), m.metric_rhs(&av, &uv, x).unwrap());
    }
}

#[test]
fn flat_metric_reduces_to_classical_fluxes() {
    let one = StateVec::scalar(1.0);
    let b = SyntheticModel::burgers();
    assert_eq!(b.flux(&one, &StateVec::scalar(3.0)).unwrap()[0], 4.5);
    let e = IsothermalModel::new(0.5);
    let f = e.flux(&one, &StateVec::pair(2.0, 3.0)).unwrap();
    assert_eq!(f[0], 3.0);
    assert!((f[1] - (4.5 + 0.25 * 2.0)).abs() < 1e-15);
}

#[test]
fn inadmissible_states_are_errors() {
    let e = IsothermalModel::new(0.5);
    let one = StateVec::scalar(1.0);
    assert!(e.flux(&one, &StateVec::pair(-1.0, 0.0)).is_err());
    assert!(e.flux(&StateVec::scalar(-1.0), &StateVec::pair(1.0, 0.0)).is_err());
    assert!(e.flux(&one, &StateVec::pair(f64::NAN, 0.0)).is_err());
    assert!(SyntheticModel::burgers().flux(&one, &StateVec::pair(1.0, 0.0)).is_err());
}
