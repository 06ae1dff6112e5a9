mod common;

use proptest::prelude::*;

use ligodunov::model::{IsothermalModel, SyntheticModel};
use ligodunov::riemann::WaveKind;
use ligodunov::{BalanceLaw, RiemannFan, StateVec};

use common::isothermal_middle_oracle;

fn brute_average(fan: &RiemannFan, xa: f64, xb: f64, t: f64) -> StateVec {
    const N: usize = 100_000;
    let h = (xb - xa) / N as f64;
    let mut sum = StateVec::zeros(fan.left_state.len());
    for k in 0..N {
        sum += fan.value_at(t, xa + (k as f64 + 0.5) * h);
    }
    sum * (1.0 / N as f64)
}

fn check_fan(model: &dyn BalanceLaw, a: f64, ul: StateVec, ur: StateVec) -> Result<(), TestCaseError> {
    let metric = StateVec::scalar(a);
    let fan = model.solve_riemann(&metric, &ul, &ur).unwrap();
    let fl = model.flux(&metric, &ul).unwrap();
    let fr = model.flux(&metric, &ur).unwrap();
    let scale = 1.0 + fl.norm_inf().max(fr.norm_inf());
    for w in &fan.waves {
        let f_a = model.flux(&metric, &w.left_state).unwrap();
        let f_b = model.flux(&metric, &w.right_state).unwrap();
        match w.kind {
            WaveKind::Shock => {
                let r = ((w.right_state - w.left_state) * w.left_speed - (f_b - f_a)).norm_inf();
                prop_assert!(r <= 1e-8 * scale, "Rankine-Hugoniot residual {r:e}");
            }
            WaveKind::Rarefaction => {
                for k in 1..10 {
                    let xi = w.left_speed + (w.right_speed - w.left_speed) * k as f64 / 10.0;
                    let speeds = model.wave_speeds(&metric, &fan.sample(xi)).unwrap();
                    let hit = speeds.iter().any(|s| (s - xi).abs() <= 1e-8 * xi.abs().max(1.0));
                    prop_assert!(hit, "no characteristic speed equals ξ = {xi}");
                }
            }
            _ => {}
        }
    }
    // symmetric averages follow from the divergence theorem
    let (t, half) = (0.3, 1.0 + fan.max_abs_speed() * 0.3);
    let avg = fan.average(-half, half, t).unwrap();
    let expected = (ul + ur) * 0.5 - (fr - fl) * (t / (2.0 * half));
    prop_assert!((avg - expected).norm_inf() <= 1e-10 * scale);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn burgers_fans_are_consistent(a in 0.3f64..3.0, ul in -2.0f64..2.0, ur in -2.0f64..2.0) {
        check_fan(&SyntheticModel::burgers(), a, StateVec::scalar(ul), StateVec::scalar(ur))?;
    }

    #[test]
    fn isothermal_fans_are_consistent(
        a in 0.5f64..2.0, sigma in 0.1f64..0.9,
        rl in 0.1f64..10.0, vl in -2.0f64..2.0, rr in 0.1f64..10.0, vr in -2.0f64..2.0,
    ) {
        let m = IsothermalModel::new(sigma);
        check_fan(&m, a, StateVec::pair(rl, rl * vl), StateVec::pair(rr, rr * vr))?;
    }

    #[test]
    fn isothermal_middle_state_matches_brute_force(
        a in 0.5f64..2.0, sigma in 0.1f64..0.9,
        rl in 0.1f64..10.0, vl in -2.0f64..2.0, rr in 0.1f64..10.0, vr in -2.0f64..2.0,
    ) {
        let fan = IsothermalModel::new(sigma)
            .solve_riemann(&StateVec::scalar(a), &StateVec::pair(rl, rl * vl), &StateVec::pair(rr, rr * vr))
            .unwrap();
        let (rho, v) = isothermal_middle_oracle(sigma, (rl, vl), (rr, vr));
        let mid = fan.waves[0].right_state;
        prop_assert!((mid[0] - rho).abs() <= 1e-6 * rho);
        prop_assert!((mid[1] / mid[0] - v).abs() <= 1e-6 * v.abs().max(1.0));
    }
}

#[test]
fn exact_averages_match_dense_sampling() {
    let cases: [(Box<dyn BalanceLaw>, StateVec, StateVec); 4] = [
        (Box::new(SyntheticModel::burgers()), StateVec::scalar(1.0), StateVec::scalar(0.0)),
        (Box::new(SyntheticModel::burgers()), StateVec::scalar(-0.5), StateVec::scalar(1.0)),
        (Box::new(IsothermalModel::new(0.5)), StateVec::pair(1.0, 0.0), StateVec::pair(0.125, 0.0)),
        (Box::new(IsothermalModel::new(0.5)), StateVec::pair(1.0, 0.8), StateVec::pair(2.0, -0.6)),
    ];
    for (model, ul, ur) in cases {
        let fan = model.solve_riemann(&StateVec::scalar(1.3), &ul, &ur).unwrap().with_origin(0.0, 0.1);
        let exact = fan.average(-0.4, 0.7, 0.1).unwrap();
        let brute = brute_average(&fan, -0.4, 0.7, 0.1);
        assert!((exact - brute).norm_inf() < 1e-5, "{exact} vs {brute}");
    }
}

#[test]
fn known_burgers_values() {
    let b = SyntheticModel::burgers();
    let one = StateVec::scalar(1.0);
    let shock = b.solve_riemann(&one, &StateVec::scalar(1.0), &StateVec::scalar(0.0)).unwrap();
    assert_eq!(shock.waves.len(), 1);
    assert_eq!(shock.waves[0].kind, WaveKind::Shock);
    assert_eq!(shock.waves[0].left_speed, 0.5);
    let fan = b.solve_riemann(&one, &StateVec::scalar(0.0), &StateVec::scalar(1.0)).unwrap();
    assert_eq!(fan.waves[0].kind, WaveKind::Rarefaction);
    assert!((fan.sample(0.5)[0] - 0.5).abs() < 1e-15);
    // entropy-violating data never yields a rarefaction shock
    let b2 = b.solve_riemann(&StateVec::scalar(2.0), &StateVec::scalar(-1.0), &StateVec::scalar(1.0)).unwrap();
    assert!(b2.waves.iter().all(|w| w.kind != WaveKind::Shock));
}
