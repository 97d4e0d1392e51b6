use std::f64::consts::TAU;

use proptest::prelude::*;

use helicoid_core::cmc::circle_invariant;
use helicoid_core::geometry::{Pitch, PlanePoint};
use helicoid_core::law::CurvatureLaw;
use helicoid_core::minimal::minimal_invariant;
use helicoid_core::ode::{
    conserved_drift, detect_events, integrate_curve, integrate_tau_nu, resample_arclength, InitialData, IntegratorConfig,
};

fn p(h: f64) -> Pitch<f64> {
    Pitch::from_h(h).unwrap()
}

#[test]
fn zero_curvature_gives_a_line() {
    let law = CurvatureLaw::custom(|_, _| 0.0f64);
    let curve = integrate_curve(&law, &InitialData::new(PlanePoint::new(0.0, 0.0), 0.0), &IntegratorConfig::window(-5.0, 5.0)).unwrap();
    for st in curve.states() {
        assert!((st.tau - st.s).abs() < 1e-12);
        assert_eq!(st.nu, 0.0);
        assert_eq!(st.theta, 0.0);
    }
}

#[test]
fn unit_curvature_gives_the_unit_circle() {
    let law = CurvatureLaw::custom(|_, _| 1.0f64);
    let curve = integrate_curve(&law, &InitialData::new(PlanePoint::new(0.0, -1.0), 0.0), &IntegratorConfig::window(-7.0, 7.0)).unwrap();
    for st in curve.states() {
        assert!(st.tau.abs() < 1e-12 && (st.nu + 1.0).abs() < 1e-12);
        assert!((st.theta - st.s).abs() < 1e-11);
        assert!((st.point().norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn initial_state_is_the_rotated_start_point() {
    let init = InitialData::new(PlanePoint::new(0.3, 1.2), 0.9);
    let curve = integrate_curve(&CurvatureLaw::rotating(p(1.0)), &init, &IntegratorConfig::window(-1.0, 1.0)).unwrap();
    let st = curve.origin_state();
    let want = PlanePoint::new(0.3, 1.2).rotated(-0.9);
    assert_eq!(st.s, 0.0);
    assert_eq!(st.theta, 0.9);
    assert!((st.tau - want.x).abs() < 1e-15 && (st.nu - want.y).abs() < 1e-15);
    assert!((st.point().x - 0.3).abs() < 1e-15 && (st.point().y - 1.2).abs() < 1e-15);
}

#[test]
fn rotating_curve_satisfies_its_law() {
    let law = CurvatureLaw::rotating(p(1.0));
    let init = InitialData::new(PlanePoint::new(0.0, 1.0), 0.0);
    let curve = integrate_curve(&law, &init, &IntegratorConfig::window(-20.0, 20.0)).unwrap();
    assert_eq!(curve.s_range(), (-20.0, 20.0));
    let (speed, law_defect) = curve.invariant_defects();
    assert!(law_defect < 1e-9, "law residual {}", law_defect);
    assert!(speed < 1e-8, "speed defect {}", speed);
    // Oracle: the law written out from its definition.
    let k = |tau: f64, nu: f64| (tau * (tau * tau + 1.0) - nu) / (tau * tau + nu * nu + 1.0);
    for st in curve.states() {
        assert!((st.k - k(st.tau, st.nu)).abs() < 1e-9);
    }
    let residual = curve.ode_residual().unwrap();
    assert!(residual < 10.0, "dense output residual {} tolerances", residual);
}

#[test]
fn tau_nu_system_examples() {
    let cfg = IntegratorConfig::window(-3.0, 3.0);
    let law = CurvatureLaw::rotating(p(1.0));
    let rhs = law.rhs(0.0, 0.0);
    assert_eq!(rhs[0], 1.0);

    let traj = integrate_tau_nu(&CurvatureLaw::cmc(p(1.0)), 0.0, -1.0, &cfg).unwrap();
    for y in &traj.y {
        assert!(y[0].abs() < 1e-14 && (y[1] + 1.0).abs() < 1e-14);
    }

    let traj = integrate_tau_nu(&CurvatureLaw::minimal(p(1.0)), 0.0, 1.5, &IntegratorConfig::window(-10.0, 10.0)).unwrap();
    let drift = conserved_drift(&traj, |t, n| n / (t * t + 1.0).sqrt());
    assert!(drift < 1e-9, "{}", drift);
}

#[test]
fn conserved_quantities() {
    for &h in &[0.5, 1.0, 3.0] {
        let cfg = IntegratorConfig::window(-15.0, 15.0);
        let traj = integrate_tau_nu(&CurvatureLaw::minimal(p(h)), 0.4, 1.0, &cfg).unwrap();
        assert!(conserved_drift(&traj, |t, n| minimal_invariant(t, n, p(h))) < 1e-9);
        let traj = integrate_tau_nu(&CurvatureLaw::cmc(p(h)), 0.0, -1.8, &cfg).unwrap();
        assert!(conserved_drift(&traj, |t, n| circle_invariant(t, n, p(h))) < 1e-9);
    }
    // h = 0 rotating law on the tau > 0 branch, stopping before the origin.
    let law = CurvatureLaw::rotating_h0(1e-6);
    let traj = integrate_tau_nu(&law, 1.0, 0.5, &IntegratorConfig::window(-0.5, 2.0)).unwrap();
    assert!(traj.y.iter().all(|y| y[0] > 0.0));
    let drift = conserved_drift(&traj, |t, n| n / t + 0.5 * (t * t + n * n));
    assert!(drift < 1e-8, "{}", drift);
}

#[test]
fn rotating_events() {
    let curve = integrate_curve(
        &CurvatureLaw::rotating(p(1.0)),
        &InitialData::new(PlanePoint::new(0.0, 1.0), 0.0),
        &IntegratorConfig::window(-30.0, 30.0),
    )
    .unwrap();
    let tau_zeros = curve.events(|st| st.tau);
    assert_eq!(tau_zeros.len(), 1);
    assert!(tau_zeros[0].s.abs() < 1e-10);
    let k_zeros = curve.events(|st| st.k);
    assert_eq!(k_zeros.len(), 1);
    // r' = tau, so the only radius extremum sits at the tau zero.
    let r: Vec<f64> = curve.states().iter().map(|st| st.r()).collect();
    let (imin, _) = r.iter().enumerate().fold((0, f64::INFINITY), |a, (i, &v)| if v < a.1 { (i, v) } else { a });
    assert!((curve.states()[imin].s - tau_zeros[0].s).abs() < 0.5);
}

#[test]
fn events_on_trajectories_are_located_by_bisection() {
    let law = CurvatureLaw::custom(|_, _| 1.0f64);
    let traj = integrate_tau_nu(&law, 1.0, 0.0, &IntegratorConfig::window(0.0, 10.0)).unwrap();
    // Here nu(s) = cos s - sin s - 1, which vanishes at 0, 3π/2 and 2π.
    let ev = detect_events(&traj, |_, y| y[1]);
    let want = [0.75 * TAU, TAU];
    let got: Vec<f64> = ev.iter().map(|e| e.s).filter(|s| *s > 1.0).collect();
    assert_eq!(got.len(), want.len(), "{:?}", got);
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() < 1e-8, "{} vs {}", g, w);
    }
}

#[test]
fn resampling() {
    let curve = integrate_curve(
        &CurvatureLaw::rotating(p(2.0)),
        &InitialData::new(PlanePoint::new(0.0, 0.5), 0.0),
        &IntegratorConfig::window(-4.0, 6.0),
    )
    .unwrap();
    let fine = resample_arclength(&curve, 0.01).unwrap();
    assert_eq!(fine.len(), 1001);
    assert_eq!(fine.states()[0].s, -4.0);
    assert_eq!(fine.states()[1000].s, 6.0);
    let fine3 = resample_arclength(&curve, 0.3).unwrap();
    assert_eq!(fine3.len(), (10.0f64 / 0.3).floor() as usize + 1);
    let tol = curve.tolerance();
    for st in fine.states() {
        assert!((st.k - curve.law().curvature(st.tau, st.nu)).abs() < 10.0 * tol);
    }
    let again = resample_arclength(&fine, 0.01).unwrap();
    for (a, b) in again.states().iter().zip(fine.states()) {
        assert!((a.s - b.s).abs() < 1e-12 && (a.tau - b.tau).abs() < 1e-12 && (a.nu - b.nu).abs() < 1e-12);
    }
}

#[test]
fn repeat_integrations_are_bitwise_equal() {
    let law = CurvatureLaw::rotating(p(0.7));
    let init = InitialData::new(PlanePoint::new(0.2, 1.3), 0.4);
    let cfg = IntegratorConfig::window(-12.0, 9.0);
    let a = integrate_curve(&law, &init, &cfg).unwrap();
    let b = integrate_curve(&law, &init, &cfg).unwrap();
    assert_eq!(a.states(), b.states());
}

#[test]
fn halving_tolerance_moves_the_endpoint_less_than_the_coarse_tolerance() {
    let law = CurvatureLaw::rotating(p(1.0));
    let init = InitialData::new(PlanePoint::new(0.0, 1.0), 0.0);
    for tol in [1e-6, 1e-8, 1e-10] {
        let coarse = integrate_curve(&law, &init, &IntegratorConfig::window(-10.0, 10.0).with_tol(tol)).unwrap();
        let fine = integrate_curve(&law, &init, &IntegratorConfig::window(-10.0, 10.0).with_tol(tol / 2.0)).unwrap();
        for (a, b) in [(coarse.states()[0], fine.states()[0]), (*coarse.states().last().unwrap(), *fine.states().last().unwrap())] {
            let d = (a.tau - b.tau).abs().max((a.nu - b.nu).abs()).max((a.theta - b.theta).abs());
            let scale = 1.0 + a.tau.abs().max(a.nu.abs()).max(a.theta.abs());
            assert!(d < tol * scale, "tol {}: endpoint moved {}", tol, d);
        }
    }
}

#[test]
fn invalid_configs_are_rejected() {
    let law = CurvatureLaw::rotating(p(1.0));
    let init = InitialData::new(PlanePoint::new(0.0, 1.0), 0.0);
    assert!(integrate_curve(&law, &init, &IntegratorConfig::window(1.0, 2.0)).is_err());
    assert!(integrate_curve(&law, &init, &IntegratorConfig::window(-1.0, 1.0).with_tol(0.0)).is_err());
    assert!(resample_arclength(&integrate_curve(&law, &init, &IntegratorConfig::window(-1.0, 1.0)).unwrap(), 0.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rotating_reversal_symmetry(tau0 in -2.0..2.0f64, nu0 in -2.0..2.0f64, h in 0.25..4.0f64) {
        let law = CurvatureLaw::rotating(p(h));
        let fwd = integrate_tau_nu(&law, tau0, nu0, &IntegratorConfig::window(0.0, 8.0)).unwrap();
        let bwd = integrate_tau_nu(&law, -tau0, -nu0, &IntegratorConfig::window(-8.0, 0.0)).unwrap();
        for i in 0..=80 {
            let s = i as f64 * 0.1;
            let a = fwd.eval(s).unwrap();
            let b = bwd.eval(-s).unwrap();
            prop_assert!((a[0] + b[0]).abs() < 1e-9 && (a[1] + b[1]).abs() < 1e-9, "s = {}", s);
        }
    }

    #[test]
    fn initial_theta_is_wrapped(theta in -20.0..20.0f64) {
        let init = InitialData::new(PlanePoint::new(1.0, 0.0), theta);
        prop_assert!(init.theta0 >= 0.0 && init.theta0 < TAU);
        prop_assert!(((init.theta0 - theta) / TAU - ((init.theta0 - theta) / TAU).round()).abs() < 1e-12);
    }
}
