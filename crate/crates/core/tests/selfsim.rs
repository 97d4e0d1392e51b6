use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use helicoid_core::cmc::generate_cmc_curve;
use helicoid_core::geometry::Pitch;
use helicoid_core::linalg::{norm, Matrix};
use helicoid_core::minimal::{minimal_closed_form, MinimalCurveSpec};
use helicoid_core::rotating::generate_rotating_curve;
use helicoid_core::selfsim::{
    dilation_rotation_profile, helicoidal_samples, matrix_exp, matrix_exp_skew, reduce_general, soliton_residual,
    translation_rotation_profile, MotionSpec, SurfaceSample,
};
use helicoid_core::Error;

fn random_skew(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Matrix<f64> {
    let mut m = Matrix::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.gen_range(-scale..scale);
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
    }
    m
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-scale..scale)).collect()
}

fn max_diff(a: &Matrix<f64>, b: &Matrix<f64>) -> f64 {
    (a - b).max_abs()
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[test]
fn rejects_non_skew_and_mismatched_input() {
    let m = Matrix::from_array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]);
    assert!(matches!(MotionSpec::new(0.0, m.clone(), vec![0.0; 3]), Err(Error::NonSkew { .. })));
    assert!(matrix_exp_skew(&m, 1.0).is_err());
    assert!(MotionSpec::new(0.0, Matrix::z_rotation_generator(), vec![0.0; 2]).is_err());
}

#[test]
fn profiles_start_at_the_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let a = random_skew(&mut rng, 3, 2.0);
    let dr = dilation_rotation_profile(0.7, a.clone()).unwrap();
    assert_eq!(dr.g(0.0).unwrap(), 1.0);
    assert!(max_diff(&dr.q(0.0).unwrap(), &Matrix::identity(3)) < 1e-15);
    assert_eq!(dr.v(0.0).unwrap(), vec![0.0; 3]);
    for &t in &[-0.7, -0.2, 0.5, 3.0, 100.0] {
        let q = dr.q(t).unwrap();
        assert!(max_diff(&(&q.transpose() * &q), &Matrix::identity(3)) < 1e-12);
    }
    assert!(dr.g(-1.0).is_err());
    assert!(dr.contains(-0.71) && !dr.contains(-1.0 / 1.4));

    let shrinking = dilation_rotation_profile(-0.5, a.clone()).unwrap();
    assert!(shrinking.contains(0.99) && !shrinking.contains(1.0));
    assert!(shrinking.apply(1.5, &[1.0, 0.0, 0.0]).is_err());

    let c = vec![0.0, 0.0, 1.0];
    let tr = translation_rotation_profile(Matrix::z_rotation_generator(), c).unwrap();
    assert!(tr.contains(-1e9) && tr.contains(1e9));
    assert!(matches!(
        translation_rotation_profile(Matrix::z_rotation_generator(), vec![1.0, 0.0, 0.0]),
        Err(Error::OrthogonalityViolated { .. })
    ));
}

#[test]
fn profiles_solve_their_velocity_equations() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let d = 1e-5;
    for _ in 0..10 {
        let a = random_skew(&mut rng, 3, 1.5);
        let b = rng.gen_range(-0.4..0.4);
        let x = random_vec(&mut rng, 3, 2.0);
        let prof = dilation_rotation_profile(b, a.clone()).unwrap();
        // F' = (b F + A F) / g^2.
        for &t in &[0.0, 0.3, 0.9] {
            let f = prof.apply(t, &x).unwrap();
            let fd = sub(&prof.apply(t + d, &x).unwrap(), &prof.apply(t - d, &x).unwrap());
            let g2 = 2.0 * b * t + 1.0;
            let af = a.mul_vec(&f);
            for i in 0..3 {
                let want = (b * f[i] + af[i]) / g2;
                assert!((fd[i] / (2.0 * d) - want).abs() < 1e-8);
            }
        }

        // Translation along the axis of A: F' = A F + c.
        let axis = [a[(2, 1)], a[(0, 2)], a[(1, 0)]];
        let c: Vec<f64> = axis.iter().map(|v| v * 0.8).collect();
        let prof = translation_rotation_profile(a.clone(), c.clone()).unwrap();
        for &t in &[-1.0, 0.0, 2.0] {
            let f = prof.apply(t, &x).unwrap();
            let fd = sub(&prof.apply(t + d, &x).unwrap(), &prof.apply(t - d, &x).unwrap());
            let af = a.mul_vec(&f);
            for i in 0..3 {
                assert!((fd[i] / (2.0 * d) - af[i] - c[i]).abs() < 1e-8);
            }
        }
    }
}

#[test]
fn skew_exponentials_are_rotations() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in [2, 3, 4, 5] {
        for _ in 0..20 {
            let a = random_skew(&mut rng, n, 3.0);
            let t = rng.gen_range(-4.0..4.0);
            let q = matrix_exp_skew(&a, t).unwrap();
            assert!(max_diff(&(&q.transpose() * &q), &Matrix::identity(n)) < 1e-12, "n = {}", n);
            assert!((q.determinant() - 1.0).abs() < 1e-12);
            let x = random_vec(&mut rng, n, 5.0);
            assert!((norm(&q.mul_vec(&x)) - norm(&x)).abs() < 1e-12 * norm(&x).max(1.0));
        }
    }
    // The 3x3 closed form agrees with the series.
    let a = random_skew(&mut rng, 3, 2.0);
    assert!(max_diff(&matrix_exp_skew(&a, 1.3).unwrap(), &matrix_exp(&a.scale(1.3))) < 1e-13);
    // Rotation about z by pi/2.
    let q = matrix_exp_skew(&Matrix::z_rotation_generator(), std::f64::consts::FRAC_PI_2).unwrap();
    let e1 = q.mul_vec(&[1.0, 0.0, 0.0]);
    assert!(e1[0].abs() < 1e-15 && (e1[1] - 1.0).abs() < 1e-15 && e1[2] == 0.0);
}

#[test]
fn reduction_examples() {
    let spec = MotionSpec::<f64>::new(0.0, Matrix::z_rotation_generator(), vec![1.0, 0.0, 3.0]).unwrap();
    let (w, reduced) = reduce_general(&spec).unwrap();
    assert!((w[0]).abs() < 1e-15 && (w[1] + 1.0).abs() < 1e-15 && w[2].abs() < 1e-15);
    assert!(reduced.c[0].abs() < 1e-15 && reduced.c[1].abs() < 1e-15 && (reduced.c[2] - 3.0).abs() < 1e-15);

    let spec = MotionSpec::new(2.0, Matrix::z_rotation_generator(), vec![1.0, 2.0, 3.0]).unwrap();
    let (w, reduced) = reduce_general(&spec).unwrap();
    assert_eq!(reduced.c, vec![0.0; 3]);
    let lhs: Vec<f64> = spec.a.mul_vec(&w).iter().zip(&w).map(|(aw, wi)| aw + 2.0 * wi).collect();
    assert!(norm(&sub(&lhs, &spec.c)) < 1e-14);

    // A = 0: everything stays in c0.
    let spec = MotionSpec::new(0.0, Matrix::zeros(3), vec![1.0, -2.0, 0.5]).unwrap();
    let (w, reduced) = reduce_general(&spec).unwrap();
    assert_eq!(w, vec![0.0; 3]);
    assert_eq!(reduced.c, spec.c);
}

fn cmc_samples() -> Vec<SurfaceSample<f64>> {
    let pitch = Pitch::from_h(0.8).unwrap();
    let (curve, _) = generate_cmc_curve(0.6, pitch, 1, 0.3).unwrap();
    let ts: Vec<f64> = (0..7).map(|i| -2.0 + 0.7 * i as f64).collect();
    helicoidal_samples(&curve, pitch, &ts).unwrap()
}

#[test]
fn reduction_is_invariant_under_translation() {
    let samples = cmc_samples();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for trial in 0..40 {
        let b = if trial % 2 == 0 { 0.0 } else { rng.gen_range(-2.0..2.0) };
        let spec = MotionSpec::new(b, random_skew(&mut rng, 3, 2.0), random_vec(&mut rng, 3, 3.0)).unwrap();
        let (w, reduced) = reduce_general(&spec).unwrap();
        let c0_image = reduced.a.mul_vec(&reduced.c);
        assert!(norm(&c0_image) < 1e-12);
        for s in samples.iter().step_by(5) {
            let before = spec.residual(&s.point, &s.normal, s.mean_curvature);
            let t = s.translated(&w);
            let after = reduced.residual(&t.point, &t.normal, t.mean_curvature);
            assert!((before - after).abs() < 1e-10 * before.abs().max(1.0), "{} vs {}", before, after);
        }
    }
}

#[test]
fn rotating_soliton_residuals() {
    let ts: Vec<f64> = (0..9).map(|i| -3.0 + 0.75 * i as f64).collect();
    for &(h, a) in &[(0.5, 0.0), (1.0, 1.0), (5.0, 0.3)] {
        let pitch = Pitch::from_h(h).unwrap();
        let curve = generate_rotating_curve(pitch, a, 8.0).unwrap();
        let samples = helicoidal_samples(&curve, pitch, &ts).unwrap();
        let rotating = MotionSpec::new(0.0, Matrix::z_rotation_generator(), vec![0.0; 3]).unwrap();
        let r = soliton_residual(&samples, &rotating);
        assert!(r < 1e-8, "h = {}, A = {}: {}", h, a, r);
        // The screw motion is tangent, so rotation equals a vertical translation.
        let translating = MotionSpec::new(0.0, Matrix::zeros(3), vec![0.0, 0.0, -h]).unwrap();
        let r = soliton_residual(&samples, &translating);
        assert!(r < 1e-8, "h = {}, A = {}: {}", h, a, r);
        let wrong = MotionSpec::new(0.0, Matrix::z_rotation_generator(), vec![0.0, 0.0, -h]).unwrap();
        assert!(soliton_residual(&samples, &wrong) > 1e-3);
    }
}

#[test]
fn static_residual_is_the_mean_curvature() {
    let still = MotionSpec::new(0.0, Matrix::zeros(3), vec![0.0; 3]).unwrap();
    let pitch = Pitch::from_h(1.5).unwrap();
    let curve = minimal_closed_form(&MinimalCurveSpec::new(pitch, 0.8, 0.0).unwrap(), (-5.0, 5.0), 101).unwrap();
    let samples = helicoidal_samples(&curve, pitch, &[0.0, 1.0, 2.0]).unwrap();
    assert!(soliton_residual(&samples, &still) < 1e-12);
    let samples = cmc_samples();
    assert!((soliton_residual(&samples, &still) - 1.0).abs() < 1e-9);
}

proptest! {
    #[test]
    fn exponential_group_property(seed in any::<u64>(), n in 2usize..6, s in -3.0..3.0f64, t in -3.0..3.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_skew(&mut rng, n, 2.0);
        let lhs = matrix_exp_skew(&a, s + t).unwrap();
        let rhs = &matrix_exp_skew(&a, s).unwrap() * &matrix_exp_skew(&a, t).unwrap();
        prop_assert!(max_diff(&lhs, &rhs) < 1e-11);
    }
}
