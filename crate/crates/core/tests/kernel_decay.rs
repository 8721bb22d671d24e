use std::f64::consts::PI;

use halfwave::kernel;
use halfwave::Error;

/// Composite Simpson for `(1/pi) int_0^60 e^{-t} t / (t^2 + x^2) dt`, the
/// one-dimensional kernel at rest.
fn simpson_rest_kernel(x: f64) -> f64 {
    let n = 600_000;
    let h = 60.0 / n as f64;
    let f = |t: f64| (-t).exp() * t / (t * t + x * x);
    let mut sum = f(0.0) + f(60.0);
    for k in 1..n {
        sum += f(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    sum * h / 3.0 / PI
}

#[test]
fn rest_kernel_matches_direct_quadrature() {
    for x in [0.5, 3.0, 17.0] {
        let g = kernel::kernel_eval(&[x], &[0.0]).unwrap();
        let oracle = simpson_rest_kernel(x);
        assert!(g.value.im.abs() < 1e-15);
        assert!((g.value.re - oracle).abs() < 1e-8 * oracle, "x = {x}: {} vs {oracle}", g.value.re);
    }
}

#[test]
fn far_field_constant_at_rest() {
    // int_0^inf e^{-t} t / (t^2 + x^2) dt = 1/x^2 - 6/x^4 + ...
    let x: f64 = 1000.0;
    let g = kernel::kernel_eval(&[x], &[0.0]).unwrap().value.re;
    let expected = (1.0 / x.powi(2) - 6.0 / x.powi(4)) / PI;
    assert!((g - expected).abs() < 1e-9 * expected);
}

#[test]
fn reflection_conjugates_the_kernel() {
    for v in [0.3, -0.7] {
        for x in [0.7, 4.0, 40.0] {
            let a = kernel::kernel_eval(&[x], &[v]).unwrap().value;
            let b = kernel::kernel_eval(&[-x], &[v]).unwrap().value;
            assert!((a - b.conj()).norm() < 1e-12 * a.norm());
        }
    }
}

#[test]
fn far_field_constant_does_not_depend_on_speed() {
    // w(t) = |x|^2 (1 + O(t / |x|)), so |x|^2 G_v(x) -> 1/pi for every |v| < 1
    for v in [0.0, 0.5, 0.9, 0.99] {
        let report = kernel::decay_check(&[v], &[500.0, 1000.0]).unwrap();
        assert!((report.scaled[1] * PI - 1.0).abs() < 1e-4, "v = {v}: {:?}", report.scaled);
    }
}

#[test]
fn two_dimensional_decay_rate() {
    let radii: Vec<f64> = (0..6).map(|k| 10.0 * 2f64.powf(k as f64 * 0.6)).collect();
    for v in [[0.0, 0.0], [0.3, 0.4]] {
        let report = kernel::decay_check(&v, &radii).unwrap();
        assert!((report.slope + 3.0).abs() < 0.05, "{v:?}: {}", report.slope);
        assert!(report.band_ratio < 1.2);
    }
}

#[test]
fn invalid_points_are_rejected() {
    assert!(kernel::kernel_eval(&[0.0], &[0.0]).is_err());
    assert!(matches!(kernel::kernel_eval(&[1.0], &[1.0]), Err(Error::Supersonic { .. })));
    assert!(kernel::kernel_eval(&[1.0, 2.0], &[0.0]).is_err());
    assert!(kernel::decay_check(&[0.0], &[10.0]).is_err());
    assert!(kernel::decay_check(&[0.0], &[0.5, 10.0]).is_err());
}
