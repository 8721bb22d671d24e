use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use halfwave::io;
use halfwave::kernel;
use halfwave::spectral;
use halfwave::{Field, Grid};

/// Smooth, well-resolved test fields: a sum of up to three modulated gaussians.
fn bumps(dim: usize) -> impl Strategy<Value = Field> {
    let n = if dim == 1 { 256 } else { 32 };
    let bump = (0.0..2.0f64, -2.0..2.0f64, 0.5..2.0f64, -3.0..3.0f64, -PI..PI);
    prop::collection::vec(bump, 1..=3).prop_map(move |parts| {
        let grid = Grid::new(dim, n, 12.0).unwrap();
        Field::from_fn(grid, |x| {
            parts
                .iter()
                .map(|&(amp, center, width, freq, phase)| {
                    let r2: f64 = x.iter().enumerate().map(|(i, c)| (c - center / (i + 1) as f64).powi(2)).sum();
                    Complex64::from_polar(0.1 + amp, freq * x[0] + phase) * (-r2 / (width * width)).exp()
                })
                .sum()
        })
    })
}

fn velocity(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-0.6..0.6f64, dim)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn plancherel(u in bumps(1)) {
        let spectral_mass = spectral::spectral_quadratic(&u, |_| 1.0);
        prop_assert!((spectral_mass - u.mass()).abs() <= 1e-12 * u.mass());
    }

    #[test]
    fn riesz_pairing_is_bounded_by_mass(u in bumps(2), axis in 1usize..=2) {
        let r = spectral::riesz(&u, axis, 0.0).unwrap();
        let pairing = u.inner(&r.scale(Complex64::i())).unwrap();
        prop_assert!(pairing.im.abs() <= 1e-10 * u.mass());
        prop_assert!(pairing.re.abs() <= u.mass() * (1.0 + 1e-12));
    }

    #[test]
    fn tilted_form_is_sandwiched(u in bumps(2), v in velocity(2)) {
        let speed = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        let h = spectral::spectral_quadratic(&u, |m| m.norm);
        let t = spectral::quadratic_form_t(&u, &v);
        prop_assert!(t >= (1.0 - speed) * h - 1e-12 * h);
        prop_assert!(t <= (1.0 + speed) * h + 1e-12 * h);
    }

    #[test]
    fn resolvent_inverts_the_profile_operator(u in bumps(1), v in velocity(1)) {
        let g = kernel::resolvent_apply(&u, &v).unwrap();
        let back = spectral::apply_real_multiplier(&g, &spectral::profile_symbol(u.grid(), &v, 1.0));
        prop_assert!(back.sub(&u).unwrap().l2_norm() <= 1e-10 * u.l2_norm());
    }

    #[test]
    fn translation_by_whole_cells_is_a_roll(u in bumps(1), cells in -40i64..40) {
        let shift = cells as f64 * u.grid().dx();
        let spectral_shift = spectral::translate(&u, &[shift]);
        prop_assert!(spectral_shift.sub(&u.roll(&[cells])).unwrap().l2_norm() <= 1e-9 * u.l2_norm());
    }

    #[test]
    fn norms_are_gauge_invariant(u in bumps(1), theta in -PI..PI, v in velocity(1)) {
        let rotated = u.scale(Complex64::from_polar(1.0, theta));
        let a = spectral::norms(&u, 3.0).unwrap();
        let b = spectral::norms(&rotated, 3.0).unwrap();
        prop_assert!((a.half_sq - b.half_sq).abs() <= 1e-12 * a.half_sq);
        prop_assert!((a.lp1_integral - b.lp1_integral).abs() <= 1e-12 * a.lp1_integral);
        let ta = spectral::quadratic_form_t(&u, &v);
        let tb = spectral::quadratic_form_t(&rotated, &v);
        prop_assert!((ta - tb).abs() <= 1e-12 * a.half_sq);
    }

    #[test]
    fn field_files_round_trip(u in bumps(2)) {
        let decoded = io::decode_field(&io::encode_field(&u)).unwrap();
        prop_assert_eq!(decoded.values(), u.values());
        prop_assert!(decoded.grid().same_as(u.grid()));
    }
}

#[test]
fn hilbert_transform_of_cosine() {
    // R_1 cos = sin on a periodic box, by the symbol -i sign(xi)
    let grid = Grid::new(1, 128, PI).unwrap();
    let u = Field::from_real_fn(grid, |x| (3.0 * x[0]).cos());
    let r = spectral::riesz(&u, 1, 0.0).unwrap();
    let expected = Field::from_real_fn(grid, |x| (3.0 * x[0]).sin());
    assert!(r.sub(&expected).unwrap().max_abs() < 1e-13);
}

#[test]
fn truncated_header_is_rejected() {
    let grid = Grid::new(1, 16, 1.0).unwrap();
    let bytes = io::encode_field(&Field::zeros(grid));
    assert!(io::decode_field(&bytes[..bytes.len() - 3]).is_err());
    let mut wrong = bytes.clone();
    wrong[0] = b'X';
    assert!(io::decode_field(&wrong).is_err());
}
