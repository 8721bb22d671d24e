use std::f64::consts::PI;

use num_complex::Complex64;

use halfwave::evolution::{self, EvolutionConfig, Propagation, RunStatus, Scheme};
use halfwave::solver;
use halfwave::{Error, Field, Grid};

fn packet(grid: Grid) -> Field {
    Field::from_fn(grid, |x| Complex64::from_polar(0.8 * (-x[0] * x[0] / 2.0).exp(), 0.7 * x[0]))
}

#[test]
fn energy_of_the_closed_form_profile() {
    // 1/2 T - int Q^3 / 3 = pi/2 - pi
    let grid = Grid::new(1, 1 << 14, 400.0 * PI).unwrap();
    let e = evolution::energy(&solver::explicit_q0(&grid), 2.0);
    assert!((e + 0.5 * PI).abs() < 1e-4 * PI, "{e}");
}

#[test]
fn flow_commutes_with_translation_and_phase() {
    let grid = Grid::new(1, 512, 25.0).unwrap();
    let u0 = packet(grid);
    let gauge = Complex64::from_polar(1.0, 0.4);
    let cfg = EvolutionConfig::new(0.01, 2.0).with_stride(usize::MAX);
    let a = evolution::evolve(&u0, 3.0, &cfg).unwrap();
    let b = evolution::evolve(&u0.roll(&[31]).scale(gauge), 3.0, &cfg).unwrap();
    let moved = a.last().roll(&[31]).scale(gauge);
    assert!(moved.sub(b.last()).unwrap().l2_norm() < 1e-12 * u0.l2_norm());
}

#[test]
fn both_schemes_conserve_mass() {
    let grid = Grid::new(1, 512, 25.0).unwrap();
    for scheme in [Scheme::Lie, Scheme::Strang] {
        let cfg = EvolutionConfig { scheme, ..EvolutionConfig::new(0.01, 3.0).with_stride(10) };
        let traj = evolution::evolve(&packet(grid), 3.0, &cfg).unwrap();
        assert_eq!(traj.snapshots.len(), 31);
        assert!(traj.mass_drift() < 1e-12, "{scheme:?}: {:e}", traj.mass_drift());
    }
}

#[test]
fn lie_is_first_order_and_strang_second() {
    let grid = Grid::new(1, 512, 25.0).unwrap();
    let u0 = packet(grid);
    let order = |scheme| {
        let end = |dt: f64| {
            let cfg = EvolutionConfig { scheme, ..EvolutionConfig::new(dt, 1.0).with_stride(usize::MAX) };
            evolution::evolve(&u0, 3.0, &cfg).unwrap().last().clone()
        };
        let (a, b, c) = (end(0.02), end(0.01), end(0.005));
        (a.sub(&b).unwrap().l2_norm() / b.sub(&c).unwrap().l2_norm()).log2()
    };
    let lie = order(Scheme::Lie);
    let strang = order(Scheme::Strang);
    assert!((lie - 1.0).abs() < 0.15, "{lie}");
    assert!((strang - 2.0).abs() < 0.15, "{strang}");
}

#[test]
fn free_flow_has_no_defect_and_inverts() {
    let grid = Grid::new(1, 512, 25.0).unwrap();
    let u0 = packet(grid);
    let traj = evolution::evolve(&u0, 3.0, &EvolutionConfig::new(0.01, 4.0).with_stride(100).linear()).unwrap();
    for t in 1..=2 {
        assert!(evolution::scattering_defect(&traj, t as f64, t as f64 + 2.0).unwrap() < 1e-12);
    }
    let back = evolution::free_propagate(traj.last(), 4.0, Propagation::Backward);
    assert!(back.sub(&u0).unwrap().l2_norm() < 1e-12);
}

#[test]
fn small_data_defect_decays() {
    // small data in two dimensions with p = 2.5: the pulled-back flow settles
    let grid = Grid::new(2, 128, 40.0).unwrap();
    let u0 = Field::from_real_fn(grid, |x| 0.2 * (-(x[0] * x[0] + x[1] * x[1]) / 2.0).exp());
    let traj = evolution::evolve(&u0, 2.5, &EvolutionConfig::new(0.01, 12.0).with_stride(100)).unwrap();
    let defects: Vec<f64> =
        [1.0, 4.0, 8.0].iter().map(|&t| evolution::scattering_defect(&traj, t, t + 2.0).unwrap()).collect();
    assert!(defects.windows(2).all(|w| w[1] < w[0]), "{defects:?}");
    assert!(defects[2] < 0.1 * evolution::h_half_norm(&u0));
}

#[test]
fn amplitude_cap_stops_the_run() {
    let grid = Grid::new(1, 128, 10.0).unwrap();
    let cfg = EvolutionConfig { blowup_amplitude: 0.5, ..EvolutionConfig::new(0.01, 1.0) };
    let traj = evolution::evolve(&packet(grid), 3.0, &cfg).unwrap();
    assert_eq!(traj.status, RunStatus::BlowUp { t: 0.01 });
    assert_eq!(traj.snapshots.len(), 1);
}

#[test]
fn snapshot_lookup() {
    let grid = Grid::new(1, 128, 10.0).unwrap();
    let traj = evolution::evolve(&packet(grid), 3.0, &EvolutionConfig::new(0.01, 1.0).with_stride(25)).unwrap();
    assert_eq!(traj.times().collect::<Vec<_>>().len(), 5);
    assert!(traj.at(0.5).is_ok());
    assert!(matches!(traj.at(0.3), Err(Error::TimeNotInTrajectory(_))));
    assert!(evolution::scattering_defect(&traj, 0.5, 0.5).is_err());
}

#[test]
fn bad_settings_are_rejected() {
    let grid = Grid::new(1, 128, 10.0).unwrap();
    let u0 = packet(grid);
    assert!(evolution::evolve(&u0, 3.0, &EvolutionConfig::new(0.0, 1.0)).is_err());
    assert!(evolution::evolve(&u0, 3.0, &EvolutionConfig::new(0.01, 1.0).with_stride(0)).is_err());
    assert!(evolution::evolve(&u0, 1.0, &EvolutionConfig::new(0.01, 1.0)).is_err());
}
