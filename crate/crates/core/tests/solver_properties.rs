//! End-to-end solver behaviour on small grids.

use pmfd_core::functionals::FunctionalKind;
use pmfd_core::quadrature::integrate;
use pmfd_core::solver::{run, Boundary, Cadence, FarField, InitialCondition, SnapshotPolicy, SolverConfig};
use pmfd_core::{BarenblattProfile, DiffusionParams, Potential, RadialField, RadialGrid};

fn config(g: f64, d: usize, pot: Potential, cells: usize, radius: f64, init: InitialCondition, t: (f64, f64)) -> SolverConfig {
    let params = DiffusionParams::new(g, d, pot).unwrap();
    let grid = RadialGrid::new(cells, radius, d).unwrap();
    SolverConfig::new(params, grid, init, t.0, t.1)
}

#[test]
fn neumann_run_conserves_mass() {
    let init = InitialCondition::Annulus { inner: 0.3, outer: 1.0, amplitude: 2.0 };
    for pot in [Potential::Trivial, Potential::Quadratic] {
        let mut cfg = config(1.0, 2, pot, 128, 3.0, init.clone(), (0.0, 0.5));
        cfg.record.cadence = Cadence::Uniform { count: 5 };
        let tr = run(&cfg).unwrap();
        assert!(tr.ledger.conservation_defect() < 1e-12 * tr.ledger.initial);
        assert_eq!(tr.ledger.total_leak(), 0.0);
    }
}

/// Drift of the discrete stationary state over unit time.
fn stationary_drift(cells: usize) -> f64 {
    let g = 0.5;
    let params = DiffusionParams::new(g, 2, Potential::Quadratic).unwrap();
    let b = BarenblattProfile::new(params, 1.0).unwrap();
    let supp = b.support_radius(b.stationary_time(1.0)).unwrap();
    let init = InitialCondition::Stationary { mass: 1.0 };
    let mut cfg = config(g, 2, Potential::Quadratic, cells, 1.5 * supp, init, (0.0, 1.0));
    cfg.record.snapshots = SnapshotPolicy::Every(1);
    cfg.record.cadence = Cadence::Uniform { count: 2 };
    let tr = run(&cfg).unwrap();
    tr.snapshots[0].l1_distance(tr.final_field().unwrap()).unwrap()
}

#[test]
fn stationary_state_drift_is_first_order() {
    let (coarse, fine) = (stationary_drift(128), stationary_drift(256));
    assert!(fine < 1e-2, "{fine}");
    let ratio = coarse / fine;
    assert!((1.6..2.6).contains(&ratio), "{coarse} / {fine}");
}

#[test]
fn porous_medium_tracks_barenblatt() {
    let params = DiffusionParams::new(1.0, 1, Potential::Trivial).unwrap();
    let b = BarenblattProfile::new(params, 1.0).unwrap();
    let radius = 2.0 * b.support_radius(4.0).unwrap();
    let init = InitialCondition::Barenblatt { mass: 1.0, time_offset: 0.0 };
    let mut cfg = config(1.0, 1, Potential::Trivial, 400, radius, init, (1.0, 4.0));
    cfg.record.snapshots = SnapshotPolicy::Final;
    let tr = run(&cfg).unwrap();
    let err = tr.final_field().unwrap().l1_error(|r| b.density(4.0, r)).unwrap();
    assert!(err < 1e-2, "{err}");
}

#[test]
fn fast_diffusion_far_field_keeps_mass_near_exact() {
    let (g, d) = (-0.5, 3);
    let params = DiffusionParams::new(g, d, Potential::Trivial).unwrap();
    let b = BarenblattProfile::new(params, 1.0).unwrap();
    let init = InitialCondition::Barenblatt { mass: 1.0, time_offset: 0.0 };
    let mut cfg = config(g, d, Potential::Trivial, 256, 12.0, init, (1.0, 1.5));
    cfg.boundary = Boundary::FarFieldBarenblatt(FarField::new(b.clone()));
    let tr = run(&cfg).unwrap();
    // Flux through the boundary should match the exact profile's.
    let inside = 1.0 - b.mass_outside(1.5, 12.0).unwrap();
    let grid_mass = tr.ledger.samples.last().unwrap().1;
    assert!((grid_mass - inside).abs() < 5e-3, "{grid_mass} vs {inside}");
}

#[test]
fn split_run_is_bitwise_equal_to_single_run() {
    let init = InitialCondition::Annulus { inner: 0.2, outer: 0.9, amplitude: 3.0 };
    let mut whole = config(0.5, 2, Potential::Quadratic, 96, 2.5, init.clone(), (0.0, 0.4));
    whole.record.cadence = Cadence::Explicit(vec![0.15]);
    whole.record.snapshots = SnapshotPolicy::Every(1);
    let a = run(&whole).unwrap();
    assert_eq!(a.sample_times, vec![0.0, 0.15, 0.4]);

    let mut first = whole.clone();
    first.t_end = 0.15;
    first.record.cadence = Cadence::Uniform { count: 1 };
    let mid = run(&first).unwrap().final_field().unwrap().clone();
    let mut second = whole.clone();
    second.t_start = 0.15;
    second.record.cadence = Cadence::Uniform { count: 1 };
    second.initial = InitialCondition::Table {
        radii: mid.grid.centers(),
        values: mid.values.clone(),
    };
    let b = run(&second).unwrap();
    assert_eq!(a.snapshots[1].values, mid.values);
    assert_eq!(a.final_field().unwrap().values, b.final_field().unwrap().values);
}

#[test]
fn explicit_cadence_validates_times() {
    for bad in [vec![0.0], vec![0.3, 0.2], vec![1.0], vec![0.5, 0.5]] {
        assert!(Cadence::Explicit(bad).sample_times(0.0, 1.0).is_err());
    }
    assert_eq!(Cadence::Explicit(vec![]).sample_times(0.0, 1.0).unwrap(), vec![0.0, 1.0]);
}

#[test]
fn geometric_cadence_is_log_uniform() {
    let ts = Cadence::Geometric { per_decade: 4 }.sample_times(1.0, 100.0).unwrap();
    assert_eq!(ts.len(), 9);
    for (k, t) in ts.iter().enumerate() {
        assert!((t.log10() - k as f64 / 4.0).abs() < 1e-12);
    }
}

#[test]
fn recorded_series_are_labelled() {
    let init = InitialCondition::Barenblatt { mass: 1.0, time_offset: 0.0 };
    let mut cfg = config(1.0, 2, Potential::Trivial, 64, 4.0, init, (1.0, 10.0));
    cfg.record.functionals = vec![FunctionalKind::LipschitzU { b: 1.0 }, FunctionalKind::Mass];
    cfg.record.cadence = Cadence::Geometric { per_decade: 8 };
    let tr = run(&cfg).unwrap();
    let mass = tr.series("mass").unwrap();
    assert_eq!(mass.len(), tr.sample_times.len());
    let m0 = mass.samples()[0].1;
    assert!(mass.values().all(|m| (m - m0).abs() < 1e-12));
    assert!(tr.series("lipschitz_u_b1").is_some());
}

#[test]
fn invalid_configs_are_domain_errors() {
    let init = InitialCondition::Barenblatt { mass: 1.0, time_offset: 0.0 };
    let mut cfg = config(1.0, 2, Potential::Trivial, 16, 4.0, init, (1.0, 2.0));
    cfg.cfl = 1.5;
    assert!(run(&cfg).is_err());
    cfg.cfl = 0.5;
    cfg.t_end = 0.5;
    assert!(run(&cfg).is_err());
}

#[test]
fn l1_error_against_hand_integrals() {
    // Zero field against f(r) = r in d = 1 on [0, 2]: 2 ∫ r = 4.
    let g = RadialGrid::new(7, 2.0, 1).unwrap();
    let zero = RadialField::new(g.clone(), vec![0.0; 7], 0.0).unwrap();
    assert!((zero.l1_error(Ok).unwrap() - 4.0).abs() < 1e-12);
    // Unit field against f = 0 gives the mass.
    let one = RadialField::new(RadialGrid::new(5, 1.5, 3).unwrap(), vec![1.0; 5], 0.0).unwrap();
    assert!((one.l1_error(|_| Ok(0.0)).unwrap() - one.mass()).abs() < 1e-12);
    // Cell averages of r against r in d = 1: each cell contributes Δr²/4 · 2.
    let avg = RadialField::from_fn(g.clone(), 0.0, Ok).unwrap();
    let dr = g.dr();
    let want = 7.0 * 2.0 * dr * dr / 4.0;
    assert!((avg.l1_error(Ok).unwrap() - want).abs() < 1e-12);
}

#[test]
fn quadrature_against_antiderivatives() {
    let v = integrate(|x: f64| x.sin(), 0.0, std::f64::consts::PI, 0.0, 1e-13).unwrap();
    assert!((v - 2.0).abs() < 1e-12);
    let v = integrate(|x: f64| x.sqrt(), 0.0, 1.0, 0.0, 1e-12).unwrap();
    assert!((v - 2.0 / 3.0).abs() < 1e-11);
}
