use std::f64::consts::PI;

use dmkdv::harness::{observed_order, run_compare, simulate_to, RunConfig};
use dmkdv::lattice::{conserved_c_inf, InitialProfile, LatticeState};
use dmkdv::model::AsymptoticSolver;

/// `J_n(x) = (1/pi) int_0^pi cos(n tau - x sin tau) dtau`, trapezoid rule
/// (spectrally accurate for this periodic integrand).
fn bessel_j(n: i64, x: f64) -> f64 {
    let m = 4096;
    let h = PI / m as f64;
    let f = |tau: f64| (n as f64 * tau - x * tau.sin()).cos();
    let mut s = 0.5 * (f(0.0) + f(PI));
    for k in 1..m {
        s += f(k as f64 * h);
    }
    s * h / PI
}

#[test]
fn small_data_follows_linear_flow() {
    let c = 1e-6;
    let t = 15.0;
    let q = simulate_to(&LatticeState::single_site(0, c, 0).unwrap(), t, 0.005, 20.0, 1e-10).unwrap();
    for n in -40..=40 {
        let linear = c * if n % 2 == 0 { 1.0 } else { -1.0 } * bessel_j(n, 2.0 * t);
        assert!((q.get(n) - linear).abs() < 1e-14, "n = {n}");
    }
}

#[test]
fn integrator_is_fourth_order() {
    let start = LatticeState::new(-2, vec![0.1, -0.25, 0.3, 0.05], 0.0).unwrap();
    let p = observed_order(&start, 5.0, 0.1).unwrap();
    assert!((3.7..=4.3).contains(&p), "order {p}");
}

#[test]
fn long_run_conservation() {
    let start = LatticeState::single_site(0, 0.3, 0).unwrap();
    let end = simulate_to(&start, 50.0, 0.01, 20.0, 1e-10).unwrap();
    assert!((conserved_c_inf(&end) - conserved_c_inf(&start)).abs() < 1e-8);
}

#[test]
fn asymmetric_data_matches_simulation() {
    let start = LatticeState::new(-1, vec![0.1, 0.3, -0.2, 0.15], 0.0).unwrap();
    let t = 150.0;
    let direct = simulate_to(&start, t, 0.01, 30.0, 1e-10).unwrap();
    let solver = AsymptoticSolver::new(&start);
    for n in [-200, -110, -37, 0, 41, 90, 180] {
        let asym = solver.evaluate(n, t).unwrap();
        let err = (direct.get(n) - asym.q_asym).abs();
        assert!(err < 0.05 * asym.envelope.max(t.powf(-0.5) * 0.01), "n = {n}: {err:e}");
    }
}

#[test]
fn gaussian_profile_sweep() {
    let cfg = RunConfig {
        profile: InitialProfile::gaussian(0.2, 1.5, 3),
        rays: vec![-0.8, 0.3],
        times: vec![120.0, 240.0],
        dt: 0.01,
        ..RunConfig::default()
    };
    let rows = run_compare(&cfg).unwrap();
    assert_eq!(rows.len(), 4);
    for row in rows {
        assert!(row.ok(), "{:?}", row.error);
        assert!(row.record.abs_err < 0.1 * row.envelope, "{:?}", row.record);
    }
}

#[test]
fn single_site_error_below_half_amplitude() {
    let start = LatticeState::single_site(0, 0.3, 0).unwrap();
    let t = 100.0;
    let direct = simulate_to(&start, t, 0.005, 40.0, 1e-10).unwrap();
    let asym = AsymptoticSolver::new(&start).evaluate(50, t).unwrap();
    assert!((direct.get(50) - asym.q_asym).abs() < 0.5 * asym.envelope);
}
