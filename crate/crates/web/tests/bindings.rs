use dmkdv_web::{asymptotic_series, profile_state, reflection_samples, simulate_series};

#[test]
fn single_site_reflection_is_flat() {
    let r = reflection_samples("single_site", 0.3, 1.0, 0, 64).unwrap();
    assert_eq!(r.len(), 64);
    assert!(r.iter().all(|m| (m - 0.3).abs() < 1e-14));
}

#[test]
fn simulation_and_asymptotics_agree() {
    let t = 60.0;
    let direct = simulate_series("single_site", 0.3, 1.0, 0, t, 0.01).unwrap();
    let asym = asymptotic_series("single_site", 0.3, 1.0, 0, t).unwrap();
    assert_eq!(asym.n_min(), -108);
    for n in [-80, -30, 0, 30, 80] {
        let d = direct.get(n).unwrap();
        let a = asym.get(n).unwrap();
        assert!((d - a).abs() < 2e-3, "n = {n}: {d} vs {a}");
    }
}

#[test]
fn zero_profile_stays_zero() {
    let s = simulate_series("zero", 0.0, 1.0, 0, 5.0, 0.05).unwrap();
    assert!(s.values().iter().all(|q| *q == 0.0));
    let a = asymptotic_series("zero", 0.0, 1.0, 0, 5.0).unwrap();
    // sites next to the light cone edge have merging stationary points
    assert!(a.values().iter().all(|q| *q == 0.0 || q.is_nan()));
    assert_eq!(a.get(0), Some(0.0));
}

#[test]
fn bad_inputs_rejected() {
    assert!(profile_state("square", 0.1, 1.0, 0).is_err());
    assert!(profile_state("gaussian", 1.5, 1.0, 0).is_err());
    assert!(simulate_series("single_site", 0.3, 1.0, 0, 1e4, 0.01).is_err());
    assert!(reflection_samples("single_site", 0.3, 1.0, 0, 1).is_err());
}
