//! Acceptance suite. Runs as a plain binary so that every criterion prints
//! exactly one PASS/FAIL line; exits nonzero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64 as C64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use dmkdv::gamma::gamma;
use dmkdv::harness::{observed_order, run_compare, simulate_to, RunConfig};
use dmkdv::lattice::{conserved_c_inf, LatticeState};
use dmkdv::model::{m1_entry, AsymptoticSolver, SignConvention};
use dmkdv::phase::{phase_derivative, phase_second_derivative_at, stationary_points, RayParams};
use dmkdv::quadrature::Quadrature;
use dmkdv::scattering::{scattering_coefficients, LatticeReflection, UnitCirclePoint};
use dmkdv::weights::{chi_at_stationary, delta_at, delta_j_at};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn circle(size: usize) -> Vec<UnitCirclePoint> {
    (0..size)
        .map(|k| UnitCirclePoint::from_angle(-PI + 2.0 * PI * k as f64 / size as f64))
        .collect()
}

fn reference() -> LatticeState {
    LatticeState::single_site(0, 0.3, 0).unwrap()
}

fn single_site_scattering() -> Outcome {
    let clock = Instant::now();
    let q = reference();
    let mut worst = 0.0_f64;
    for p in circle(256) {
        let s = scattering_coefficients(&q, p).unwrap();
        worst = worst.max((s.a - 1.0).norm()).max((s.b - 0.3 * p.z()).norm());
    }
    let secs = clock.elapsed().as_secs_f64();
    outcome(
        worst < 1e-12 && secs < 1.0,
        format!("max |a - 1|, |b - 0.3z| = {worst:.3e} (< 1e-12), {secs:.3} s (< 1 s)"),
    )
}

fn unitarity() -> Outcome {
    let clock = Instant::now();
    let mut rng = StdRng::seed_from_u64(2024);
    let mut worst = 0.0_f64;
    for _ in 0..10 {
        let values: Vec<f64> = (0..16).map(|_| rng.gen_range(-0.5..=0.5)).collect();
        let q = LatticeState::new(rng.gen_range(-20..20), values, 0.0).unwrap();
        let c_inf = conserved_c_inf(&q);
        for p in circle(256) {
            let s = scattering_coefficients(&q, p).unwrap();
            worst = worst.max((s.a.norm_sqr() - s.b.norm_sqr() - c_inf).abs());
        }
    }
    let secs = clock.elapsed().as_secs_f64();
    outcome(
        worst < 1e-10 && secs < 5.0,
        format!("max ||a|^2 - |b|^2 - c_inf| = {worst:.3e} over 10 draws (< 1e-10), {secs:.3} s (< 5 s)"),
    )
}

fn phase_identities() -> Outcome {
    let clock = Instant::now();
    let mut rng = StdRng::seed_from_u64(99);
    let (mut d1, mut d2) = (0.0_f64, 0.0_f64);
    for _ in 0..100 {
        let t: f64 = rng.gen_range(1.0..1000.0);
        let n = (rng.gen_range(-1.8..=1.8) * t).trunc() as i64;
        let ray = RayParams::new(n, t).unwrap();
        let set = stationary_points(&ray).unwrap();
        for j in 1..=4 {
            let s = set.s(j);
            d1 = d1.max(phase_derivative(s, &ray).norm());
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            let b = set.beta(j);
            d2 = d2.max((phase_second_derivative_at(s, &ray) * b * b - C64::new(0.0, sign * 0.5)).norm());
        }
    }
    let secs = clock.elapsed().as_secs_f64();
    outcome(
        d1 < 1e-10 && d2 < 1e-12 && secs < 1.0,
        format!("max |phi'(S_j)| = {d1:.3e} (< 1e-10), max |phi'' beta^2 -/+ i/2| = {d2:.3e} (< 1e-12), {secs:.3} s"),
    )
}

fn delta_product() -> Outcome {
    let clock = Instant::now();
    let quad = Quadrature::default();
    let r = LatticeReflection::new(&reference());
    let set = stationary_points(&RayParams::new(31, 70.0).unwrap()).unwrap();
    let mut worst = 0.0_f64;
    for k in 0..20 {
        let radius = [0.4, 0.8, 1.25, 2.5][k % 4];
        let z = C64::from_polar(radius, 0.21 + 2.0 * PI * k as f64 / 20.0);
        let d = delta_at(&r, &set, z, &quad).unwrap();
        let prod: C64 = (1..=4).map(|j| delta_j_at(&r, &set, j, z, &quad).unwrap()).product();
        worst = worst.max((d - prod).norm());
    }
    let secs = clock.elapsed().as_secs_f64();
    outcome(
        worst < 1e-9 && secs < 10.0,
        format!("max |delta - prod delta_j| = {worst:.3e} at 20 probes (< 1e-9), {secs:.3} s (< 10 s)"),
    )
}

fn constant_modulus() -> Outcome {
    let quad = Quadrature::default();
    let c: f64 = 0.3;
    let r = LatticeReflection::new(&reference());
    let set = stationary_points(&RayParams::new(0, 40.0).unwrap()).unwrap();
    let d0 = delta_at(&r, &set, C64::new(0.0, 0.0), &quad).unwrap();
    let err = (d0 - (1.0 - c * c).powf(-0.5)).norm();
    let chi = (1..=4)
        .map(|j| chi_at_stationary(&r, &set, j, &quad).unwrap().norm())
        .fold(0.0, f64::max);
    outcome(
        err < 1e-9 && chi < quad.tol,
        format!("|delta(0) - (1 - c^2)^(-1/2)| = {err:.3e} (< 1e-9), max |chi_j(S_j)| = {chi:.3e} (< {:.0e})", quad.tol),
    )
}

fn model_modulus() -> Outcome {
    let mut m1_err = 0.0_f64;
    for nu in [0.001, 0.01, 0.1, 0.5] {
        let modulus = (1.0 - (-2.0 * PI * nu).exp()).sqrt();
        for j in 1..=4 {
            let r = C64::from_polar(modulus, -1.3 + 0.7 * j as f64);
            let m = m1_entry(nu, r, j, SignConvention::PaperPop1).unwrap();
            m1_err = m1_err.max((m.norm() - nu.sqrt()).abs());
        }
    }
    let mut g_err = (gamma(C64::new(1.0, 0.0)).unwrap() - 1.0).norm();
    g_err = g_err.max((gamma(C64::new(0.5, 0.0)).unwrap() - PI.sqrt()).norm());
    for nu in [0.001, 0.01, 0.1, 0.25, 0.5] {
        let expect = PI / (nu * (PI * nu).sinh());
        g_err = g_err.max((gamma(C64::new(0.0, nu)).unwrap().norm_sqr() / expect - 1.0).abs());
    }
    outcome(
        m1_err < 1e-10 && g_err < 1e-12,
        format!("max ||m1| - sqrt(nu)| = {m1_err:.3e} (< 1e-10), Gamma identities {g_err:.3e} (< 1e-12)"),
    )
}

fn integrator() -> Outcome {
    let order = observed_order(&reference(), 5.0, 0.1).unwrap();
    let start = reference();
    let end = simulate_to(&start, 50.0, 0.01, 20.0, 1e-10).unwrap();
    let drift = (conserved_c_inf(&end) - conserved_c_inf(&start)).abs();
    outcome(
        (3.7..=4.3).contains(&order) && drift < 1e-8,
        format!("observed order {order:.4} (in [3.7, 4.3]), c_inf drift to t = 50 {drift:.3e} (< 1e-8)"),
    )
}

struct Sweep {
    t: Vec<f64>,
    q_direct: Vec<f64>,
    abs_err: Vec<f64>,
    scaled_err: Vec<f64>,
    envelope: Vec<f64>,
    secs: f64,
}

fn sweep() -> Result<Sweep, String> {
    let clock = Instant::now();
    let cfg = RunConfig::default();
    assert_eq!(cfg.rays, vec![0.5]);
    assert_eq!(cfg.times, vec![100.0, 200.0, 400.0, 800.0]);
    assert_eq!(cfg.dt, 0.005);
    let rows = run_compare(&cfg).map_err(|e| e.to_string())?;
    if let Some(bad) = rows.iter().find(|r| !r.ok()) {
        return Err(bad.error.clone().unwrap_or_default());
    }
    Ok(Sweep {
        t: rows.iter().map(|r| r.record.t).collect(),
        q_direct: rows.iter().map(|r| r.record.q_direct).collect(),
        abs_err: rows.iter().map(|r| r.record.abs_err).collect(),
        scaled_err: rows.iter().map(|r| r.record.scaled_err).collect(),
        envelope: rows.iter().map(|r| r.envelope).collect(),
        secs: clock.elapsed().as_secs_f64(),
    })
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(", ")
}

fn envelope_tracking(s: &Sweep) -> Outcome {
    let ratios: Vec<f64> = s.q_direct.iter().zip(&s.envelope).map(|(q, e)| q.abs() / e).collect();
    let pass = ratios.iter().all(|r| (0.05..=1.5).contains(r));
    outcome(
        pass,
        format!("|q_direct| / envelope at t = {:?}: [{}] (in [0.05, 1.5]), sweep {:.1} s", s.t, fmt_list(&ratios), s.secs),
    )
}

fn error_decay(s: &Sweep) -> Outcome {
    let ratios: Vec<f64> = s.abs_err.iter().zip(&s.envelope).map(|(e, a)| e / a).collect();
    let first = ratios[0] < 0.5;
    let decreasing = ratios.windows(2).all(|w| w[1] < w[0]);
    outcome(
        first && decreasing,
        format!(
            "abs_err / amplitude: [{}] (first < 0.5: {first}, strictly decreasing: {decreasing})",
            fmt_list(&ratios)
        ),
    )
}

fn scaled_error_bounded(s: &Sweep) -> Outcome {
    let max = s.scaled_err.iter().cloned().fold(0.0, f64::max);
    let min = s.scaled_err.iter().cloned().fold(f64::INFINITY, f64::min);
    outcome(
        max / min < 4.0,
        format!("scaled_err: [{}], max/min = {:.3} (< 4)", fmt_list(&s.scaled_err), max / min),
    )
}

fn realness() -> Outcome {
    let (v, t): (f64, f64) = (0.5, 800.0);
    let n = (v * t).round() as i64;
    let ratio = |conv| {
        let res = AsymptoticSolver::new(&reference()).with_convention(conv).evaluate(n, t).unwrap();
        res.imag_residual * t.sqrt()
    };
    let selected = ratio(SignConvention::default());
    let rejected = ratio(SignConvention::PaperFinal);
    outcome(
        selected < 0.05 && rejected >= 0.05,
        format!(
            "imag_residual / t^(-1/2) at t = 800: selected {} = {selected:.3e} (< 0.05), rejected {} = {rejected:.3e} (fails as expected: {})",
            SignConvention::default().name(),
            SignConvention::PaperFinal.name(),
            rejected >= 0.05
        ),
    )
}

fn main() -> ExitCode {
    let mut results: Vec<(&str, &str, Outcome)> = vec![
        ("1", "single-site closed-form scattering", single_site_scattering()),
        ("2", "unitarity", unitarity()),
        ("3", "phase identities", phase_identities()),
        ("4", "delta product identity", delta_product()),
        ("5", "constant-modulus closed form", constant_modulus()),
        ("6", "model modulus and Gamma identities", model_modulus()),
        ("7", "integrator order and conservation", integrator()),
    ];
    match sweep() {
        Ok(s) => {
            results.push(("8a", "end-to-end: envelope tracking", envelope_tracking(&s)));
            results.push(("8b", "end-to-end: relative error decay", error_decay(&s)));
            results.push(("8c", "end-to-end: scaled error bounded", scaled_error_bounded(&s)));
        }
        Err(e) => {
            for (id, name) in [("8a", "envelope tracking"), ("8b", "relative error decay"), ("8c", "scaled error bounded")] {
                results.push((id, name, outcome(false, format!("sweep failed: {e}"))));
            }
        }
    }
    results.push(("9", "realness under the selected convention", realness()));

    let mut failed = 0;
    for (id, name, o) in &results {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {id:<3} {tag}  {name}: {}", o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
