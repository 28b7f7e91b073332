//! WebAssembly bindings used by the static page in `www/`.
//!
//! Each exported function has a native counterpart returning
//! `Result<_, String>` so the logic can be tested off the browser.

use std::f64::consts::PI;

use dmkdv::harness::simulate_to;
use dmkdv::lattice::{InitialProfile, LatticeState};
use dmkdv::model::AsymptoticSolver;
use dmkdv::phase::DEFAULT_V_MAX;
use dmkdv::scattering::{LatticeReflection, Reflection};
use num_complex::Complex64 as C64;
use wasm_bindgen::prelude::*;

const SIM_MARGIN: f64 = 20.0;
const SPILL_TOL: f64 = 1e-10;
/// Keep the demo responsive.
const MAX_TIME: f64 = 400.0;

/// Values on consecutive sites starting at `n_min`; `NaN` marks sites
/// where no value could be computed.
#[wasm_bindgen]
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    n_min: i32,
    values: Vec<f64>,
}

#[wasm_bindgen]
impl Series {
    #[wasm_bindgen(getter)]
    pub fn n_min(&self) -> i32 {
        self.n_min
    }

    #[wasm_bindgen(getter)]
    pub fn values(&self) -> Vec<f64> {
        self.values.clone()
    }
}

impl Series {
    pub fn get(&self, n: i32) -> Option<f64> {
        usize::try_from(n - self.n_min).ok().and_then(|i| self.values.get(i).copied())
    }
}

pub fn profile_state(kind: &str, amplitude: f64, width: f64, center: i32) -> Result<LatticeState, String> {
    let profile = match kind {
        "zero" => InitialProfile::zero(),
        "single_site" => InitialProfile::single_site(amplitude, center as i64),
        "gaussian" => InitialProfile::gaussian(amplitude, width, center as i64),
        other => return Err(format!("unknown profile kind {other:?}")),
    };
    profile.state().map_err(|e| e.to_string())
}

fn check_time(t: f64) -> Result<(), String> {
    if t > 0.0 && t <= MAX_TIME {
        Ok(())
    } else {
        Err(format!("t must lie in (0, {MAX_TIME}]"))
    }
}

/// Lattice at time `t`, cut to the sites the solution can have reached.
pub fn simulate_series(kind: &str, amplitude: f64, width: f64, center: i32, t: f64, dt: f64) -> Result<Series, String> {
    check_time(t)?;
    let initial = profile_state(kind, amplitude, width, center)?;
    let end = simulate_to(&initial, t, dt, SIM_MARGIN, SPILL_TOL).map_err(|e| e.to_string())?;
    let (lo, hi) = initial.support().unwrap_or((0, 0));
    let reach = (2.0 * t).ceil() as i64 + 10;
    let view = end.rewindowed(lo - reach, hi + reach);
    Ok(Series {
        n_min: view.n_min() as i32,
        values: view.values().to_vec(),
    })
}

/// `|r(e^{i theta})|` at `samples` equispaced angles in `[-pi, pi)`.
pub fn reflection_samples(kind: &str, amplitude: f64, width: f64, center: i32, samples: usize) -> Result<Vec<f64>, String> {
    if !(2..=8192).contains(&samples) {
        return Err("samples must lie in [2, 8192]".into());
    }
    let r = LatticeReflection::new(&profile_state(kind, amplitude, width, center)?);
    Ok((0..samples)
        .map(|k| {
            let theta = -PI + 2.0 * PI * k as f64 / samples as f64;
            r.eval(C64::from_polar(1.0, theta)).norm()
        })
        .collect())
}

/// Leading-order prediction on every site with `|n| <= 1.8 t`.
pub fn asymptotic_series(kind: &str, amplitude: f64, width: f64, center: i32, t: f64) -> Result<Series, String> {
    check_time(t)?;
    let solver = AsymptoticSolver::new(&profile_state(kind, amplitude, width, center)?);
    let reach = (DEFAULT_V_MAX * t).floor() as i64;
    let values = (-reach..=reach)
        .map(|n| solver.evaluate(n, t).map(|r| r.q_asym).unwrap_or(f64::NAN))
        .collect();
    Ok(Series {
        n_min: -reach as i32,
        values,
    })
}

fn js(e: String) -> JsError {
    JsError::new(&e)
}

#[wasm_bindgen]
pub fn simulate(kind: &str, amplitude: f64, width: f64, center: i32, t: f64, dt: f64) -> Result<Series, JsError> {
    simulate_series(kind, amplitude, width, center, t, dt).map_err(js)
}

#[wasm_bindgen]
pub fn reflection_modulus(kind: &str, amplitude: f64, width: f64, center: i32, samples: usize) -> Result<Vec<f64>, JsError> {
    reflection_samples(kind, amplitude, width, center, samples).map_err(js)
}

#[wasm_bindgen]
pub fn asymptotic(kind: &str, amplitude: f64, width: f64, center: i32, t: f64) -> Result<Series, JsError> {
    asymptotic_series(kind, amplitude, width, center, t).map_err(js)
}
