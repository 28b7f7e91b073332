//! End-to-end experiments: run configuration, direct vs asymptotic
//! comparison sweeps, the self-test suite and result emission.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64 as C64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::gamma::gamma;
use crate::lattice::{
    conserved_c_inf, integrate_with, window_half_width, InitialProfile, IntegratorOptions, LatticeState,
};
use crate::model::{m1_entry, AsymptoticSolver, SignConvention};
use crate::phase::{
    phase_derivative, phase_second_derivative_at, stationary_points, RayParams, DEFAULT_V_MAX,
};
use crate::quadrature::Quadrature;
use crate::scattering::{scattering_coefficients, LatticeReflection, UnitCirclePoint};
use crate::weights::{chi_at_stationary, delta_at, delta_j_at};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub quadrature: f64,
    /// Calibration constant of the realness guard, see [`crate::model::realness_threshold`].
    pub realness: f64,
    pub spill: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            quadrature: 1e-11,
            realness: 1.0,
            spill: 1e-10,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    /// Standard output when absent.
    pub path: Option<PathBuf>,
    pub format: OutputFormat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub profile: InitialProfile,
    /// Rays `v = n/t`.
    pub rays: Vec<f64>,
    pub times: Vec<f64>,
    pub dt: f64,
    pub window_margin: f64,
    pub grid_size: usize,
    pub tolerances: Tolerances,
    pub sign_convention: SignConvention,
    pub output: OutputSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            profile: InitialProfile::single_site(0.3, 0),
            rays: vec![0.5],
            times: vec![100.0, 200.0, 400.0, 800.0],
            dt: 0.005,
            window_margin: 40.0,
            grid_size: 256,
            tolerances: Tolerances::default(),
            sign_convention: SignConvention::PaperPop1,
            output: OutputSpec::default(),
        }
    }
}

impl RunConfig {
    /// Parses `json` (or starts from the defaults when `None`), applies
    /// `key=value` overrides with dotted keys, and validates.
    pub fn load(json: Option<&str>, overrides: &[String]) -> Result<Self> {
        let mut value = match json {
            Some(text) => serde_json::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))?,
            None => serde_json::to_value(RunConfig::default()).map_err(|e| Error::Config(e.to_string()))?,
        };
        for item in overrides {
            apply_override(&mut value, item)?;
        }
        let cfg: RunConfig = serde_json::from_value(value).map_err(|e| Error::Config(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: Option<&Path>, overrides: &[String]) -> Result<Self> {
        match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Error::Config(format!("cannot read {}: {e}", p.display())))?;
                Self::load(Some(&text), overrides)
            }
            None => Self::load(None, overrides),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if let Some(v) = self.rays.iter().find(|v| !(v.abs() <= DEFAULT_V_MAX)) {
            return bad(format!("ray v = {v} outside |v| <= {DEFAULT_V_MAX}"));
        }
        if self.times.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
            return bad("times must be positive and finite".into());
        }
        if self.times.windows(2).any(|w| w[1] <= w[0]) {
            return bad("times must be strictly increasing".into());
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.window_margin >= 0.0) {
            return bad("window_margin must be nonnegative".into());
        }
        if self.grid_size < 64 || !self.grid_size.is_power_of_two() {
            return bad(format!("grid_size must be a power of two >= 64, got {}", self.grid_size));
        }
        let tol = &self.tolerances;
        if !(tol.quadrature > 0.0 && tol.realness > 0.0 && tol.spill > 0.0) {
            return bad("tolerances must be positive".into());
        }
        self.profile.state().map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }

    pub fn quadrature(&self) -> Quadrature {
        Quadrature::with_tol(self.tolerances.quadrature)
    }

    pub fn solver(&self) -> Result<AsymptoticSolver> {
        Ok(AsymptoticSolver::new(&self.profile.state()?)
            .with_convention(self.sign_convention)
            .with_quadrature(self.quadrature())
            .with_calibration(Some(self.tolerances.realness)))
    }
}

fn apply_override(root: &mut Value, item: &str) -> Result<()> {
    let (key, raw) = item
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override {item:?} is not key=value")))?;
    let parsed = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut node = root;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let obj = node
            .as_object_mut()
            .ok_or_else(|| Error::Config(format!("override key {key:?} does not name an object field")))?;
        if i + 1 == parts.len() {
            obj.insert(part.to_string(), parsed);
            return Ok(());
        }
        node = obj
            .entry(part.to_string())
            .or_insert_with(|| Value::Object(Default::default()));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRecord {
    pub n: i64,
    pub t: f64,
    pub v: f64,
    pub q_direct: f64,
    pub q_asym: f64,
    pub abs_err: f64,
    /// `abs_err t / log t`.
    pub scaled_err: f64,
    pub imag_residual: f64,
}

impl ComparisonRecord {
    pub fn new(n: i64, t: f64, v: f64, q_direct: f64, q_asym: f64, imag_residual: f64) -> Self {
        let abs_err = (q_direct - q_asym).abs();
        Self {
            n,
            t,
            v,
            q_direct,
            q_asym,
            abs_err,
            scaled_err: abs_err * t / t.ln(),
            imag_residual,
        }
    }
}

/// One row of a sweep. Failed rows carry `NaN` in the columns that could
/// not be computed together with the error message.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowOutcome {
    pub record: ComparisonRecord,
    /// Size of the leading term, `sum_j |contribution_j| / |delta(0)|`.
    pub envelope: f64,
    pub error: Option<String>,
    pub wall_time: f64,
}

impl RowOutcome {
    pub fn ok(&self) -> bool {
        self.error.is_none()
    }
}

/// Lattice at time `t` from the profile, on a window wide enough that the
/// outer tenth stays below the spill tolerance.
pub fn simulate_to(initial: &LatticeState, t: f64, dt: f64, margin: f64, spill: f64) -> Result<LatticeState> {
    let (lo, hi) = initial.support().unwrap_or((0, 0));
    let radius = lo.abs().max(hi.abs());
    let half = window_half_width(radius, t, margin);
    let start = initial.rewindowed(-half, half);
    let opts = IntegratorOptions {
        spill_tol: spill,
        ..IntegratorOptions::default()
    };
    integrate_with(&start, t, dt, &opts)
}

/// Direct simulation against the leading-order formula on every `(v, t)`
/// pair, rows ordered by ray then time.
pub fn run_compare(config: &RunConfig) -> Result<Vec<RowOutcome>> {
    config.validate()?;
    let initial = config.profile.state()?;
    let solver = config.solver()?;
    let sims: Vec<(Result<LatticeState>, f64)> = config
        .times
        .par_iter()
        .map(|&t| {
            let clock = Instant::now();
            let out = simulate_to(&initial, t, config.dt, config.window_margin, config.tolerances.spill);
            (out, clock.elapsed().as_secs_f64())
        })
        .collect();
    let pairs: Vec<(f64, usize)> = config
        .rays
        .iter()
        .flat_map(|&v| (0..config.times.len()).map(move |i| (v, i)))
        .collect();
    let rows = pairs
        .par_iter()
        .map(|&(v, i)| {
            let t = config.times[i];
            let n = (v * t).round() as i64;
            let clock = Instant::now();
            let (sim, sim_time) = &sims[i];
            let direct = sim.as_ref().map(|s| s.get(n)).map_err(|e| e.to_string());
            let asym = solver.evaluate(n, t).map_err(|e| e.to_string());
            let q_direct = *direct.as_ref().unwrap_or(&f64::NAN);
            let (q_asym, imag, envelope) = match &asym {
                Ok(a) => (a.q_asym, a.imag_residual, a.envelope),
                Err(_) => (f64::NAN, f64::NAN, f64::NAN),
            };
            let error = match (&direct, &asym) {
                (Err(e), _) => Some(format!("simulation: {e}")),
                (_, Err(e)) => Some(format!("asymptotics: {e}")),
                _ => None,
            };
            RowOutcome {
                record: ComparisonRecord::new(n, t, v, q_direct, q_asym, imag),
                envelope,
                error,
                wall_time: clock.elapsed().as_secs_f64() + sim_time,
            }
        })
        .collect();
    Ok(rows)
}

pub const CSV_HEADER: &str = "n,t,v,q_direct,q_asym,abs_err,scaled_err,imag_residual";

/// Shortest decimal string that reads back to the same `f64`.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:?}")
    } else {
        x.to_string()
    }
}

pub fn to_csv(records: &[ComparisonRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.n,
            format_float(r.t),
            format_float(r.v),
            format_float(r.q_direct),
            format_float(r.q_asym),
            format_float(r.abs_err),
            format_float(r.scaled_err),
            format_float(r.imag_residual),
        );
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<ComparisonRecord>> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(Error::Config("missing or unexpected CSV header".into()));
    }
    let num = |s: &str| s.parse::<f64>().map_err(|e| Error::Config(format!("{s:?}: {e}")));
    lines
        .filter(|l| !l.is_empty())
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 8 {
                return Err(Error::Config(format!("expected 8 fields in {line:?}")));
            }
            Ok(ComparisonRecord {
                n: f[0].parse().map_err(|e| Error::Config(format!("{:?}: {e}", f[0])))?,
                t: num(f[1])?,
                v: num(f[2])?,
                q_direct: num(f[3])?,
                q_asym: num(f[4])?,
                abs_err: num(f[5])?,
                scaled_err: num(f[6])?,
                imag_residual: num(f[7])?,
            })
        })
        .collect()
}

pub fn to_json(records: &[ComparisonRecord]) -> String {
    let mut s = serde_json::to_string_pretty(records).expect("records serialize");
    s.push('\n');
    s
}

pub fn render(records: &[ComparisonRecord], format: OutputFormat) -> Result<String> {
    if records.is_empty() {
        return Err(Error::Config("no records to emit".into()));
    }
    Ok(match format {
        OutputFormat::Csv => to_csv(records),
        OutputFormat::Json => to_json(records),
    })
}

/// Writes `records` to `path`; nothing is created when `records` is empty.
pub fn emit(records: &[ComparisonRecord], format: OutputFormat, path: &Path) -> Result<()> {
    let text = render(records, format)?;
    std::fs::write(path, text)?;
    Ok(())
}

/// Gnuplot data for one ray: block 0 holds `t q_direct`, block 1 `t q_asym`.
pub fn gnuplot_ray(records: &[ComparisonRecord], v: f64) -> String {
    let mut out = format!("# ray v = {}\n# index 0: t q_direct\n", format_float(v));
    let rows: Vec<&ComparisonRecord> = records.iter().filter(|r| r.v == v).collect();
    for r in &rows {
        let _ = writeln!(out, "{} {}", format_float(r.t), format_float(r.q_direct));
    }
    out.push_str("\n\n# index 1: t q_asym\n");
    for r in &rows {
        let _ = writeln!(out, "{} {}", format_float(r.t), format_float(r.q_asym));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub measured: f64,
    pub threshold: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Check {
    /// Passes when `measured < threshold`.
    pub fn below(name: &str, measured: Result<f64>, threshold: f64) -> Self {
        match measured {
            Ok(m) => Check {
                name: name.into(),
                pass: m < threshold,
                measured: m,
                threshold,
                error: None,
            },
            Err(e) => Check {
                name: name.into(),
                pass: false,
                measured: f64::NAN,
                threshold,
                error: Some(e.to_string()),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConventionEntry {
    pub convention: SignConvention,
    /// `|(m_1^2)_12 - conj((m_1^1)_12)|` for conjugate cross data.
    pub pairing_residual: f64,
    /// `imag_residual t^{1/2}` on the audit ray.
    pub realness_ratio: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConventionAudit {
    pub selected: SignConvention,
    pub ray_v: f64,
    pub t: f64,
    pub threshold: f64,
    pub entries: Vec<ConventionEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelfTestReport {
    pub pass: bool,
    pub checks: Vec<Check>,
    pub convention_audit: ConventionAudit,
}

pub const REALNESS_RATIO_MAX: f64 = 0.05;

fn circle(size: usize) -> impl Iterator<Item = UnitCirclePoint> {
    (0..size).map(move |k| UnitCirclePoint::from_angle(-PI + 2.0 * PI * k as f64 / size as f64))
}

pub fn check_single_site_scattering() -> Result<f64> {
    let q = LatticeState::single_site(0, 0.3, 0)?;
    let mut worst = 0.0_f64;
    for p in circle(256) {
        let s = scattering_coefficients(&q, p)?;
        worst = worst.max((s.a - 1.0).norm()).max((s.b - 0.3 * p.z()).norm());
    }
    Ok(worst)
}

pub fn check_unitarity(seed: u64) -> Result<f64> {
    let mut rng = StdRng::seed_from_u64(seed);
    let values: Vec<f64> = (0..16).map(|_| rng.gen_range(-0.5..=0.5)).collect();
    let q = LatticeState::new(-7, values, 0.0)?;
    let c_inf = conserved_c_inf(&q);
    let mut worst = 0.0_f64;
    for p in circle(256) {
        let s = scattering_coefficients(&q, p)?;
        worst = worst.max((s.a.norm_sqr() - s.b.norm_sqr() - c_inf).abs());
    }
    Ok(worst)
}

fn random_rays(seed: u64, count: usize) -> Vec<RayParams> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let t: f64 = rng.gen_range(1.0..1000.0);
            let v: f64 = rng.gen_range(-DEFAULT_V_MAX..=DEFAULT_V_MAX);
            let n = ((v * t).round() as i64).clamp(-(DEFAULT_V_MAX * t) as i64, (DEFAULT_V_MAX * t) as i64);
            RayParams::new(n, t).expect("positive t")
        })
        .collect()
}

/// Largest `|phi'(S_j)|` and largest `|phi''(S_j) beta_j^2 - (-1)^{j+1} i/2|`.
pub fn check_phase_identities(seed: u64) -> Result<(f64, f64)> {
    let (mut d1, mut d2) = (0.0_f64, 0.0_f64);
    for ray in random_rays(seed, 100) {
        let set = stationary_points(&ray)?;
        d1 = d1.max(set.derivative_residual());
        for j in 1..=4 {
            let target = C64::new(0.0, -crate::phase::parity(j) * 0.5);
            let b = set.beta(j);
            let got = phase_second_derivative_at(set.s(j), &ray) * b * b;
            d2 = d2.max((got - target).norm());
            d1 = d1.max(phase_derivative(set.s(j), &ray).norm());
        }
    }
    Ok((d1, d2))
}

/// Largest `|delta(z) - prod_j delta_j(z)|` over 20 probes off the circle.
pub fn check_delta_product(profile: &LatticeState, quad: &Quadrature) -> Result<f64> {
    let r = LatticeReflection::new(profile);
    let set = stationary_points(&RayParams::new(23, 60.0)?)?;
    let mut worst = 0.0_f64;
    for k in 0..20 {
        let angle = 0.37 + 2.0 * PI * k as f64 / 20.0;
        let radius = if k % 2 == 0 { 0.55 + 0.02 * k as f64 } else { 1.3 + 0.1 * k as f64 };
        let z = C64::from_polar(radius, angle);
        let d = delta_at(&r, &set, z, quad)?;
        let mut prod = C64::new(1.0, 0.0);
        for j in 1..=4 {
            prod *= delta_j_at(&r, &set, j, z, quad)?;
        }
        worst = worst.max((d - prod).norm());
    }
    Ok(worst)
}

/// `(|delta(0) - (1 - c^2)^{-1/2}|, max_j |chi_j(S_j)|)` for single-site `c` on `n = 0`.
pub fn check_constant_modulus(c: f64, quad: &Quadrature) -> Result<(f64, f64)> {
    let q = LatticeState::single_site(0, c, 0)?;
    let r = LatticeReflection::new(&q);
    let set = stationary_points(&RayParams::new(0, 50.0)?)?;
    let d0 = delta_at(&r, &set, C64::new(0.0, 0.0), quad)?;
    let mut chi = 0.0_f64;
    for j in 1..=4 {
        chi = chi.max(chi_at_stationary(&r, &set, j, quad)?.norm());
    }
    Ok(((d0 - (1.0 - c * c).powf(-0.5)).norm(), chi))
}

/// Largest `| |(m_1^j)_12| - sqrt(nu) |` over the test exponents and both conventions.
pub fn check_m1_modulus() -> Result<f64> {
    let mut worst = 0.0_f64;
    for nu in [0.001, 0.01, 0.1, 0.5] {
        let m = (-(-2.0 * PI * nu).exp_m1()).sqrt();
        for j in 1..=4 {
            for conv in SignConvention::ALL {
                let r = C64::from_polar(m, 0.4 * j as f64 - 1.0);
                worst = worst.max((m1_entry(nu, r, j, conv)?.norm() - nu.sqrt()).abs());
            }
        }
    }
    Ok(worst)
}

/// Largest deviation in the identities `Gamma(1) = 1`, `Gamma(1/2) = sqrt(pi)`
/// and `|Gamma(i nu)|^2 = pi / (nu sinh(pi nu))` (relative).
pub fn check_gamma_identities() -> Result<f64> {
    let mut worst = (gamma(C64::new(1.0, 0.0))? - 1.0).norm();
    worst = worst.max((gamma(C64::new(0.5, 0.0))? - PI.sqrt()).norm());
    for nu in [0.001, 0.01, 0.1, 0.25, 0.5, 1.0] {
        let g = gamma(C64::new(0.0, nu))?;
        worst = worst.max((g.norm_sqr() * nu * (PI * nu).sinh() / PI - 1.0).abs());
    }
    Ok(worst)
}

/// Observed order `log2(|q_h - q_{h/2}| / |q_{h/2} - q_{h/4}|)` at `t_end`.
pub fn observed_order(initial: &LatticeState, t_end: f64, h: f64) -> Result<f64> {
    let (lo, hi) = initial.support().unwrap_or((0, 0));
    let half = window_half_width(lo.abs().max(hi.abs()), t_end, 20.0);
    let start = initial.rewindowed(-half, half);
    let opts = IntegratorOptions::default();
    let runs: Vec<LatticeState> = [h, h / 2.0, h / 4.0]
        .iter()
        .map(|&dt| integrate_with(&start, t_end, dt, &opts))
        .collect::<Result<_>>()?;
    let diff = |a: &LatticeState, b: &LatticeState| {
        a.values()
            .iter()
            .zip(b.values())
            .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
    };
    Ok((diff(&runs[0], &runs[1]) / diff(&runs[1], &runs[2])).log2())
}

/// `|c_inf(t_end) - c_inf(0)|`.
pub fn c_inf_drift(initial: &LatticeState, t_end: f64, dt: f64) -> Result<f64> {
    let end = simulate_to(initial, t_end, dt, 20.0, 1e-10)?;
    Ok((conserved_c_inf(&end) - conserved_c_inf(initial)).abs())
}

/// `imag_residual t^{1/2}` at `n = round(v t)` under `convention`.
pub fn realness_ratio(initial: &LatticeState, convention: SignConvention, v: f64, t: f64, quad: &Quadrature) -> Result<f64> {
    let res = AsymptoticSolver::new(initial)
        .with_convention(convention)
        .with_quadrature(*quad)
        .evaluate((v * t).round() as i64, t)?;
    Ok(res.imag_residual * t.sqrt())
}

fn pairing_residual(convention: SignConvention) -> Result<f64> {
    let nu = 0.05;
    let r1 = C64::from_polar((-(-2.0 * PI * nu).exp_m1()).sqrt(), 0.7);
    let m1 = m1_entry(nu, r1, 1, convention)?;
    let m2 = m1_entry(nu, r1.conj(), 2, convention)?;
    Ok((m2 - m1.conj()).norm())
}

/// Runs the invariant suite and the sign-convention audit.
pub fn selftest(config: &RunConfig) -> SelfTestReport {
    let quad = config.quadrature();
    let reference = LatticeState::single_site(0, 0.3, 0).expect("valid reference");
    let mut checks = vec![
        Check::below("single_site_scattering", check_single_site_scattering(), 1e-12),
        Check::below("unitarity", check_unitarity(17), 1e-10),
    ];
    match check_phase_identities(5) {
        Ok((d1, d2)) => {
            checks.push(Check::below("stationary_derivative", Ok(d1), 1e-10));
            checks.push(Check::below("second_derivative_scaling", Ok(d2), 1e-12));
        }
        Err(e) => checks.push(Check::below("phase_identities", Err(e), 1e-10)),
    }
    let profile = config.profile.state();
    checks.push(Check::below(
        "delta_product",
        profile.and_then(|p| check_delta_product(&p, &quad)),
        1e-9,
    ));
    match check_constant_modulus(0.3, &quad) {
        Ok((d0, chi)) => {
            checks.push(Check::below("delta_zero_constant_modulus", Ok(d0), 1e-9));
            checks.push(Check::below("chi_constant_modulus", Ok(chi), 10.0 * quad.tol));
        }
        Err(e) => checks.push(Check::below("constant_modulus", Err(e), 1e-9)),
    }
    checks.push(Check::below("m1_modulus", check_m1_modulus(), 1e-10));
    checks.push(Check::below("gamma_identities", check_gamma_identities(), 1e-12));
    checks.push(Check::below(
        "rk4_order",
        observed_order(&reference, 5.0, 0.1).map(|p| (p - 4.0).abs()),
        0.3,
    ));
    checks.push(Check::below("c_inf_drift", c_inf_drift(&reference, 50.0, 0.01), 1e-8));

    let (v, t) = (0.5, 800.0);
    let mut entries = Vec::new();
    for conv in SignConvention::ALL {
        let ratio = realness_ratio(&reference, conv, v, t, &quad);
        let pairing = pairing_residual(conv).unwrap_or(f64::NAN);
        let ratio_val = *ratio.as_ref().unwrap_or(&f64::NAN);
        if conv == config.sign_convention {
            checks.push(Check::below(&format!("realness_{}", conv.name()), ratio, REALNESS_RATIO_MAX));
        }
        entries.push(ConventionEntry {
            convention: conv,
            pairing_residual: pairing,
            realness_ratio: ratio_val,
            pass: ratio_val < REALNESS_RATIO_MAX && pairing < 1e-12,
        });
    }
    SelfTestReport {
        pass: checks.iter().all(|c| c.pass),
        checks,
        convention_audit: ConventionAudit {
            selected: config.sign_convention,
            ray_v: v,
            t,
            threshold: REALNESS_RATIO_MAX,
            entries,
        },
    }
}

/// Distinct rays in first-seen order.
pub fn distinct_rays(records: &[ComparisonRecord]) -> Vec<f64> {
    let mut seen = BTreeMap::new();
    for r in records {
        let len = seen.len();
        seen.entry(r.v.to_bits()).or_insert((len, r.v));
    }
    let mut out: Vec<(usize, f64)> = seen.into_values().collect();
    out.sort_by_key(|p| p.0);
    out.into_iter().map(|p| p.1).collect()
}
