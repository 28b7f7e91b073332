//! The discrete defocusing mKdV lattice
//!
//! ```text
//! dq_n/dt = (1 - q_n^2) (q_{n+1} - q_{n-1})
//! ```
//!
//! on a finite window of sites with zero data outside, together with a
//! fixed-step RK4 integrator and the conserved quantities used to monitor it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fraction of the window (at each end) watched for boundary spill.
pub const SPILL_FRACTION: f64 = 0.1;

/// Slack allowed on the conserved sup-norm bound `sup|q| <= rho0`.
pub const BOUND_SLACK: f64 = 1e-9;

const FLUSH_BELOW: f64 = 1e-200;

/// Lattice data `q_n` for `n = n_min .. n_min + len - 1` at time `t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeState {
    n_min: i64,
    values: Vec<f64>,
    t: f64,
}

impl LatticeState {
    /// Builds a state, rejecting non-finite entries and `sup|q| >= 1`.
    pub fn new(n_min: i64, values: Vec<f64>, t: f64) -> Result<Self> {
        if let Some(bad) = values.iter().find(|q| !q.is_finite()) {
            return Err(Error::InvalidState(format!("non-finite value {bad}")));
        }
        let sup = sup_abs(&values);
        if sup >= 1.0 {
            return Err(Error::InvalidState(format!(
                "sup|q| = {sup} violates the defocusing bound sup|q| < 1"
            )));
        }
        if !t.is_finite() {
            return Err(Error::InvalidState(format!("non-finite time {t}")));
        }
        Ok(Self { n_min, values, t })
    }

    pub fn zeros(n_min: i64, len: usize) -> Self {
        Self {
            n_min,
            values: vec![0.0; len],
            t: 0.0,
        }
    }

    /// Symmetric window `[-half_width, half_width]` with a single nonzero site.
    pub fn single_site(site: i64, amplitude: f64, half_width: i64) -> Result<Self> {
        let mut state = Self::new(site, vec![amplitude], 0.0)?;
        state = state.rewindowed(-half_width.max(site.abs()), half_width.max(site.abs()));
        Ok(state)
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn n_max(&self) -> i64 {
        self.n_min + self.values.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `q_n`, zero outside the window.
    pub fn get(&self, n: i64) -> f64 {
        let idx = n - self.n_min;
        if idx < 0 || idx >= self.values.len() as i64 {
            0.0
        } else {
            self.values[idx as usize]
        }
    }

    /// Iterator over `(n, q_n)`.
    pub fn sites(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &q)| (self.n_min + i as i64, q))
    }

    pub fn sup_norm(&self) -> f64 {
        sup_abs(&self.values)
    }

    /// First and last sites carrying nonzero data, or `None` for zero data.
    pub fn support(&self) -> Option<(i64, i64)> {
        let first = self.values.iter().position(|&q| q != 0.0)?;
        let last = self.values.iter().rposition(|&q| q != 0.0)?;
        Some((self.n_min + first as i64, self.n_min + last as i64))
    }

    /// Same data on the window `[lo, hi]`; data outside the new window is dropped.
    pub fn rewindowed(&self, lo: i64, hi: i64) -> Self {
        let values = (lo..=hi).map(|n| self.get(n)).collect();
        Self {
            n_min: lo,
            values,
            t: self.t,
        }
    }

    /// The state restricted to its support (a single zero site for zero data).
    pub fn trimmed(&self) -> Self {
        match self.support() {
            Some((lo, hi)) => self.rewindowed(lo, hi),
            None => Self {
                n_min: 0,
                values: vec![0.0],
                t: self.t,
            },
        }
    }

    /// `(-1)^n q_n`. Maps solutions of the lattice equation to solutions of
    /// the time-reversed equation.
    pub fn staggered(&self) -> Self {
        let values = self
            .sites()
            .map(|(n, q)| if n.rem_euclid(2) == 0 { q } else { -q })
            .collect();
        Self {
            n_min: self.n_min,
            values,
            t: self.t,
        }
    }

    pub fn with_time(mut self, t: f64) -> Self {
        self.t = t;
        self
    }
}

fn sup_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0_f64, |m, q| m.max(q.abs()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    Zero,
    SingleSite,
    Gaussian,
    CustomList,
}

/// Initial data description used by the harness and the CLI.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitialProfile {
    pub kind: ProfileKind,
    #[serde(default)]
    pub amplitude: f64,
    #[serde(default = "default_width")]
    pub width: f64,
    #[serde(default)]
    pub center: i64,
    /// Site values for `custom_list`, starting at `center`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<f64>,
}

fn default_width() -> f64 {
    1.0
}

/// Gaussian tails below this are truncated to zero.
const GAUSSIAN_CUTOFF: f64 = 1e-17;

impl InitialProfile {
    pub fn zero() -> Self {
        Self {
            kind: ProfileKind::Zero,
            amplitude: 0.0,
            width: 1.0,
            center: 0,
            values: Vec::new(),
        }
    }

    pub fn single_site(amplitude: f64, center: i64) -> Self {
        Self {
            kind: ProfileKind::SingleSite,
            amplitude,
            width: 1.0,
            center,
            values: Vec::new(),
        }
    }

    pub fn gaussian(amplitude: f64, width: f64, center: i64) -> Self {
        Self {
            kind: ProfileKind::Gaussian,
            amplitude,
            width,
            center,
            values: Vec::new(),
        }
    }

    pub fn custom(values: Vec<f64>, start: i64) -> Self {
        Self {
            kind: ProfileKind::CustomList,
            amplitude: 0.0,
            width: 1.0,
            center: start,
            values,
        }
    }

    /// Lattice data on the smallest window containing the support, at `t = 0`.
    pub fn state(&self) -> Result<LatticeState> {
        let check_amp = |a: f64| {
            if a.is_finite() && a.abs() < 1.0 {
                Ok(())
            } else {
                Err(Error::InvalidProfile(format!(
                    "amplitude {a} must lie in (-1, 1)"
                )))
            }
        };
        match self.kind {
            ProfileKind::Zero => LatticeState::new(self.center, vec![0.0], 0.0),
            ProfileKind::SingleSite => {
                check_amp(self.amplitude)?;
                LatticeState::new(self.center, vec![self.amplitude], 0.0)
            }
            ProfileKind::Gaussian => {
                check_amp(self.amplitude)?;
                if !(self.width > 0.0 && self.width.is_finite()) {
                    return Err(Error::InvalidProfile(format!(
                        "width {} must be positive",
                        self.width
                    )));
                }
                if self.amplitude == 0.0 {
                    return LatticeState::new(self.center, vec![0.0], 0.0);
                }
                // exp(-x^2/2) < cutoff/|amp| beyond this many widths
                let reach = (2.0 * (self.amplitude.abs() / GAUSSIAN_CUTOFF).ln()).sqrt();
                let half = (reach * self.width).ceil() as i64;
                let values = (-half..=half)
                    .map(|k| {
                        let x = k as f64 / self.width;
                        self.amplitude * (-0.5 * x * x).exp()
                    })
                    .collect();
                Ok(LatticeState::new(self.center - half, values, 0.0)?.trimmed())
            }
            ProfileKind::CustomList => {
                if self.values.is_empty() {
                    return Err(Error::InvalidProfile(
                        "custom_list profile needs at least one value".into(),
                    ));
                }
                LatticeState::new(self.center, self.values.clone(), 0.0)
                    .map_err(|e| Error::InvalidProfile(e.to_string()))
            }
        }
    }
}

/// Right-hand side of the lattice equation with zero padding at the window edges.
pub fn rhs(state: &LatticeState) -> Vec<f64> {
    let mut out = vec![0.0; state.len()];
    rhs_into(&state.values, &mut out);
    out
}

fn rhs_into(q: &[f64], out: &mut [f64]) {
    let len = q.len();
    match len {
        0 => {}
        1 => out[0] = 0.0,
        _ => {
            out[0] = (1.0 - q[0] * q[0]) * q[1];
            for i in 1..len - 1 {
                out[i] = (1.0 - q[i] * q[i]) * (q[i + 1] - q[i - 1]);
            }
            out[len - 1] = -(1.0 - q[len - 1] * q[len - 1]) * q[len - 2];
        }
    }
}

/// `prod_n (1 - q_n^2)`, conserved by the flow.
pub fn conserved_c_inf(state: &LatticeState) -> f64 {
    state.values.iter().map(|q| 1.0 - q * q).product()
}

/// `rho0 = (1 - c_inf)^{1/2}`, a conserved bound on `sup|q_n|`.
pub fn rho0(state: &LatticeState) -> f64 {
    (1.0 - conserved_c_inf(state)).max(0.0).sqrt()
}

/// `sum_n (1 + |n|)^s |q_n|`.
pub fn weighted_norm(state: &LatticeState, s: u32) -> f64 {
    state
        .sites()
        .map(|(n, q)| (1.0 + n.unsigned_abs() as f64).powi(s as i32) * q.abs())
        .sum()
}

/// Half-width of a window centred on the support that keeps a solution
/// launched from compact data away from the edges up to `t_end`.
///
/// Signals travel at speed at most 2; the front is an Airy-type layer of
/// width ~ `t^{1/3}`, so the margin grows accordingly. The outer
/// [`SPILL_FRACTION`] of the `2w + 1` sites at each end stays outside the front.
pub fn window_half_width(support_radius: i64, t_end: f64, margin: f64) -> i64 {
    let front = support_radius as f64 + 2.0 * t_end + 12.0 * t_end.max(1.0).cbrt() + margin;
    ((front + 2.0) / (1.0 - 2.0 * SPILL_FRACTION)).ceil() as i64
}

/// Classical fourth-order Runge-Kutta stepper with reusable scratch space.
#[derive(Clone, Debug, Default)]
pub struct Rk4 {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    stage: Vec<f64>,
}

impl Rk4 {
    pub fn new() -> Self {
        Self::default()
    }

    /// Advances `q` by `h` (negative `h` steps backwards in time).
    /// Returns the largest `|q|` met at any stage point.
    pub fn step(&mut self, q: &mut [f64], h: f64) -> f64 {
        let len = q.len();
        for buf in [
            &mut self.k1,
            &mut self.k2,
            &mut self.k3,
            &mut self.k4,
            &mut self.stage,
        ] {
            buf.resize(len, 0.0);
        }
        let mut sup = 0.0_f64;

        rhs_into(q, &mut self.k1);
        for i in 0..len {
            self.stage[i] = q[i] + 0.5 * h * self.k1[i];
            sup = sup.max(self.stage[i].abs());
        }
        rhs_into(&self.stage, &mut self.k2);
        for i in 0..len {
            self.stage[i] = q[i] + 0.5 * h * self.k2[i];
            sup = sup.max(self.stage[i].abs());
        }
        rhs_into(&self.stage, &mut self.k3);
        for i in 0..len {
            self.stage[i] = q[i] + h * self.k3[i];
            sup = sup.max(self.stage[i].abs());
        }
        rhs_into(&self.stage, &mut self.k4);
        let sixth = h / 6.0;
        for i in 0..len {
            let v = q[i] + sixth * (self.k1[i] + 2.0 * (self.k2[i] + self.k3[i]) + self.k4[i]);
            // far tails underflow; subnormal arithmetic is very slow
            q[i] = if v.abs() < FLUSH_BELOW { 0.0 } else { v };
            sup = sup.max(q[i].abs());
        }
        sup
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorOptions {
    /// Largest `|q|` tolerated in the outer [`SPILL_FRACTION`] of the window.
    pub spill_tol: f64,
    /// Spill is sampled every this many steps and at the final time.
    pub spill_every: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            spill_tol: 1e-10,
            spill_every: 50,
        }
    }
}

/// Integrates to `t_end` with steps no larger than `dt`, using the window of
/// `initial` as the computational domain.
pub fn integrate(initial: &LatticeState, t_end: f64, dt: f64) -> Result<LatticeState> {
    integrate_with(initial, t_end, dt, &IntegratorOptions::default())
}

pub fn integrate_with(
    initial: &LatticeState,
    t_end: f64,
    dt: f64,
    opts: &IntegratorOptions,
) -> Result<LatticeState> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Config(format!("dt must be positive, got {dt}")));
    }
    if !t_end.is_finite() {
        return Err(Error::Config(format!("t_end must be finite, got {t_end}")));
    }
    let span = t_end - initial.t;
    let mut q = initial.values.clone();
    if span == 0.0 {
        return Ok(initial.clone());
    }
    let steps = (span.abs() / dt - 1e-9).ceil().max(1.0) as usize;
    let h = span / steps as f64;
    let bound = rho0(initial) + BOUND_SLACK;
    let edge = ((q.len() as f64) * SPILL_FRACTION).ceil() as usize;

    check_spill(&q, edge, initial.t, opts.spill_tol)?;
    let mut rk = Rk4::new();
    for k in 0..steps {
        let stage_sup = rk.step(&mut q, h);
        let t = initial.t + (k + 1) as f64 * h;
        if !(stage_sup < 1.0) {
            return Err(Error::Blowup { t, sup: stage_sup });
        }
        let sup = sup_abs(&q);
        if sup > bound {
            return Err(Error::BoundViolation {
                t,
                sup,
                rho0: bound - BOUND_SLACK,
            });
        }
        if (k + 1) % opts.spill_every == 0 || k + 1 == steps {
            check_spill(&q, edge, t, opts.spill_tol)?;
        }
    }
    Ok(LatticeState {
        n_min: initial.n_min,
        values: q,
        t: t_end,
    })
}

fn check_spill(q: &[f64], edge: usize, t: f64, tol: f64) -> Result<()> {
    let len = q.len();
    let edge = edge.min(len);
    let spill = sup_abs(&q[..edge]).max(sup_abs(&q[len - edge..]));
    if spill > tol {
        Err(Error::Spill { t, spill, tol })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn padded_single(c: f64, half: i64) -> LatticeState {
        LatticeState::single_site(0, c, half).unwrap()
    }

    #[test]
    fn zero_is_a_fixed_point() {
        let s = LatticeState::zeros(-20, 41);
        assert!(rhs(&s).iter().all(|&d| d == 0.0));
        let out = integrate(&s, 3.0, 0.1).unwrap();
        assert!(out.values().iter().all(|&q| q == 0.0));
        assert_eq!(out.t(), 3.0);
    }

    #[test]
    fn rhs_single_site() {
        let s = padded_single(0.5, 3);
        let d = rhs(&s);
        let at = |n: i64| d[(n - s.n_min()) as usize];
        assert_eq!(at(-1), 0.5);
        assert_eq!(at(0), 0.0);
        assert_eq!(at(1), -0.5);
        assert_eq!(at(2), 0.0);
        assert_eq!(at(-3), 0.0);
    }

    #[test]
    fn c_inf_examples() {
        assert_eq!(conserved_c_inf(&LatticeState::zeros(0, 5)), 1.0);
        let one = padded_single(0.3, 2);
        assert!((conserved_c_inf(&one) - 0.91).abs() < 1e-15);
        let two = LatticeState::new(0, vec![0.3, 0.4], 0.0).unwrap();
        assert!((conserved_c_inf(&two) - 0.7644).abs() < 1e-15);
        assert!((rho0(&one) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn weighted_norm_examples() {
        assert_eq!(weighted_norm(&LatticeState::zeros(-3, 7), 2), 0.0);
        let s0 = padded_single(-0.25, 4);
        assert_eq!(weighted_norm(&s0, 0), 0.25);
        let s2 = LatticeState::new(2, vec![0.25], 0.0).unwrap();
        assert_eq!(weighted_norm(&s2, 1), 0.75);
    }

    #[test]
    fn rejects_supercritical_data() {
        assert!(matches!(
            LatticeState::new(0, vec![0.2, 1.0], 0.0),
            Err(Error::InvalidState(_))
        ));
        assert!(LatticeState::new(0, vec![f64::NAN], 0.0).is_err());
        assert!(InitialProfile::single_site(-1.2, 0).state().is_err());
        assert!(InitialProfile::gaussian(0.3, 0.0, 0).state().is_err());
        assert!(InitialProfile::custom(vec![], 0).state().is_err());
    }

    #[test]
    fn spill_is_detected() {
        let s = padded_single(0.3, 6);
        assert!(matches!(integrate(&s, 10.0, 0.01), Err(Error::Spill { .. })));
    }

    #[test]
    fn bad_step_is_rejected() {
        let s = padded_single(0.3, 10);
        assert!(matches!(integrate(&s, 1.0, 0.0), Err(Error::Config(_))));
        assert!(matches!(integrate(&s, 1.0, -0.1), Err(Error::Config(_))));
    }

    #[test]
    fn huge_step_blows_up() {
        let s = LatticeState::new(-40, (0..81).map(|k| if k == 40 { 0.9 } else { 0.0 }).collect(), 0.0)
            .unwrap();
        let r = integrate(&s, 2.0, 2.0);
        assert!(
            matches!(r, Err(Error::Blowup { .. }) | Err(Error::BoundViolation { .. })),
            "{r:?}"
        );
    }

    #[test]
    fn staggering_flips_odd_sites() {
        let s = LatticeState::new(-1, vec![0.1, 0.2, 0.3], 0.0).unwrap();
        assert_eq!(s.staggered().values(), &[-0.1, 0.2, -0.3]);
    }

    #[test]
    fn gaussian_profile_is_centred_and_trimmed() {
        let s = InitialProfile::gaussian(0.4, 2.0, 5).state().unwrap();
        assert!((s.get(5) - 0.4).abs() < 1e-15);
        assert!((s.get(3) - s.get(7)).abs() < 1e-15);
        assert_eq!(s.support(), Some((s.n_min(), s.n_max())));
        assert!(s.sup_norm() < 1.0);
    }

    #[test]
    fn staggered_data_solves_reversed_flow() {
        let s = LatticeState::new(-30, (0..61).map(|k| if (28..33).contains(&k) { 0.1 * (k - 27) as f64 } else { 0.0 }).collect(), 0.0)
            .unwrap();
        let fwd = integrate(&s, 2.0, 0.01).unwrap();
        let back = integrate(&s.staggered(), -2.0, 0.01).unwrap();
        for (a, b) in fwd.staggered().values().iter().zip(back.values()) {
            assert!((a - b).abs() < 1e-13);
        }
    }
}
