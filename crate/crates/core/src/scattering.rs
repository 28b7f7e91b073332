//! Direct scattering for the lattice spectral problem.
//!
//! The reduced Jost functions obey
//!
//! ```text
//! Y_{n+1} = (I + z^{-s3} Qt_n) Y_n,   Qt_n = [[0, q_n z^{-2n}], [q_n z^{2n}, 0]]
//! ```
//!
//! at `t = 0`, with `Y^(-) -> I` as `n -> -inf` and `Y^(+) -> I` as
//! `n -> +inf`. For compactly supported data both are finite products of
//! one-step transfer matrices, so `a(z)`, `b(z)` and `r = b / a` are exact up
//! to rounding.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{conserved_c_inf, LatticeState};
use crate::mat2::{det_cols, Mat2};

/// Tolerance on `|z| = 1` for operations restricted to the unit circle.
pub const CIRCLE_TOL: f64 = 1e-12;

/// Largest admissible `|r|`.
pub const MAX_REFLECTION: f64 = 1.0 - 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UnitCirclePoint {
    theta: f64,
    #[serde(skip)]
    z: C64,
}

impl UnitCirclePoint {
    /// The point `e^{i theta}`, with `theta` reduced to `(-pi, pi]`.
    pub fn from_angle(theta: f64) -> Self {
        let mut th = theta.rem_euclid(2.0 * PI);
        if th > PI {
            th -= 2.0 * PI;
        }
        Self {
            theta: th,
            z: C64::from_polar(1.0, th),
        }
    }

    pub fn from_complex(z: C64) -> Result<Self> {
        check_on_circle(z)?;
        Ok(Self::from_angle(z.arg()))
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn z(&self) -> C64 {
        self.z
    }
}

fn check_on_circle(z: C64) -> Result<()> {
    if (z.norm() - 1.0).abs() > CIRCLE_TOL {
        Err(Error::Domain(format!("|z| = {} is not on the unit circle", z.norm())))
    } else {
        Ok(())
    }
}

/// `z^{-s3} Qt_n` at `t = 0`, the increment of one transfer step.
pub fn reduced_potential(q: &LatticeState, n: i64, z: C64) -> Result<Mat2> {
    check_on_circle(z)?;
    Ok(step_increment(q.get(n), n, z))
}

fn step_increment(qn: f64, n: i64, z: C64) -> Mat2 {
    if qn == 0.0 {
        return Mat2::ZERO;
    }
    let up = z.powi(2 * n as i32 + 1);
    Mat2::new(C64::new(0.0, 0.0), qn / up, qn * up, C64::new(0.0, 0.0))
}

fn transfer(qn: f64, n: i64, z: C64) -> Mat2 {
    Mat2::IDENTITY + step_increment(qn, n, z)
}

/// Left and right Jost matrices at a common site.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JostPair {
    pub y_minus: Mat2,
    pub y_plus: Mat2,
    pub at_site: i64,
}

/// `Y^(-)_{n_stop}`: forward recursion from the identity left of the window.
pub fn jost_minus(q: &LatticeState, z: UnitCirclePoint, n_stop: i64) -> Mat2 {
    jost_minus_general(q, z.z(), n_stop)
}

fn jost_minus_general(q: &LatticeState, z: C64, n_stop: i64) -> Mat2 {
    let mut y = Mat2::IDENTITY;
    let hi = n_stop.min(q.n_max() + 1);
    for k in q.n_min()..hi {
        let qk = q.get(k);
        if qk != 0.0 {
            y = transfer(qk, k, z) * y;
        }
    }
    y
}

/// `Y^(+)_{n_stop}`: backward recursion from the identity right of the window.
pub fn jost_plus(q: &LatticeState, z: UnitCirclePoint, n_stop: i64) -> Result<Mat2> {
    jost_plus_general(q, z.z(), n_stop)
}

fn jost_plus_general(q: &LatticeState, z: C64, n_stop: i64) -> Result<Mat2> {
    let mut y = Mat2::IDENTITY;
    let lo = n_stop.max(q.n_min());
    for k in (lo..=q.n_max()).rev() {
        let qk = q.get(k);
        if qk == 0.0 {
            continue;
        }
        // det(I + z^{-s3} Qt_k) = 1 - q_k^2
        if (1.0 - qk * qk).abs() < f64::EPSILON {
            return Err(Error::SingularStep { site: k });
        }
        let inv = transfer(qk, k, z)
            .inverse()
            .ok_or(Error::SingularStep { site: k })?;
        y = inv * y;
    }
    Ok(y)
}

pub fn jost_pair(q: &LatticeState, z: UnitCirclePoint, site: i64) -> Result<JostPair> {
    Ok(JostPair {
        y_minus: jost_minus(q, z, site),
        y_plus: jost_plus(q, z, site)?,
        at_site: site,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScatteringData {
    #[serde(serialize_with = "ser_c64")]
    pub a: C64,
    #[serde(serialize_with = "ser_c64")]
    pub b: C64,
    #[serde(serialize_with = "ser_c64")]
    pub r: C64,
    pub at: UnitCirclePoint,
    pub c_inf: f64,
}

pub(crate) fn ser_c64<S: serde::Serializer>(z: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

fn coefficients_from_pair(pair: &JostPair) -> (C64, C64) {
    let det_plus = pair.y_plus.det();
    let a = det_cols(pair.y_minus.col(0), pair.y_plus.col(1)) / det_plus;
    let b = det_cols(pair.y_plus.col(0), pair.y_minus.col(0)) / det_plus;
    (a, b)
}

/// Site one past the right edge of the support, where `Y^(+) = I`.
fn evaluation_site(q: &LatticeState) -> i64 {
    q.support().map_or(q.n_min(), |(_, hi)| hi + 1)
}

/// `a(z)`, `b(z)` and `r(z)` on the unit circle.
pub fn scattering_coefficients(q: &LatticeState, z: UnitCirclePoint) -> Result<ScatteringData> {
    scattering_coefficients_at_site(q, z, evaluation_site(q))
}

/// Same as [`scattering_coefficients`] but from the Jost pair at `site`.
/// The result does not depend on `site` beyond rounding.
pub fn scattering_coefficients_at_site(
    q: &LatticeState,
    z: UnitCirclePoint,
    site: i64,
) -> Result<ScatteringData> {
    let pair = jost_pair(q, z, site)?;
    let (a, b) = coefficients_from_pair(&pair);
    Ok(ScatteringData {
        a,
        b,
        r: b / a,
        at: z,
        c_inf: conserved_c_inf(q),
    })
}

/// `a(z)` and `b(z)` from the same recursions at an arbitrary nonzero `z`.
/// Off the circle these are the analytic continuations used for probing
/// `a(z) -> 1` as `z -> infinity`.
pub fn coefficients_off_circle(q: &LatticeState, z: C64) -> Result<(C64, C64)> {
    if z.norm() == 0.0 {
        return Err(Error::Domain("z = 0".into()));
    }
    let site = evaluation_site(q);
    let pair = JostPair {
        y_minus: jost_minus_general(q, z, site),
        y_plus: jost_plus_general(q, z, site)?,
        at_site: site,
    };
    Ok(coefficients_from_pair(&pair))
}

/// Point evaluator for a reflection coefficient on the unit circle.
pub trait Reflection: Sync {
    fn eval(&self, z: C64) -> C64;
}

impl<F> Reflection for F
where
    F: Fn(C64) -> C64 + Sync,
{
    fn eval(&self, z: C64) -> C64 {
        self(z)
    }
}

/// On-demand reflection coefficient of compactly supported lattice data.
#[derive(Clone, Debug)]
pub struct LatticeReflection {
    data: LatticeState,
    site: i64,
}

impl LatticeReflection {
    pub fn new(q: &LatticeState) -> Self {
        let data = q.trimmed();
        let site = evaluation_site(&data);
        Self { data, site }
    }

    pub fn data(&self) -> &LatticeState {
        &self.data
    }
}

impl Reflection for LatticeReflection {
    fn eval(&self, z: C64) -> C64 {
        // Y^(+) = I at the evaluation site, so a = Y^(-)_11 and b = Y^(-)_21.
        let y = jost_minus_general(&self.data, z, self.site);
        y.get(1, 0) / y.get(0, 0)
    }
}

/// `r` sampled at `size` equally spaced angles `theta_k = -pi + 2 pi k / size`.
#[derive(Clone, Debug, Serialize)]
pub struct ReflectionGrid {
    pub points: Vec<UnitCirclePoint>,
    #[serde(serialize_with = "ser_c64_vec")]
    pub values: Vec<C64>,
    pub max_abs: f64,
}

fn ser_c64_vec<S: serde::Serializer>(v: &[C64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

pub fn reflection_grid(q: &LatticeState, size: usize) -> Result<ReflectionGrid> {
    if size < 64 || !size.is_power_of_two() {
        return Err(Error::Config(format!(
            "grid size must be a power of two >= 64, got {size}"
        )));
    }
    let refl = LatticeReflection::new(q);
    let points: Vec<_> = (0..size)
        .map(|k| UnitCirclePoint::from_angle(-PI + 2.0 * PI * k as f64 / size as f64))
        .collect();
    let values: Vec<C64> = points.iter().map(|p| refl.eval(p.z())).collect();
    let max_abs = values.iter().fold(0.0_f64, |m, r| m.max(r.norm()));
    if max_abs >= MAX_REFLECTION {
        return Err(Error::ReflectionTooLarge(max_abs));
    }
    Ok(ReflectionGrid {
        points,
        values,
        max_abs,
    })
}

impl ReflectionGrid {
    /// Trigonometric interpolant through the samples, evaluated at `theta`.
    pub fn interpolate(&self, theta: f64) -> C64 {
        let n = self.values.len();
        let half = (n / 2) as i64;
        let mut acc = C64::new(0.0, 0.0);
        // coefficient c_m = (1/n) sum_k r_k e^{-i m theta_k}; symmetric Nyquist split
        for m in -half..=half {
            let weight = if m.abs() == half { 0.5 } else { 1.0 };
            let mut c = C64::new(0.0, 0.0);
            for (p, r) in self.points.iter().zip(&self.values) {
                c += r * C64::from_polar(1.0, -(m as f64) * p.theta());
            }
            acc += weight * c * C64::from_polar(1.0, m as f64 * theta);
        }
        acc / n as f64
    }
}

impl Reflection for ReflectionGrid {
    fn eval(&self, z: C64) -> C64 {
        self.interpolate(z.arg())
    }
}
