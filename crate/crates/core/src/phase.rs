//! The phase `phi(z) = (t/2)(z^2 - z^{-2}) - n Log z`, its four stationary
//! points on the unit circle and the local scalings used at each of them.
//!
//! Stationary points are labelled `S1 = A`, `S2 = conj(A)`, `S3 = -A`,
//! `S4 = -conj(A)` with `A = (sqrt(2 + v) - i sqrt(2 - v)) / 2`, `v = n/t`.
//! Index `j` runs over `1..=4` everywhere in this crate.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_V_MAX: f64 = 1.8;
pub const DEFAULT_MERGE_MARGIN: f64 = 0.05;

/// `(-1)^j`.
#[inline]
pub fn parity(j: usize) -> f64 {
    if j % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RayParams {
    pub n: i64,
    pub t: f64,
    pub v: f64,
}

impl RayParams {
    pub fn new(n: i64, t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Domain(format!("t = {t} must be positive")));
        }
        Ok(Self {
            n,
            t,
            v: n as f64 / t,
        })
    }

    /// `4t^2 - n^2`.
    pub fn discriminant(&self) -> f64 {
        4.0 * self.t * self.t - (self.n as f64).powi(2)
    }
}

/// `phi(z)` on the principal branch of `Log` (cut along the negative reals).
pub fn phase_at(z: C64, ray: &RayParams) -> Result<C64> {
    if z.norm() == 0.0 {
        return Err(Error::Domain("phi is singular at z = 0".into()));
    }
    let z2 = z * z;
    Ok(0.5 * ray.t * (z2 - z2.inv()) - ray.n as f64 * z.ln())
}

/// `phi'(z) = t (z + z^{-3}) - n / z`.
pub fn phase_derivative(z: C64, ray: &RayParams) -> C64 {
    ray.t * (z + z.powi(-3)) - ray.n as f64 / z
}

/// `phi''(z) = t (1 - 3 z^{-4}) + n / z^2`.
pub fn phase_second_derivative_at(z: C64, ray: &RayParams) -> C64 {
    ray.t * (1.0 - 3.0 * z.powi(-4)) + ray.n as f64 / (z * z)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StationarySet {
    pub ray: RayParams,
    /// `S_1 .. S_4`.
    pub points: [C64; 4],
    /// `theta0 = -arg A`, in `(0, pi/2)`.
    pub theta0: f64,
    pub phi_dd: [C64; 4],
    pub beta: [C64; 4],
}

impl StationarySet {
    pub fn s(&self, j: usize) -> C64 {
        self.points[j - 1]
    }

    pub fn beta(&self, j: usize) -> C64 {
        self.beta[j - 1]
    }

    pub fn phi_dd(&self, j: usize) -> C64 {
        self.phi_dd[j - 1]
    }

    /// Angle of `S_j` as used for arc parametrisation: `S1 = -theta0`,
    /// `S2 = theta0`, `S3 = pi - theta0`, `S4 = pi + theta0`.
    pub fn angle(&self, j: usize) -> f64 {
        use std::f64::consts::PI;
        match j {
            1 => -self.theta0,
            2 => self.theta0,
            3 => PI - self.theta0,
            4 => PI + self.theta0,
            _ => panic!("stationary index {j} out of range 1..=4"),
        }
    }

    /// Largest `|phi'(S_j)|`.
    pub fn derivative_residual(&self) -> f64 {
        self.points
            .iter()
            .map(|&s| phase_derivative(s, &self.ray).norm())
            .fold(0.0, f64::max)
    }
}

/// Stationary points of `phi` for `|v| < 2 - margin`.
pub fn stationary_points(ray: &RayParams) -> Result<StationarySet> {
    stationary_points_with_margin(ray, DEFAULT_MERGE_MARGIN)
}

pub fn stationary_points_with_margin(ray: &RayParams, margin: f64) -> Result<StationarySet> {
    let v = ray.v;
    if !(2.0 - v.abs() >= margin) {
        return Err(Error::MergingPoints { v, margin });
    }
    let (sp, sm) = ((2.0 + v).sqrt(), (2.0 - v).sqrt());
    let theta0 = sm.atan2(sp);
    let a = C64::from_polar(1.0, -theta0);
    let points = [a, a.conj(), -a, -a.conj()];
    let mut phi_dd = [C64::new(0.0, 0.0); 4];
    let mut beta = [C64::new(0.0, 0.0); 4];
    for j in 1..=4 {
        phi_dd[j - 1] = phase_second_derivative(ray, points[j - 1], j);
        beta[j - 1] = scaling_factor(ray, points[j - 1], j);
    }
    Ok(StationarySet {
        ray: *ray,
        points,
        theta0,
        phi_dd,
        beta,
    })
}

/// `phi''(S_j) = (-1)^j 2i S_j^{-2} sqrt(4t^2 - n^2)`.
pub fn phase_second_derivative(ray: &RayParams, s_j: C64, j: usize) -> C64 {
    parity(j) * 2.0 * C64::i() * s_j.powi(-2) * ray.discriminant().sqrt()
}

/// `beta_j = (1/2) (4t^2 - n^2)^{-1/4} i S_j (-1)^j`, so that
/// `phi''(S_j) beta_j^2 = (-1)^{j+1} i / 2`.
pub fn scaling_factor(ray: &RayParams, s_j: C64, j: usize) -> C64 {
    0.5 * ray.discriminant().powf(-0.25) * C64::i() * s_j * parity(j)
}
