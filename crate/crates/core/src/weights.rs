//! Arc integrals of the density `log(1 - |r|^2)` and the per-point
//! coefficients built from them.
//!
//! Arc conventions (angles of the endpoints, short arcs only):
//!
//! * `delta` jumps on `S1 -> S2` (through `z = 1`) and `S3 -> S4` (through `z = -1`);
//! * `delta_j` integrates over `T_j -> S_j` with `T_1 = T_2 = 1`, `T_3 = T_4 = -1`.
//!
//! With these orientations `delta = delta_1 delta_2 delta_3 delta_4` holds
//! identically, which the tests check at off-circle points.

use std::cell::Cell;
use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::phase::StationarySet;
use crate::quadrature::Quadrature;
use crate::scattering::{Reflection, UnitCirclePoint, MAX_REFLECTION};

/// Short arc of the unit circle from `e^{i start}` sweeping `sweep` radians.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ArcSpec {
    pub start: f64,
    pub sweep: f64,
}

impl ArcSpec {
    pub fn new(start: f64, sweep: f64) -> Result<Self> {
        if !(sweep.abs() > 0.0 && sweep.abs() < PI) {
            return Err(Error::Domain(format!(
                "arc sweep {sweep} must have central angle in (0, pi)"
            )));
        }
        Ok(Self { start, sweep })
    }

    pub fn start_point(&self) -> C64 {
        C64::from_polar(1.0, self.start)
    }

    pub fn end_point(&self) -> C64 {
        C64::from_polar(1.0, self.start + self.sweep)
    }

    /// Arc through `z = 1` from `S1` to `S2`.
    pub fn jump_right(set: &StationarySet) -> Self {
        Self {
            start: set.angle(1),
            sweep: 2.0 * set.theta0,
        }
    }

    /// Arc through `z = -1` from `S3` to `S4`.
    pub fn jump_left(set: &StationarySet) -> Self {
        Self {
            start: set.angle(3),
            sweep: 2.0 * set.theta0,
        }
    }

    /// Arc from `T_j` to `S_j`.
    pub fn to_stationary(set: &StationarySet, j: usize) -> Self {
        let start = if j <= 2 { 0.0 } else { PI };
        Self {
            start,
            sweep: set.angle(j) - start,
        }
    }

    /// Whether `z` lies on the open arc (up to `tol` in modulus and angle).
    fn contains_interior(&self, z: C64, tol: f64) -> bool {
        if (z.norm() - 1.0).abs() > tol {
            return false;
        }
        let rel = (z.arg() - self.start).rem_euclid(2.0 * PI);
        let (lo, hi) = if self.sweep > 0.0 {
            (0.0, self.sweep)
        } else {
            (2.0 * PI + self.sweep, 2.0 * PI)
        };
        rel > lo + tol && rel < hi - tol
    }
}

/// `T_j`.
pub fn anchor(j: usize) -> C64 {
    if j <= 2 {
        C64::new(1.0, 0.0)
    } else {
        C64::new(-1.0, 0.0)
    }
}

fn checked_density<R: Reflection + ?Sized>(r: &R, z: C64) -> Result<f64> {
    let m = r.eval(z).norm();
    if m >= MAX_REFLECTION || !m.is_finite() {
        return Err(Error::ReflectionTooLarge(m));
    }
    Ok((-m * m).ln_1p())
}

/// `log(1 - |r(z)|^2)`.
pub fn log_density<R: Reflection + ?Sized>(r: &R, z: UnitCirclePoint) -> Result<f64> {
    checked_density(r, z.z())
}

/// Tracks the largest `|r|` met inside a quadrature so that an inadmissible
/// reflection coefficient can be reported after the integral returns.
struct DensityGuard<'a, R: ?Sized> {
    r: &'a R,
    worst: Cell<f64>,
}

impl<'a, R: Reflection + ?Sized> DensityGuard<'a, R> {
    fn new(r: &'a R) -> Self {
        Self {
            r,
            worst: Cell::new(0.0),
        }
    }

    fn density(&self, z: C64) -> f64 {
        let m = self.r.eval(z).norm();
        if m >= MAX_REFLECTION || !m.is_finite() {
            self.worst.set(self.worst.get().max(m));
            return 0.0;
        }
        (-m * m).ln_1p()
    }

    fn finish<T>(&self, value: Result<T>) -> Result<T> {
        let w = self.worst.get();
        if w > 0.0 {
            return Err(Error::ReflectionTooLarge(w));
        }
        value
    }
}

/// `(1 / 2 pi i) int_arc density(tau) dtau / (tau - z)`.
pub fn cauchy_arc_integral<D>(density: D, arc: &ArcSpec, z: C64, quad: &Quadrature) -> Result<C64>
where
    D: Fn(C64) -> f64,
{
    if arc.contains_interior(z, 1e-14) {
        return Err(Error::Domain(format!("z = {z} lies on the integration arc")));
    }
    let scale = arc.sweep / (2.0 * PI);
    quad.integrate(
        |u| {
            let tau = C64::from_polar(1.0, arc.start + arc.sweep * u);
            density(tau) * tau / (tau - z) * scale
        },
        0.0,
        1.0,
    )
}

/// As [`cauchy_arc_integral`] at the arc's end point, for a density that
/// vanishes there; panels are refined geometrically toward the end point.
fn cauchy_arc_integral_at_end<D>(density: D, arc: &ArcSpec, quad: &Quadrature) -> Result<C64>
where
    D: Fn(C64) -> f64,
{
    let end = arc.end_point();
    let scale = arc.sweep / (2.0 * PI);
    quad.integrate_graded(
        |u| {
            let tau = C64::from_polar(1.0, arc.start + arc.sweep * u);
            let d = tau - end;
            if d.norm() == 0.0 {
                C64::new(0.0, 0.0)
            } else {
                density(tau) * tau / d * scale
            }
        },
        0.0,
        1.0,
    )
}

/// `delta(z) = exp(-(1/2 pi i)(int_{S1}^{S2} + int_{S3}^{S4}) log(1-|r|^2) dtau/(tau - z))`.
pub fn delta_at<R: Reflection + ?Sized>(
    r: &R,
    set: &StationarySet,
    z: C64,
    quad: &Quadrature,
) -> Result<C64> {
    let guard = DensityGuard::new(r);
    let value = (|| {
        let right = cauchy_arc_integral(|tau| guard.density(tau), &ArcSpec::jump_right(set), z, quad)?;
        let left = cauchy_arc_integral(|tau| guard.density(tau), &ArcSpec::jump_left(set), z, quad)?;
        Ok((-(right + left)).exp())
    })();
    guard.finish(value)
}

/// `delta_j(z) = exp((-1)^{j-1} (1/2 pi i) int_{T_j}^{S_j} log(1-|r|^2) dtau/(tau - z))`.
pub fn delta_j_at<R: Reflection + ?Sized>(
    r: &R,
    set: &StationarySet,
    j: usize,
    z: C64,
    quad: &Quadrature,
) -> Result<C64> {
    let guard = DensityGuard::new(r);
    let value = cauchy_arc_integral(|tau| guard.density(tau), &ArcSpec::to_stationary(set, j), z, quad)
        .map(|c| (orientation(j) * c).exp());
    guard.finish(value)
}

/// `(-1)^{j-1}`.
fn orientation(j: usize) -> f64 {
    if j % 2 == 1 {
        1.0
    } else {
        -1.0
    }
}

/// `nu_j = -(1/2 pi) log(1 - |r(S_j)|^2)`.
pub fn nu_at<R: Reflection + ?Sized>(r: &R, set: &StationarySet, j: usize) -> Result<f64> {
    Ok(-checked_density(r, set.s(j))? / (2.0 * PI))
}

/// `chi_j(S_j) = (1/2 pi i) int_{T_j}^{S_j} log[(1-|r|^2)/(1-|r(S_j)|^2)] dtau/(tau - S_j)`.
pub fn chi_at_stationary<R: Reflection + ?Sized>(
    r: &R,
    set: &StationarySet,
    j: usize,
    quad: &Quadrature,
) -> Result<C64> {
    let at_s = checked_density(r, set.s(j))?;
    let guard = DensityGuard::new(r);
    let value = cauchy_arc_integral_at_end(
        |tau| guard.density(tau) - at_s,
        &ArcSpec::to_stationary(set, j),
        quad,
    );
    guard.finish(value)
}

/// `hat_delta_j(S_j) = prod_{k != j} delta_k(S_j)`.
pub fn hat_delta_at_stationary<R: Reflection + ?Sized>(
    r: &R,
    set: &StationarySet,
    j: usize,
    quad: &Quadrature,
) -> Result<C64> {
    let mut prod = C64::new(1.0, 0.0);
    for k in (1..=4).filter(|&k| k != j) {
        prod *= delta_j_at(r, set, k, set.s(j), quad)?;
    }
    Ok(prod)
}

/// `x^{i nu}` on the principal branch (cut along the negative reals).
pub fn imaginary_power(x: C64, nu: f64) -> C64 {
    (C64::new(0.0, nu) * x.ln()).exp()
}

/// `delta_j^0 = S_j^n (beta_j/(S_j - T_j))^{(-1)^{j-1} i nu_j}
///   exp[(-1)^{j-1} chi_j(S_j) - (t/2)(S_j^2 - S_j^{-2})] hat_delta_j(S_j)`.
pub fn delta_j0(set: &StationarySet, j: usize, nu: f64, chi: C64, hat_delta: C64) -> C64 {
    let s = set.s(j);
    let ray = &set.ray;
    let sign = orientation(j);
    let s_pow_n = C64::from_polar(1.0, ray.n as f64 * s.arg());
    let local = imaginary_power(set.beta(j) / (s - anchor(j)), sign * nu);
    // S^2 - S^{-2} = 2i Im(S^2) on the circle
    let oscillation = C64::from_polar(1.0, -ray.t * (s * s).im);
    s_pow_n * local * (sign * chi).exp() * oscillation * hat_delta
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoefficientSet {
    pub nu: [f64; 4],
    #[serde(serialize_with = "ser_c64_arr")]
    pub chi_at_s: [C64; 4],
    #[serde(serialize_with = "ser_c64_arr")]
    pub hat_delta_at_s: [C64; 4],
    #[serde(serialize_with = "ser_c64_arr")]
    pub delta_j0: [C64; 4],
    #[serde(serialize_with = "crate::scattering::ser_c64")]
    pub delta_at_zero: C64,
    /// `r(S_j)`.
    #[serde(serialize_with = "ser_c64_arr")]
    pub r_at_s: [C64; 4],
}

fn ser_c64_arr<S: serde::Serializer>(v: &[C64; 4], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(4))?;
    for z in v {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

impl CoefficientSet {
    pub fn compute<R: Reflection + ?Sized>(
        r: &R,
        set: &StationarySet,
        quad: &Quadrature,
    ) -> Result<Self> {
        let mut out = CoefficientSet {
            nu: [0.0; 4],
            chi_at_s: [C64::new(0.0, 0.0); 4],
            hat_delta_at_s: [C64::new(1.0, 0.0); 4],
            delta_j0: [C64::new(0.0, 0.0); 4],
            delta_at_zero: delta_at(r, set, C64::new(0.0, 0.0), quad)?,
            r_at_s: [C64::new(0.0, 0.0); 4],
        };
        for j in 1..=4 {
            let i = j - 1;
            out.r_at_s[i] = r.eval(set.s(j));
            out.nu[i] = nu_at(r, set, j)?;
            out.chi_at_s[i] = chi_at_stationary(r, set, j, quad)?;
            out.hat_delta_at_s[i] = hat_delta_at_stationary(r, set, j, quad)?;
            out.delta_j0[i] = delta_j0(set, j, out.nu[i], out.chi_at_s[i], out.hat_delta_at_s[i]);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::{stationary_points, RayParams};

    fn set(n: i64, t: f64) -> StationarySet {
        stationary_points(&RayParams::new(n, t).unwrap()).unwrap()
    }

    fn const_r(c: f64) -> impl Fn(C64) -> C64 + Sync {
        move |z: C64| c * z
    }

    #[test]
    fn log_density_examples() {
        let p = UnitCirclePoint::from_angle(0.4);
        assert_eq!(log_density(&|_z: C64| C64::new(0.0, 0.0), p).unwrap(), 0.0);
        let v = log_density(&|_z: C64| C64::new(0.0, 0.3), p).unwrap();
        assert!((v - 0.91f64.ln()).abs() < 1e-15);
        let m = (1.0 - (-2.0 * PI).exp()).sqrt();
        let v = log_density(&move |_z: C64| C64::new(m, 0.0), p).unwrap();
        assert!((v + 2.0 * PI).abs() < 1e-12);
        assert!(log_density(&|_z: C64| C64::new(1.0, 0.0), p).is_err());
    }

    #[test]
    fn cauchy_examples() {
        let quad = Quadrature::default();
        let arc = ArcSpec::new(-PI / 4.0, PI / 2.0).unwrap();
        let v = cauchy_arc_integral(|_| 1.0, &arc, C64::new(0.0, 0.0), &quad).unwrap();
        assert!((v - 0.25).norm() < 1e-13);
        let z = cauchy_arc_integral(|_| 0.0, &arc, C64::new(0.3, 0.1), &quad).unwrap();
        assert_eq!(z, C64::new(0.0, 0.0));
        assert!(cauchy_arc_integral(|_| 1.0, &arc, C64::new(1.0, 0.0), &quad).is_err());
        assert!(ArcSpec::new(0.0, 4.0).is_err());
    }

    #[test]
    fn cauchy_matches_closed_form_log() {
        // (1/2 pi i) int dtau/(tau - z) = (1/2 pi i) Log((b - z)/(a - z)) for z off the arc
        let quad = Quadrature::default();
        let arc = ArcSpec::new(-0.7, 1.9).unwrap();
        let z = C64::new(3.0, 0.0);
        let v = cauchy_arc_integral(|_| 1.0, &arc, z, &quad).unwrap();
        let exact = ((arc.end_point() - z) / (arc.start_point() - z)).ln() / C64::new(0.0, 2.0 * PI);
        assert!((v - exact).norm() < 1e-13);
    }

    #[test]
    fn zero_reflection_is_trivial() {
        let s = set(13, 20.0);
        let quad = Quadrature::default();
        let r0 = |_z: C64| C64::new(0.0, 0.0);
        let c = CoefficientSet::compute(&r0, &s, &quad).unwrap();
        assert_eq!(c.delta_at_zero, C64::new(1.0, 0.0));
        for j in 0..4 {
            assert_eq!(c.nu[j], 0.0);
            assert_eq!(c.chi_at_s[j], C64::new(0.0, 0.0));
            assert_eq!(c.hat_delta_at_s[j], C64::new(1.0, 0.0));
            assert!((c.delta_j0[j].norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn constant_modulus_closed_forms() {
        let cval = 0.3;
        let quad = Quadrature::default();
        let s = set(0, 50.0);
        let r = const_r(cval);
        let d0 = delta_at(&r, &s, C64::new(0.0, 0.0), &quad).unwrap();
        assert!((d0 - (1.0 - cval * cval).powf(-0.5)).norm() < 1e-12);
        for j in 1..=4 {
            assert!(chi_at_stationary(&r, &s, j, &quad).unwrap().norm() < 1e-12);
            let nu = nu_at(&r, &s, j).unwrap();
            assert!((nu + 0.91f64.ln() / (2.0 * PI)).abs() < 1e-15);
        }
    }

    #[test]
    fn delta_decays_to_one() {
        let quad = Quadrature::default();
        let s = set(7, 20.0);
        let r = const_r(0.4);
        let e50 = (delta_at(&r, &s, C64::new(50.0, 3.0), &quad).unwrap() - 1.0).norm();
        let e500 = (delta_at(&r, &s, C64::new(500.0, 30.0), &quad).unwrap() - 1.0).norm();
        assert!(e50 < 1e-2 && e500 < e50);
    }

    fn two_site_r() -> crate::scattering::LatticeReflection {
        let q = crate::lattice::LatticeState::new(0, vec![0.35, -0.2], 0.0).unwrap();
        crate::scattering::LatticeReflection::new(&q)
    }

    #[test]
    fn product_identity_off_circle() {
        let quad = Quadrature::default();
        let s = set(-9, 25.0);
        let r = two_site_r();
        for z in [C64::new(2.0, 0.0), C64::new(0.0, 0.3), C64::new(-1.5, 1.5), C64::new(0.1, -0.6)] {
            let d = delta_at(&r, &s, z, &quad).unwrap();
            let prod: C64 = (1..=4).map(|j| delta_j_at(&r, &s, j, z, &quad).unwrap()).product();
            assert!((d - prod).norm() < 1e-10, "{z}: {d} vs {prod}");
            let hat = (1..=4)
                .filter(|&k| k != 1)
                .map(|k| delta_j_at(&r, &s, k, z, &quad).unwrap())
                .product::<C64>();
            assert!((delta_j_at(&r, &s, 1, z, &quad).unwrap() * hat - d).norm() < 1e-9);
        }
    }

    #[test]
    fn chi_self_convergence() {
        let s = set(11, 30.0);
        let r = two_site_r();
        for j in 1..=4 {
            let a = chi_at_stationary(&r, &s, j, &Quadrature::with_tol(1e-10)).unwrap();
            let b = chi_at_stationary(&r, &s, j, &Quadrature::with_tol(1e-13)).unwrap();
            assert!((a - b).norm() < 1e-9);
            assert!(a.norm() > 1e-4, "two-site data should give a nonzero chi");
        }
    }

    #[test]
    fn conjugation_pairing_for_real_data() {
        let quad = Quadrature::default();
        let s = set(5, 17.0);
        let r = two_site_r();
        let c = CoefficientSet::compute(&r, &s, &quad).unwrap();
        assert!((c.nu[0] - c.nu[1]).abs() < 1e-14);
        assert!((c.nu[2] - c.nu[3]).abs() < 1e-14);
        assert!((c.hat_delta_at_s[1] - c.hat_delta_at_s[0].conj()).norm() < 1e-10);
        assert!(c.delta_at_zero.im.abs() < 1e-12 && c.delta_at_zero.re > 0.0);
    }

    #[test]
    fn delta_j0_modulus_decomposition() {
        let quad = Quadrature::default();
        let s = set(8, 21.0);
        let r = two_site_r();
        let c = CoefficientSet::compute(&r, &s, &quad).unwrap();
        for j in 1..=4 {
            let i = j - 1;
            let sign = orientation(j);
            let w = s.beta(j) / (s.s(j) - anchor(j));
            let expect = (-c.nu[i] * sign * w.arg() + sign * c.chi_at_s[i].re).exp()
                * c.hat_delta_at_s[i].norm();
            assert!((c.delta_j0[i].norm() - expect).abs() < 1e-10);
        }
    }

    #[test]
    fn inadmissible_reflection_is_reported() {
        let quad = Quadrature::default();
        let s = set(0, 10.0);
        let r = |_z: C64| C64::new(1.0, 0.0);
        assert!(matches!(
            delta_at(&r, &s, C64::new(0.0, 0.0), &quad),
            Err(Error::ReflectionTooLarge(_))
        ));
        assert!(matches!(nu_at(&r, &s, 2), Err(Error::ReflectionTooLarge(_))));
    }
}
