//! Parabolic-cylinder model entries and the leading-order long-time value
//! of the lattice solution inside the light cone.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::gamma;
use crate::lattice::LatticeState;
use crate::phase::{parity, stationary_points_with_margin, RayParams, StationarySet, DEFAULT_MERGE_MARGIN};
use crate::quadrature::Quadrature;
use crate::scattering::{LatticeReflection, Reflection};
use crate::weights::CoefficientSet;

/// Phase convention for the model entry `(m_1^j)_{12}`.
///
/// `PaperPop1` uses `e^{i pi/4}` for odd `j` and `e^{-i pi/4}` for even `j`;
/// `PaperFinal` uses `e^{-i pi/4}` for every cross. Only the first pairs
/// conjugate crosses correctly for real data and is the default.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignConvention {
    #[default]
    PaperPop1,
    PaperFinal,
}

impl SignConvention {
    pub const ALL: [SignConvention; 2] = [SignConvention::PaperPop1, SignConvention::PaperFinal];

    pub fn name(&self) -> &'static str {
        match self {
            SignConvention::PaperPop1 => "paper_pop1",
            SignConvention::PaperFinal => "paper_final",
        }
    }
}

impl std::str::FromStr for SignConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper_pop1" => Ok(SignConvention::PaperPop1),
            "paper_final" => Ok(SignConvention::PaperFinal),
            _ => Err(Error::Config(format!("unknown sign convention {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CrossSolution {
    pub j: usize,
    pub nu: f64,
    #[serde(serialize_with = "crate::scattering::ser_c64")]
    pub r_at_s: C64,
    #[serde(serialize_with = "crate::scattering::ser_c64")]
    pub m1_12: C64,
    pub sign_convention: SignConvention,
}

/// `(m_1^j)_{12}` from `nu_j`, `r(S_j)`; zero when `r(S_j) = 0`.
pub fn m1_entry(nu: f64, r_at_s: C64, j: usize, convention: SignConvention) -> Result<C64> {
    if r_at_s.norm() == 0.0 || nu <= 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    let odd = j % 2 == 1;
    let common = (2.0 * PI).sqrt() * (-PI * nu / 2.0).exp();
    let arg = C64::new(0.0, parity(j) * nu);
    let (sign, quarter) = match (convention, odd) {
        (SignConvention::PaperPop1, true) => (1.0, PI / 4.0),
        (SignConvention::PaperPop1, false) => (-1.0, -PI / 4.0),
        (SignConvention::PaperFinal, true) => (1.0, -PI / 4.0),
        (SignConvention::PaperFinal, false) => (-1.0, -PI / 4.0),
    };
    Ok(sign * C64::i() * C64::from_polar(common, quarter) / (r_at_s * gamma(arg)?))
}

pub fn cross_solutions(coeffs: &CoefficientSet, convention: SignConvention) -> Result<[CrossSolution; 4]> {
    let mut out = [CrossSolution {
        j: 0,
        nu: 0.0,
        r_at_s: C64::new(0.0, 0.0),
        m1_12: C64::new(0.0, 0.0),
        sign_convention: convention,
    }; 4];
    for j in 1..=4 {
        let (nu, r) = (coeffs.nu[j - 1], coeffs.r_at_s[j - 1]);
        out[j - 1] = CrossSolution {
            j,
            nu,
            r_at_s: r,
            m1_12: m1_entry(nu, r, j, convention)?,
            sign_convention: convention,
        };
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymptoticResult {
    pub n: i64,
    pub t: f64,
    pub q_asym: f64,
    /// `|Im|` of the leading-order sum.
    pub imag_residual: f64,
    /// `beta_j S_j^{-2} (delta_j^0)^2 (m_1^j)_{12}`, before division by `delta(0)`.
    #[serde(serialize_with = "ser_c64_4")]
    pub contributions: [C64; 4],
    #[serde(serialize_with = "crate::scattering::ser_c64")]
    pub delta_at_zero: C64,
    /// `sum_j |contribution_j| / |delta(0)|`, the size of the leading term.
    pub envelope: f64,
    pub nu: [f64; 4],
    pub sign_convention: SignConvention,
}

fn ser_c64_4<S: serde::Serializer>(v: &[C64; 4], s: S) -> std::result::Result<S::Ok, S::Error> {
    let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
    serde::Serialize::serialize(&pairs, s)
}

impl AsymptoticResult {
    /// The complex leading-order sum.
    pub fn sum(&self) -> C64 {
        self.contributions.iter().fold(C64::new(0.0, 0.0), |a, c| a + c) / self.delta_at_zero
    }
}

/// Residual allowed for `Im` of the leading sum: `10 cal log t / t`.
pub fn realness_threshold(t: f64, calibration: f64) -> f64 {
    10.0 * calibration * t.ln().max(1.0) / t
}

/// `Re[delta(0)^{-1} sum_j beta_j S_j^{-2} (delta_j^0)^2 (m_1^j)_{12}]`.
///
/// Fails with [`Error::Convention`] when the imaginary part exceeds
/// [`realness_threshold`], unless `calibration` is `None`.
pub fn leading_term(
    set: &StationarySet,
    coeffs: &CoefficientSet,
    crosses: &[CrossSolution; 4],
    calibration: Option<f64>,
) -> Result<AsymptoticResult> {
    let convention = crosses[0].sign_convention;
    if crosses.iter().any(|c| c.sign_convention != convention) {
        return Err(Error::Config("crosses computed under mixed sign conventions".into()));
    }
    let mut contributions = [C64::new(0.0, 0.0); 4];
    for j in 1..=4 {
        let d = coeffs.delta_j0[j - 1];
        contributions[j - 1] = set.beta(j) * set.s(j).powi(-2) * d * d * crosses[j - 1].m1_12;
    }
    let d0 = coeffs.delta_at_zero;
    let total = contributions.iter().fold(C64::new(0.0, 0.0), |a, c| a + c) / d0;
    let envelope = contributions.iter().map(|c| c.norm()).sum::<f64>() / d0.norm();
    let imag_residual = total.im.abs();
    if let Some(cal) = calibration {
        let threshold = realness_threshold(set.ray.t, cal);
        if imag_residual > threshold {
            return Err(Error::Convention {
                residual: imag_residual,
                threshold,
            });
        }
    }
    Ok(AsymptoticResult {
        n: set.ray.n,
        t: set.ray.t,
        q_asym: total.re,
        imag_residual,
        contributions,
        delta_at_zero: d0,
        envelope,
        nu: coeffs.nu,
        sign_convention: convention,
    })
}

/// The leading-order formula evaluated for reflection coefficient `r` on
/// the ray `(n, t)` exactly as written, with no lattice bookkeeping.
pub fn formula<R: Reflection + ?Sized>(
    r: &R,
    ray: &RayParams,
    convention: SignConvention,
    quad: &Quadrature,
    calibration: Option<f64>,
) -> Result<AsymptoticResult> {
    let set = stationary_points_with_margin(ray, DEFAULT_MERGE_MARGIN)?;
    let coeffs = CoefficientSet::compute(r, &set, quad)?;
    let crosses = cross_solutions(&coeffs, convention)?;
    leading_term(&set, &coeffs, &crosses, calibration)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Oscillation {
    pub amplitude: f64,
    /// `arg S_j`.
    pub theta: f64,
    /// `Im S_j^2`.
    pub kappa: f64,
    /// `d(arg contribution_j)/dt` at fixed `n`.
    pub phase_slope_t: f64,
    /// Coefficient of `log t` in `arg contribution_j`.
    pub phase_slope_logt: f64,
}

/// Splits contribution `j` as `amplitude exp(i(2n theta_j - 2 kappa_j t
/// + (-1)^j nu_j log t + const))`.
pub fn oscillation_decomposition(set: &StationarySet, result: &AsymptoticResult, j: usize) -> Oscillation {
    let s = set.s(j);
    let kappa = (s * s).im;
    let nu = result.nu[j - 1];
    Oscillation {
        amplitude: result.contributions[j - 1].norm(),
        theta: s.arg(),
        kappa,
        phase_slope_t: -2.0 * kappa,
        phase_slope_logt: parity(j) * nu,
    }
}

/// Long-time predictor for the lattice started from a given initial state.
///
/// The leading-order formula is posed for the flow with time reversed and
/// reconstructs the site to the left of its argument. Both are absorbed
/// here: the formula is fed the reflection coefficient of the staggered
/// data `(-1)^k q_k(0)` and evaluated at `n + 1`, and the result carries
/// the factor `(-1)^n`.
pub struct AsymptoticSolver {
    reflection: LatticeReflection,
    pub convention: SignConvention,
    pub quadrature: Quadrature,
    pub calibration: Option<f64>,
}

impl AsymptoticSolver {
    pub fn new(initial: &LatticeState) -> Self {
        Self {
            reflection: LatticeReflection::new(&initial.staggered()),
            convention: SignConvention::default(),
            quadrature: Quadrature::default(),
            calibration: None,
        }
    }

    pub fn with_convention(mut self, convention: SignConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn with_quadrature(mut self, quadrature: Quadrature) -> Self {
        self.quadrature = quadrature;
        self
    }

    pub fn with_calibration(mut self, calibration: Option<f64>) -> Self {
        self.calibration = calibration;
        self
    }

    pub fn reflection(&self) -> &LatticeReflection {
        &self.reflection
    }

    /// Leading-order prediction of `q_n(t)`.
    pub fn evaluate(&self, n: i64, t: f64) -> Result<AsymptoticResult> {
        let ray = RayParams::new(n + 1, t)?;
        let mut res = formula(&self.reflection, &ray, self.convention, &self.quadrature, self.calibration)?;
        let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        res.n = n;
        res.q_asym *= sign;
        for c in res.contributions.iter_mut() {
            *c *= sign;
        }
        Ok(res)
    }
}
