//! Adaptive composite Gauss-Legendre quadrature for complex-valued integrands
//! of one real variable.

use std::sync::OnceLock;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const ORDER: usize = 16;

fn gauss_legendre() -> &'static ([f64; ORDER], [f64; ORDER]) {
    static RULE: OnceLock<([f64; ORDER], [f64; ORDER])> = OnceLock::new();
    RULE.get_or_init(|| {
        let mut nodes = [0.0; ORDER];
        let mut weights = [0.0; ORDER];
        let n = ORDER as f64;
        for i in 0..ORDER {
            // Newton on P_n from the Chebyshev-like initial guess
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=ORDER {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    })
}

/// Fixed 16-point Gauss-Legendre rule on `[a, b]`.
pub fn gauss16<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64) -> C64 {
    let (nodes, weights) = gauss_legendre();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = C64::new(0.0, 0.0);
    for (x, w) in nodes.iter().zip(weights) {
        acc += *w * f(mid + half * x);
    }
    acc * half
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    /// Absolute tolerance on the whole integral.
    pub tol: f64,
    /// Budget on the number of accepted panels.
    pub max_panels: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            tol: 1e-11,
            max_panels: 20_000,
        }
    }
}

impl Quadrature {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    /// `int_a^b f(x) dx` by panel bisection, comparing each panel against
    /// its two halves. Local tolerances are proportional to panel length.
    pub fn integrate<F: Fn(f64) -> C64>(&self, f: F, a: f64, b: f64) -> Result<C64> {
        if a == b {
            return Ok(C64::new(0.0, 0.0));
        }
        let total = (b - a).abs();
        let mut accepted = 0usize;
        let mut sum = C64::new(0.0, 0.0);
        let mut stack: Vec<(f64, f64, C64)> = Vec::new();
        const START: usize = 4;
        for k in (0..START).rev() {
            let lo = a + (b - a) * k as f64 / START as f64;
            let hi = a + (b - a) * (k + 1) as f64 / START as f64;
            stack.push((lo, hi, gauss16(&f, lo, hi)));
        }
        let mut worst = 0.0_f64;
        while let Some((lo, hi, coarse)) = stack.pop() {
            let mid = 0.5 * (lo + hi);
            let left = gauss16(&f, lo, mid);
            let right = gauss16(&f, mid, hi);
            let fine = left + right;
            let err = (fine - coarse).norm();
            let local = self.tol * (hi - lo).abs() / total;
            let tiny = (hi - lo).abs() <= 1e-13 * total.max(1.0);
            if err <= local || tiny {
                sum += fine;
                accepted += 1;
                if tiny {
                    worst = worst.max(err);
                }
            } else {
                if accepted + stack.len() >= self.max_panels {
                    return Err(Error::Quadrature {
                        tol: self.tol,
                        estimate: err,
                    });
                }
                stack.push((mid, hi, right));
                stack.push((lo, mid, left));
            }
        }
        if !sum.re.is_finite() || !sum.im.is_finite() {
            return Err(Error::Quadrature {
                tol: self.tol,
                estimate: f64::INFINITY,
            });
        }
        if worst > self.tol {
            return Err(Error::Quadrature {
                tol: self.tol,
                estimate: worst,
            });
        }
        Ok(sum)
    }

    /// As [`Quadrature::integrate`], after splitting `[a, b]` into panels that
    /// shrink geometrically toward `b`. Suited to integrands whose smoothness
    /// degrades at the `b` endpoint.
    pub fn integrate_graded<F: Fn(f64) -> C64>(&self, f: F, a: f64, b: f64) -> Result<C64> {
        const LEVELS: usize = 40;
        let mut breaks = Vec::with_capacity(LEVELS + 2);
        breaks.push(a);
        let mut width = 0.5 * (b - a);
        for _ in 0..LEVELS {
            breaks.push(b - width);
            width *= 0.5;
        }
        let sub = Quadrature {
            tol: self.tol / (LEVELS + 1) as f64,
            max_panels: self.max_panels,
        };
        let mut sum = C64::new(0.0, 0.0);
        for w in breaks.windows(2) {
            sum += sub.integrate(&f, w[0], w[1])?;
        }
        // the last sliver of width |b - a| 2^-41 is dropped; bounded integrands only
        Ok(sum)
    }
}
