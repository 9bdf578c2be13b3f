//! Bessel, Anger and rational-period integrals.
//!
//! `bessel_j` is the closed-form workhorse used by every rate formula. It is
//! evaluated by ascending power series for |x| ≤ 12 and by normalised downward
//! (Miller) recurrence beyond that. The Anger function and the rational-period
//! integral 𝒥(x; p, q) are evaluated by direct quadrature of their defining
//! integrals, which keeps them independent of the series path.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{ensure_finite, Error, Result};
use crate::quad::{refine, Refinement};

/// Switch-over point between the power series and Miller recurrence.
const SERIES_LIMIT: f64 = 12.0;

/// Accuracy target for the quadrature-backed special functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracyBudget {
    rel_tol: f64,
    max_terms: usize,
}

impl AccuracyBudget {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol.is_finite() && rel_tol > 0.0) {
            return Err(Error::Domain(format!("rel_tol must be positive, got {rel_tol}")));
        }
        if max_terms == 0 {
            return Err(Error::Domain("max_terms must be at least 1".into()));
        }
        Ok(Self { rel_tol, max_terms })
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    /// Upper bound on quadrature panels (or series terms).
    pub fn max_terms(&self) -> usize {
        self.max_terms
    }
}

impl Default for AccuracyBudget {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            max_terms: 1_000_000,
        }
    }
}

/// Integer-order Bessel function of the first kind, Jₙ(x).
pub fn bessel_j(n: u32, x: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    let ax = x.abs();
    let value = if ax <= SERIES_LIMIT {
        bessel_series(n, ax)
    } else {
        bessel_miller(n, ax)
    };
    Ok(if x < 0.0 && n % 2 == 1 { -value } else { value })
}

fn bessel_series(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * x;
    // (x/2)^n / n!, built incrementally so large n underflows gracefully to 0
    let mut term = 1.0;
    for j in 1..=n {
        term *= half / f64::from(j);
    }
    if term == 0.0 {
        return 0.0;
    }
    let q = -half * half;
    let mut sum = term;
    for k in 1..500u32 {
        term *= q / (f64::from(k) * f64::from(k + n));
        sum += term;
        if term.abs() <= f64::EPSILON * 0.5 * sum.abs() {
            break;
        }
    }
    sum
}

fn bessel_miller(n: u32, x: f64) -> f64 {
    let top = f64::from(n).max(x);
    let mut start = (top + 30.0 + (50.0 * top).sqrt()).ceil() as u32;
    start += start % 2;

    let mut above = 0.0; // b_{k+1}
    let mut current = 1.0; // b_k
    let mut norm = 2.0 * current;
    let mut result = if start == n { current } else { 0.0 };
    for k in (1..=start).rev() {
        let below = 2.0 * f64::from(k) / x * current - above;
        above = current;
        current = below;
        let index = k - 1;
        if index == n {
            result = current;
        }
        if index == 0 {
            norm += current;
        } else if index % 2 == 0 {
            norm += 2.0 * current;
        }
        if current.abs() > 1e200 {
            current *= 1e-200;
            above *= 1e-200;
            norm *= 1e-200;
            result *= 1e-200;
        }
    }
    result / norm
}

/// Anger function **J**ν(x) = (1/π)∫₀^π cos(x sinθ − νθ) dθ.
pub fn anger_j(nu: f64, x: f64, budget: &AccuracyBudget) -> Result<f64> {
    ensure_finite("nu", nu)?;
    ensure_finite("x", x)?;
    let start = 16usize.max((4.0 * (x.abs() + nu.abs())).ceil() as usize);
    let f = |theta: f64| (x * theta.sin() - nu * theta).cos();
    let stop = Refinement {
        start_panels: start,
        max_panels: budget.max_terms.max(start),
        rel_tol: budget.rel_tol,
        abs_floor: budget.rel_tol * PI,
    };
    let estimate = refine(&f, 0.0, PI, &stop)?;
    Ok(estimate.value / PI)
}

/// One-period integral 𝒥(x; p, q) = (1/2π)∫₋π^π exp[i(x sin(qψ) − pψ)] dψ.
///
/// `p/q` need not be reduced. The result vanishes unless `q` divides `p`, in
/// which case it equals J_{p/q}(x).
pub fn rational_period_integral(x: f64, p: u32, q: u32) -> Result<f64> {
    rational_period_integral_with(x, p, q, &AccuracyBudget::default())
}

pub fn rational_period_integral_with(x: f64, p: u32, q: u32, budget: &AccuracyBudget) -> Result<f64> {
    ensure_finite("x", x)?;
    if p == 0 || q == 0 {
        return Err(Error::Domain(format!(
            "p and q must be positive, got p={p}, q={q}"
        )));
    }
    let (pf, qf) = (f64::from(p), f64::from(q));
    let start = 16usize.max((4.0 * (x.abs() * qf + pf)).ceil() as usize);
    let f = |psi: f64| Complex64::from_polar(1.0, x * (qf * psi).sin() - pf * psi);
    let stop = Refinement {
        start_panels: start,
        max_panels: budget.max_terms.max(start),
        rel_tol: budget.rel_tol,
        abs_floor: budget.rel_tol * 2.0 * PI,
    };
    let value = refine(&f, -PI, PI, &stop)?.value / (2.0 * PI);
    debug_assert!(
        value.im.abs() < 1e-12,
        "imaginary part {} of a real integral",
        value.im
    );
    Ok(value.re)
}
