//! Composite Gauss–Legendre quadrature with panel-doubling refinement.
//!
//! Each panel uses a fixed 10-point rule. Refinement doubles the panel count
//! until two successive estimates agree; the difference between the last two
//! estimates is reported as the error estimate.

use std::num::NonZeroUsize;
use std::ops::{AddAssign, Mul};
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Points per Gauss–Legendre panel.
pub const RULE_ORDER: usize = 10;

struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

fn rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| {
        let order = NonZeroUsize::new(RULE_ORDER).expect("non-zero order");
        let gl = GaussLegendre::new(order);
        let (nodes, weights) = gl.iter().map(|(x, w)| (*x, *w)).unzip();
        Rule { nodes, weights }
    })
}

/// Values that can be summed by the quadrature (real or complex).
pub trait Integrand: Copy + Default + AddAssign + Mul<f64, Output = Self> {
    fn magnitude(self) -> f64;
    fn distance(self, other: Self) -> f64;
}

impl Integrand for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn distance(self, other: Self) -> f64 {
        (self - other).abs()
    }
}

impl Integrand for Complex64 {
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn distance(self, other: Self) -> f64 {
        (self - other).norm()
    }
}

/// Composite rule over `[a, b]` with `panels` equal panels.
pub fn composite<T, F>(f: &F, a: f64, b: f64, panels: usize) -> T
where
    T: Integrand,
    F: Fn(f64) -> T + ?Sized,
{
    let rule = rule();
    let panels = panels.max(1);
    let width = (b - a) / panels as f64;
    let half = 0.5 * width;
    let mut total = T::default();
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * width;
        let mut panel = T::default();
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            panel += f(mid + half * x) * *w;
        }
        total += panel * half;
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    /// |I(2N) − I(N)| for the final doubling.
    pub error: f64,
    pub panels: usize,
}

/// Stopping rule for [`refine`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Refinement {
    pub start_panels: usize,
    pub max_panels: usize,
    pub rel_tol: f64,
    /// Absolute acceptance floor, usually the round-off level of the integrand.
    pub abs_floor: f64,
}

/// Doubles the panel count until successive estimates differ by at most
/// `max(rel_tol·|I|, abs_floor)`.
pub fn refine<T, F>(f: &F, a: f64, b: f64, stop: &Refinement) -> Result<Estimate<T>>
where
    T: Integrand,
    F: Fn(f64) -> T + ?Sized,
{
    let mut panels = stop.start_panels.max(1);
    let mut previous: T = composite(f, a, b, panels);
    let mut achieved = f64::INFINITY;
    while panels * 2 <= stop.max_panels {
        panels *= 2;
        let current: T = composite(f, a, b, panels);
        achieved = current.distance(previous);
        let tolerance = (stop.rel_tol * current.magnitude()).max(stop.abs_floor);
        if achieved <= tolerance {
            return Ok(Estimate {
                value: current,
                error: achieved,
                panels,
            });
        }
        previous = current;
    }
    Err(Error::Convergence {
        panels,
        achieved,
        tolerance: stop.rel_tol,
    })
}
