//! Effective potential generated by a Duru-Kleinert coordinate change
//! `r = h(q)`:
//!
//! ```text
//! V_eff(q) = −(ρ ħ² / m) [ h'''(q) / (4 h'(q)) − (3/8) (h''(q) / h'(q))² ]
//! ```
//!
//! with `ħ = 1`. The local time-rescaling function is tied to the map by
//! `h'(q)² = f(h(q))`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

/// Smallest `|h'(q)|` accepted before the map is declared degenerate.
pub const DEGENERATE_DERIVATIVE: f64 = 1e-300;
/// Tolerance of [`verify_f_consistency`].
pub const F_CONSISTENCY_TOLERANCE: f64 = 1e-12;

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// The delta gauge `Φ[ρ] = δ[ρ − 1]`: the scale variable is pinned to one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaugeChoice {
    rho: f64,
}

impl GaugeChoice {
    pub const fn delta() -> Self {
        Self { rho: 1.0 }
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }
}

impl Default for GaugeChoice {
    fn default() -> Self {
        Self::delta()
    }
}

/// A coordinate transformation `r = h(q)` with analytically supplied first,
/// second and third derivatives on the open interval `(lo, hi)`.
#[derive(Clone)]
pub struct TransformSpec {
    name: String,
    h: ScalarFn,
    d1: ScalarFn,
    d2: ScalarFn,
    d3: ScalarFn,
    domain: (f64, f64),
}

impl fmt::Debug for TransformSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TransformSpec")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

impl TransformSpec {
    pub fn new(
        name: impl Into<String>,
        h: ScalarFn,
        d1: ScalarFn,
        d2: ScalarFn,
        d3: ScalarFn,
        domain: (f64, f64),
    ) -> Result<Self> {
        if !(domain.0 < domain.1) {
            return Err(Error::Parameter {
                name: "domain",
                value: domain.0,
                reason: "lower end must lie below upper end",
            });
        }
        Ok(Self {
            name: name.into(),
            h,
            d1,
            d2,
            d3,
            domain,
        })
    }

    /// `h(q) = q` on the whole line.
    pub fn identity() -> Self {
        Self {
            name: "identity".into(),
            h: Arc::new(|q| q),
            d1: Arc::new(|_| 1.0),
            d2: Arc::new(|_| 0.0),
            d3: Arc::new(|_| 0.0),
            domain: (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// `r = e^x`, mapping `x ∈ ℝ` onto `r ∈ (0, ∞)`.
    pub fn exponential() -> Self {
        Self {
            name: "exp".into(),
            h: Arc::new(f64::exp),
            d1: Arc::new(f64::exp),
            d2: Arc::new(f64::exp),
            d3: Arc::new(f64::exp),
            domain: (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// `x = ln z`, mapping `z ∈ (0, ∞)` onto `x ∈ ℝ`.
    pub fn logarithmic() -> Self {
        Self {
            name: "log".into(),
            h: Arc::new(f64::ln),
            d1: Arc::new(|z| 1.0 / z),
            d2: Arc::new(|z| -1.0 / (z * z)),
            d3: Arc::new(|z| 2.0 / (z * z * z)),
            domain: (0.0, f64::INFINITY),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn contains(&self, q: f64) -> bool {
        q > self.domain.0 && q < self.domain.1
    }

    pub fn h(&self, q: f64) -> f64 {
        (self.h)(q)
    }

    pub fn d1(&self, q: f64) -> f64 {
        (self.d1)(q)
    }

    pub fn d2(&self, q: f64) -> f64 {
        (self.d2)(q)
    }

    pub fn d3(&self, q: f64) -> f64 {
        (self.d3)(q)
    }

    fn check_point(&self, q: f64) -> Result<f64> {
        if !self.contains(q) {
            return Err(Error::Domain {
                what: "q",
                value: q,
                domain: format!("({}, {})", self.domain.0, self.domain.1),
            });
        }
        let d1 = self.d1(q);
        if !(d1.abs() >= DEGENERATE_DERIVATIVE) {
            return Err(Error::DegenerateMap { q, derivative: d1 });
        }
        Ok(d1)
    }
}

fn check_scale(rho: f64, mass: f64) -> Result<()> {
    if !(rho > 0.0) {
        return Err(Error::Parameter {
            name: "rho",
            value: rho,
            reason: "must be positive",
        });
    }
    if !(mass > 0.0) {
        return Err(Error::Parameter {
            name: "mass",
            value: mass,
            reason: "must be positive",
        });
    }
    Ok(())
}

fn bracket(d1: f64, d2: f64, d3: f64) -> f64 {
    let ratio = d2 / d1;
    0.25 * d3 / d1 - 0.375 * ratio * ratio
}

/// Effective potential of the map at `q`, in units with `ħ = 1`.
pub fn effective_potential(t: &TransformSpec, q: f64, rho: f64, mass: f64) -> Result<f64> {
    check_scale(rho, mass)?;
    let d1 = t.check_point(q)?;
    Ok(-(rho / mass) * bracket(d1, t.d2(q), t.d3(q)))
}

/// Same quantity with the derivatives of `h` taken by finite differences
/// (7-point stencils, fourth order). Only meant for cross-validating
/// analytically supplied derivatives.
pub fn effective_potential_numeric(t: &TransformSpec, q: f64, rho: f64, mass: f64) -> Result<f64> {
    check_scale(rho, mass)?;
    t.check_point(q)?;
    let mut step = 1e-2 * q.abs().max(1.0);
    // Keep the stencil inside the domain.
    let room = (q - t.domain.0).min(t.domain.1 - q);
    if room.is_finite() {
        step = step.min(room / 4.0);
    }
    let f = |k: f64| t.h(q + k * step);
    let (m3, m2, m1, p1, p2, p3) = (f(-3.0), f(-2.0), f(-1.0), f(1.0), f(2.0), f(3.0));
    let c = t.h(q);
    let d1 = (-p3 + 9.0 * p2 - 45.0 * p1 + 45.0 * m1 - 9.0 * m2 + m3) / (-60.0 * step);
    let d2 = (2.0 * p3 - 27.0 * p2 + 270.0 * p1 - 490.0 * c + 270.0 * m1 - 27.0 * m2 + 2.0 * m3)
        / (180.0 * step * step);
    let d3 = (-p3 + 8.0 * p2 - 13.0 * p1 + 13.0 * m1 - 8.0 * m2 + m3) / (8.0 * step * step * step);
    if !(d1.abs() >= DEGENERATE_DERIVATIVE) {
        return Err(Error::DegenerateMap { q, derivative: d1 });
    }
    Ok(-(rho / mass) * bracket(d1, d2, d3))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyReport {
    /// Largest `|h'(q)² − f(h(q))|` on the grid.
    pub max_abs_deviation: f64,
    /// Same deviation relative to `|f(h(q))|`; this is what is tested.
    pub max_rel_deviation: f64,
    pub worst_q: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
    /// Grid points rejected because they lie outside the domain.
    pub outside_domain: Vec<f64>,
}

/// Check `h'(q)² = f(h(q))` on a grid.
pub fn verify_f_consistency<F: Fn(f64) -> f64>(
    t: &TransformSpec,
    f: F,
    q_grid: &[f64],
) -> ConsistencyReport {
    let mut report = ConsistencyReport {
        max_abs_deviation: 0.0,
        max_rel_deviation: 0.0,
        worst_q: None,
        tolerance: F_CONSISTENCY_TOLERANCE,
        passed: true,
        outside_domain: Vec::new(),
    };
    for &q in q_grid {
        if !t.contains(q) {
            report.outside_domain.push(q);
            continue;
        }
        let d1 = t.d1(q);
        let expected = f(t.h(q));
        let abs = (d1 * d1 - expected).abs();
        let rel = if expected == 0.0 { abs } else { abs / expected.abs() };
        report.max_abs_deviation = report.max_abs_deviation.max(abs);
        if rel > report.max_rel_deviation || report.worst_q.is_none() {
            report.max_rel_deviation = rel.max(report.max_rel_deviation);
            report.worst_q = Some(q);
        }
    }
    report.passed = report.outside_domain.is_empty()
        && report.max_rel_deviation <= report.tolerance
        && !report.max_rel_deviation.is_nan();
    report
}
