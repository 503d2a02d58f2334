//! Exp-sinh quadrature on `(0, ∞)` for integrands supplied as logarithms.
//!
//! The integrand is handled through `ln f(τ)` so that integrals whose value
//! lies far outside the double range are still representable; the result is
//! returned as `(mantissa, log_scale)` with `∫ f = mantissa · e^{log_scale}`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Half-width of the truncated `s` range.
const S_MAX: f64 = 5.5;
/// Finest refinement level (step `2^-MAX_LEVEL`).
const MAX_LEVEL: u32 = 10;
const REL_TOL: f64 = 1e-15;

/// Locate the maximum of `τ f(τ)` on a coarse logarithmic grid, i.e. where
/// the integrand carries most of its mass in `ln τ`. The exp-sinh map is
/// centred there.
fn coarse_peak<F: Fn(f64) -> f64>(ln_f: &F) -> f64 {
    let mut best = (f64::NEG_INFINITY, 1.0);
    for i in 0..=80 {
        let tau = 10f64.powf(-10.0 + 0.25 * i as f64);
        let v = ln_f(tau) + tau.ln();
        if v > best.0 {
            best = (v, tau);
        }
    }
    best.1
}

/// `∫_0^∞ f(τ) dτ` for a positive integrand given as `ln f`.
pub(crate) fn exp_sinh_log<F: Fn(f64) -> f64>(ln_f: F) -> Result<(f64, f64)> {
    let centre = coarse_peak(&ln_f);
    let ln_centre = centre.ln();
    // ln of integrand times Jacobian at node s.
    let node = |s: f64| -> f64 {
        let u = FRAC_PI_2 * s.sinh();
        let ln_tau = ln_centre + u;
        let tau = ln_tau.exp();
        if tau == 0.0 || !tau.is_finite() {
            return f64::NEG_INFINITY;
        }
        let v = ln_f(tau) + ln_tau + (FRAC_PI_2 * s.cosh()).ln();
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };

    // Collect log-values level by level; sums are rescaled to a common
    // reference taken from the coarsest level.
    let mut logs: Vec<f64> = Vec::new();
    let mut h = 1.0;
    let n0 = (S_MAX / h) as i64;
    for j in -n0..=n0 {
        logs.push(node(j as f64 * h));
    }
    let mut reference = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !reference.is_finite() {
        return Err(Error::NonConvergence {
            routine: "exp_sinh",
            detail: "integrand vanishes or overflows on every node".into(),
        });
    }
    let mut sum: f64 = logs.iter().map(|&l| (l - reference).exp()).sum();
    let mut estimate = sum * h;

    for _level in 1..=MAX_LEVEL {
        h *= 0.5;
        let n = (S_MAX / h) as i64;
        let mut fresh = Vec::with_capacity(n as usize + 1);
        let mut j = -n + if n % 2 == 0 { 1 } else { 0 };
        while j <= n {
            fresh.push(node(j as f64 * h));
            j += 2;
        }
        let new_max = fresh.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if new_max > reference {
            let shrink = (reference - new_max).exp();
            sum *= shrink;
            estimate *= shrink;
            reference = new_max;
        }
        sum += fresh.iter().map(|&l| (l - reference).exp()).sum::<f64>();
        let refined = sum * h;
        let converged = (refined - estimate).abs() <= REL_TOL * refined.abs();
        estimate = refined;
        if converged {
            return Ok((estimate, reference));
        }
    }
    Err(Error::NonConvergence {
        routine: "exp_sinh",
        detail: format!("no convergence after {MAX_LEVEL} refinements"),
    })
}
