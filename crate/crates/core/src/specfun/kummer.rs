use super::dd::DoubleDouble;
use super::gamma::log_gamma;
use super::{Scaled, ASYMPTOTIC_MAX_TERMS, SERIES_MAX_TERMS, SERIES_MAX_Z, Z_CROSSOVER};
use crate::error::{Error, Result};

/// Relative size of the last retained term at which a series is cut.
const SERIES_CUTOFF: f64 = 1e-18;
/// Largest tolerated error estimate (relative) for a returned value.
const ACCEPT_ERROR: f64 = 1e-13;

pub(crate) fn is_non_positive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

fn check_b(b: f64) -> Result<()> {
    if !b.is_finite() || is_non_positive_integer(b) {
        return Err(Error::Parameter {
            name: "b",
            value: b,
            reason: "must not be a non-positive integer",
        });
    }
    Ok(())
}

/// Confluent hypergeometric function `M(a, b, z) = ₁F₁(a; b; z)` for real
/// parameters and `z >= 0`.
///
/// Below [`Z_CROSSOVER`] the Maclaurin series is summed in double-double
/// arithmetic. Above it the large-`z` asymptotic expansion is tried first and
/// the series is used as fallback up to [`SERIES_MAX_Z`].
pub fn kummer_m(a: f64, b: f64, z: f64) -> Result<f64> {
    kummer_m_scaled(a, b, z).map(Scaled::value)
}

pub(crate) fn kummer_m_scaled(a: f64, b: f64, z: f64) -> Result<Scaled> {
    check_b(b)?;
    if !a.is_finite() {
        return Err(Error::Parameter {
            name: "a",
            value: a,
            reason: "must be finite",
        });
    }
    if !(z >= 0.0) || !z.is_finite() {
        return Err(Error::Domain {
            what: "z",
            value: z,
            domain: "[0, ∞)".into(),
        });
    }
    if z == 0.0 || a == 0.0 {
        return Ok(Scaled::plain(1.0));
    }
    if is_non_positive_integer(a) || z <= Z_CROSSOVER {
        return series(a, b, z).map(Scaled::plain);
    }
    match asymptotic(a, b, z) {
        Ok(v) => Ok(v),
        Err(_) if z <= SERIES_MAX_Z => series(a, b, z).map(Scaled::plain),
        Err(e) => Err(e),
    }
}

/// Maclaurin series `Σ (a)_k / (b)_k z^k / k!` accumulated in double-double.
fn series(a: f64, b: f64, z: f64) -> Result<f64> {
    let zz = DoubleDouble::new(z);
    let mut term = DoubleDouble::ONE;
    let mut sum = DoubleDouble::ONE;
    let mut largest = 1.0f64;
    let settled_after = a.abs().max(b.abs()) + 1.0;
    for k in 0..SERIES_MAX_TERMS {
        let kf = k as f64;
        let num = DoubleDouble::from_sum(a, kf) * zz;
        let den = DoubleDouble::from_sum(b, kf) * DoubleDouble::new(kf + 1.0);
        term = term * num / den;
        sum = sum + term;
        let t = term.hi.abs();
        largest = largest.max(t);
        if term.hi == 0.0 {
            break;
        }
        if kf > settled_after {
            let ratio = ((a + kf + 1.0) * z / ((b + kf + 1.0) * (kf + 2.0))).abs();
            if ratio < 1.0 {
                let tail = t * ratio / (1.0 - ratio);
                if tail <= SERIES_CUTOFF * sum.hi.abs() {
                    break;
                }
            }
        }
        if k + 1 == SERIES_MAX_TERMS {
            return Err(Error::NonConvergence {
                routine: "kummer_m series",
                detail: format!("term cap {SERIES_MAX_TERMS} reached at a={a}, b={b}, z={z}"),
            });
        }
    }
    let value = sum.to_f64();
    // Double-double rounding accumulated against the largest term.
    let error = largest * 1e-31 * (SERIES_MAX_TERMS as f64).sqrt();
    if value == 0.0 || error > ACCEPT_ERROR * value.abs() {
        return Err(Error::NonConvergence {
            routine: "kummer_m series",
            detail: format!("cancellation: largest term {largest:e}, sum {value:e}"),
        });
    }
    Ok(value)
}

/// Leading large-`z` expansion
/// `M ~ Γ(b)/Γ(a) e^z z^{a−b} Σ (b−a)_s (1−a)_s / s! z^{−s}`.
///
/// Rejected when the recessive `z^{−a}` contribution is not negligible or
/// when the asymptotic terms stop decreasing before reaching full accuracy.
fn asymptotic(a: f64, b: f64, z: f64) -> Result<Scaled> {
    let lz = z.ln();
    let gb = log_gamma(b)?;
    let ga = log_gamma(a)?;
    let ln_main = gb.ln_abs - ga.ln_abs + z + (a - b) * lz;
    if !is_non_positive_integer(b - a) {
        let gba = log_gamma(b - a)?;
        let ln_second = gb.ln_abs - gba.ln_abs - a * lz;
        if ln_second - ln_main > (1e-17f64).ln() {
            return Err(Error::NonConvergence {
                routine: "kummer_m asymptotic",
                detail: "recessive term not negligible".into(),
            });
        }
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut previous = f64::INFINITY;
    for s in 0..ASYMPTOTIC_MAX_TERMS {
        let sf = s as f64;
        term *= (b - a + sf) * (1.0 - a + sf) / ((sf + 1.0) * z);
        let t = term.abs();
        if t > previous {
            break;
        }
        sum += term;
        if t <= 1e-17 * sum.abs() {
            return Ok(Scaled {
                mantissa: gb.sign * ga.sign * sum,
                ln_scale: ln_main,
            });
        }
        previous = t;
    }
    Err(Error::NonConvergence {
        routine: "kummer_m asymptotic",
        detail: format!("series diverges before reaching tolerance at z={z}"),
    })
}
