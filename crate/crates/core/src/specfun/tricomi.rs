use super::dd::DoubleDouble;
use super::gamma::{log_gamma, reciprocal_gamma};
use super::kummer::{is_non_positive_integer, kummer_m_scaled};
use super::quad::exp_sinh_log;
use super::{Scaled, ASYMPTOTIC_MAX_TERMS, Z_CROSSOVER};
use crate::error::{Error, Result};

/// Tricomi's confluent hypergeometric function `U(a, b, z)` for real
/// parameters and `z > 0`.
///
/// For `z` above [`Z_CROSSOVER`] the asymptotic expansion is used when it
/// reaches full accuracy. Otherwise `U` comes from the integral
/// representation `U = Γ(a)^{-1} ∫ e^{−zt} t^{a−1} (1+t)^{b−a−1} dt`,
/// evaluated for `a ∈ [1, 2)` and carried to other `a` by the three-term
/// recurrence in `a`. Integer `b` needs no special treatment on this route.
pub fn tricomi_u(a: f64, b: f64, z: f64) -> Result<f64> {
    tricomi_u_scaled(a, b, z).map(Scaled::value)
}

pub(crate) fn tricomi_u_scaled(a: f64, b: f64, z: f64) -> Result<Scaled> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Parameter {
            name: "a, b",
            value: if a.is_finite() { b } else { a },
            reason: "must be finite",
        });
    }
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain {
            what: "z",
            value: z,
            domain: "(0, ∞)".into(),
        });
    }
    if a == 0.0 {
        return Ok(Scaled::plain(1.0));
    }
    if is_non_positive_integer(a) {
        return Ok(Scaled::plain(polynomial(-a as u32, b, z)));
    }
    if z >= Z_CROSSOVER {
        if let Ok(v) = asymptotic(a, b, z) {
            return Ok(v);
        }
    }
    if a >= 1.0 {
        return integral(a, b, z);
    }
    let (value, amplification) = downward_recurrence(a, b, z)?;
    if amplification * QUADRATURE_ERROR <= RECURRENCE_ACCEPT {
        return Ok(value);
    }
    match connection(a, b, z) {
        Ok((alt, alt_error)) if alt_error < amplification * QUADRATURE_ERROR => Ok(alt),
        _ => Ok(value),
    }
}

/// Relative error assumed for a quadrature value of `U`.
const QUADRATURE_ERROR: f64 = 2e-15;
/// Largest relative error estimate accepted from the recurrence before the
/// connection formula is tried.
const RECURRENCE_ACCEPT: f64 = 1e-12;
/// Distance from an integer below which `b` is treated by extrapolation.
const NEAR_INTEGER_B: f64 = 5e-3;
/// Offsets in `b` used for the near-integer extrapolation.
const B_OFFSETS: [f64; 4] = [0.02, 0.01, 0.005, 0.0025];

/// `U(−n, b, z) = (−1)^n Σ_s C(n, s) (b+s)_{n−s} (−z)^s`.
fn polynomial(n: u32, b: f64, z: f64) -> f64 {
    let mut sum = DoubleDouble::ZERO;
    let mut binom = 1.0f64;
    let mut zpow = 1.0f64;
    for s in 0..=n {
        let mut poch = DoubleDouble::ONE;
        for j in 0..(n - s) {
            poch = poch * DoubleDouble::from_sum(b + s as f64, j as f64);
        }
        let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
        sum = sum + poch * DoubleDouble::new(sign * binom * zpow);
        binom = binom * (n - s) as f64 / (s + 1) as f64;
        zpow *= z;
    }
    let v = sum.to_f64();
    if n.is_multiple_of(2) {
        v
    } else {
        -v
    }
}

/// `U ~ z^{−a} Σ (a)_s (a−b+1)_s / s! (−z)^{−s}`.
fn asymptotic(a: f64, b: f64, z: f64) -> Result<Scaled> {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut previous = f64::INFINITY;
    for s in 0..ASYMPTOTIC_MAX_TERMS {
        let sf = s as f64;
        term *= -(a + sf) * (a - b + 1.0 + sf) / ((sf + 1.0) * z);
        let t = term.abs();
        if t == 0.0 {
            break;
        }
        if t > previous {
            return Err(Error::NonConvergence {
                routine: "tricomi_u asymptotic",
                detail: format!("terms grow before tolerance at z={z}"),
            });
        }
        sum += term;
        if t <= 1e-17 * sum.abs() {
            break;
        }
        previous = t;
    }
    Ok(Scaled {
        mantissa: sum,
        ln_scale: -a * z.ln(),
    })
}

/// Integral representation after the substitution `t = τ/z`:
/// `U = z^{−a} Γ(a)^{−1} ∫ e^{−τ} τ^{a−1} (1 + τ/z)^{b−a−1} dτ`.
fn integral(a: f64, b: f64, z: f64) -> Result<Scaled> {
    debug_assert!(a > 0.0);
    let c = b - a - 1.0;
    let am1 = a - 1.0;
    let (mantissa, ln_int) = exp_sinh_log(|tau: f64| {
        let mut v = -tau + c * (tau / z).ln_1p();
        if am1 != 0.0 {
            v += am1 * tau.ln();
        }
        v
    })?;
    let ga = log_gamma(a)?;
    Ok(Scaled {
        mantissa,
        ln_scale: ln_int - a * z.ln() - ga.ln_abs,
    })
}

/// Recur `U(a−1) = −(b − 2a − z) U(a) − a (a − b + 1) U(a+1)` down from
/// quadrature values at `a + m ∈ [1, 2)`.
///
/// Also returns the factor by which relative errors in the two starting
/// values are amplified, obtained by running the two fundamental solutions
/// of the recurrence alongside.
fn downward_recurrence(a: f64, b: f64, z: f64) -> Result<(Scaled, f64)> {
    let steps = (1.0 - a).ceil() as u32;
    let top = a + steps as f64;
    let upper = integral(top + 1.0, b, z)?;
    let lower = integral(top, b, z)?;
    let ln_ref = lower.ln_scale;
    let start_next = upper.mantissa * (upper.ln_scale - ln_ref).exp();
    let start_cur = lower.mantissa;
    // Columns: the sequence itself and the two fundamental solutions.
    let mut next = [start_next, 0.0, 1.0];
    let mut cur = [start_cur, 1.0, 0.0];
    let mut a_cur = top;
    for _ in 0..steps {
        let p = -(b - 2.0 * a_cur - z);
        let q = -a_cur * (a_cur - b + 1.0);
        for i in 0..3 {
            let prev = p * cur[i] + q * next[i];
            next[i] = cur[i];
            cur[i] = prev;
        }
        a_cur -= 1.0;
    }
    let spread = (start_cur * cur[1]).abs() + (start_next * cur[2]).abs();
    let amplification = if cur[0] == 0.0 {
        f64::INFINITY
    } else {
        spread / cur[0].abs()
    };
    Ok((
        Scaled {
            mantissa: cur[0],
            ln_scale: ln_ref,
        },
        amplification,
    ))
}

/// Connection formula
/// `U = Γ(1−b)/Γ(a−b+1) M(a,b,z) + Γ(b−1)/Γ(a) z^{1−b} M(a−b+1,2−b,z)`
/// with its cancellation-based error estimate. For `b` close to an integer
/// the formula is evaluated at `b ± δ` and extrapolated to `δ = 0`.
fn connection(a: f64, b: f64, z: f64) -> Result<(Scaled, f64)> {
    if (b - b.round()).abs() >= NEAR_INTEGER_B {
        return connection_direct(a, b, z);
    }
    // Neville extrapolation in δ² of the symmetric averages.
    let mut h2 = [0.0; B_OFFSETS.len()];
    let mut table = [0.0; B_OFFSETS.len()];
    let mut error = 0.0f64;
    let mut ln_ref = None;
    for (i, &d) in B_OFFSETS.iter().enumerate() {
        let (up, e_up) = connection_direct(a, b + d, z)?;
        let (down, e_down) = connection_direct(a, b - d, z)?;
        let reference = *ln_ref.get_or_insert(up.ln_scale);
        let avg = 0.5
            * (up.mantissa * (up.ln_scale - reference).exp()
                + down.mantissa * (down.ln_scale - reference).exp());
        error = error.max(e_up).max(e_down);
        h2[i] = d * d;
        table[i] = avg;
    }
    let n = table.len();
    for level in 1..n {
        for i in (level..n).rev() {
            table[i] = (h2[i - level] * table[i] - h2[i] * table[i - 1]) / (h2[i - level] - h2[i]);
        }
    }
    let value = table[n - 1];
    let extrapolation = ((table[n - 1] - table[n - 2]) / value).abs();
    Ok((
        Scaled {
            mantissa: value,
            ln_scale: ln_ref.unwrap_or(0.0),
        },
        error.max(extrapolation),
    ))
}

fn connection_direct(a: f64, b: f64, z: f64) -> Result<(Scaled, f64)> {
    let first = match reciprocal_gamma(a - b + 1.0) {
        0.0 => 0.0,
        r => {
            let g = log_gamma(1.0 - b)?;
            let m = kummer_m_scaled(a, b, z)?;
            g.sign * r * m.mantissa * (g.ln_abs + m.ln_scale).exp()
        }
    };
    let second = match reciprocal_gamma(a) {
        0.0 => 0.0,
        r => {
            let g = log_gamma(b - 1.0)?;
            let m = kummer_m_scaled(a - b + 1.0, 2.0 - b, z)?;
            g.sign * r * m.mantissa * (g.ln_abs + m.ln_scale + (1.0 - b) * z.ln()).exp()
        }
    };
    let value = first + second;
    let error = 1e-15 * (first.abs() + second.abs()) / value.abs();
    Ok((Scaled::plain(value), error))
}
