//! Closed-form fixed-energy amplitudes of the radial harmonic oscillator and
//! of the radial relativistic Coulomb problem, the identity linking them,
//! and the bound-state spectrum read off the Gamma-function poles.
//!
//! Kernels are returned as real magnitudes. The constant phase of the
//! physical kernel is carried separately in [`PrefactorConvention`].

use serde::{Deserialize, Serialize};

use crate::coulomb_chain::{oscillator_radius, to_oscillator, CoulombSystem, OscillatorParams};
use crate::error::{Error, Result};
use crate::specfun::{log_gamma, whittaker_m_scaled, whittaker_w_scaled, WhittakerIndex};

/// Distance from a non-positive integer of the Gamma argument inside which
/// an evaluation is refused as a pole.
pub const POLE_GUARD: f64 = 1e-9;
/// Relative tolerance of the oscillator/Coulomb identity.
pub const DK_IDENTITY_TOLERANCE: f64 = 1e-12;
/// Bisection bracket width for the pole condition.
pub const ROOT_BRACKET: f64 = 1e-14;
/// Allowed gap between the bracketed root and the closed-form level.
pub const SPECTRUM_TOLERANCE: f64 = 1e-12;

/// How a [`GreenValue`] magnitude relates to the kernel with all constant
/// factors restored: `kernel = i^phase · magnitude`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefactorConvention {
    /// Power of the imaginary unit that was factored out (`+1` or `−1`).
    pub phase: i8,
    /// The inverse frequency (`1/ω`, resp. `1/√(1−ε²)`) is part of the
    /// magnitude.
    pub inverse_frequency_included: bool,
    /// The real part `ħ/(2 m_C c) = 1/2` of the overall constant in front
    /// of the pseudotime integral is part of the magnitude. It is common to
    /// both amplitudes and is left out of both.
    pub half_inverse_mass_included: bool,
}

impl PrefactorConvention {
    pub const OSCILLATOR: Self = Self {
        phase: -1,
        inverse_frequency_included: true,
        half_inverse_mass_included: false,
    };
    pub const COULOMB: Self = Self {
        phase: 1,
        inverse_frequency_included: true,
        half_inverse_mass_included: false,
    };
}

/// A real radial kernel value together with its factored-out constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreenValue {
    pub magnitude: f64,
    pub convention: PrefactorConvention,
}

/// `(max, min)` of two radii: the larger one carries the decaying solution.
pub fn ordered(r1: f64, r2: f64) -> (f64, f64) {
    if r1 >= r2 {
        (r1, r2)
    } else {
        (r2, r1)
    }
}

fn check_radii(name_b: &'static str, b: f64, name_a: &'static str, a: f64) -> Result<()> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::Domain {
            what: name_b,
            value: b,
            domain: "(0, ∞)".into(),
        });
    }
    if !(a >= 0.0) || !a.is_finite() {
        return Err(Error::Domain {
            what: name_a,
            value: a,
            domain: "[0, ∞)".into(),
        });
    }
    if b < a {
        return Err(Error::Order { r_b: b, r_a: a });
    }
    Ok(())
}

/// Refuse Gamma arguments inside the guard band around `0, −1, −2, …`.
pub fn check_off_pole(argument: f64) -> Result<()> {
    let nearest = argument.round();
    if nearest <= 0.0 && (argument - nearest).abs() < POLE_GUARD {
        return Err(Error::Pole {
            argument,
            band: POLE_GUARD,
        });
    }
    Ok(())
}

/// `e^{ln_prefactor} · Γ(½+μ−κ)/Γ(1+2μ) · W_{κ,μ}(z_w) · M_{κ,μ}(z_m)`,
/// assembled in log space.
fn whittaker_kernel(kappa: f64, mu: f64, z_w: f64, z_m: f64, ln_prefactor: f64) -> Result<f64> {
    let argument = 0.5 + mu - kappa;
    check_off_pole(argument)?;
    let num = log_gamma(argument)?;
    let den = log_gamma(1.0 + 2.0 * mu)?;
    if z_m == 0.0 {
        return Ok(0.0);
    }
    let idx = WhittakerIndex::new(kappa, mu)?;
    let w = whittaker_w_scaled(idx, z_w)?;
    let m = whittaker_m_scaled(idx, z_m)?;
    let ln = num.ln_abs - den.ln_abs + w.ln_scale + m.ln_scale + ln_prefactor;
    Ok(num.sign * den.sign * w.mantissa * m.mantissa * ln.exp())
}

/// Radial oscillator amplitude
/// `(1/ω) Γ((1+μ_O)/2 − E_O/2ω)/Γ(1+μ_O) (z_b z_a)^{−1/2}
///  W_{E_O/2ω, μ_O/2}(m_O ω z_b²) M_{E_O/2ω, μ_O/2}(m_O ω z_a²)`.
pub fn oscillator_green(p: &OscillatorParams, z_b: f64, z_a: f64) -> Result<GreenValue> {
    check_radii("z_b", z_b, "z_a", z_a)?;
    let scale = p.mass * p.omega;
    let ln_prefactor = if z_a > 0.0 {
        -p.omega.ln() - 0.5 * (z_b.ln() + z_a.ln())
    } else {
        0.0
    };
    let magnitude = whittaker_kernel(
        p.kappa(),
        p.whittaker_mu(),
        scale * z_b * z_b,
        scale * z_a * z_a,
        ln_prefactor,
    )?;
    Ok(GreenValue {
        magnitude,
        convention: PrefactorConvention::OSCILLATOR,
    })
}

/// Radial relativistic Coulomb amplitude
/// `(1/v) Γ(½+μ̃−κ)/Γ(1+2μ̃) W_{κ,μ̃}(2v r_b) M_{κ,μ̃}(2v r_a)`
/// with `v = √(1−ε²)`, `μ̃ = √(μ_C²−α_fs²)`, `κ = ε α_fs / v`.
///
/// Requires `r_b ≥ r_a`; use [`ordered`] to canonicalize.
pub fn coulomb_green(c: &CoulombSystem, r_b: f64, r_a: f64) -> Result<GreenValue> {
    check_radii("r_b", r_b, "r_a", r_a)?;
    let v = c.decay_rate();
    let magnitude = whittaker_kernel(c.kappa(), c.mu_tilde(), 2.0 * v * r_b, 2.0 * v * r_a, -v.ln())?;
    Ok(GreenValue {
        magnitude,
        convention: PrefactorConvention::COULOMB,
    })
}

/// Outcome of comparing the Coulomb amplitude with the chained oscillator
/// amplitude at one pair of radii.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DkIdentityReport {
    pub r_b: f64,
    pub r_a: f64,
    pub direct: f64,
    pub chained: f64,
    pub rel_deviation: f64,
}

impl DkIdentityReport {
    pub fn passed(&self, tolerance: f64) -> bool {
        self.rel_deviation <= tolerance
    }
}

/// Factor relating the two kernels at oscillator radii `z_b, z_a`:
/// `½` from the normalization of the transformed states, `z_b z_a` from the
/// two `e^{x_O}` factors and `(z_b z_a)^{−1/2}` from `f_b^{1/4} f_a^{1/4}`.
pub fn chain_prefactor(z_b: f64, z_a: f64) -> f64 {
    let state_normalization = 0.5;
    let exponential_factors = z_b * z_a;
    let quarter_powers = 1.0 / (z_b * z_a).sqrt();
    state_normalization * exponential_factors * quarter_powers
}

/// Evaluate the Coulomb amplitude directly and through the oscillator
/// dictionary with `z = √r`, reporting their relative deviation.
pub fn dk_identity_check(c: &CoulombSystem, r_b: f64, r_a: f64) -> Result<DkIdentityReport> {
    let direct = coulomb_green(c, r_b, r_a)?.magnitude;
    let osc = to_oscillator(c)?;
    let (z_b, z_a) = (oscillator_radius(r_b), oscillator_radius(r_a));
    let chained = if r_a == 0.0 {
        0.0
    } else {
        chain_prefactor(z_b, z_a) * oscillator_green(&osc, z_b, z_a)?.magnitude
    };
    let rel_deviation = if direct == chained {
        0.0
    } else {
        (direct - chained).abs() / direct.abs().max(chained.abs())
    };
    Ok(DkIdentityReport {
        r_b,
        r_a,
        direct,
        chained,
        rel_deviation,
    })
}

/// One bound level of the Coulomb problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub n_r: u32,
    pub l: u32,
    /// Root of the pole condition, `ε_n ∈ (0, 1)`.
    pub energy_ratio: f64,
    /// `N = n_r + ½ + √(μ_C² − α_fs²)`.
    pub principal_combination: f64,
}

impl SpectrumEntry {
    /// `N / √(N² + α_fs²)`.
    pub fn closed_form(&self, alpha: f64) -> f64 {
        let n = self.principal_combination;
        n / n.hypot(alpha)
    }

    /// `1 − ε_n` in the cancellation-free form
    /// `α² / (√(N²+α²) (√(N²+α²) + N))`.
    pub fn binding(&self, alpha: f64) -> f64 {
        let n = self.principal_combination;
        let h = n.hypot(alpha);
        alpha * alpha / (h * (h + n))
    }
}

/// Gamma argument `½ + μ̃ − κ(ε)` of the Coulomb amplitude.
pub fn pole_argument(c: &CoulombSystem) -> f64 {
    0.5 + c.mu_tilde() - c.kappa()
}

fn pole_condition(eps: f64, alpha: f64, n: f64) -> f64 {
    eps * alpha / ((1.0 - eps) * (1.0 + eps)).sqrt() - n
}

fn solve_level(alpha: f64, n: f64) -> f64 {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > ROOT_BRACKET {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pole_condition(mid, alpha, n) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let eps = 0.5 * (lo + hi);
    let v = ((1.0 - eps) * (1.0 + eps)).sqrt();
    let slope = alpha / (v * v * v);
    let polished = eps - pole_condition(eps, alpha, n) / slope;
    polished.clamp(lo, hi)
}

/// Bound levels `n_r = 0..=n_r_max` at the coupling, `l` and dimension of
/// `template` (its energy is ignored). Each level is found by bracketing the
/// zero of `ε α_fs/√(1−ε²) − N` on `(0, 1)` and checked against the closed
/// form.
pub fn bound_spectrum(template: &CoulombSystem, n_r_max: u32) -> Result<Vec<SpectrumEntry>> {
    let alpha = template.alpha_fs();
    if !(alpha > 0.0) {
        return Err(Error::NoBoundStates { alpha });
    }
    let mu = template.mu_tilde();
    (0..=n_r_max)
        .map(|n_r| {
            let entry = SpectrumEntry {
                n_r,
                l: template.l(),
                energy_ratio: solve_level(alpha, n_r as f64 + 0.5 + mu),
                principal_combination: n_r as f64 + 0.5 + mu,
            };
            let closed = entry.closed_form(alpha);
            if (entry.energy_ratio - closed).abs() > SPECTRUM_TOLERANCE {
                return Err(Error::Inconsistent(format!(
                    "level n_r = {n_r}: root {} vs closed form {closed}",
                    entry.energy_ratio
                )));
            }
            Ok(entry)
        })
        .collect()
}

/// `lim_{ε→ε_n} (ε_n − ε) · G(ε; r_b, r_a)`, the residue of the Coulomb
/// amplitude at a bound level, by symmetric differences around the pole and
/// one Richardson step. The radii may be given in either order.
pub fn residue_at_pole(c: &CoulombSystem, entry: &SpectrumEntry, r_b: f64, r_a: f64) -> Result<f64> {
    let alpha = c.alpha_fs();
    let n = entry.n_r as f64 + 0.5 + c.mu_tilde();
    if entry.l != c.l() || (n - entry.principal_combination).abs() > 1e-12 * n {
        return Err(Error::Parameter {
            name: "entry",
            value: entry.principal_combination,
            reason: "spectrum entry does not belong to this system",
        });
    }
    let eps_n = entry.energy_ratio;
    let level = |k: f64| {
        let nk = n + k;
        nk / nk.hypot(alpha)
    };
    let below = if entry.n_r == 0 { eps_n } else { eps_n - level(-1.0) };
    let gap = below.min(level(1.0) - eps_n);
    let (rb, ra) = ordered(r_b, r_a);
    let at = |eps: f64| -> Result<f64> { Ok(coulomb_green(&c.with_energy(eps)?, rb, ra)?.magnitude) };
    // Linear fit through the two one-sided products removes the O(δ) term.
    let symmetric = |step: f64| -> Result<f64> {
        let (up, down) = (eps_n + step, eps_n - step);
        let (d_up, d_down) = (up - eps_n, eps_n - down);
        let h_up = -d_up * at(up)?;
        let h_down = d_down * at(down)?;
        Ok((d_down * h_up + d_up * h_down) / (d_up + d_down))
    };
    let step = 1e-3 * gap;
    let coarse = symmetric(step)?;
    let fine = symmetric(0.5 * step)?;
    Ok((4.0 * fine - coarse) / 3.0)
}
