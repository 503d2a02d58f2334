//! Parameter sets along the mapping chain
//! relativistic Coulomb → Morse → radial harmonic oscillator.
//!
//! Natural units throughout: `ħ = c = m_C = 1`. Energies are in units of
//! `m_C c²`, lengths in reduced Compton wavelengths `ħ / (m_C c)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Oscillator mass in units of the Coulomb mass (`m_C = m_O / 4`).
pub const OSCILLATOR_MASS: f64 = 4.0;
/// Relative agreement demanded between the two routes to the oscillator
/// parameters.
pub const DICTIONARY_TOLERANCE: f64 = 1e-14;

/// Physical parameters of the radial relativistic Coulomb problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CoulombSystemInput", into = "CoulombSystemInput")]
pub struct CoulombSystem {
    epsilon: f64,
    alpha: f64,
    l: u32,
    dim: u32,
}

/// Serialized form of [`CoulombSystem`]; `mu_c` is informative only and is
/// recomputed on input.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CoulombSystemInput {
    pub energy_ratio: f64,
    pub alpha_fs: f64,
    pub l: u32,
    pub dim: u32,
    #[serde(default, skip_deserializing)]
    pub mu_c: f64,
}

impl TryFrom<CoulombSystemInput> for CoulombSystem {
    type Error = Error;
    fn try_from(v: CoulombSystemInput) -> Result<Self> {
        CoulombSystem::new(v.energy_ratio, v.alpha_fs, v.l, v.dim)
    }
}

impl From<CoulombSystem> for CoulombSystemInput {
    fn from(c: CoulombSystem) -> Self {
        Self {
            energy_ratio: c.epsilon,
            alpha_fs: c.alpha,
            l: c.l,
            dim: c.dim,
            mu_c: c.mu_c(),
        }
    }
}

/// `μ_C = l + D/2 − 1`.
pub fn mu_c(l: u32, dim: u32) -> f64 {
    l as f64 + dim as f64 / 2.0 - 1.0
}

/// Reject `α_fs >= μ_C` (the centrifugal index `√(μ_C² − α²)` turns
/// imaginary) and nonsensical couplings.
pub fn check_coupling(alpha: f64, l: u32, dim: u32) -> Result<()> {
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::Parameter {
            name: "alpha_fs",
            value: alpha,
            reason: "must be finite and non-negative",
        });
    }
    if dim < 2 {
        return Err(Error::Parameter {
            name: "dim",
            value: dim as f64,
            reason: "spatial dimension must be at least 2",
        });
    }
    let mu = mu_c(l, dim);
    if alpha >= mu {
        return Err(Error::FallToCenter { alpha, mu_c: mu });
    }
    Ok(())
}

impl CoulombSystem {
    pub fn new(epsilon: f64, alpha: f64, l: u32, dim: u32) -> Result<Self> {
        if !epsilon.is_finite() || epsilon.abs() >= 1.0 {
            return Err(Error::Threshold { epsilon });
        }
        check_coupling(alpha, l, dim)?;
        Ok(Self {
            epsilon,
            alpha,
            l,
            dim,
        })
    }

    /// Same system at a different energy ratio.
    pub fn with_energy(&self, epsilon: f64) -> Result<Self> {
        Self::new(epsilon, self.alpha, self.l, self.dim)
    }

    pub fn energy_ratio(&self) -> f64 {
        self.epsilon
    }

    pub fn alpha_fs(&self) -> f64 {
        self.alpha
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn mu_c(&self) -> f64 {
        mu_c(self.l, self.dim)
    }

    /// `√(1 − ε²)`, evaluated as `√((1 − ε)(1 + ε))` so that energies close
    /// to threshold keep their relative accuracy.
    pub fn decay_rate(&self) -> f64 {
        ((1.0 - self.epsilon) * (1.0 + self.epsilon)).sqrt()
    }

    /// Effective centrifugal index `μ̃ = √(μ_C² − α_fs²)`.
    pub fn mu_tilde(&self) -> f64 {
        let mu = self.mu_c();
        ((mu - self.alpha) * (mu + self.alpha)).sqrt()
    }

    /// Whittaker index `κ = ε α_fs / √(1 − ε²)`.
    pub fn kappa(&self) -> f64 {
        self.epsilon * self.alpha / self.decay_rate()
    }
}

/// Intermediate Morse-potential parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MorseParams {
    /// Inverse length scale `v = √(1 − ε²)`.
    pub v: f64,
    /// Well parameter `ε α_fs / (1 − ε²)`; only `v · a_dk = κ` is consumed
    /// downstream.
    pub a_dk: f64,
    /// Pseudoenergy `E_M = −(μ_C² − α_fs²) / 2`.
    pub e_m: f64,
}

/// Radial harmonic oscillator parameters (`l_O`, `D_O` enter only through
/// `μ_O`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorParams {
    pub mass: f64,
    pub omega: f64,
    pub pseudoenergy: f64,
    pub mu_o: f64,
}

impl OscillatorParams {
    /// Whittaker index `E_O / (2ω)`.
    pub fn kappa(&self) -> f64 {
        self.pseudoenergy / (2.0 * self.omega)
    }

    /// Whittaker index `μ_O / 2`.
    pub fn whittaker_mu(&self) -> f64 {
        0.5 * self.mu_o
    }

    /// First Gamma argument of the oscillator amplitude,
    /// `(1 + μ_O)/2 − E_O/(2ω)`; the amplitude has poles where it is a
    /// non-positive integer.
    pub fn pole_argument(&self) -> f64 {
        0.5 * (1.0 + self.mu_o) - self.kappa()
    }

    /// Build the oscillator from the Morse stage using the matching
    /// conditions `μ_O² = −2 m_O E_M`, `m_O ω²/2 = 2 v²/m_O`,
    /// `E_O = 4 a_dk v²/m_O`.
    pub fn from_morse(m: &MorseParams) -> Self {
        let mass = OSCILLATOR_MASS;
        Self {
            mass,
            omega: 2.0 * m.v / mass,
            pseudoenergy: 4.0 * m.a_dk * m.v * m.v / mass,
            mu_o: (-2.0 * mass * m.e_m).sqrt(),
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.mu_o > 0.0) {
            return Err(Error::Inconsistent(format!("mu_o = {} must be positive", self.mu_o)));
        }
        if !(self.omega > 0.0) {
            return Err(Error::Inconsistent(format!("omega = {} must be positive", self.omega)));
        }
        Ok(())
    }
}

pub fn to_morse(c: &CoulombSystem) -> MorseParams {
    let one_minus_eps2 = (1.0 - c.epsilon) * (1.0 + c.epsilon);
    let mu = c.mu_c();
    MorseParams {
        v: one_minus_eps2.sqrt(),
        a_dk: c.epsilon * c.alpha / one_minus_eps2,
        e_m: -0.5 * (mu - c.alpha) * (mu + c.alpha),
    }
}

/// Coulomb → oscillator dictionary: `μ_O = 2√(μ_C² − α²)`,
/// `ω = √(1 − ε²)/2`, `E_O = ε α_fs`, `m_O = 4`.
///
/// The result is cross-checked against [`OscillatorParams::from_morse`]
/// before it is returned.
pub fn to_oscillator(c: &CoulombSystem) -> Result<OscillatorParams> {
    let direct = OscillatorParams {
        mass: OSCILLATOR_MASS,
        omega: 0.5 * c.decay_rate(),
        pseudoenergy: c.epsilon * c.alpha,
        mu_o: 2.0 * c.mu_tilde(),
    };
    direct.validate()?;
    let via_morse = OscillatorParams::from_morse(&to_morse(c));
    let pairs = [
        ("mass", direct.mass, via_morse.mass),
        ("omega", direct.omega, via_morse.omega),
        ("pseudoenergy", direct.pseudoenergy, via_morse.pseudoenergy),
        ("mu_o", direct.mu_o, via_morse.mu_o),
    ];
    for (name, a, b) in pairs {
        let scale = a.abs().max(b.abs());
        if (a - b).abs() > DICTIONARY_TOLERANCE * scale {
            return Err(Error::Inconsistent(format!("{name}: {a} (direct) vs {b} (via Morse)")));
        }
    }
    Ok(direct)
}

/// `x ↦ x / 2`: Morse coordinate to the rescaled coordinate `x_O`.
pub fn half_coordinate_map(x: f64) -> f64 {
    0.5 * x
}

pub fn half_coordinate_inverse(x_o: f64) -> f64 {
    2.0 * x_o
}

/// Full coordinate chain `r_C → x = ln r_C → x_O = x/2 → z = e^{x_O}`.
pub fn oscillator_radius(r_c: f64) -> f64 {
    half_coordinate_map(r_c.ln()).exp()
}

/// Inverse chain `z → x_O = ln z → x = 2 x_O → r_C = e^x`.
pub fn coulomb_radius(z: f64) -> f64 {
    half_coordinate_inverse(z.ln()).exp()
}
