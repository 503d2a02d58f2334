use serde::{Deserialize, Serialize};

use super::kummer::kummer_m_scaled;
use super::tricomi::tricomi_u_scaled;
use super::Scaled;
use crate::error::{Error, Result};

/// Index pair `(κ, μ)` of the Whittaker functions `M_{κ,μ}` and `W_{κ,μ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WhittakerIndex {
    kappa: f64,
    mu: f64,
}

impl WhittakerIndex {
    /// Requires `μ > −1/2`, which also keeps `1 + 2μ` off the non-positive
    /// integers.
    pub fn new(kappa: f64, mu: f64) -> Result<Self> {
        if !kappa.is_finite() {
            return Err(Error::Parameter {
                name: "kappa",
                value: kappa,
                reason: "must be finite",
            });
        }
        if !mu.is_finite() || mu <= -0.5 {
            return Err(Error::Parameter {
                name: "mu",
                value: mu,
                reason: "must exceed -1/2",
            });
        }
        Ok(Self { kappa, mu })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// First Kummer parameter `μ − κ + 1/2`.
    pub fn kummer_a(&self) -> f64 {
        self.mu - self.kappa + 0.5
    }

    /// Second Kummer parameter `1 + 2μ`.
    pub fn kummer_b(&self) -> f64 {
        1.0 + 2.0 * self.mu
    }
}

/// `M_{κ,μ}(z) = e^{−z/2} z^{μ+1/2} M(μ−κ+1/2, 1+2μ, z)`, the solution of
/// Whittaker's equation regular at the origin.
pub fn whittaker_m(idx: WhittakerIndex, z: f64) -> Result<f64> {
    if !(z >= 0.0) || !z.is_finite() {
        return Err(Error::Domain {
            what: "z",
            value: z,
            domain: "[0, ∞)".into(),
        });
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    Ok(whittaker_m_scaled(idx, z)?.value())
}

/// `M_{κ,μ}(z)` for `z > 0` as mantissa and logarithmic scale.
pub(crate) fn whittaker_m_scaled(idx: WhittakerIndex, z: f64) -> Result<Scaled> {
    let m = kummer_m_scaled(idx.kummer_a(), idx.kummer_b(), z)?;
    Ok(Scaled {
        mantissa: m.mantissa,
        ln_scale: m.ln_scale - 0.5 * z + (idx.mu + 0.5) * z.ln(),
    })
}

/// `W_{κ,μ}(z) = e^{−z/2} z^{μ+1/2} U(μ−κ+1/2, 1+2μ, z)`, the solution
/// decaying like `e^{−z/2} z^κ` at infinity.
pub fn whittaker_w(idx: WhittakerIndex, z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain {
            what: "z",
            value: z,
            domain: "(0, ∞)".into(),
        });
    }
    Ok(whittaker_w_scaled(idx, z)?.value())
}

/// `W_{κ,μ}(z)` for `z > 0` as mantissa and logarithmic scale.
pub(crate) fn whittaker_w_scaled(idx: WhittakerIndex, z: f64) -> Result<Scaled> {
    let u = tricomi_u_scaled(idx.kummer_a(), idx.kummer_b(), z)?;
    Ok(Scaled {
        mantissa: u.mantissa,
        ln_scale: u.ln_scale - 0.5 * z + (idx.mu + 0.5) * z.ln(),
    })
}
