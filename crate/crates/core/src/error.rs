use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A Gamma argument sits on (or within the guard band of) a non-positive
    /// integer. For the Coulomb kernel this means a bound-state energy.
    #[error("pole: Gamma argument {argument} is within {band:e} of a non-positive integer")]
    Pole { argument: f64, band: f64 },

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    Parameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("{routine} did not converge: {detail}")]
    NonConvergence {
        routine: &'static str,
        detail: String,
    },

    #[error("{what} = {value} is outside the domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: String,
    },

    #[error("transformation is degenerate at q = {q}: |h'(q)| = {derivative:e}")]
    DegenerateMap { q: f64, derivative: f64 },

    #[error("energy ratio {epsilon} is not below threshold (|epsilon| < 1 required)")]
    Threshold { epsilon: f64 },

    #[error("fall to center: alpha_fs = {alpha} >= mu_c = {mu_c}")]
    FallToCenter { alpha: f64, mu_c: f64 },

    #[error("radii out of order: r_b = {r_b} < r_a = {r_a}")]
    Order { r_b: f64, r_a: f64 },

    #[error("no bound states for alpha_fs = {alpha}")]
    NoBoundStates { alpha: f64 },

    #[error("step size collapsed to {step:e} at r = {r}")]
    Stiffness { r: f64, step: f64 },

    #[error("decaying solution underflowed before reaching r = {r}")]
    Underflow { r: f64 },

    #[error("Wronskian {wronskian:e} is below the pole threshold")]
    NearPole { wronskian: f64 },

    #[error("parameter dictionary inconsistent: {0}")]
    Inconsistent(String),
}
