//! Independent reconstruction of the radial Coulomb Green's function from
//! numerically integrated solutions of the radial Klein–Gordon equation.
//!
//! The operator is `−½ d²/dr² + U(r)` with
//! `U(r) = (μ_C² − ¼)/(2r²) − (ε + α_fs/r)²/2 + ½`, so homogeneous solutions
//! satisfy `u'' = 2U(r) u`. The regular solution is started from its
//! Frobenius series near the origin, the decaying one from its asymptotic
//! series far out; both are integrated with an embedded Dormand–Prince 5(4)
//! pair. Solutions are stored as a mantissa and a natural-log scale so that
//! their dynamic range never leaves the double range.

use std::f64::consts::LN_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coulomb_chain::CoulombSystem;
use crate::error::{Error, Result};

/// Default start radius of the regular solution.
pub const DEFAULT_R_START: f64 = 1e-6;
/// The decaying solution starts where `√(1−ε²) r` reaches this value.
pub const DEFAULT_TAIL_EXPONENT: f64 = 40.0;
/// Below this normalized Wronskian the two solutions are treated as
/// linearly dependent (a bound state).
pub const NEAR_POLE_THRESHOLD: f64 = 1e-10;

/// Step-control settings of the integrator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// A step shorter than this fraction of `max(|r|, 1)` counts as a
    /// collapse of the step controller.
    pub min_step_fraction: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            atol: 1e-14,
            max_steps: 2_000_000,
            min_step_fraction: 1e-15,
        }
    }
}

impl IntegratorConfig {
    /// Same settings with both tolerances scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            rtol: self.rtol * factor,
            atol: self.atol * factor,
            ..*self
        }
    }
}

/// A linear equation `u'' = q(r) u`.
pub trait LinearSecondOrder {
    fn coefficient(&self, r: f64) -> f64;
    fn coefficient_derivative(&self, r: f64) -> f64;
}

/// Radial Klein–Gordon Coulomb equation at one energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialProblem {
    pub c: CoulombSystem,
}

impl RadialProblem {
    pub fn new(c: CoulombSystem) -> Self {
        Self { c }
    }

    /// `U(r)`, evaluated in the cancellation-free form
    /// `(μ̃² − ¼)/(2r²) − ε α_fs / r + (1 − ε²)/2`.
    pub fn potential_term(&self, r: f64) -> f64 {
        0.5 * self.coefficient(r)
    }

    /// `(μ̃² − ¼)` with `μ̃² = (μ_C − α)(μ_C + α)`.
    fn centrifugal(&self) -> f64 {
        let mu = self.c.mu_c();
        let a = self.c.alpha_fs();
        (mu - a) * (mu + a) - 0.25
    }

    fn coulomb(&self) -> f64 {
        2.0 * self.c.energy_ratio() * self.c.alpha_fs()
    }

    fn v2(&self) -> f64 {
        let e = self.c.energy_ratio();
        (1.0 - e) * (1.0 + e)
    }

    /// Indicial exponent of the regular solution, `½ + √(μ_C² − α_fs²)`.
    pub fn frobenius_exponent(&self) -> f64 {
        0.5 + self.c.mu_tilde()
    }

    /// Radius at which the two solutions are matched.
    pub fn matching_radius(&self) -> f64 {
        1.0 / self.c.decay_rate()
    }

    /// Default start of the decaying solution.
    pub fn default_r_far(&self) -> f64 {
        DEFAULT_TAIL_EXPONENT / self.c.decay_rate()
    }
}

impl LinearSecondOrder for RadialProblem {
    fn coefficient(&self, r: f64) -> f64 {
        self.centrifugal() / (r * r) - self.coulomb() / r + self.v2()
    }

    fn coefficient_derivative(&self, r: f64) -> f64 {
        -2.0 * self.centrifugal() / (r * r * r) + self.coulomb() / (r * r)
    }
}

/// Initial data `u = y e^{ln_scale}`, `u' = dy e^{ln_scale}` at `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StartValue {
    pub r: f64,
    pub y: f64,
    pub dy: f64,
    pub ln_scale: f64,
}

/// Solution value and derivative sharing one logarithmic scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledPair {
    pub u: f64,
    pub du: f64,
    pub ln_scale: f64,
}

impl ScaledPair {
    pub fn value(&self) -> f64 {
        self.u * self.ln_scale.exp()
    }

    pub fn derivative(&self) -> f64 {
        self.du * self.ln_scale.exp()
    }

    /// `u'/u`.
    pub fn log_derivative(&self) -> f64 {
        self.du / self.u
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Node {
    r: f64,
    y: f64,
    dy: f64,
    d2y: f64,
    d3y: f64,
    ln_scale: f64,
}

/// Accepted integrator steps, ordered by increasing `r`, with quintic
/// Hermite interpolation between them.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionTable {
    nodes: Vec<Node>,
}

fn hermite(t: f64, h: f64, v0: (f64, f64, f64), v1: (f64, f64, f64)) -> f64 {
    let (t2, t3) = (t * t, t * t * t);
    let (t4, t5) = (t3 * t, t3 * t2);
    let h00 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
    let h01 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
    let h02 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
    let h10 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
    let h11 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
    let h12 = 0.5 * t3 - t4 + 0.5 * t5;
    v0.0 * h00 + h * v0.1 * h01 + h * h * v0.2 * h02 + v1.0 * h10 + h * v1.1 * h11 + h * h * v1.2 * h12
}

impl SolutionTable {
    /// Covered interval.
    pub fn range(&self) -> (f64, f64) {
        (self.nodes[0].r, self.nodes[self.nodes.len() - 1].r)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node radii.
    pub fn mesh(&self) -> impl Iterator<Item = f64> + '_ {
        self.nodes.iter().map(|n| n.r)
    }

    /// `u` and `u'` at `r`, interpolated between steps.
    pub fn eval(&self, r: f64) -> Result<ScaledPair> {
        let (lo, hi) = self.range();
        if !(r >= lo && r <= hi) {
            return Err(Error::Domain {
                what: "r",
                value: r,
                domain: format!("[{lo}, {hi}]"),
            });
        }
        let i = match self.nodes.partition_point(|n| n.r <= r) {
            0 => 0,
            k if k >= self.nodes.len() => self.nodes.len() - 2,
            k => k - 1,
        };
        let (a, b) = (&self.nodes[i], &self.nodes[i + 1]);
        if r == a.r {
            return Ok(ScaledPair {
                u: a.y,
                du: a.dy,
                ln_scale: a.ln_scale,
            });
        }
        let f = (b.ln_scale - a.ln_scale).exp();
        let h = b.r - a.r;
        let t = (r - a.r) / h;
        let u = hermite(t, h, (a.y, a.dy, a.d2y), (f * b.y, f * b.dy, f * b.d2y));
        let du = hermite(t, h, (a.dy, a.d2y, a.d3y), (f * b.dy, f * b.d2y, f * b.d3y));
        Ok(ScaledPair {
            u,
            du,
            ln_scale: a.ln_scale,
        })
    }

    /// `∫ w(r) u(r)² dr` over the table, as `(mantissa, ln_scale)`, by
    /// five-point Gauss–Legendre on every step of the mesh.
    pub fn weighted_square_integral<W: Fn(f64) -> f64>(&self, lo: f64, hi: f64, w: W) -> Result<(f64, f64)> {
        const X: [f64; 5] = [
            -0.906_179_845_938_664,
            -0.538_469_310_105_683,
            0.0,
            0.538_469_310_105_683,
            0.906_179_845_938_664,
        ];
        const WT: [f64; 5] = [
            0.236_926_885_056_189,
            0.478_628_670_499_366,
            0.568_888_888_888_889,
            0.478_628_670_499_366,
            0.236_926_885_056_189,
        ];
        let reference = 2.0 * self.nodes.iter().map(|n| n.ln_scale).fold(f64::NEG_INFINITY, f64::max);
        let mut breaks: Vec<f64> = vec![lo];
        breaks.extend(self.mesh().filter(|&r| r > lo && r < hi));
        breaks.push(hi);
        let mut sum = 0.0;
        for pair in breaks.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
            for (x, wt) in X.iter().zip(WT) {
                let r = mid + half * x;
                let p = self.eval(r)?;
                sum += wt * half * w(r) * p.u * p.u * (2.0 * p.ln_scale - reference).exp();
            }
        }
        Ok((sum, reference))
    }
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn make_node<P: LinearSecondOrder + ?Sized>(p: &P, r: f64, y: f64, dy: f64, ln_scale: f64) -> Node {
    let q = p.coefficient(r);
    Node {
        r,
        y,
        dy,
        d2y: q * y,
        d3y: p.coefficient_derivative(r) * y + q * dy,
        ln_scale,
    }
}

/// Integrate `u'' = q u` from `start` to `r_end` (either direction).
pub fn integrate<P: LinearSecondOrder + ?Sized>(
    p: &P,
    start: StartValue,
    r_end: f64,
    cfg: &IntegratorConfig,
) -> Result<SolutionTable> {
    let dir = (r_end - start.r).signum();
    let (mut r, mut y, mut dy, mut ln_scale) = (start.r, start.y, start.dy, start.ln_scale);
    let mut nodes = vec![make_node(p, r, y, dy, ln_scale)];
    let f = |r: f64, y: f64, dy: f64| (dy, p.coefficient(r) * y);
    let q0 = p.coefficient(r).abs();
    let mut h = dir * (1e-3 * r.abs()).max(1e-12).min(0.1 / q0.sqrt().max(1e-300)).min((r_end - r).abs());
    let mut k = [(0.0, 0.0); 7];
    k[0] = f(r, y, dy);
    let mut steps = 0;
    while dir * (r_end - r) > 0.0 {
        steps += 1;
        if steps > cfg.max_steps {
            return Err(Error::NonConvergence {
                routine: "dormand_prince",
                detail: format!("step budget {} exhausted at r = {r}", cfg.max_steps),
            });
        }
        if dir * (r + h - r_end) > 0.0 {
            h = r_end - r;
        }
        for s in 1..7 {
            let (mut sy, mut sdy) = (y, dy);
            for (j, kj) in k.iter().enumerate().take(s) {
                sy += h * A[s][j] * kj.0;
                sdy += h * A[s][j] * kj.1;
            }
            k[s] = f(r + C[s] * h, sy, sdy);
        }
        // The seventh stage is evaluated at the fifth-order solution itself.
        let (ny, ndy) = (
            y + h * (0..6).map(|s| A[6][s] * k[s].0).sum::<f64>(),
            dy + h * (0..6).map(|s| A[6][s] * k[s].1).sum::<f64>(),
        );
        let ey = h * (0..7).map(|s| E[s] * k[s].0).sum::<f64>();
        let edy = h * (0..7).map(|s| E[s] * k[s].1).sum::<f64>();
        let sy = cfg.atol + cfg.rtol * y.abs().max(ny.abs());
        let sdy = cfg.atol + cfg.rtol * dy.abs().max(ndy.abs());
        let err = (0.5 * ((ey / sy).powi(2) + (edy / sdy).powi(2))).sqrt();
        if !err.is_finite() {
            h *= 0.2;
        } else if err <= 1.0 {
            r += h;
            y = ny;
            dy = ndy;
            // Keep the mantissa of order one: rescale by a power of two.
            let amplitude = y.abs().max((r * dy).abs());
            if amplitude == 0.0 || !amplitude.is_finite() {
                return Err(Error::Underflow { r });
            }
            let shift = amplitude.log2().floor() as i32;
            if shift != 0 {
                let factor = 2f64.powi(-shift);
                y *= factor;
                dy *= factor;
                ln_scale += shift as f64 * LN_2;
            }
            nodes.push(make_node(p, r, y, dy, ln_scale));
            k[0] = f(r, y, dy);
            h *= (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
        }
        if h.abs() < cfg.min_step_fraction * r.abs().max(1.0) {
            return Err(Error::Stiffness { r, step: h });
        }
    }
    if dir < 0.0 {
        nodes.reverse();
    }
    Ok(SolutionTable { nodes })
}

/// Frobenius series `u = r^s Σ c_k r^k` at `r`, with
/// `c_k k (2s + k − 1) = −2εα c_{k−1} + (1−ε²) c_{k−2}`.
pub fn frobenius_start(p: &RadialProblem, r: f64) -> StartValue {
    let s = p.frobenius_exponent();
    let (b, v2) = (p.coulomb(), p.v2());
    let (mut prev2, mut prev1) = (0.0, 1.0);
    let (mut sum, mut dsum) = (1.0, 0.0);
    let mut power = 1.0;
    for k in 1..400 {
        let kf = k as f64;
        let ck = (-b * prev1 + v2 * prev2) / (kf * (2.0 * s + kf - 1.0));
        power *= r;
        let term = ck * power;
        sum += term;
        dsum += kf * term / r;
        if term.abs() < 1e-18 * sum.abs() && ck.abs() * power < 1e-18 && k > 2 {
            break;
        }
        prev2 = prev1;
        prev1 = ck;
    }
    StartValue {
        r,
        y: sum,
        dy: s / r * sum + dsum,
        ln_scale: s * r.ln(),
    }
}

/// Decaying start `u ~ e^{−vr} (2vr)^κ Σ_k (½+μ̃−κ)_k (½−μ̃−κ)_k / (k! (−2vr)^k)`,
/// truncated before its smallest term.
pub fn asymptotic_start(p: &RadialProblem, r: f64) -> StartValue {
    let v = p.c.decay_rate();
    let kappa = p.c.kappa();
    let mu = p.c.mu_tilde();
    let z = 2.0 * v * r;
    let (a, b) = (0.5 + mu - kappa, 0.5 - mu - kappa);
    let (mut sum, mut dsum) = (1.0, 0.0);
    let mut term = 1.0f64;
    for k in 1..60 {
        let kf = k as f64;
        let next = term * (a + kf - 1.0) * (b + kf - 1.0) / (kf * -z);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        // d/dz z^{-k} = −k z^{-k-1}
        dsum += -kf * term / z;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    // u = e^{−z/2} z^κ S(z), du/dr = 2v du/dz.
    let du_dz = (-0.5 + kappa / z) * sum + dsum;
    StartValue {
        r,
        y: sum,
        dy: 2.0 * v * du_dz,
        ln_scale: -0.5 * z + kappa * z.ln(),
    }
}

/// Regular solution on `[r_start, r_end]`.
pub fn integrate_regular(
    p: &RadialProblem,
    r_start: f64,
    r_end: f64,
    cfg: &IntegratorConfig,
) -> Result<SolutionTable> {
    if !(r_start > 0.0 && r_end > r_start) {
        return Err(Error::Domain {
            what: "r_start",
            value: r_start,
            domain: format!("(0, {r_end})"),
        });
    }
    integrate(p, frobenius_start(p, r_start), r_end, cfg)
}

/// Decaying solution on `[r_end, r_far]`, integrated inward.
pub fn integrate_decaying(
    p: &RadialProblem,
    r_far: f64,
    r_end: f64,
    cfg: &IntegratorConfig,
) -> Result<SolutionTable> {
    if !(r_end > 0.0 && r_far > r_end) {
        return Err(Error::Domain {
            what: "r_far",
            value: r_far,
            domain: format!("({r_end}, ∞)"),
        });
    }
    integrate(p, asymptotic_start(p, r_far), r_end, cfg)
}

/// `(mantissa, ln_scale)` of `u1 u2' − u1' u2` at `r`.
pub fn wronskian_scaled(u1: &SolutionTable, u2: &SolutionTable, r: f64) -> Result<(f64, f64)> {
    let a = u1.eval(r)?;
    let b = u2.eval(r)?;
    Ok((a.u * b.du - a.du * b.u, a.ln_scale + b.ln_scale))
}

/// `u1 u2' − u1' u2` at `r`, from the integrators' derivative channels.
pub fn wronskian(u1: &SolutionTable, u2: &SolutionTable, r: f64) -> Result<f64> {
    let (m, l) = wronskian_scaled(u1, u2, r)?;
    Ok(m * l.exp())
}

/// `W(u_reg, u_dec) / (‖(u_reg, u_reg')‖ ‖(u_dec, u_dec')‖)` at `r`: a
/// scale-free measure of linear dependence, zero exactly at bound states.
pub fn normalized_wronskian(reg: &SolutionTable, dec: &SolutionTable, r: f64) -> Result<f64> {
    let a = reg.eval(r)?;
    let b = dec.eval(r)?;
    Ok((a.u * b.du - a.du * b.u) / (a.u.hypot(a.du) * b.u.hypot(b.du)))
}

/// Green's function of `−½ d²/dr² + U(r)` built from the two solutions.
#[derive(Debug, Clone)]
pub struct OracleGreen {
    pub regular: SolutionTable,
    pub decaying: SolutionTable,
    wronskian: (f64, f64),
}

impl OracleGreen {
    /// Integrate both solutions so that every radius in `[lo, hi]` is
    /// covered, using the default start radii.
    pub fn build(p: &RadialProblem, lo: f64, hi: f64, cfg: &IntegratorConfig) -> Result<Self> {
        let r_m = p.matching_radius();
        let r_far = p.default_r_far().max(2.0 * hi);
        let r_start = DEFAULT_R_START.min(0.5 * lo);
        let regular = integrate_regular(p, r_start, hi.max(r_m), cfg)?;
        let decaying = integrate_decaying(p, r_far, lo.min(r_m), cfg)?;
        let normalized = normalized_wronskian(&regular, &decaying, r_m)?;
        if normalized.abs() < NEAR_POLE_THRESHOLD {
            return Err(Error::NearPole { wronskian: normalized });
        }
        let wronskian = wronskian_scaled(&regular, &decaying, r_m)?;
        Ok(Self {
            regular,
            decaying,
            wronskian,
        })
    }

    /// `−2 u_reg(r_<) u_dec(r_>) / W(u_reg, u_dec)` for `r_b ≥ r_a`.
    pub fn green(&self, r_b: f64, r_a: f64) -> Result<f64> {
        if r_b < r_a {
            return Err(Error::Order { r_b, r_a });
        }
        let reg = self.regular.eval(r_a)?;
        let dec = self.decaying.eval(r_b)?;
        let (wm, wl) = self.wronskian;
        Ok(-2.0 * reg.u * dec.u / wm * (reg.ln_scale + dec.ln_scale - wl).exp())
    }
}

/// One-shot oracle Green's function at `(r_b, r_a)`, `r_b ≥ r_a`.
pub fn oracle_green(p: &RadialProblem, r_b: f64, r_a: f64, cfg: &IntegratorConfig) -> Result<f64> {
    if r_b < r_a {
        return Err(Error::Order { r_b, r_a });
    }
    OracleGreen::build(p, r_a, r_b, cfg)?.green(r_b, r_a)
}

/// Normalized Wronskian at the matching radius as a function of the
/// energy of `template`.
pub fn matching_wronskian(template: &CoulombSystem, epsilon: f64, cfg: &IntegratorConfig) -> Result<f64> {
    let p = RadialProblem::new(template.with_energy(epsilon)?);
    let r_m = p.matching_radius();
    let reg = integrate_regular(&p, DEFAULT_R_START, r_m, cfg)?;
    let dec = integrate_decaying(&p, p.default_r_far(), r_m, cfg)?;
    normalized_wronskian(&reg, &dec, r_m)
}

/// Zero of [`matching_wronskian`] inside `[lo, hi]`, which must bracket a
/// sign change. Illinois-modified regula falsi, stopped when the bracket
/// is below `width` or no longer shrinks.
pub fn wronskian_zero(
    template: &CoulombSystem,
    lo: f64,
    hi: f64,
    width: f64,
    cfg: &IntegratorConfig,
) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (
        matching_wronskian(template, a, cfg)?,
        matching_wronskian(template, b, cfg)?,
    );
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NonConvergence {
            routine: "wronskian_zero",
            detail: format!("no sign change on [{lo}, {hi}]"),
        });
    }
    let mut side = 0;
    for _ in 0..200 {
        if b - a <= width {
            break;
        }
        let mut x = (a * fb - b * fa) / (fb - fa);
        if !(x > a && x < b) {
            x = 0.5 * (a + b);
        }
        if x <= a || x >= b {
            break;
        }
        let fx = matching_wronskian(template, x, cfg)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = x;
            fb = fx;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
    }
    Ok((a * fb - b * fa) / (fb - fa))
}

/// Oracle eigenvalue for each of `n_r = 0..=n_r_max`, each bracketed
/// between midpoints of neighbouring levels in `brackets_from` (a
/// sequence of approximate levels, one longer than the requested count).
/// Levels are searched in parallel.
pub fn oracle_levels(
    template: &CoulombSystem,
    approximate: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Vec<f64>> {
    if approximate.len() < 2 {
        return Err(Error::Parameter {
            name: "approximate",
            value: approximate.len() as f64,
            reason: "need at least two approximate levels",
        });
    }
    (0..approximate.len() - 1)
        .into_par_iter()
        .map(|i| {
            let e = approximate[i];
            let lo = if i == 0 { 0.5 * e } else { 0.5 * (approximate[i - 1] + e) };
            let hi = 0.5 * (e + approximate[i + 1]);
            wronskian_zero(template, lo, hi, 1e-15, cfg)
        })
        .collect()
}

/// `(∫ u², ∫ (ε + α_fs/r) u²)` for the bound-state eigenfunction obtained by
/// matching the regular and decaying solutions at `r_m`. Both integrals
/// share one arbitrary normalization; only their ratio is meaningful.
pub fn eigenfunction_moments(p: &RadialProblem, cfg: &IntegratorConfig) -> Result<(f64, f64)> {
    let r_m = p.matching_radius();
    let r_far = p.default_r_far();
    let reg = integrate_regular(p, DEFAULT_R_START, r_m, cfg)?;
    let dec = integrate_decaying(p, r_far, r_m, cfg)?;
    let (ra, da) = (reg.eval(r_m)?, dec.eval(r_m)?);
    // Scale the decaying branch onto the regular one at r_m.
    let ln_match = 2.0 * ((ra.u / da.u).abs().ln() + ra.ln_scale - da.ln_scale);
    let (eps, alpha) = (p.c.energy_ratio(), p.c.alpha_fs());
    let weight = |r: f64| eps + alpha / r;
    let combine = |(m1, l1): (f64, f64), (m2, l2): (f64, f64)| {
        let l2 = l2 + ln_match;
        let top = l1.max(l2);
        m1 * (l1 - top).exp() + m2 * (l2 - top).exp()
    };
    let norm = combine(
        reg.weighted_square_integral(DEFAULT_R_START, r_m, |_| 1.0)?,
        dec.weighted_square_integral(r_m, r_far, |_| 1.0)?,
    );
    let charge = combine(
        reg.weighted_square_integral(DEFAULT_R_START, r_m, weight)?,
        dec.weighted_square_integral(r_m, r_far, weight)?,
    );
    Ok((norm, charge))
}
