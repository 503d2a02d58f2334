//! Verification suites shared by the command-line front end and the test
//! harness. Every check is deterministic: grids are fixed and random
//! parameter sets come from a seeded ChaCha stream.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coulomb_chain::CoulombSystem;
use crate::dk_transform::{effective_potential, TransformSpec};
use crate::error::{Error, Result};
use crate::green_amplitude::{bound_spectrum, coulomb_green, dk_identity_check, ordered};
use crate::kg_oracle::{oracle_levels, IntegratorConfig, OracleGreen, RadialProblem};
use crate::specfun::{gamma_ratio, kummer_m, whittaker_m, whittaker_w, WhittakerIndex};

/// Fine-structure constant used by the fixed verification grids.
pub const ALPHA_FS: f64 = 1.0 / 137.036;
/// Value used for the nonrelativistic-limit check.
pub const ALPHA_FS_CODATA: f64 = 1.0 / 137.035999;
/// Default seed of the random parameter draws.
pub const DEFAULT_SEED: u64 = 0x5eed_d0c5;
/// Ratio between the oracle Green's function and the closed form. Both are
/// the resolvent of `−½ d²/dr² + U(r)`, so the constant is one.
pub const ORACLE_CONVERSION: f64 = 1.0;

/// Tolerance block; every field can be overridden by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub effective_potential: f64,
    pub dk_identity: f64,
    pub oracle_flatness: f64,
    pub oracle_pointwise: f64,
    pub spectrum_closed_form: f64,
    pub oracle_eigenvalue: f64,
    pub nonrelativistic: f64,
    pub nonrelativistic_slope: f64,
    pub wronskian_identity: f64,
    pub contiguous_relation: f64,
    pub ode_residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            effective_potential: 1e-12,
            dk_identity: 1e-12,
            oracle_flatness: 1e-6,
            oracle_pointwise: 1e-6,
            spectrum_closed_form: 1e-12,
            oracle_eigenvalue: 1e-9,
            nonrelativistic: 1e-3,
            nonrelativistic_slope: 0.05,
            wronskian_identity: 1e-8,
            contiguous_relation: 1e-9,
            ode_residual: 1e-6,
        }
    }
}

/// One measured deviation and the bound it is held to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub samples: usize,
}

impl Measurement {
    fn new(name: &str, value: f64, tolerance: f64, samples: usize) -> Self {
        Self {
            name: name.to_string(),
            value,
            tolerance,
            samples,
        }
    }

    pub fn passed(&self) -> bool {
        self.value <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: u32,
    pub name: String,
    pub measurements: Vec<Measurement>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.measurements.iter().all(Measurement::passed)
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let parts: Vec<String> = self
            .measurements
            .iter()
            .map(|m| format!("{} {:.3e} <= {:.1e} (n={})", m.name, m.value, m.tolerance, m.samples))
            .collect();
        format!(
            "[{}] {} {}: {}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            parts.join("; ")
        )
    }
}

/// `count` points spaced logarithmically on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| {
            if i == 0 {
                lo
            } else if i + 1 == count {
                hi
            } else {
                (a + (b - a) * i as f64 / (count - 1) as f64).exp()
            }
        })
        .collect()
}

/// `count` points spaced evenly on `[lo, hi]`.
pub fn linear_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect()
}

fn rel_dev(got: f64, want: f64) -> f64 {
    if got == want {
        0.0
    } else {
        ((got - want) / want).abs()
    }
}

/// Effective potentials of the exponential and logarithmic maps against
/// `1/8` and `−1/(8z²)` on 100-point grids (`ρ = m = 1`).
pub fn check_effective_potential(tol: &Tolerances) -> Result<CheckReport> {
    let exp = TransformSpec::exponential();
    let log = TransformSpec::logarithmic();
    let mut worst_exp: f64 = 0.0;
    for q in linear_grid(-5.0, 5.0, 100) {
        worst_exp = worst_exp.max(rel_dev(effective_potential(&exp, q, 1.0, 1.0)?, 0.125));
    }
    let mut worst_log: f64 = 0.0;
    for z in log_grid(0.05, 20.0, 100) {
        let want = -1.0 / (8.0 * z * z);
        worst_log = worst_log.max(rel_dev(effective_potential(&log, z, 1.0, 1.0)?, want));
    }
    Ok(CheckReport {
        id: 1,
        name: "effective potential".into(),
        measurements: vec![
            Measurement::new("exp_map_rel", worst_exp, tol.effective_potential, 100),
            Measurement::new("log_map_rel", worst_log, tol.effective_potential, 100),
        ],
    })
}

/// A random valid, off-pole Coulomb system.
pub fn random_system(rng: &mut ChaCha8Rng) -> CoulombSystem {
    loop {
        let l = rng.random_range(0..4u32);
        let dim = rng.random_range(2..7u32);
        let mu = l as f64 + dim as f64 / 2.0 - 1.0;
        if mu <= 0.0 {
            continue;
        }
        let alpha = rng.random_range(0.0..0.9 * mu.min(1.0));
        let eps = rng.random_range(-0.999..0.999);
        if let Ok(c) = CoulombSystem::new(eps, alpha, l, dim) {
            if coulomb_green(&c, 1.0, 1.0).is_ok() {
                return c;
            }
        }
    }
}

/// Coulomb amplitude against the chained oscillator amplitude on a
/// `grid × grid` logarithmic radius grid over `[0.05, 50]`, for `sets`
/// random systems.
pub fn check_dk_identity(tol: &Tolerances, seed: u64, sets: usize, grid: usize) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let radii = log_grid(0.05, 50.0, grid);
    let mut worst: f64 = 0.0;
    let mut samples = 0;
    for _ in 0..sets {
        let c = random_system(&mut rng);
        for &r1 in &radii {
            for &r2 in &radii {
                let (rb, ra) = ordered(r1, r2);
                worst = worst.max(dk_identity_check(&c, rb, ra)?.rel_deviation);
                samples += 1;
            }
        }
    }
    Ok(CheckReport {
        id: 2,
        name: "DK equivalence identity".into(),
        measurements: vec![Measurement::new("rel_dev", worst, tol.dk_identity, samples)],
    })
}

/// One row of an oracle comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub r_b: f64,
    pub r_a: f64,
    pub closed_form: f64,
    pub oracle: f64,
    pub ratio: f64,
    pub rel_dev: f64,
}

/// Oracle and closed form on every ordered pair of `radii` for one system.
pub fn oracle_rows(c: &CoulombSystem, radii: &[f64], cfg: &IntegratorConfig) -> Result<Vec<OracleRow>> {
    let lo = radii.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = radii.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let g = OracleGreen::build(&RadialProblem::new(*c), lo, hi, cfg)?;
    let mut rows = Vec::with_capacity(radii.len() * radii.len());
    for &r1 in radii {
        for &r2 in radii {
            let (r_b, r_a) = ordered(r1, r2);
            let closed_form = coulomb_green(c, r_b, r_a)?.magnitude;
            let oracle = g.green(r_b, r_a)?;
            let ratio = oracle / closed_form;
            rows.push(OracleRow {
                r_b,
                r_a,
                closed_form,
                oracle,
                ratio,
                rel_dev: (ratio / ORACLE_CONVERSION - 1.0).abs(),
            });
        }
    }
    Ok(rows)
}

/// `(max − min) / mean` of the ratio column.
pub fn flatness(rows: &[OracleRow]) -> f64 {
    let (lo, hi, sum) = rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY, 0.0), |(lo, hi, s), r| {
        (lo.min(r.ratio), hi.max(r.ratio), s + r.ratio)
    });
    (hi - lo) / (sum / rows.len() as f64).abs()
}

/// Oracle Green's function against the closed form for
/// `ε ∈ {0.3, 0.9, 0.999}`, `l ∈ {0, 1}` on a 10 × 10 grid.
pub fn check_oracle(tol: &Tolerances, cfg: &IntegratorConfig) -> Result<CheckReport> {
    let mut worst_flat: f64 = 0.0;
    let mut worst_point: f64 = 0.0;
    let mut samples = 0;
    for &eps in &[0.3, 0.9, 0.999] {
        for l in 0..2 {
            let c = CoulombSystem::new(eps, ALPHA_FS, l, 3)?;
            let rows = oracle_rows(&c, &log_grid(0.05, 50.0, 10), cfg)?;
            worst_flat = worst_flat.max(flatness(&rows));
            worst_point = rows.iter().map(|r| r.rel_dev).fold(worst_point, f64::max);
            samples += rows.len();
        }
    }
    Ok(CheckReport {
        id: 3,
        name: "oracle equivalence".into(),
        measurements: vec![
            Measurement::new("ratio_flatness", worst_flat, tol.oracle_flatness, samples),
            Measurement::new("pointwise_rel_dev", worst_point, tol.oracle_pointwise, samples),
        ],
    })
}

/// Bracketed pole roots against the closed form, and oracle Wronskian
/// zeros against both, for `n_r ≤ 10`, `l ≤ 3`.
pub fn check_spectrum(tol: &Tolerances, cfg: &IntegratorConfig) -> Result<CheckReport> {
    let mut worst_closed: f64 = 0.0;
    let mut worst_oracle: f64 = 0.0;
    let mut samples = 0;
    for l in 0..=3 {
        let c = CoulombSystem::new(0.0, ALPHA_FS, l, 3)?;
        let levels = bound_spectrum(&c, 11)?;
        let approx: Vec<f64> = levels.iter().map(|e| e.energy_ratio).collect();
        let oracle = oracle_levels(&c, &approx, cfg)?;
        for (entry, &found) in levels.iter().zip(&oracle).take(11) {
            worst_closed = worst_closed.max((entry.energy_ratio - entry.closed_form(ALPHA_FS)).abs());
            worst_oracle = worst_oracle.max((found - entry.energy_ratio).abs());
            samples += 1;
        }
    }
    Ok(CheckReport {
        id: 4,
        name: "spectrum".into(),
        measurements: vec![
            Measurement::new("root_vs_closed_form", worst_closed, tol.spectrum_closed_form, samples),
            Measurement::new("oracle_vs_root", worst_oracle, tol.oracle_eigenvalue, samples),
        ],
    })
}

fn nonrelativistic_residual(alpha: f64, n_r: u32, l: u32) -> Result<f64> {
    let c = CoulombSystem::new(0.0, alpha, l, 3)?;
    let entry = bound_spectrum(&c, n_r)?[n_r as usize];
    let n = (n_r + l + 1) as f64;
    Ok(entry.binding(alpha) / (alpha * alpha / (2.0 * n * n)) - 1.0)
}

/// Binding energies against `α²/(2n²)` and the `α²` scaling of the
/// residual, for `n_r ≤ 5`, `l ≤ 3`.
pub fn check_nonrelativistic(tol: &Tolerances) -> Result<CheckReport> {
    let mut worst: f64 = 0.0;
    let mut worst_slope: f64 = 0.0;
    let mut samples = 0;
    for l in 0..=3 {
        for n_r in 0..=5 {
            let full = nonrelativistic_residual(ALPHA_FS_CODATA, n_r, l)?;
            let reduced = nonrelativistic_residual(0.1 * ALPHA_FS_CODATA, n_r, l)?;
            worst = worst.max(full.abs());
            let slope = (full.abs() / reduced.abs()).log10();
            worst_slope = worst_slope.max((slope / 2.0 - 1.0).abs());
            samples += 1;
        }
    }
    Ok(CheckReport {
        id: 5,
        name: "nonrelativistic limit".into(),
        measurements: vec![
            Measurement::new("binding_rel_dev", worst, tol.nonrelativistic, samples),
            Measurement::new("alpha_squared_slope", worst_slope, tol.nonrelativistic_slope, samples),
        ],
    })
}

/// Index pairs with `μ − κ + ½ > 0`, for which `M` and `W` are positive.
pub const WHITTAKER_GRID: [(f64, f64); 10] = [
    (-2.5, 0.2),
    (-0.7, 0.5),
    (0.0, 0.5),
    (0.4, 1.05),
    (0.16, 0.49997),
    (1.3, 1.5),
    (-1.1, 2.7),
    (2.9, 2.7),
    (3.1, 3.3),
    (0.9, 0.75),
];

/// Points of the Whittaker checks, logarithmic on `[0.5, 30]`.
pub fn whittaker_z_grid() -> Vec<f64> {
    log_grid(0.5, 30.0, 12)
}

fn five_point(f: &dyn Fn(f64) -> Result<f64>, z: f64, h: f64) -> Result<f64> {
    Ok((f(z - 2.0 * h)? - 8.0 * f(z - h)? + 8.0 * f(z + h)? - f(z + 2.0 * h)?) / (12.0 * h))
}

/// Largest deviation of `W M' − M W'` from `Γ(1+2μ)/Γ(μ−κ+½)`.
pub fn whittaker_wronskian_deviation() -> Result<(f64, usize)> {
    let mut worst: f64 = 0.0;
    let mut samples = 0;
    for &(kappa, mu) in &WHITTAKER_GRID {
        let idx = WhittakerIndex::new(kappa, mu)?;
        let expected = gamma_ratio(1.0 + 2.0 * mu, mu - kappa + 0.5)?;
        let m = |z: f64| whittaker_m(idx, z);
        let w = |z: f64| whittaker_w(idx, z);
        for z in whittaker_z_grid() {
            let h = 5e-4 * z;
            let wr = w(z)? * five_point(&m, z, h)? - m(z)? * five_point(&w, z, h)?;
            worst = worst.max(rel_dev(wr, expected));
            samples += 1;
        }
    }
    Ok((worst, samples))
}

/// Largest relative residual of the contiguous relation
/// `(b−a)M(a−1) + (2a−b+z)M(a) − aM(a+1) = 0`, relative to the largest term.
pub fn kummer_contiguous_deviation() -> Result<(f64, usize)> {
    let mut worst: f64 = 0.0;
    let mut samples = 0;
    for &a in &[-9.5, -3.3, -0.5, 0.7, 2.5, 8.1, 15.3] {
        for &b in &[-6.5, 0.5, 1.7, 4.0, 11.2] {
            for &z in &[0.1, 1.0, 5.0, 20.0, 60.0, 150.0] {
                let t1 = (b - a) * kummer_m(a - 1.0, b, z)?;
                let t2 = (2.0 * a - b + z) * kummer_m(a, b, z)?;
                let t3 = -a * kummer_m(a + 1.0, b, z)?;
                let scale = t1.abs().max(t2.abs()).max(t3.abs());
                worst = worst.max((t1 + t2 + t3).abs() / scale);
                samples += 1;
            }
        }
    }
    Ok((worst, samples))
}

/// Largest residual of Whittaker's equation, with five-point central
/// second differences, for both `M` and `W`, relative to `|u|`. Also confirms
/// that both functions are positive on the grid.
pub fn whittaker_ode_deviation() -> Result<(f64, usize)> {
    let mut worst: f64 = 0.0;
    let mut samples = 0;
    for &(kappa, mu) in &WHITTAKER_GRID {
        let idx = WhittakerIndex::new(kappa, mu)?;
        for z in whittaker_z_grid() {
            let h = 2.5e-3 * z;
            let q = -0.25 + kappa / z + (0.25 - mu * mu) / (z * z);
            for f in [whittaker_m, whittaker_w] {
                let u0 = f(idx, z)?;
                if !(u0 > 0.0) {
                    return Err(Error::Inconsistent(format!(
                        "Whittaker function not positive at kappa = {kappa}, mu = {mu}, z = {z}"
                    )));
                }
                let (m1, p1) = (f(idx, z - h)?, f(idx, z + h)?);
                let (m2, p2) = (f(idx, z - 2.0 * h)?, f(idx, z + 2.0 * h)?);
                let d2 = (-p2 + 16.0 * p1 - 30.0 * u0 + 16.0 * m1 - m2) / (12.0 * h * h);
                worst = worst.max((d2 + q * u0).abs() / u0.abs());
                samples += 1;
            }
        }
    }
    Ok((worst, samples))
}

pub fn check_special_functions(tol: &Tolerances) -> Result<CheckReport> {
    let (wr, n_wr) = whittaker_wronskian_deviation()?;
    let (ct, n_ct) = kummer_contiguous_deviation()?;
    let (ode, n_ode) = whittaker_ode_deviation()?;
    Ok(CheckReport {
        id: 6,
        name: "special functions".into(),
        measurements: vec![
            Measurement::new("wronskian_identity", wr, tol.wronskian_identity, n_wr),
            Measurement::new("kummer_contiguous", ct, tol.contiguous_relation, n_ct),
            Measurement::new("whittaker_ode_residual", ode, tol.ode_residual, n_ode),
        ],
    })
}

/// Criteria 1–6 in order.
pub fn run_all(tol: &Tolerances, cfg: &IntegratorConfig, seed: u64) -> Result<Vec<CheckReport>> {
    Ok(vec![
        check_effective_potential(tol)?,
        check_dk_identity(tol, seed, 10, 20)?,
        check_oracle(tol, cfg)?,
        check_spectrum(tol, cfg)?,
        check_nonrelativistic(tol)?,
        check_special_functions(tol)?,
    ])
}
