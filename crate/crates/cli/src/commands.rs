//! Subcommand implementations. Each one returns the bytes to emit so that
//! writing (and its atomicity) is handled in one place.

use anyhow::Result;
use rayon::prelude::*;
use serde::Serialize;

use dkgreen::coulomb_chain::{to_morse, to_oscillator, CoulombSystem};
use dkgreen::dk_transform::{effective_potential, TransformSpec};
use dkgreen::green_amplitude::{bound_spectrum, coulomb_green, ordered};
use dkgreen::verify::{self, oracle_rows, CheckReport};

use crate::cli::{
    self, EffpotArgs, Format, GreenArgs, GridSpec, MapArgs, MapKind, OracleArgs, Scale, SpectrumArgs, VerifyArgs,
};
use crate::output::{json_bytes, rows_bytes, SCHEMA};

/// Bytes to write plus the identifiers of failed checks, if any.
pub struct Emission {
    pub bytes: Vec<u8>,
    pub failed_checks: Vec<u32>,
}

impl Emission {
    fn ok(bytes: Vec<u8>) -> Self {
        Self {
            bytes,
            failed_checks: Vec::new(),
        }
    }
}

#[derive(Debug, Serialize)]
struct SpectrumRow {
    n_r: u32,
    #[serde(rename = "N")]
    principal: f64,
    epsilon_n: f64,
    binding: f64,
}

pub fn spectrum(args: &SpectrumArgs) -> Result<Emission> {
    let template = args.system.template()?;
    let alpha = template.alpha_fs();
    let rows: Vec<SpectrumRow> = bound_spectrum(&template, args.nmax)?
        .iter()
        .map(|e| SpectrumRow {
            n_r: e.n_r,
            principal: e.principal_combination,
            epsilon_n: e.energy_ratio,
            binding: e.binding(alpha),
        })
        .collect();
    let format = args.out.format.unwrap_or(Format::Csv);
    Ok(Emission::ok(rows_bytes("spectrum", &rows, format)?))
}

#[derive(Debug, Serialize)]
struct GreenRow {
    r_b: f64,
    r_a: f64,
    green: f64,
}

fn green_row(c: &CoulombSystem, r1: f64, r2: f64) -> Result<GreenRow> {
    let (r_b, r_a) = ordered(r1, r2);
    Ok(GreenRow {
        r_b,
        r_a,
        green: coulomb_green(c, r_b, r_a)?.magnitude,
    })
}

const RADIUS_GRID: GridSpec = GridSpec {
    min: 0.05,
    max: 50.0,
    count: 20,
    scale: Scale::Log,
};

/// All `(i, j)` pairs of `points` in row-major order.
fn pairs(points: &[f64]) -> Vec<(f64, f64)> {
    points
        .iter()
        .flat_map(|&a| points.iter().map(move |&b| (a, b)))
        .collect()
}

pub fn green(args: &GreenArgs) -> Result<Emission> {
    let c = args.system.system()?;
    let rows: Vec<GreenRow> = match (args.rb, args.ra) {
        (Some(rb), Some(ra)) => vec![green_row(&c, rb, ra)?],
        _ => {
            let points = args.grid.resolve(RADIUS_GRID)?.points();
            pairs(&points)
                .into_par_iter()
                .map(|(a, b)| green_row(&c, a, b))
                .collect::<Result<_>>()?
        }
    };
    let format = args.out.format.unwrap_or(Format::Csv);
    Ok(Emission::ok(rows_bytes("green", &rows, format)?))
}

/// The full parameter dictionary as a JSON value.
pub fn dictionary(c: &CoulombSystem) -> Result<serde_json::Value> {
    let osc = to_oscillator(c)?;
    Ok(serde_json::json!({
        "schema": SCHEMA,
        "coulomb": c,
        "derived": {
            "v": c.decay_rate(),
            "mu_tilde": c.mu_tilde(),
            "kappa": c.kappa(),
        },
        "morse": to_morse(c),
        "oscillator": osc,
    }))
}

fn flatten(prefix: &str, value: &serde_json::Value, out: &mut Vec<MapRow>) {
    match value {
        serde_json::Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        other => out.push(MapRow {
            quantity: prefix.to_string(),
            value: match other {
                serde_json::Value::String(s) => s.clone(),
                v => v.to_string(),
            },
        }),
    }
}

#[derive(Debug, Serialize)]
struct MapRow {
    quantity: String,
    value: String,
}

pub fn map(args: &MapArgs) -> Result<Emission> {
    let doc = dictionary(&args.system.system()?)?;
    let bytes = match args.out.format.unwrap_or(Format::Json) {
        Format::Json => json_bytes(&doc)?,
        Format::Csv => {
            let mut rows = Vec::new();
            flatten("", &doc, &mut rows);
            rows.retain(|r| r.quantity != "schema");
            crate::output::csv_bytes(&rows)?
        }
    };
    Ok(Emission::ok(bytes))
}

#[derive(Debug, Serialize)]
struct EffpotRow {
    q: f64,
    v_eff: f64,
    analytic: f64,
    rel_dev: f64,
}

pub fn effpot(args: &EffpotArgs) -> Result<Emission> {
    let (spec, default_grid) = match args.map {
        MapKind::Identity => (TransformSpec::identity(), GridSpec {
            min: -5.0,
            max: 5.0,
            count: 100,
            scale: Scale::Linear,
        }),
        MapKind::Exp => (TransformSpec::exponential(), GridSpec {
            min: -5.0,
            max: 5.0,
            count: 100,
            scale: Scale::Linear,
        }),
        MapKind::Log => (TransformSpec::logarithmic(), GridSpec {
            min: 0.05,
            max: 20.0,
            count: 100,
            scale: Scale::Log,
        }),
    };
    let (rho, mass) = (args.rho, args.mass);
    let analytic = |q: f64| match args.map {
        MapKind::Identity => 0.0,
        MapKind::Exp => rho / (8.0 * mass),
        MapKind::Log => -rho / (8.0 * mass * q * q),
    };
    let rows = args
        .grid
        .resolve(default_grid)?
        .points()
        .into_iter()
        .map(|q| {
            let v_eff = effective_potential(&spec, q, rho, mass)?;
            let a = analytic(q);
            let rel_dev = if a == 0.0 { v_eff.abs() } else { ((v_eff - a) / a).abs() };
            Ok(EffpotRow {
                q,
                v_eff,
                analytic: a,
                rel_dev,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let format = args.out.format.unwrap_or(Format::Csv);
    Ok(Emission::ok(rows_bytes("effpot", &rows, format)?))
}

pub fn oracle_compare(args: &OracleArgs) -> Result<Emission> {
    let c = args.system.system()?;
    let grid = args.grid.resolve(GridSpec {
        count: 10,
        ..RADIUS_GRID
    })?;
    if !(grid.min > 0.0) {
        anyhow::bail!("oracle grid must lie in r > 0");
    }
    let rows = oracle_rows(&c, &grid.points(), &cli::integrator()?)?;
    let format = args.out.format.unwrap_or(Format::Csv);
    Ok(Emission::ok(rows_bytes("oracle-compare", &rows, format)?))
}

#[derive(Debug, Serialize)]
struct VerifyRow<'a> {
    id: u32,
    check: &'a str,
    measurement: &'a str,
    value: f64,
    tolerance: f64,
    samples: usize,
    passed: bool,
}

pub fn verify_all(args: &VerifyArgs) -> Result<Emission> {
    let tol = cli::tolerances(args.tolerances.as_deref())?;
    let cfg = cli::integrator()?;
    let seed = args.seed;
    type Suite<'a> = Box<dyn Fn() -> dkgreen::Result<CheckReport> + Send + Sync + 'a>;
    let suites: Vec<Suite> = vec![
        Box::new(|| verify::check_effective_potential(&tol)),
        Box::new(|| verify::check_dk_identity(&tol, seed, 10, 20)),
        Box::new(|| verify::check_oracle(&tol, &cfg)),
        Box::new(|| verify::check_spectrum(&tol, &cfg)),
        Box::new(|| verify::check_nonrelativistic(&tol)),
        Box::new(|| verify::check_special_functions(&tol)),
    ];
    let reports: Vec<CheckReport> = suites.par_iter().map(|s| s()).collect::<dkgreen::Result<_>>()?;
    let failed_checks = reports.iter().filter(|r| !r.passed()).map(|r| r.id).collect();
    let bytes = match args.out.format.unwrap_or(Format::Csv) {
        Format::Json => json_bytes(&serde_json::json!({
            "schema": SCHEMA,
            "command": "verify-all",
            "seed": seed,
            "tolerances": tol,
            "checks": reports.iter().map(|r| serde_json::json!({
                "id": r.id,
                "name": r.name,
                "passed": r.passed(),
                "measurements": r.measurements,
            })).collect::<Vec<_>>(),
        }))?,
        Format::Csv => {
            let rows: Vec<VerifyRow> = reports
                .iter()
                .flat_map(|r| {
                    r.measurements.iter().map(move |m| VerifyRow {
                        id: r.id,
                        check: &r.name,
                        measurement: &m.name,
                        value: m.value,
                        tolerance: m.tolerance,
                        samples: m.samples,
                        passed: m.passed(),
                    })
                })
                .collect();
            crate::output::csv_bytes(&rows)?
        }
    };
    Ok(Emission { bytes, failed_checks })
}
