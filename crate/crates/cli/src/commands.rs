//! The four subcommands. Each returns the artifact text; writing it is the caller's job.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use sdlab::entropy::{entropy_curve, format_significant, spectrum, EntropyCurve};
use sdlab::evolution::{evolve, uniform_grid};
use sdlab::reduction::{reduce, BinGrid, MatrixDump};
use sdlab::spectral::{decompose, plane_wave, Basis, Parity, PotentialModel, SpectralState};
use sdlab::C64;

use crate::config::{Format, ModelKind, OffsetPolicy, RunConfig, StateSpec, COHERENT_STATES};
use crate::error::CliError;

/// Points in the `density` output.
pub const DENSITY_POINTS: usize = 1024;

/// A validated configuration turned into numerics: the initial state and
/// the bins it is reduced onto.
pub struct Prepared {
    pub state: SpectralState,
    pub grid: BinGrid,
    pub label: String,
}

fn ring_model(cfg: &RunConfig) -> PotentialModel {
    match (cfg.model, cfg.v0) {
        (ModelKind::Ring, Some(v0)) => PotentialModel::PiecewiseRing { v0 },
        _ => PotentialModel::FreeRing,
    }
}

fn offset(cfg: &RunConfig, auto: f64) -> f64 {
    match cfg.offset {
        OffsetPolicy::Auto => auto,
        OffsetPolicy::Explicit(o) => o,
    }
}

pub fn prepare(cfg: &RunConfig) -> Result<Prepared, CliError> {
    cfg.validate()?;
    let label = cfg.state.describe();
    match cfg.model {
        ModelKind::Free | ModelKind::Ring => {
            let grid = BinGrid::ring_with_offset(cfg.epsilon, offset(cfg, 0.0))?;
            let basis = Arc::new(Basis::ring(ring_model(cfg), cfg.e_max)?);
            let state = match &cfg.state {
                StateSpec::Plane { k } => {
                    let w = plane_wave(*k);
                    decompose(|x| w.value(x), basis, cfg.threshold)?
                }
                StateSpec::Planes { waves } => {
                    let norm: f64 = waves.iter().map(|w| w.re * w.re + w.im * w.im).sum::<f64>().sqrt();
                    if norm == 0.0 {
                        return Err(CliError::Config("plane-wave amplitudes are all zero".into()));
                    }
                    let parts: Vec<(C64, i64)> = waves.iter().map(|w| (C64::new(w.re, w.im) / norm, w.k)).collect();
                    decompose(|x| parts.iter().map(|&(a, k)| a * plane_wave(k).value(x)).sum(), basis, cfg.threshold)?
                }
                StateSpec::Coefficients { terms } => {
                    let mut out = Vec::with_capacity(terms.len());
                    for t in terms {
                        let parity = t.parity.ok_or_else(|| {
                            CliError::Config(format!("ring coefficient for n = {} needs a parity", t.n))
                        })?;
                        let idx = basis.find(t.n, parity).ok_or_else(|| {
                            CliError::Config(format!(
                                "no state ({}, {parity}) below E = {}; raise --e-max",
                                t.n, cfg.e_max
                            ))
                        })?;
                        out.push((idx, C64::new(t.re, t.im)));
                    }
                    SpectralState::new(basis, out, 0.0)?
                }
                StateSpec::Coherent { .. } => unreachable!("rejected by validation"),
            };
            Ok(Prepared { state, grid, label })
        }
        ModelKind::Ho => {
            let grid = BinGrid::interval(cfg.epsilon, cfg.half_width, offset(cfg, -0.5 * cfg.epsilon))?;
            // The model is extended to the outer bin edges so every bin is whole.
            let half_width = grid.covering_half_width();
            let state = match &cfg.state {
                StateSpec::Coefficients { terms } => {
                    let count = terms.iter().map(|t| t.n).max().unwrap_or(0) + 1;
                    let basis = Arc::new(Basis::oscillator(half_width, count)?);
                    let mut out = Vec::with_capacity(terms.len());
                    for t in terms {
                        let want = if t.n % 2 == 0 { Parity::Even } else { Parity::Odd };
                        if t.parity.is_some_and(|p| p != want) {
                            return Err(CliError::Config(format!("oscillator state {} has parity {want}", t.n)));
                        }
                        out.push((t.n, C64::new(t.re, t.im)));
                    }
                    SpectralState::new(basis, out, 0.0)?
                }
                StateSpec::Coherent { displacement } => {
                    let basis = Arc::new(Basis::oscillator(half_width, COHERENT_STATES)?);
                    let d = *displacement;
                    decompose(
                        |x| C64::new(PI.powf(-0.25) * (-0.5 * (x - d) * (x - d)).exp(), 0.0),
                        basis,
                        cfg.threshold,
                    )?
                }
                _ => unreachable!("rejected by validation"),
            };
            Ok(Prepared { state, grid, label })
        }
    }
}

#[derive(Serialize)]
struct BasisRow {
    n: usize,
    parity: Parity,
    #[serde(rename = "E")]
    energy: f64,
}

#[derive(Serialize)]
struct CoefficientRow {
    n: usize,
    parity: Parity,
    re: f64,
    im: f64,
    norm: f64,
}

#[derive(Serialize)]
struct DecompositionTable {
    model: String,
    state: String,
    threshold: f64,
    retained_weight: f64,
    discarded_weight: f64,
    residual: f64,
    basis: Vec<BasisRow>,
    coefficients: Vec<CoefficientRow>,
}

pub fn cmd_decompose(cfg: &RunConfig) -> Result<String, CliError> {
    if cfg.format == Some(Format::Csv) {
        return Err(CliError::Config("decompose writes JSON only".into()));
    }
    if !matches!(cfg.state, StateSpec::Plane { .. } | StateSpec::Planes { .. }) || cfg.model == ModelKind::Ho {
        return Err(CliError::Config("decompose expands ring plane waves: use --model ring|free with --k".into()));
    }
    let p = prepare(cfg)?;
    let states = p.state.basis().states();
    let mut coefficients: Vec<CoefficientRow> = p
        .state
        .terms()
        .iter()
        .map(|&(i, c)| CoefficientRow { n: states[i].n, parity: states[i].parity, re: c.re, im: c.im, norm: c.norm() })
        .collect();
    coefficients.sort_by(|a, b| b.norm.total_cmp(&a.norm).then((a.n, a.parity).cmp(&(b.n, b.parity))));
    let table = DecompositionTable {
        model: p.state.basis().model().to_string(),
        state: p.label,
        threshold: p.state.threshold(),
        retained_weight: p.state.retained_weight(),
        discarded_weight: p.state.discarded_weight(),
        residual: p.state.residual(),
        basis: states.iter().map(|s| BasisRow { n: s.n, parity: s.parity, energy: s.energy }).collect(),
        coefficients,
    };
    Ok(to_json(&table))
}

pub fn curve(cfg: &RunConfig) -> Result<EntropyCurve, CliError> {
    let p = prepare(cfg)?;
    Ok(entropy_curve(&p.state, &p.grid, &cfg.time.points())?.with_state(p.label))
}

pub fn cmd_entropy_curve(cfg: &RunConfig) -> Result<String, CliError> {
    let c = curve(cfg)?;
    Ok(match (cfg.format.unwrap_or(Format::Csv), cfg.nats) {
        (Format::Csv, false) => c.to_csv(),
        (Format::Csv, true) => c.to_csv_nats(),
        (Format::Json, _) => to_json(&c),
    })
}

#[derive(Serialize)]
struct DensityTable {
    times: Vec<f64>,
    x: Vec<f64>,
    density: Vec<Vec<f64>>,
}

pub fn cmd_density(cfg: &RunConfig) -> Result<String, CliError> {
    let p = prepare(cfg)?;
    if cfg.at.is_empty() {
        return Err(CliError::Config("density needs at least one --at time".into()));
    }
    let (lo, hi) = p.state.basis().model().domain().bounds();
    let xs = uniform_grid(lo, hi, DENSITY_POINTS);
    let columns = cfg.at.iter().map(|&t| evolve(&p.state, t).density(&xs)).collect::<Result<Vec<_>, _>>()?;
    if cfg.format == Some(Format::Json) {
        return Ok(to_json(&DensityTable { times: cfg.at.clone(), x: xs, density: columns }));
    }
    let mut out = String::from("x");
    for i in 0..columns.len() {
        out.push_str(&format!(",density_t{i}"));
    }
    out.push('\n');
    for (row, &x) in xs.iter().enumerate() {
        out.push_str(&format_significant(x, 12));
        for col in &columns {
            out.push(',');
            out.push_str(&format_significant(col[row], 12));
        }
        out.push('\n');
    }
    Ok(out)
}

#[derive(Serialize)]
pub struct RdmReport {
    pub time: f64,
    #[serde(flatten)]
    pub matrix: MatrixDump,
    pub spectrum: Vec<f64>,
    pub entropy_bits: f64,
}

pub fn rdm(cfg: &RunConfig) -> Result<RdmReport, CliError> {
    let p = prepare(cfg)?;
    let time = cfg.at.first().copied().unwrap_or(cfg.time.t0);
    let rho = reduce(&evolve(&p.state, time), &p.grid)?;
    let spec = spectrum(rho.matrix())?;
    Ok(RdmReport { time, matrix: rho.dump(), entropy_bits: spec.entropy_bits(), spectrum: spec.eigenvalues })
}

pub fn cmd_rdm(cfg: &RunConfig) -> Result<String, CliError> {
    if cfg.format == Some(Format::Csv) {
        return Err(CliError::Config("rdm writes JSON only".into()));
    }
    Ok(to_json(&rdm(cfg)?))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}
