//! Run configuration: presets, flag overrides and validation.

use std::f64::consts::PI;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use sdlab::spectral::{Parity, DEFAULT_THRESHOLD};

use crate::error::CliError;

/// Ring bases keep every level up to this energy unless told otherwise.
pub const DEFAULT_E_MAX: f64 = 900.0;
/// Truncation of the oscillator line.
pub const DEFAULT_HALF_WIDTH: f64 = 6.0;
/// Oscillator states used to expand a coherent state.
pub const COHERENT_STATES: usize = 48;
/// Threshold for the entropy presets. Coefficients between this and the
/// table threshold still shape `S(t)` near zero.
pub const DYNAMICS_THRESHOLD: f64 = 1e-6;

pub const PRESETS: [&str; 6] = ["fig1", "fig2", "fig3", "fig4", "eq5", "eq6"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Free,
    Ring,
    Ho,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Where bin edges sit: ring grids start at 0 and oscillator grids are
/// centred on `yε` unless an explicit offset is given.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OffsetPolicy {
    Auto,
    Explicit(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub n: usize,
    /// May be omitted for the oscillator, whose states are labelled by `n` alone.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<Parity>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveSpec {
    pub k: i64,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StateSpec {
    /// `e^{ikx}/√(2π)` on the ring.
    Plane { k: i64 },
    /// `Σ a_k e^{ikx}`, normalized.
    Planes { waves: Vec<WaveSpec> },
    /// Explicit eigenbasis coefficients.
    Coefficients { terms: Vec<TermSpec> },
    /// Oscillator ground state displaced by `displacement`.
    Coherent { displacement: f64 },
}

impl StateSpec {
    pub fn describe(&self) -> String {
        match self {
            StateSpec::Plane { k } => format!("plane:{k}"),
            StateSpec::Planes { waves } => {
                let ks: Vec<String> = waves.iter().map(|w| w.k.to_string()).collect();
                format!("planes:{}", ks.join("+"))
            }
            StateSpec::Coefficients { terms } => {
                let parts: Vec<String> =
                    terms.iter().map(|t| format!("{}{}", t.n, t.parity.map(|p| p.symbol()).unwrap_or(""))).collect();
                format!("coefficients:{}", parts.join(","))
            }
            StateSpec::Coherent { displacement } => format!("coherent:{displacement}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub t0: f64,
    pub t1: f64,
    /// Number of sample points, both ends included.
    pub steps: usize,
}

impl TimeGrid {
    pub fn points(&self) -> Vec<f64> {
        sdlab::evolution::uniform_grid(self.t0, self.t1, self.steps)
    }
}

/// Everything a command needs. `--dump-config` prints this as JSON and
/// `--config` reads it back.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v0: Option<f64>,
    pub epsilon: f64,
    pub offset: OffsetPolicy,
    /// Oscillator truncation `L`; ignored on the ring.
    pub half_width: f64,
    /// Ring basis energy cutoff.
    pub e_max: f64,
    pub threshold: f64,
    pub state: StateSpec,
    pub time: TimeGrid,
    /// Snapshot times for `density`; the first one is used by `rdm`.
    pub at: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub nats: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: ModelKind::Ring,
            v0: None,
            epsilon: PI / 4.0,
            offset: OffsetPolicy::Auto,
            half_width: DEFAULT_HALF_WIDTH,
            e_max: DEFAULT_E_MAX,
            threshold: DEFAULT_THRESHOLD,
            state: StateSpec::Plane { k: 1 },
            time: TimeGrid { t0: 0.0, t1: 2.0 * PI, steps: 200 },
            at: vec![0.0],
            format: None,
            out: None,
            nats: false,
        }
    }
}

fn ho_pair() -> StateSpec {
    let a = std::f64::consts::FRAC_1_SQRT_2;
    StateSpec::Coefficients {
        terms: vec![TermSpec { n: 1, parity: None, re: a, im: 0.0 }, TermSpec { n: 3, parity: None, re: -a, im: 0.0 }],
    }
}

impl RunConfig {
    pub fn preset(name: &str) -> Result<Self, CliError> {
        let ring = |v0: f64, threshold: f64| RunConfig {
            model: ModelKind::Ring,
            v0: Some(v0),
            threshold,
            ..RunConfig::default()
        };
        let ho = RunConfig {
            model: ModelKind::Ho,
            epsilon: 0.5,
            state: ho_pair(),
            time: TimeGrid { t0: 0.0, t1: PI, steps: 200 },
            threshold: 0.0,
            ..RunConfig::default()
        };
        Ok(match name {
            "fig1" => RunConfig { at: vec![0.0, PI / 2.0], ..ho },
            "fig2" => ho,
            "fig3" => ring(3.0, DYNAMICS_THRESHOLD),
            "fig4" => ring(15.0, DYNAMICS_THRESHOLD),
            "eq5" => ring(3.0, DEFAULT_THRESHOLD),
            "eq6" => ring(15.0, DEFAULT_THRESHOLD),
            other => {
                return Err(CliError::Config(format!("unknown preset '{other}'; choose one of {}", PRESETS.join(", "))))
            }
        })
    }

    /// Defaults for a model chosen on the command line without a preset.
    pub fn for_model(model: ModelKind) -> Self {
        match model {
            ModelKind::Ho => RunConfig {
                model,
                epsilon: 0.5,
                state: ho_pair(),
                time: TimeGrid { t0: 0.0, t1: PI, steps: 200 },
                threshold: 0.0,
                ..RunConfig::default()
            },
            ModelKind::Free => RunConfig { model, v0: None, ..RunConfig::default() },
            ModelKind::Ring => RunConfig { model, ..RunConfig::default() },
        }
    }

    /// Checks that do not need any numerics.
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return bad(format!("--epsilon must be positive, got {}", self.epsilon));
        }
        match self.model {
            ModelKind::Ring => match self.v0 {
                None => return bad("the ring model needs a barrier height: pass --v0 (e.g. --v0 3)".into()),
                Some(v) if !(v >= 0.0 && v.is_finite()) => {
                    return bad(format!("--v0 must be a non-negative number, got {v}"))
                }
                _ => {}
            },
            ModelKind::Free | ModelKind::Ho => {
                if self.v0.is_some() {
                    return bad("--v0 only applies to --model ring".into());
                }
            }
        }
        if self.model == ModelKind::Ho {
            if !(self.half_width > 0.0 && self.half_width <= 9.5) {
                return bad(format!("--half-width must lie in (0, 9.5], got {}", self.half_width));
            }
            if matches!(self.state, StateSpec::Plane { .. } | StateSpec::Planes { .. }) {
                return bad("plane waves live on the ring; use --model ring or free".into());
            }
        } else if matches!(self.state, StateSpec::Coherent { .. }) {
            return bad("coherent states need --model ho".into());
        }
        if !(self.e_max > 0.0 && self.e_max.is_finite()) {
            return bad(format!("--e-max must be positive, got {}", self.e_max));
        }
        if !(0.0..1.0).contains(&self.threshold) {
            return bad(format!("--threshold must lie in [0, 1), got {}", self.threshold));
        }
        if self.time.steps == 0 {
            return bad("--steps must be at least 1".into());
        }
        if !(self.time.t0.is_finite() && self.time.t1.is_finite()) {
            return bad("--t0 and --t1 must be finite".into());
        }
        if self.at.iter().any(|t| !t.is_finite()) {
            return bad("--at times must be finite".into());
        }
        if let OffsetPolicy::Explicit(o) = self.offset {
            if !o.is_finite() {
                return bad(format!("--offset must be finite, got {o}"));
            }
        }
        match &self.state {
            StateSpec::Planes { waves } if waves.is_empty() => bad("plane-wave list is empty".into()),
            StateSpec::Coefficients { terms } if terms.is_empty() => bad("coefficient list is empty".into()),
            StateSpec::Coherent { displacement }
                if displacement.abs() > self.half_width / 2.0 || displacement.is_nan() =>
            {
                bad(format!(
                    "coherent displacement {displacement} is too close to the truncation edge {}",
                    self.half_width
                ))
            }
            _ => Ok(()),
        }
    }
}
