//! Command-line front end for `sdlab`.
//!
//! ```text
//! sdlab <decompose|entropy-curve|density|rdm> [--preset NAME] [--model free|ring|ho]
//!       [--v0 X] [--epsilon EXPR] [--k N | --state FILE.json] [--t0 X --t1 X --steps N]
//!       [--out PATH] [--format csv|json]
//! ```
//!
//! Numeric flags take constant expressions such as `pi/4`.

pub mod commands;
pub mod config;
pub mod error;
pub mod expr;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};

pub use config::{Format, ModelKind, OffsetPolicy, RunConfig, StateSpec, TermSpec, TimeGrid, WaveSpec};
pub use error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Decompose,
    EntropyCurve,
    Density,
    Rdm,
}

#[derive(Debug, Parser)]
#[command(name = "sdlab", version, about = "Scale-ε reduced density matrices and entropy curves")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,

    /// Start from a named configuration: fig1-fig4, eq5, eq6.
    #[arg(long)]
    pub preset: Option<String>,
    /// Start from a configuration written by --dump-config.
    #[arg(long, conflicts_with = "preset")]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,
    /// Barrier height on [-π/2, π/2) for the ring model.
    #[arg(long, value_parser = parse_expr)]
    pub v0: Option<f64>,
    /// Bin width; on the ring it must be 2π/B.
    #[arg(long, value_parser = parse_expr)]
    pub epsilon: Option<f64>,
    /// Bin offset, or `auto`.
    #[arg(long, value_parser = parse_offset)]
    pub offset: Option<OffsetPolicy>,
    /// Oscillator truncation L.
    #[arg(long, value_parser = parse_expr)]
    pub half_width: Option<f64>,
    /// Ring basis energy cutoff.
    #[arg(long, value_parser = parse_expr)]
    pub e_max: Option<f64>,
    /// Smallest kept coefficient modulus.
    #[arg(long, value_parser = parse_expr)]
    pub threshold: Option<f64>,
    /// Plane wave e^{ikx} as the initial state.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<i64>,
    /// JSON coefficient list [{n, parity, re, im}] or a state object.
    #[arg(long, conflicts_with = "k")]
    pub state: Option<PathBuf>,
    #[arg(long, value_parser = parse_expr, allow_hyphen_values = true)]
    pub t0: Option<f64>,
    #[arg(long, value_parser = parse_expr, allow_hyphen_values = true)]
    pub t1: Option<f64>,
    /// Number of time points, ends included.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Snapshot times for density and rdm; comma-separated or repeated.
    #[arg(long, value_parser = parse_expr, value_delimiter = ',', allow_hyphen_values = true)]
    pub at: Option<Vec<f64>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Report entropy in nats rather than bits.
    #[arg(long)]
    pub nats: bool,
    /// Print the resolved configuration as JSON and exit.
    #[arg(long)]
    pub dump_config: bool,
}

fn parse_expr(s: &str) -> Result<f64, String> {
    expr::eval(s)
}

fn parse_offset(s: &str) -> Result<OffsetPolicy, String> {
    if s.trim() == "auto" {
        Ok(OffsetPolicy::Auto)
    } else {
        expr::eval(s).map(OffsetPolicy::Explicit)
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.into(), source })
}

/// A `--state` file holds either a bare coefficient list or a tagged state.
fn read_state(path: &Path) -> Result<StateSpec, CliError> {
    #[derive(serde::Deserialize)]
    #[serde(untagged)]
    enum StateFile {
        Terms(Vec<TermSpec>),
        Spec(StateSpec),
    }
    Ok(match read_json::<StateFile>(path)? {
        StateFile::Terms(terms) => StateSpec::Coefficients { terms },
        StateFile::Spec(spec) => spec,
    })
}

impl Cli {
    /// Preset or config file first, then every explicit flag on top.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match (&self.preset, &self.config, self.model) {
            (Some(name), _, _) => RunConfig::preset(name)?,
            (None, Some(path), _) => read_json(path)?,
            (None, None, Some(model)) => RunConfig::for_model(model),
            (None, None, None) => RunConfig::default(),
        };
        if let Some(model) = self.model {
            if model != cfg.model {
                let fresh = RunConfig::for_model(model);
                cfg.model = model;
                cfg.epsilon = fresh.epsilon;
                cfg.state = fresh.state;
                cfg.time = fresh.time;
                cfg.threshold = fresh.threshold;
                cfg.v0 = None;
            }
        }
        if let Some(v) = self.v0 {
            cfg.v0 = Some(v);
        }
        if let Some(v) = self.epsilon {
            cfg.epsilon = v;
        }
        if let Some(v) = self.offset {
            cfg.offset = v;
        }
        if let Some(v) = self.half_width {
            cfg.half_width = v;
        }
        if let Some(v) = self.e_max {
            cfg.e_max = v;
        }
        if let Some(v) = self.threshold {
            cfg.threshold = v;
        }
        if let Some(k) = self.k {
            cfg.state = StateSpec::Plane { k };
        }
        if let Some(path) = &self.state {
            cfg.state = read_state(path)?;
        }
        if let Some(v) = self.t0 {
            cfg.time.t0 = v;
        }
        if let Some(v) = self.t1 {
            cfg.time.t1 = v;
        }
        if let Some(v) = self.steps {
            cfg.time.steps = v;
        }
        if let Some(v) = &self.at {
            cfg.at = v.clone();
        }
        if self.out.is_some() {
            cfg.out = self.out.clone();
        }
        if self.format.is_some() {
            cfg.format = self.format;
        }
        cfg.nats |= self.nats;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Produces the artifact text for `command`.
pub fn execute(command: Command, cfg: &RunConfig) -> Result<String, CliError> {
    match command {
        Command::Decompose => commands::cmd_decompose(cfg),
        Command::EntropyCurve => commands::cmd_entropy_curve(cfg),
        Command::Density => commands::cmd_density(cfg),
        Command::Rdm => commands::cmd_rdm(cfg),
    }
}

/// Resolves, runs and writes; returns what would go to stdout.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let cfg = cli.resolve()?;
    if cli.dump_config {
        let mut s = serde_json::to_string_pretty(&cfg).expect("config serializes");
        s.push('\n');
        return Ok(s);
    }
    let text = execute(cli.command, &cfg)?;
    match &cfg.out {
        Some(path) => {
            fs::write(path, &text).map_err(|source| CliError::Io { path: path.clone(), source })?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}
