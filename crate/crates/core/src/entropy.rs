//! Von Neumann entropy of reduced density matrices, and entropy curves.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::HermitianMatrix;
use crate::reduction::{BinGrid, ReductionPlan};
use crate::spectral::SpectralState;

/// Eigenvalues below this are dropped from the entropy sum.
pub const CLIP_TOLERANCE: f64 = 1e-12;

/// Eigenvalues below this are a positivity violation, not roundoff.
pub const PSD_FLOOR: f64 = -1e-9;

/// Eigenvalues of a density matrix, descending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
}

impl Spectrum {
    /// Rejects anything outside `[PSD_FLOOR, 1 − PSD_FLOOR]`, clips the rest
    /// to `[0, 1]` and sorts descending.
    pub fn new(mut eigenvalues: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = eigenvalues.iter().find(|&&l| !l.is_finite() || !(PSD_FLOOR..=1.0 - PSD_FLOOR).contains(&l))
        {
            return Err(Error::PsdViolation { eigenvalue: bad });
        }
        for l in &mut eigenvalues {
            *l = l.clamp(0.0, 1.0);
        }
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { eigenvalues })
    }

    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    /// Number of eigenvalues above the clip tolerance.
    pub fn rank(&self) -> usize {
        self.eigenvalues.iter().filter(|&&l| l > CLIP_TOLERANCE).count()
    }

    /// `−Σ λ log₂ λ` over `λ > CLIP_TOLERANCE`.
    pub fn entropy_bits(&self) -> f64 {
        self.entropy_nats() / std::f64::consts::LN_2
    }

    pub fn entropy_nats(&self) -> f64 {
        let s: f64 = self.eigenvalues.iter().filter(|&&l| l > CLIP_TOLERANCE).map(|&l| -l * l.ln()).sum();
        s.max(0.0)
    }
}

pub fn spectrum(matrix: &HermitianMatrix) -> Result<Spectrum> {
    Spectrum::new(matrix.eigen().values)
}

pub fn entropy_bits(matrix: &HermitianMatrix) -> Result<f64> {
    Ok(spectrum(matrix)?.entropy_bits())
}

/// Sampled `S(t)` with the parameters that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyCurve {
    pub model: String,
    /// Free-form description of the initial state, set by the caller.
    pub state: String,
    pub epsilon: f64,
    pub offset: f64,
    pub bins: usize,
    pub times: Vec<f64>,
    pub entropy_bits: Vec<f64>,
}

impl EntropyCurve {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.times.iter().copied().zip(self.entropy_bits.iter().copied())
    }

    pub fn with_state(mut self, label: impl Into<String>) -> Self {
        self.state = label.into();
        self
    }

    pub fn to_csv(&self) -> String {
        self.csv(false)
    }

    /// CSV in nats instead of bits, header `t,entropy_nats`.
    pub fn to_csv_nats(&self) -> String {
        self.csv(true)
    }

    fn csv(&self, nats: bool) -> String {
        let mut out = String::from(if nats { "t,entropy_nats\n" } else { "t,entropy_bits\n" });
        let scale = if nats { std::f64::consts::LN_2 } else { 1.0 };
        for (t, s) in self.points() {
            out.push_str(&format_significant(t, 12));
            out.push(',');
            out.push_str(&format_significant(s * scale, 12));
            out.push('\n');
        }
        out
    }
}

/// `S(t)` at each time, computed in parallel; the output order follows `times`.
pub fn entropy_curve(state: &SpectralState, grid: &BinGrid, times: &[f64]) -> Result<EntropyCurve> {
    let plan = ReductionPlan::new(state, grid)?;
    let entropy_bits = times.par_iter().map(|&t| entropy_bits(plan.at(t).matrix())).collect::<Result<Vec<f64>>>()?;
    Ok(EntropyCurve {
        model: state.basis().model().to_string(),
        state: String::new(),
        epsilon: grid.epsilon(),
        offset: grid.offset(),
        bins: grid.len(),
        times: times.to_vec(),
        entropy_bits,
    })
}

/// Like C's `%.{digits}g`: shortest of fixed or exponent form, trailing zeros removed.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
