//! Exact time evolution in an eigenbasis: `c_n → c_n e^{-iE_n t}`.

use crate::error::Result;
use crate::spectral::SpectralState;
use crate::C64;

/// A [`SpectralState`] at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolvedState {
    base: SpectralState,
    time: f64,
    amplitudes: Vec<(usize, C64)>,
}

pub fn evolve(state: &SpectralState, t: f64) -> EvolvedState {
    let states = state.basis().states();
    let amplitudes = state.terms().iter().map(|&(i, c)| (i, c * C64::from_polar(1.0, -states[i].energy * t))).collect();
    EvolvedState { base: state.clone(), time: t, amplitudes }
}

impl EvolvedState {
    pub fn base(&self) -> &SpectralState {
        &self.base
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// `(basis index, c_n e^{-iE_n t})`.
    pub fn amplitudes(&self) -> &[(usize, C64)] {
        &self.amplitudes
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|(_, c)| c.norm_sqr()).sum()
    }

    /// `ψ(x, t) = Σ c_n e^{-iE_n t} ψ_n(x)`.
    pub fn wave_at(&self, x: f64) -> Result<C64> {
        let x = self.base.basis().model().check_position(x)?;
        Ok(self.synthesize(x))
    }

    /// Same sum without the domain check.
    pub(crate) fn synthesize(&self, x: f64) -> C64 {
        let states = self.base.basis().states();
        self.amplitudes.iter().map(|&(i, c)| c * states[i].value(x)).sum()
    }

    /// `|ψ(x, t)|²` on each grid point.
    pub fn density(&self, grid: &[f64]) -> Result<Vec<f64>> {
        grid.iter().map(|&x| self.wave_at(x).map(|v| v.norm_sqr())).collect()
    }
}

/// `n` equally spaced points covering `[lo, hi]` inclusive.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let h = (hi - lo) / (n - 1) as f64;
            (0..n).map(|i| if i + 1 == n { hi } else { lo + h * i as f64 }).collect()
        }
    }
}
