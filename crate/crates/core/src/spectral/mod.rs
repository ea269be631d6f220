//! Eigenbases of the three potential models and projection onto them.

mod decompose;
mod oscillator;
mod ring;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

pub use decompose::{decompose, domain_rule, RESIDUAL_LIMIT};
pub use oscillator::{hermite_function, ho_eigenstate, HO_MAX_ORDER};
pub use ring::{
    ring_eigenstate, ring_spectrum, shooting_discriminant, shooting_discriminant_rk4, Level, ENERGY_TOLERANCE,
    SCAN_STEP,
};

/// Reflection parity about `x = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    #[serde(rename = "+")]
    Even,
    #[serde(rename = "-")]
    Odd,
    #[serde(rename = "none")]
    None,
}

impl Parity {
    pub fn symbol(self) -> &'static str {
        match self {
            Parity::Even => "+",
            Parity::Odd => "-",
            Parity::None => "none",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "+" | "even" | "symmetric" => Some(Parity::Even),
            "-" | "odd" | "antisymmetric" => Some(Parity::Odd),
            "none" => Some(Parity::None),
            _ => None,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Where a model lives: the ring `ℝ/2πℤ` or the truncated line `[-L, L]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Ring,
    Interval { half_width: f64 },
}

impl Domain {
    pub fn bounds(self) -> (f64, f64) {
        match self {
            Domain::Ring => (-PI, PI),
            Domain::Interval { half_width } => (-half_width, half_width),
        }
    }
}

/// Which one-dimensional system is being studied.
///
/// Ring models use `H = -d²/dx² + V` so that the free spectrum is `n²`;
/// the oscillator uses `H = -½ d²/dx² + x²/2` so that `E_n = n + ½`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialModel {
    FreeRing,
    /// `V = v0` on `[-π/2, π/2)` (mod 2π), zero elsewhere.
    PiecewiseRing {
        v0: f64,
    },
    /// `V = x²/2`, truncated to `[-half_width, half_width]`.
    HarmonicOscillator {
        half_width: f64,
    },
}

impl PotentialModel {
    pub fn domain(&self) -> Domain {
        match *self {
            PotentialModel::FreeRing | PotentialModel::PiecewiseRing { .. } => Domain::Ring,
            PotentialModel::HarmonicOscillator { half_width } => Domain::Interval { half_width },
        }
    }

    pub fn is_ring(&self) -> bool {
        matches!(self.domain(), Domain::Ring)
    }

    /// Height of the ring barrier; zero for the free ring.
    pub fn barrier(&self) -> Option<f64> {
        match *self {
            PotentialModel::FreeRing => Some(0.0),
            PotentialModel::PiecewiseRing { v0 } => Some(v0),
            PotentialModel::HarmonicOscillator { .. } => None,
        }
    }

    /// Coefficient of `-d²/dx²` in the Hamiltonian.
    pub fn kinetic_factor(&self) -> f64 {
        if self.is_ring() {
            1.0
        } else {
            0.5
        }
    }

    pub fn potential(&self, x: f64) -> f64 {
        match *self {
            PotentialModel::FreeRing => 0.0,
            PotentialModel::PiecewiseRing { v0 } => {
                if (-PI / 2.0..PI / 2.0).contains(&wrap_ring(x)) {
                    v0
                } else {
                    0.0
                }
            }
            PotentialModel::HarmonicOscillator { .. } => 0.5 * x * x,
        }
    }

    /// Wavefunctions are only synthesised inside the domain.
    pub fn check_position(&self, x: f64) -> Result<f64> {
        match self.domain() {
            Domain::Ring => Ok(wrap_ring(x)),
            Domain::Interval { half_width } => {
                if x.is_finite() && x.abs() <= half_width * (1.0 + 1e-12) {
                    Ok(x)
                } else {
                    Err(Error::OutOfDomain { x, lo: -half_width, hi: half_width })
                }
            }
        }
    }
}

impl fmt::Display for PotentialModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            PotentialModel::FreeRing => write!(f, "free ring"),
            PotentialModel::PiecewiseRing { v0 } => write!(f, "ring V0={v0}"),
            PotentialModel::HarmonicOscillator { half_width } => write!(f, "oscillator L={half_width}"),
        }
    }
}

/// Maps `x` into `[-π, π)`.
pub fn wrap_ring(x: f64) -> f64 {
    let tau = 2.0 * PI;
    let w = (x + PI).rem_euclid(tau) - PI;
    if w >= PI {
        w - tau
    } else {
        w
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Profile {
    /// `1/√(2π)`, `cos(nx)/√π` or `sin(nx)/√π`.
    Free,
    Piecewise(ring::PiecewiseProfile),
    Oscillator {
        sign: f64,
    },
}

/// One real stationary state.
///
/// Phase convention: even states have `ψ(0) > 0`, odd states `ψ'(0) > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenState {
    pub n: usize,
    pub parity: Parity,
    pub energy: f64,
    profile: Profile,
}

impl EigenState {
    pub fn value(&self, x: f64) -> f64 {
        self.value_and_derivative(x).0
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.value_and_derivative(x).1
    }

    /// `(ψ(x), ψ'(x))`. Ring states are periodic; oscillator states are
    /// evaluated on the whole line (valid for `|x| ≤ 10`).
    pub fn value_and_derivative(&self, x: f64) -> (f64, f64) {
        match &self.profile {
            Profile::Free => {
                let x = wrap_ring(x);
                if self.n == 0 {
                    return ((2.0 * PI).sqrt().recip(), 0.0);
                }
                let k = self.n as f64;
                let s = PI.sqrt().recip();
                match self.parity {
                    Parity::Odd => (s * (k * x).sin(), s * k * (k * x).cos()),
                    _ => (s * (k * x).cos(), -s * k * (k * x).sin()),
                }
            }
            Profile::Piecewise(p) => p.eval(x),
            Profile::Oscillator { sign } => {
                let (v, d) = hermite_function(self.n, x);
                (sign * v, sign * d)
            }
        }
    }
}

/// An ordered eigenbasis of one model, truncated at `e_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    model: PotentialModel,
    e_max: f64,
    states: Vec<EigenState>,
}

impl Basis {
    /// All ring states with `E ≤ e_max`, ordered by `(n, parity)`.
    pub fn ring(model: PotentialModel, e_max: f64) -> Result<Self> {
        let levels = ring_spectrum(&model, e_max)?;
        let states = levels.iter().map(|lvl| ring::state_from_level(&model, lvl)).collect();
        Ok(Self { model, e_max, states })
    }

    /// Oscillator states `0..count` on `[-half_width, half_width]`.
    pub fn oscillator(half_width: f64, count: usize) -> Result<Self> {
        if !(half_width > 0.0 && half_width <= 10.0) {
            return Err(Error::Configuration(format!("oscillator half-width must lie in (0, 10], got {half_width}")));
        }
        if count == 0 {
            return Err(Error::Configuration("oscillator basis needs at least one state".into()));
        }
        let states = (0..count).map(ho_eigenstate).collect::<Result<Vec<_>>>()?;
        let e_max = count as f64 - 0.5;
        Ok(Self { model: PotentialModel::HarmonicOscillator { half_width }, e_max, states })
    }

    pub fn model(&self) -> &PotentialModel {
        &self.model
    }

    pub fn e_max(&self) -> f64 {
        self.e_max
    }

    pub fn states(&self) -> &[EigenState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn find(&self, n: usize, parity: Parity) -> Option<usize> {
        self.states.iter().position(|s| s.n == n && s.parity == parity)
    }
}

/// Default amplitude cut for stored coefficients.
pub const DEFAULT_THRESHOLD: f64 = 1e-4;

/// Tolerance on `Σ|c|² = 1`.
pub const NORM_TOLERANCE: f64 = 1e-6;

/// A normalized superposition over a shared eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralState {
    basis: Arc<Basis>,
    terms: Vec<(usize, C64)>,
    threshold: f64,
    retained_weight: f64,
    discarded_weight: f64,
    residual: f64,
}

impl SpectralState {
    /// Coefficients as given; they must already be normalized and none may
    /// fall below `threshold`.
    pub fn new(basis: Arc<Basis>, terms: Vec<(usize, C64)>, threshold: f64) -> Result<Self> {
        for &(i, c) in &terms {
            if i >= basis.len() {
                return Err(Error::Configuration(format!(
                    "coefficient index {i} outside a basis of {} states",
                    basis.len()
                )));
            }
            if c.norm() < threshold {
                return Err(Error::Configuration(format!(
                    "coefficient {c} on state {i} is below the threshold {threshold}"
                )));
            }
        }
        let norm_sq: f64 = terms.iter().map(|(_, c)| c.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Normalization { norm_sq });
        }
        Ok(Self { basis, terms, threshold, retained_weight: norm_sq, discarded_weight: 0.0, residual: 0.0 })
    }

    /// Rescales the coefficients to unit norm; the threshold is zero.
    pub fn normalized(basis: Arc<Basis>, terms: Vec<(usize, C64)>) -> Result<Self> {
        let norm_sq: f64 = terms.iter().map(|(_, c)| c.norm_sqr()).sum();
        if !(norm_sq > 0.0 && norm_sq.is_finite()) {
            return Err(Error::Normalization { norm_sq });
        }
        let s = norm_sq.sqrt().recip();
        let terms = terms.into_iter().map(|(i, c)| (i, c * s)).collect();
        Self::new(basis, terms, 0.0)
    }

    /// A single basis member.
    pub fn eigenstate(basis: Arc<Basis>, index: usize) -> Result<Self> {
        Self::new(basis, vec![(index, C64::new(1.0, 0.0))], 0.0)
    }

    pub(crate) fn from_parts(
        basis: Arc<Basis>,
        terms: Vec<(usize, C64)>,
        threshold: f64,
        retained_weight: f64,
        discarded_weight: f64,
        residual: f64,
    ) -> Self {
        Self { basis, terms, threshold, retained_weight, discarded_weight, residual }
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    /// `(basis index, amplitude)` pairs.
    pub fn terms(&self) -> &[(usize, C64)] {
        &self.terms
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// Weight of the kept components before renormalisation.
    pub fn retained_weight(&self) -> f64 {
        self.retained_weight
    }

    /// Weight `Σ|c|²` of the components cut by the threshold, before renormalisation.
    pub fn discarded_weight(&self) -> f64 {
        self.discarded_weight
    }

    /// Norm of the part of the projected function outside the basis span.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn norm_sq(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm_sqr()).sum()
    }

    pub fn coefficient(&self, n: usize, parity: Parity) -> Option<C64> {
        let idx = self.basis.find(n, parity)?;
        self.terms.iter().find(|(i, _)| *i == idx).map(|&(_, c)| c)
    }

    /// Multiplies every amplitude by `e^{iθ}`.
    pub fn with_global_phase(&self, theta: f64) -> Self {
        let phase = C64::from_polar(1.0, theta);
        let mut out = self.clone();
        for (_, c) in &mut out.terms {
            *c *= phase;
        }
        out
    }
}

/// `e^{ikx}/√(2π)` on the ring.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWave {
    pub k: i64,
}

impl PlaneWave {
    pub fn value(&self, x: f64) -> C64 {
        C64::from_polar((2.0 * PI).sqrt().recip(), self.k as f64 * x)
    }
}

pub fn plane_wave(k: i64) -> PlaneWave {
    PlaneWave { k }
}
