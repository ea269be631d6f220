//! The piecewise-constant ring: `V = v0` on `[-π/2, π/2)`, `0` on the rest.
//!
//! The potential is even, so every eigenstate is even or odd and the problem
//! reduces to the half ring `[0, π]`: even states start from `(ψ, ψ') = (1, 0)`
//! at `x = 0` and need `ψ'(π) = 0`; odd states start from `(0, 1)` and need
//! `ψ(π) = 0`. On each constant piece the pair `(ψ, ψ')` propagates by an exact
//! 2×2 transfer matrix, so the shooting discriminant is a closed-form function
//! of `E` whose sign changes are bracketed on a fixed scan and bisected.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use super::{wrap_ring, EigenState, Parity, PotentialModel, Profile};
use crate::error::{Error, Result};
use crate::quadrature::{CompositeRule, GaussLegendre};

/// Energy scan step used to bracket roots.
pub const SCAN_STEP: f64 = 0.01;

/// Bisection stops once the bracket is narrower than this.
pub const ENERGY_TOLERANCE: f64 = 1e-12;

const MAX_BISECTIONS: usize = 200;

/// `|E - V|` below this uses the small-argument expansion of the propagator.
const FLAT_WINDOW: f64 = 1e-9;

/// Step count of the reference integrator on `[0, π]`.
const RK4_STEPS: usize = 4096;

/// One eigenvalue of a ring model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Level {
    pub n: usize,
    pub parity: Parity,
    #[serde(rename = "E")]
    pub energy: f64,
}

type Mat2 = [[f64; 2]; 2];

/// Propagator of `ψ'' = -s ψ` over a length `len`, acting on `(ψ, ψ')`.
fn transfer(s: f64, len: f64) -> Mat2 {
    if s.abs() < FLAT_WINDOW {
        let l2 = len * len;
        return [[1.0 - 0.5 * s * l2, len - s * l2 * len / 6.0], [-s * len, 1.0 - 0.5 * s * l2]];
    }
    if s > 0.0 {
        let q = s.sqrt();
        let (sn, cs) = (q * len).sin_cos();
        [[cs, sn / q], [-q * sn, cs]]
    } else {
        let k = (-s).sqrt();
        let (sh, ch) = ((k * len).sinh(), (k * len).cosh());
        [[ch, sh / k], [k * sh, ch]]
    }
}

fn apply(m: &Mat2, v: [f64; 2]) -> [f64; 2] {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

fn start_vector(parity: Parity) -> [f64; 2] {
    match parity {
        Parity::Odd => [0.0, 1.0],
        _ => [1.0, 0.0],
    }
}

/// `(ψ, ψ')` at the barrier edge `x = π/2` for the unnormalized half-ring solution.
fn edge_state(v0: f64, energy: f64, parity: Parity) -> [f64; 2] {
    apply(&transfer(energy - v0, FRAC_PI_2), start_vector(parity))
}

/// Boundary mismatch at `x = π`: `ψ'(π)` for even states, `ψ(π)` for odd ones.
pub fn shooting_discriminant(v0: f64, energy: f64, parity: Parity) -> f64 {
    let edge = edge_state(v0, energy, parity);
    let end = apply(&transfer(energy, FRAC_PI_2), edge);
    match parity {
        Parity::Odd => end[0],
        _ => end[1],
    }
}

/// The same discriminant from fixed-step RK4 with step `π/4096`. Slower and
/// only accurate to the integrator's order; kept as an independent check on
/// the transfer matrices.
pub fn shooting_discriminant_rk4(v0: f64, energy: f64, parity: Parity) -> f64 {
    let h = PI / RK4_STEPS as f64;
    let rhs = |x: f64, y: [f64; 2]| {
        let v = if x < FRAC_PI_2 { v0 } else { 0.0 };
        [y[1], (v - energy) * y[0]]
    };
    let mut y = start_vector(parity);
    for i in 0..RK4_STEPS {
        // Keep the potential of the current step even at the step ends, so
        // the jump at π/2 lands exactly on a step boundary.
        let x0 = i as f64 * h;
        let xm = x0 + 0.5 * h;
        let f = |y: [f64; 2]| rhs(xm, y);
        let k1 = f(y);
        let k2 = f([y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
        let k3 = f([y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
        let k4 = f([y[0] + h * k3[0], y[1] + h * k3[1]]);
        for j in 0..2 {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
    }
    match parity {
        Parity::Odd => y[0],
        _ => y[1],
    }
}

/// Roots of one parity's discriminant on `[0, e_max]`, ascending.
fn parity_roots(v0: f64, parity: Parity, e_max: f64) -> Result<Vec<f64>> {
    let f = |e: f64| shooting_discriminant(v0, e, parity);
    let steps = (e_max / SCAN_STEP).floor() as usize;
    let mut grid: Vec<f64> = (0..=steps).map(|i| i as f64 * SCAN_STEP).collect();
    if grid.last().is_some_and(|&e| e < e_max) {
        grid.push(e_max);
    }
    let mut roots = Vec::new();
    let mut lo = grid[0];
    let mut f_lo = f(lo);
    if f_lo == 0.0 {
        roots.push(lo);
    }
    for &hi in &grid[1..] {
        let f_hi = f(hi);
        if !f_hi.is_finite() {
            return Err(Error::Convergence { lo, hi });
        }
        if f_hi == 0.0 {
            roots.push(hi);
        } else if f_lo != 0.0 && f_lo.signum() != f_hi.signum() {
            roots.push(bisect(&f, lo, hi, f_lo)?);
        }
        lo = hi;
        f_lo = f_hi;
    }
    Ok(roots)
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut f_lo: f64) -> Result<f64> {
    for _ in 0..MAX_BISECTIONS {
        if hi - lo < ENERGY_TOLERANCE {
            return Ok(0.5 * (lo + hi));
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Convergence { lo, hi })
}

fn ring_barrier(model: &PotentialModel) -> Result<f64> {
    let v0 =
        model.barrier().ok_or_else(|| Error::Configuration("ring spectrum requested for a non-ring model".into()))?;
    if !(v0 >= 0.0 && v0.is_finite()) {
        return Err(Error::Configuration(format!("barrier height must be finite and >= 0, got {v0}")));
    }
    Ok(v0)
}

fn sort_levels(levels: &mut [Level]) {
    levels.sort_by(|a, b| a.n.cmp(&b.n).then(a.parity.cmp(&b.parity)));
}

/// Every level with `E ≤ e_max`, ordered by `(n, parity)` with `+` first.
///
/// Even states are numbered `0, 1, 2, …` and odd states `1, 2, …` in order of
/// increasing energy within their parity class, so `n` is the number of
/// half-ring nodes (even) or one more than it (odd), as for `cos(nx)`/`sin(nx)`.
pub fn ring_spectrum(model: &PotentialModel, e_max: f64) -> Result<Vec<Level>> {
    let v0 = ring_barrier(model)?;
    if !(e_max > 0.0 && e_max.is_finite()) {
        return Err(Error::Configuration(format!("E_max must be positive, got {e_max}")));
    }
    let mut levels = Vec::new();
    if v0 == 0.0 {
        let n_max = e_max.sqrt().floor() as usize;
        for n in 0..=n_max {
            let energy = (n * n) as f64;
            levels.push(Level { n, parity: Parity::Even, energy });
            if n > 0 {
                levels.push(Level { n, parity: Parity::Odd, energy });
            }
        }
    } else {
        for (n, energy) in parity_roots(v0, Parity::Even, e_max)?.into_iter().enumerate() {
            levels.push(Level { n, parity: Parity::Even, energy });
        }
        for (j, energy) in parity_roots(v0, Parity::Odd, e_max)?.into_iter().enumerate() {
            levels.push(Level { n: j + 1, parity: Parity::Odd, energy });
        }
    }
    if levels.is_empty() {
        return Err(Error::EmptySpectrum { e_max });
    }
    sort_levels(&mut levels);
    Ok(levels)
}

/// The normalized eigenstate `ψ_n^±`.
pub fn ring_eigenstate(model: &PotentialModel, n: usize, parity: Parity) -> Result<EigenState> {
    let v0 = ring_barrier(model)?;
    let missing = || Error::NoSuchState { n, parity: parity.to_string() };
    if parity == Parity::None || (parity == Parity::Odd && n == 0) {
        return Err(missing());
    }
    // Min-max: the n-th level in either class is at most the free one plus v0.
    let e_max = ((n * n) as f64 + v0 + 1.0).max(1.0);
    let level =
        ring_spectrum(model, e_max)?.into_iter().find(|l| l.n == n && l.parity == parity).ok_or_else(missing)?;
    Ok(state_from_level(model, &level))
}

pub(super) fn state_from_level(model: &PotentialModel, level: &Level) -> EigenState {
    let v0 = model.barrier().unwrap_or(0.0);
    let profile = if v0 == 0.0 {
        Profile::Free
    } else {
        Profile::Piecewise(PiecewiseProfile::new(v0, level.energy, level.parity))
    };
    EigenState { n: level.n, parity: level.parity, energy: level.energy, profile }
}

/// Closed-form eigenfunction on the piecewise ring.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct PiecewiseProfile {
    v0: f64,
    energy: f64,
    parity: Parity,
    edge: [f64; 2],
    scale: f64,
}

impl PiecewiseProfile {
    fn new(v0: f64, energy: f64, parity: Parity) -> Self {
        let edge = edge_state(v0, energy, parity);
        let mut p = Self { v0, energy, parity, edge, scale: 1.0 };
        let rule = CompositeRule::new(&GaussLegendre::new(16), &[0.0, FRAC_PI_2, PI], PI / 32.0);
        let half = rule.integrate_real(|x| p.half_ring(x)[0].powi(2));
        p.scale = (2.0 * half).sqrt().recip();
        p
    }

    /// Unnormalized `(ψ, ψ')` for `x ∈ [0, π]`.
    fn half_ring(&self, x: f64) -> [f64; 2] {
        if x < FRAC_PI_2 {
            apply(&transfer(self.energy - self.v0, x), start_vector(self.parity))
        } else {
            apply(&transfer(self.energy, x - FRAC_PI_2), self.edge)
        }
    }

    pub(crate) fn eval(&self, x: f64) -> (f64, f64) {
        let w = wrap_ring(x);
        let [v, d] = self.half_ring(w.abs());
        let s = if w < 0.0 { -1.0 } else { 1.0 };
        let (v, d) = match self.parity {
            Parity::Odd => (s * v, d),
            _ => (v, s * d),
        };
        (self.scale * v, self.scale * d)
    }
}
