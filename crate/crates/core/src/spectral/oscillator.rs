use std::f64::consts::PI;

use super::{EigenState, Parity, Profile};
use crate::error::{Error, Result};

/// Highest oscillator order the recurrence is trusted for (with `|x| ≤ 10`).
pub const HO_MAX_ORDER: usize = 60;

/// Normalized Hermite function `φ_n(x)` and its derivative, using the
/// textbook sign (positive leading coefficient).
///
/// The recurrence runs on the already-normalized functions,
/// `φ_{k+1} = √(2/(k+1)) x φ_k − √(k/(k+1)) φ_{k−1}`, so no factorials or
/// Hermite polynomial values ever appear.
pub fn hermite_function(n: usize, x: f64) -> (f64, f64) {
    let mut prev = PI.powf(-0.25) * (-0.5 * x * x).exp();
    if n == 0 {
        return (prev, -x * prev);
    }
    let mut cur = 2f64.sqrt() * x * prev;
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    // φ_n' = √(2n) φ_{n-1} − x φ_n
    let deriv = (2.0 * n as f64).sqrt() * prev - x * cur;
    (cur, deriv)
}

/// The `n`-th oscillator eigenstate, `E = n + ½`.
pub fn ho_eigenstate(n: usize) -> Result<EigenState> {
    if n > HO_MAX_ORDER {
        return Err(Error::UnsupportedOrder { n, max: HO_MAX_ORDER });
    }
    let parity = if n.is_multiple_of(2) { Parity::Even } else { Parity::Odd };
    // φ_n(0) and φ_n'(0) alternate in sign every two orders.
    let sign = if n % 4 >= 2 { -1.0 } else { 1.0 };
    Ok(EigenState { n, parity, energy: n as f64 + 0.5, profile: Profile::Oscillator { sign } })
}
