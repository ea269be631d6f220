use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use super::{Basis, Domain, SpectralState};
use crate::error::{Error, Result};
use crate::quadrature::{CompositeRule, GaussLegendre};
use crate::C64;

/// Largest acceptable norm of the unprojected remainder.
pub const RESIDUAL_LIMIT: f64 = 1e-3;

const NODES: usize = 16;
const MAX_PANEL: f64 = PI / 8.0;

/// Composite 16-point rule over a model's domain, panels at most π/8 wide,
/// with the ring barrier edges `±π/2` as panel ends.
pub fn domain_rule(domain: Domain) -> CompositeRule {
    let rule = GaussLegendre::new(NODES);
    match domain {
        Domain::Ring => CompositeRule::new(&rule, &[-PI, -FRAC_PI_2, FRAC_PI_2, PI], MAX_PANEL),
        Domain::Interval { half_width } => CompositeRule::new(&rule, &[-half_width, 0.0, half_width], MAX_PANEL),
    }
}

/// Projects `f` onto `basis`: `c_n = ⟨ψ_n|f⟩`, keeps `|c_n| ≥ threshold`, and
/// renormalises. `f` is expected to have unit norm on the domain.
pub fn decompose<F>(f: F, basis: Arc<Basis>, threshold: f64) -> Result<SpectralState>
where
    F: Fn(f64) -> C64,
{
    if !(0.0..1.0).contains(&threshold) {
        return Err(Error::Configuration(format!("threshold must lie in [0, 1), got {threshold}")));
    }
    let rule = domain_rule(basis.model().domain());
    let samples: Vec<C64> = rule.points.iter().map(|&x| f(x)).collect();
    let norm_sq: f64 = samples.iter().zip(&rule.weights).map(|(s, w)| w * s.norm_sqr()).sum();
    if !(norm_sq > 0.0 && norm_sq.is_finite()) {
        return Err(Error::Normalization { norm_sq });
    }

    let coefficients: Vec<C64> = basis
        .states()
        .iter()
        .map(|state| {
            rule.points.iter().zip(&rule.weights).zip(&samples).map(|((&x, &w), &s)| s * (w * state.value(x))).sum()
        })
        .collect();

    let captured: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
    let residual = (norm_sq - captured).max(0.0).sqrt() / norm_sq.sqrt();
    if residual > RESIDUAL_LIMIT {
        return Err(Error::IncompleteBasis {
            residual,
            limit: RESIDUAL_LIMIT,
            suggested_e_max: (2.0 * basis.e_max()).ceil(),
        });
    }

    let mut terms = Vec::new();
    let mut discarded = 0.0;
    for (i, c) in coefficients.into_iter().enumerate() {
        let c = c / norm_sq.sqrt();
        if c.norm() >= threshold {
            terms.push((i, c));
        } else {
            discarded += c.norm_sqr();
        }
    }
    let kept: f64 = terms.iter().map(|(_, c)| c.norm_sqr()).sum();
    if kept == 0.0 {
        return Err(Error::Normalization { norm_sq: 0.0 });
    }
    let s = kept.sqrt().recip();
    for (_, c) in &mut terms {
        *c *= s;
    }
    Ok(SpectralState::from_parts(basis, terms, threshold, kept, discarded, residual))
}
