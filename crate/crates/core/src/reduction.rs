//! Coarse-graining of a pure state onto bins of width `ε`.
//!
//! Positions split as `x = offset + yε + z`, `z ∈ [0, ε)`, and
//!
//! ```text
//! ρ̃(y, y') = ∫₀^ε ψ(offset + yε + z) · conj ψ(offset + y'ε + z) dz
//! ```
//!
//! is evaluated with a 16-point Gauss-Legendre rule per bin. Bins wider than
//! π/4 are split into panels, and so are bins in which a ring barrier begins
//! or ends, so that each panel sees a smooth integrand.
//! `ψ` is sampled once per node and every matrix entry is an outer product
//! of those samples.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::EvolvedState;
use crate::linalg::HermitianMatrix;
use crate::quadrature::{CompositeRule, GaussLegendre};
use crate::spectral::{Domain, PotentialModel, SpectralState};
use crate::C64;

/// Nodes per bin, or per piece of a bin cut by a potential step.
pub const BIN_NODES: usize = 16;

/// Wider bins are split into panels no wider than this.
const MAX_PANEL: f64 = PI / 4.0 * (1.0 + 1e-12);

/// States whose `|Σ|c|² − 1|` exceeds this are refused.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-4;

/// `|Bε − 2π|` allowed for a ring grid.
pub const RING_TILING_TOLERANCE: f64 = 1e-12;

/// Domain of a bin grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridDomain {
    Ring,
    /// Bins cover at least `[-half_width, half_width]`.
    Interval {
        half_width: f64,
    },
}

/// Disjoint half-open bins `[offset + yε, offset + (y+1)ε)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinGrid {
    epsilon: f64,
    offset: f64,
    domain: GridDomain,
    first: i64,
    bins: usize,
}

impl BinGrid {
    /// Ring grid starting at `x = 0`; `ε` must divide `2π`.
    pub fn ring(epsilon: f64) -> Result<Self> {
        Self::ring_with_offset(epsilon, 0.0)
    }

    pub fn ring_with_offset(epsilon: f64, offset: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        if !offset.is_finite() {
            return Err(Error::Configuration(format!("offset must be finite, got {offset}")));
        }
        let bins = (2.0 * PI / epsilon).round();
        if bins < 1.0 || (bins * epsilon - 2.0 * PI).abs() >= RING_TILING_TOLERANCE {
            return Err(Error::Configuration(format!(
                "epsilon = {epsilon} does not divide the ring circumference 2π \
                 (nearest bin count {bins}); use 2π/B such as pi/4"
            )));
        }
        Ok(Self { epsilon, offset, domain: GridDomain::Ring, first: 0, bins: bins as usize })
    }

    /// The fewest bins of the lattice `offset + ℤε` covering `[-half_width, half_width]`.
    pub fn interval(epsilon: f64, half_width: f64, offset: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::Configuration(format!("half-width must be positive, got {half_width}")));
        }
        if !offset.is_finite() {
            return Err(Error::Configuration(format!("offset must be finite, got {offset}")));
        }
        let lo = ((-half_width - offset) / epsilon).floor() as i64;
        let hi = ((half_width - offset) / epsilon).ceil() as i64;
        let bins = (hi - lo).max(1) as usize;
        Ok(Self { epsilon, offset, domain: GridDomain::Interval { half_width }, first: lo, bins })
    }

    /// The default oscillator grid: offset `−ε/2`, so bins are centred on `yε`.
    pub fn centered_interval(epsilon: f64, half_width: f64) -> Result<Self> {
        Self::interval(epsilon, half_width, -0.5 * epsilon)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn domain(&self) -> GridDomain {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.bins
    }

    pub fn is_empty(&self) -> bool {
        self.bins == 0
    }

    pub fn is_ring(&self) -> bool {
        matches!(self.domain, GridDomain::Ring)
    }

    /// Left edge of the `b`-th bin (`b = 0..len`).
    pub fn left_edge(&self, b: usize) -> f64 {
        self.offset + (self.first + b as i64) as f64 * self.epsilon
    }

    /// `[left edge of the first bin, right edge of the last]`.
    pub fn span(&self) -> (f64, f64) {
        (self.left_edge(0), self.left_edge(self.bins))
    }

    /// Half-width of the symmetric interval the bins actually tile; for a
    /// centred grid this is the truncation length rounded out to a bin edge.
    pub fn covering_half_width(&self) -> f64 {
        let (lo, hi) = self.span();
        lo.abs().max(hi.abs())
    }

    fn check_model(&self, model: &PotentialModel) -> Result<()> {
        match (self.domain, model.domain()) {
            (GridDomain::Ring, Domain::Ring) => Ok(()),
            (GridDomain::Interval { .. }, Domain::Interval { half_width }) => {
                let (lo, hi) = self.span();
                let slack = 1e-12 * half_width.max(1.0);
                if lo < -half_width - slack || hi > half_width + slack {
                    return Err(Error::Configuration(format!(
                        "bins span [{lo}, {hi}], beyond the model domain [{}, {half_width}]; \
                         build the model on the grid's covering half-width",
                        -half_width
                    )));
                }
                // A gap of a full bin or more at either end would lose mass.
                if lo > -half_width + self.epsilon + slack || hi < half_width - self.epsilon - slack {
                    return Err(Error::Configuration(format!(
                        "bins span [{lo}, {hi}] and leave part of [{}, {half_width}] uncovered",
                        -half_width
                    )));
                }
                Ok(())
            }
            _ => Err(Error::Configuration("bin grid and potential model live on different domains".into())),
        }
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(Error::Configuration(format!("epsilon must be positive, got {epsilon}")))
    }
}

/// `ρ̃` on bin labels.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedDensityMatrix {
    grid: BinGrid,
    matrix: HermitianMatrix,
}

impl ReducedDensityMatrix {
    pub fn grid(&self) -> &BinGrid {
        &self.grid
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn get(&self, y: usize, y2: usize) -> C64 {
        self.matrix.get(y, y2)
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    pub fn is_hermitian(&self) -> bool {
        self.matrix.is_hermitian()
    }

    pub fn dump(&self) -> MatrixDump {
        let (lo, hi) = self.grid.span();
        MatrixDump {
            epsilon: self.grid.epsilon,
            offset: self.grid.offset,
            domain: if self.grid.is_ring() { "ring".into() } else { "interval".into() },
            span: [lo, hi],
            bins: self.dim(),
            entries: self.matrix.as_slice().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

/// JSON form of a reduced density matrix; `entries` is row-major `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDump {
    pub epsilon: f64,
    pub offset: f64,
    pub domain: String,
    pub span: [f64; 2],
    #[serde(rename = "B")]
    pub bins: usize,
    pub entries: Vec<[f64; 2]>,
}

/// Quadrature positions and weights inside every bin, bin-major. All bins
/// share one local rule on `[0, ε)`.
struct BinNodes {
    points: Vec<f64>,
    weights: Vec<f64>,
}

/// Local offsets `z ∈ (0, ε)` at which some bin meets a potential step.
///
/// Ring bins tile whole turns, so a step at `x_s` lands at the same
/// `z = (x_s − offset) mod ε` in every bin.
fn local_breaks(grid: &BinGrid, model: &PotentialModel) -> Vec<f64> {
    let steps: &[f64] = match *model {
        PotentialModel::PiecewiseRing { v0 } if v0 != 0.0 => &[-PI / 2.0, PI / 2.0],
        _ => &[],
    };
    let eps = grid.epsilon;
    let tol = 1e-12 * eps.max(1.0);
    let mut breaks = vec![0.0, eps];
    for &x in steps {
        let z = (x - grid.offset).rem_euclid(eps);
        if z > tol && z < eps - tol && breaks.iter().all(|b| (b - z).abs() > tol) {
            breaks.push(z);
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks
}

impl BinNodes {
    fn new(grid: &BinGrid, model: &PotentialModel) -> Self {
        let local = CompositeRule::new(&GaussLegendre::new(BIN_NODES), &local_breaks(grid, model), MAX_PANEL);
        let mut points = Vec::with_capacity(grid.bins * local.points.len());
        for b in 0..grid.bins {
            let edge = grid.left_edge(b);
            points.extend(local.points.iter().map(|z| edge + z));
        }
        Self { points, weights: local.weights }
    }

    fn assemble(&self, grid: &BinGrid, samples: &[C64]) -> ReducedDensityMatrix {
        let n = grid.bins;
        let m = self.weights.len();
        let mut data = vec![C64::new(0.0, 0.0); n * n];
        for y in 0..n {
            let row = &samples[y * m..(y + 1) * m];
            let diag: f64 = row.iter().zip(&self.weights).map(|(s, w)| w * s.norm_sqr()).sum();
            data[y * n + y] = C64::new(diag, 0.0);
            for y2 in y + 1..n {
                let col = &samples[y2 * m..(y2 + 1) * m];
                data[y * n + y2] = row.iter().zip(col).zip(&self.weights).map(|((a, b), &w)| a * b.conj() * w).sum();
            }
        }
        ReducedDensityMatrix { grid: *grid, matrix: HermitianMatrix::from_upper(n, data) }
    }
}

fn check_state(state: &SpectralState, grid: &BinGrid) -> Result<()> {
    grid.check_model(state.basis().model())?;
    let norm_sq = state.norm_sq();
    if (norm_sq - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::Normalization { norm_sq });
    }
    Ok(())
}

/// `ρ̃` of an evolved state on `grid`.
pub fn reduce(state: &EvolvedState, grid: &BinGrid) -> Result<ReducedDensityMatrix> {
    check_state(state.base(), grid)?;
    let nodes = BinNodes::new(grid, state.base().basis().model());
    let samples: Vec<C64> = nodes.points.iter().map(|&x| state.synthesize(x)).collect();
    Ok(nodes.assemble(grid, &samples))
}

/// Eigenfunction samples at the bin nodes, reused for every time.
pub struct ReductionPlan {
    grid: BinGrid,
    nodes: BinNodes,
    energies: Vec<f64>,
    coefficients: Vec<C64>,
    /// `table[k][node]` is the k-th term's eigenfunction at that node.
    table: Vec<Vec<f64>>,
}

impl ReductionPlan {
    pub fn new(state: &SpectralState, grid: &BinGrid) -> Result<Self> {
        check_state(state, grid)?;
        let nodes = BinNodes::new(grid, state.basis().model());
        let states = state.basis().states();
        let mut energies = Vec::new();
        let mut coefficients = Vec::new();
        let mut table = Vec::new();
        for &(i, c) in state.terms() {
            let eig = &states[i];
            energies.push(eig.energy);
            coefficients.push(c);
            table.push(nodes.points.iter().map(|&x| eig.value(x)).collect());
        }
        Ok(Self { grid: *grid, nodes, energies, coefficients, table })
    }

    pub fn grid(&self) -> &BinGrid {
        &self.grid
    }

    pub fn at(&self, t: f64) -> ReducedDensityMatrix {
        let mut samples = vec![C64::new(0.0, 0.0); self.nodes.points.len()];
        for ((&e, &c), row) in self.energies.iter().zip(&self.coefficients).zip(&self.table) {
            let a = c * C64::from_polar(1.0, -e * t);
            for (s, &v) in samples.iter_mut().zip(row) {
                *s += a * v;
            }
        }
        self.nodes.assemble(&self.grid, &samples)
    }
}

/// `I(Δk) = ∫₀^ε e^{iΔk z} dz`.
pub fn fine_overlap(dk: f64, epsilon: f64) -> C64 {
    if dk == 0.0 {
        return C64::new(epsilon, 0.0);
    }
    let phase = dk * epsilon;
    let turns = phase / (2.0 * PI);
    if (turns - turns.round()).abs() < 1e-12 {
        return C64::new(0.0, 0.0);
    }
    if phase.abs() < 1e-6 {
        // ε Σ (iφ)^m / (m+1)!
        let i = C64::new(0.0, 1.0);
        let p = i * phase;
        return epsilon * (1.0 + p / 2.0 + p * p / 6.0 + p * p * p / 24.0);
    }
    // e^{iφ} − 1 = 2i sin(φ/2) e^{iφ/2}, free of cancellation for small φ.
    C64::from_polar(2.0 * (0.5 * phase).sin() / dk, 0.5 * phase)
}

/// The effective 2×2 problem for `a₁e^{ik₁x} + a₂e^{ik₂x}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoWaveRdm {
    pub matrix: [[C64; 2]; 2],
    /// `(λ₊, λ₋)`, `λ₊ ≥ λ₋`, summing to one.
    pub eigenvalues: (f64, f64),
}

pub fn two_plane_wave_rdm(a1: C64, a2: C64, k1: i64, k2: i64, epsilon: f64) -> Result<TwoWaveRdm> {
    check_epsilon(epsilon)?;
    if k1 == k2 {
        return Err(Error::DegenerateInput(format!("both plane waves have k = {k1}")));
    }
    let norm_sq = a1.norm_sqr() + a2.norm_sqr();
    if (norm_sq - 1.0).abs() > 1e-10 {
        return Err(Error::Normalization { norm_sq });
    }
    let ratio = fine_overlap((k1 - k2) as f64, epsilon) / epsilon;
    let off = a1 * a2.conj() * ratio;
    let matrix = [[C64::new(a1.norm_sqr(), 0.0), off], [off.conj(), C64::new(a2.norm_sqr(), 0.0)]];
    Ok(TwoWaveRdm { matrix, eigenvalues: hermitian_2x2_eigenvalues(&matrix) })
}

/// Roots of `λ² − (a + d)λ + (ad − |b|²)`.
pub fn hermitian_2x2_eigenvalues(m: &[[C64; 2]; 2]) -> (f64, f64) {
    let (a, d) = (m[0][0].re, m[1][1].re);
    let mean = 0.5 * (a + d);
    let radius = (0.25 * (a - d) * (a - d) + m[0][1].norm_sqr()).sqrt();
    (mean + radius, mean - radius)
}

/// `M_{ij} = a_i ā_j I(k_i − k_j)/ε`: the nonzero block of `ρ̃` for a ring
/// superposition of plane waves with pairwise distinct `k mod B`.
pub fn plane_wave_effective_matrix(amplitudes: &[C64], wavenumbers: &[i64], epsilon: f64) -> Result<HermitianMatrix> {
    check_epsilon(epsilon)?;
    if amplitudes.len() != wavenumbers.len() {
        return Err(Error::Configuration("one wavenumber is needed per amplitude".into()));
    }
    let m = amplitudes.len();
    let mut data = vec![C64::new(0.0, 0.0); m * m];
    for i in 0..m {
        for j in i..m {
            let ratio = fine_overlap((wavenumbers[i] - wavenumbers[j]) as f64, epsilon) / epsilon;
            data[i * m + j] = amplitudes[i] * amplitudes[j].conj() * ratio;
        }
    }
    Ok(HermitianMatrix::from_upper(m, data))
}
