//! Scale-resolved quantum states in one dimension.
//!
//! Positions are split as `x = y·ε + z` into a coarse bin label `y` and a
//! sub-bin coordinate `z ∈ [0, ε)`. Integrating out `z` turns a pure state
//! into a mixed state on bin labels, the *scale-ε reduced density matrix*,
//! whose von Neumann entropy measures how much of the state is invisible to
//! a position measurement of precision `ε`.
//!
//! The crate is organised bottom-up:
//!
//! * [`spectral`]: eigenbases for the free ring, the piecewise-constant ring
//!   and the harmonic oscillator, plus projection of arbitrary states onto them.
//! * [`evolution`]: exact time evolution by stationary phases.
//! * [`reduction`]: bin grids and the reduced density matrix.
//! * [`entropy`]: Hermitian eigensolver, entropy in bits and entropy-vs-time curves.
//!
//! All energies and times are dimensionless with `ħ = 1`.

pub mod entropy;
pub mod error;
pub mod evolution;
pub mod linalg;
pub mod quadrature;
pub mod reduction;
pub mod spectral;

pub use num_complex::Complex64 as C64;

pub use entropy::{entropy_bits, entropy_curve, spectrum, EntropyCurve, Spectrum};
pub use error::{Error, Result};
pub use evolution::{evolve, EvolvedState};
pub use reduction::{fine_overlap, reduce, two_plane_wave_rdm, BinGrid, ReducedDensityMatrix};
pub use spectral::{
    decompose, ho_eigenstate, plane_wave, ring_eigenstate, ring_spectrum, Basis, EigenState, Parity, PlaneWave,
    PotentialModel, SpectralState,
};
