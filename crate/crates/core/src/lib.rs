//! Qudit stabiliser formalism over prime fields.
//!
//! `quditstab` implements, at desk scale and with exact phase bookkeeping, the
//! machinery needed to study stabiliser states of `n` qudits of odd prime
//! dimension `p`:
//!
//! - [`gf`]: arithmetic and linear algebra over `F_p`, scalar and symplectic
//!   products, canonical subspaces, Lagrangian enumeration.
//! - [`weyl`]: the Weyl (generalised Pauli) operators `ω^s W_x` as exact
//!   symbolic values and as dense matrices.
//! - [`state`]: a dense state-vector engine with reproducible random streams.
//! - [`stab`]: stabiliser groups, their states (closed form and projector
//!   oracle), characteristic distributions and stabiliser fidelity.
//! - [`fourier`]: symplectic Fourier analysis on functions over `F_p^{2n}` and
//!   the involuted Weyl distribution produced by Bell difference sampling.
//! - [`sampling`]: Bell and Bell-difference sampling on explicit multi-copy
//!   states, with exact outcome oracles.
//! - [`learn`]: stabiliser-state learners, one using conjugate copies and one
//!   using only copies of the state.
//! - [`distinguish`]: the stabiliserness POVM, the Haar-vs-high-fidelity
//!   distinguisher, qudit Clifford gates and doped circuits.
//!
//! The crate is `no_std` (it needs `alloc`). IO, file formats and the command
//! line live in the companion `quditstab-cli` crate.
//!
//! # Conventions
//!
//! A computational basis label `q ∈ F_p^n` maps to the amplitude index
//! `Σ_i q_i p^{n-1-i}`: qudit 0 is the most significant digit. Labels
//! `x ∈ F_p^{2n}` of phase-space functions use the same big-endian rule.
//! A Weyl label `x = (v, w)` acts as
//! `W_x |q⟩ = ω^{⟨q,v⟩ + 2^{-1}⟨v,w⟩} |q + w⟩`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod cmat;
pub mod distinguish;
mod error;
pub mod fourier;
pub mod gf;
pub mod learn;
pub mod sampling;
pub mod stab;
pub mod state;
pub mod weyl;

pub use error::{Error, Result};
pub use gf::{FieldSpec, FpMatrix, FpVector, Subspace, SympVector};
pub use num_complex::Complex64;
pub use state::{RngStream, StateVector};
pub use weyl::PauliElement;

/// Tolerance for exact algebraic identities evaluated in floating point.
pub const TOL_ALGEBRAIC: f64 = 1e-12;
/// Tolerance for equality of states and distributions.
pub const TOL_STATE: f64 = 1e-9;
/// Tolerance for deciding that a state is a Weyl eigenvector.
pub const TOL_EIGEN: f64 = 1e-6;
