//! Thermodynamic distance between quantum states and Gibbs states.
//!
//! For a state `rho`, a Hamiltonian `H` and a temperature `T != 0`, the
//! distance parameter
//!
//! ```text
//! Delta = E - T S + T ln Z,   E = Tr(rho H),  S = -Tr(rho ln rho),  Z = Tr(exp(-H/T))
//! ```
//!
//! equals `T` times the von Neumann relative entropy between `rho` and the
//! Gibbs state `exp(-H/T)/Z`. It is non-negative for `T > 0`, non-positive for
//! `T < 0`, and vanishes exactly on the Gibbs state.
//!
//! Modules:
//!
//! - [`hermitian`]: dense Hermitian matrices, spectral functions, Gibbs states.
//! - [`relative_entropy`]: von Neumann and Tsallis relative entropies, the
//!   small-`delta` series of `S_{1+delta}`, and [`DeltaRecord`].
//! - [`qubit`]: Bloch-vector closed forms and `(theta, T)` grids.
//! - [`gaussian`]: single-mode Gaussian states, quadratic Hamiltonians and the
//!   SU(1,1) partition function.
//! - [`amplifier`]: thermal light against the degenerate parametric amplifier.
//! - [`fock`]: truncated Fock-space and quadrature oracles.
//! - [`grid`]: grid specifications and the [`DeltaGrid`] output container.
//! - [`sampling`]: seeded parameter families for the oracle suites.

// `!(x > 0.0)` is the NaN-rejecting form used throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod amplifier;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod grid;
pub mod hermitian;
pub mod legendre;
pub mod qubit;
pub mod relative_entropy;
pub mod sampling;

pub use error::{Error, Result};
pub use grid::{DeltaGrid, GridSpec};
pub use hermitian::{HermitianMatrix, SpectralDecomposition, SupportPolicy};
pub use relative_entropy::DeltaRecord;

pub use num_complex::Complex64;
