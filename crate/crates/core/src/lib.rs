//! Numerical toolkit for coherent-state quantization on two concrete phase
//! spaces: the complex plane (truncated Fock space, Glauber states) and the
//! sphere (spin-j, SU(2) states).
//!
//! The crate is organized in layers:
//!
//! - [`hilbert`]: dense complex operators, Fock/spin constructions, matrix
//!   exponentials and defect norms;
//! - [`grid`]: phase-space manifolds, invariant-measure quadrature grids and
//!   grid-sampled functions;
//! - [`phase_space`]: Poisson brackets, Hamiltonian vector fields and the
//!   classical flows they generate;
//! - [`coherent`]: coherent-state systems, reproducing kernels, projectors
//!   and resolutions of identity;
//! - [`quantize`]: multiplication operators, measurement-device smearing and
//!   the antinormal/Weyl/normal quantization family;
//! - [`measure`]: covariant semi-spectral measures, instruments, outcome
//!   statistics and Monte Carlo sampling;
//! - [`algebra`]: star products, device-conditioned brackets, quantized flow
//!   generators and their commutator identities.

pub mod algebra;
pub mod coherent;
pub mod error;
pub mod grid;
pub mod hilbert;
pub mod measure;
pub mod phase_space;
pub mod quantize;

pub use error::{Error, Result};
