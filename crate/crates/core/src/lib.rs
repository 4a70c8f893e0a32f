//! Spin tomograms of qudit states, explicit quantumness witnesses built
//! from a state's spectrum, and their Jordan-Schwinger lift to two-mode
//! photon-number states.
//!
//! Module map:
//! - [`qstate`]: complex matrices, certified density matrices, Jacobi
//!   eigensolver, seeded random states.
//! - [`su2`]: irrep matrices `D^j(α, β, γ)` and Euler-angle quadrature.
//! - [`tomography`]: tomograms, the grid reconstruction kernel, dual
//!   symbols and the trace pairing.
//! - [`witness`]: classical model, witness construction and scans.
//! - [`jsmap`]: two-mode sectors and witness lifting.
//!
//! With the default `parallel` feature, grid sampling and scans run on
//! rayon; disabling it gives identical results sequentially.

pub mod format;
pub mod jsmap;
pub mod par;
pub mod qstate;
pub mod spin;
pub mod su2;
pub mod tomography;
pub mod witness;

pub use qstate::{ComplexMatrix, DensityMatrix};
pub use spin::{Magnetic, Spin};
