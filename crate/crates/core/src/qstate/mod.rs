//! State algebra: dense complex matrices, certified density matrices,
//! spectra, purity and seeded random states.

mod eigen;
mod matrix;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spin::Spin;

pub use eigen::{eigh, Diagonalization, DEGENERACY_GAP};
pub use matrix::ComplexMatrix;

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
/// Smallest admissible eigenvalue of a state.
pub const PSD_TOL: f64 = -1e-10;
pub const MAX_DIM: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("matrix is not square: {rows} rows but a row of length {cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not Hermitian: max |A_ik - conj(A_ki)| = {defect:e}")]
    NotHermitian { defect: f64 },
    #[error("trace is {re} + {im}i, not 1")]
    TraceNotOne { re: f64, im: f64 },
    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },
    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    ConvergenceFailure { sweeps: usize },
    #[error("invalid density-matrix JSON: {0}")]
    Json(String),
}

/// A certified spin-`j` state: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    spin: Spin,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `Tr(rho * op)`.
    pub fn expectation(&self, op: &ComplexMatrix) -> Complex64 {
        self.matrix.trace_product(op)
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|k| i == k || self.matrix[(i, k)] == Complex64::new(0.0, 0.0)))
    }

    /// `u rho u†` for a unitary `u` (not re-validated beyond dimension).
    pub fn rotated(&self, u: &ComplexMatrix) -> Result<DensityMatrix, StateError> {
        if u.dim() != self.dim() {
            return Err(StateError::DimensionMismatch { expected: self.dim(), found: u.dim() });
        }
        validate(&self.matrix.conjugate_by(u).hermitian_part(), self.spin)
    }

    pub fn maximally_mixed(spin: Spin) -> DensityMatrix {
        let n = spin.dim();
        DensityMatrix { spin, matrix: ComplexMatrix::identity(n).scale(1.0 / n as f64) }
    }

    /// Diagonal state `diag(r)`; `r` must lie on the probability simplex.
    pub fn from_diagonal(r: &[f64]) -> Result<DensityMatrix, StateError> {
        let spin = Spin::from_dim(r.len()).map_err(|_| StateError::DimensionMismatch { expected: 1, found: 0 })?;
        validate(&ComplexMatrix::diagonal(r), spin)
    }

    /// Projector onto a vector (normalized internally).
    pub fn pure(v: &[Complex64]) -> Result<DensityMatrix, StateError> {
        let spin = Spin::from_dim(v.len()).map_err(|_| StateError::DimensionMismatch { expected: 1, found: 0 })?;
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let unit: Vec<Complex64> = v.iter().map(|z| z / norm).collect();
        validate(&ComplexMatrix::outer(&unit), spin)
    }
}

/// Certifies `raw` as a spin-`j` state or names the violated axiom.
pub fn validate(raw: &ComplexMatrix, spin: Spin) -> Result<DensityMatrix, StateError> {
    if raw.dim() != spin.dim() {
        return Err(StateError::DimensionMismatch { expected: spin.dim(), found: raw.dim() });
    }
    if raw.dim() > MAX_DIM {
        return Err(StateError::DimensionMismatch { expected: MAX_DIM, found: raw.dim() });
    }
    raw.check_finite()?;
    let defect = raw.hermiticity_defect();
    if defect > HERMITICITY_TOL {
        return Err(StateError::NotHermitian { defect });
    }
    let tr = raw.trace();
    if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
        return Err(StateError::TraceNotOne { re: tr.re, im: tr.im });
    }
    let spectrum = eigh(raw)?;
    let min_eigenvalue = spectrum.eigenvalues.last().copied().unwrap_or(0.0);
    if min_eigenvalue < PSD_TOL {
        return Err(StateError::NotPositive { min_eigenvalue });
    }
    Ok(DensityMatrix { spin, matrix: raw.clone() })
}

/// `Tr rho^2`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.matrix.as_slice().iter().map(|z| z.norm_sqr()).sum()
}

/// `rho = u diag(eigenvalues) u†` with eigenvalues descending.
pub fn diagonalize(rho: &DensityMatrix) -> Result<Diagonalization, StateError> {
    eigh(&rho.matrix)
}

fn complex_gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// Hilbert-Schmidt random state: `G G† / Tr(G G†)` for a complex Ginibre `G`.
pub fn random_density(n: usize, seed: u64) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_density_with(n, &mut rng)
}

pub fn random_density_with(n: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
    assert!((1..=MAX_DIM).contains(&n), "state dimension must be in 1..={MAX_DIM}");
    let g = ComplexMatrix::from_fn(n, |_, _| complex_gaussian(rng));
    let gram = &g * &g.adjoint();
    let tr = gram.trace().re;
    let spin = Spin::from_dim(n).expect("n >= 1");
    DensityMatrix { spin, matrix: renormalize(gram.scale(1.0 / tr)) }
}

/// Pure state from a normalized complex Gaussian vector.
pub fn random_pure(n: usize, seed: u64) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_pure_with(n, &mut rng)
}

pub fn random_pure_with(n: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
    assert!((1..=MAX_DIM).contains(&n), "state dimension must be in 1..={MAX_DIM}");
    let v: Vec<Complex64> = (0..n).map(|_| complex_gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let v: Vec<Complex64> = v.iter().map(|z| z / norm).collect();
    let spin = Spin::from_dim(n).expect("n >= 1");
    DensityMatrix { spin, matrix: renormalize(ComplexMatrix::outer(&v)) }
}

/// Haar-random unitary via Gram-Schmidt on a Ginibre matrix.
pub fn random_unitary_with(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<Complex64> = (0..n).map(|_| complex_gaussian(rng)).collect();
        for _ in 0..2 {
            for c in &cols {
                let overlap: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(c) {
                    *x -= overlap * y;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    ComplexMatrix::from_fn(n, |i, k| cols[k][i])
}

pub fn random_unitary(n: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_unitary_with(n, &mut rng)
}

/// Real diagonal, Hermitian mirror, and trace pinned to one.
fn renormalize(mut m: ComplexMatrix) -> ComplexMatrix {
    let n = m.dim();
    for i in 0..n {
        m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
        for k in i + 1..n {
            m[(k, i)] = m[(i, k)].conj();
        }
    }
    let tr = m.trace().re;
    m.scale(1.0 / tr)
}

/// Wire form `{"dim": N, "re": [[..]], "im": [[..]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        MatrixJson { dim: m.dim(), re: m.real_parts(), im: m.imag_parts() }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix, StateError> {
        let m = ComplexMatrix::from_parts(&self.re, &self.im)?;
        if m.dim() != self.dim {
            return Err(StateError::DimensionMismatch { expected: self.dim, found: m.dim() });
        }
        Ok(m)
    }
}

pub fn matrix_from_json(text: &str) -> Result<ComplexMatrix, StateError> {
    let parsed: MatrixJson = serde_json::from_str(text).map_err(|e| StateError::Json(e.to_string()))?;
    parsed.to_matrix()
}

/// Parses and certifies a density matrix; `j` follows from `dim`.
pub fn density_from_json(text: &str) -> Result<DensityMatrix, StateError> {
    let m = matrix_from_json(text)?;
    let spin = Spin::from_dim(m.dim()).map_err(|_| StateError::DimensionMismatch { expected: 1, found: 0 })?;
    validate(&m, spin)
}

pub fn density_to_json(rho: &DensityMatrix) -> String {
    crate::format::to_json(&MatrixJson::from_matrix(rho.matrix()))
}
