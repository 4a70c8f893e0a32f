//! Cyclic Jacobi eigensolver for Hermitian matrices.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::StateError;

/// Eigenvalues closer than this are treated as one degenerate cluster.
pub const DEGENERACY_GAP: f64 = 1e-9;

const MAX_SWEEPS: usize = 64;

/// `matrix = rotation * diag(eigenvalues) * rotation†`, eigenvalues descending.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagonalization {
    pub eigenvalues: Vec<f64>,
    pub rotation: ComplexMatrix,
}

impl Diagonalization {
    pub fn reassemble(&self) -> ComplexMatrix {
        ComplexMatrix::diagonal(&self.eigenvalues).conjugate_by(&self.rotation)
    }

    /// Column `i` of the rotation, the eigenvector for `eigenvalues[i]`.
    pub fn eigenvector(&self, i: usize) -> Vec<Complex64> {
        self.rotation.column(i)
    }
}

/// Diagonalizes a Hermitian matrix. Only the Hermitian part of `a` is used.
///
/// Within each degenerate cluster eigenvectors are ordered by the position
/// of their largest-magnitude component, and every eigenvector is phased so
/// that component is real and positive.
pub fn eigh(a: &ComplexMatrix) -> Result<Diagonalization, StateError> {
    let n = a.dim();
    let mut m = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = frobenius(&m);

    let mut converged = n <= 1 || scale == 0.0;
    let mut sweep = 0;
    while !converged {
        if sweep == MAX_SWEEPS {
            return Err(StateError::ConvergenceFailure { sweeps: MAX_SWEEPS });
        }
        sweep += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q, scale);
            }
        }
        converged = off_diagonal(&m) <= f64::EPSILON * scale;
    }

    let values: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    Ok(canonicalize(values, v))
}

fn frobenius(m: &ComplexMatrix) -> f64 {
    m.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn off_diagonal(m: &ComplexMatrix) -> f64 {
    let n = m.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for k in 0..n {
            if i != k {
                acc += m[(i, k)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One Jacobi rotation annihilating `m[p, q]`: phase the pair to a real
/// symmetric block, then apply the classical rotation.
fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, scale: f64) {
    let apq = m[(p, q)];
    let mag = apq.norm();
    if mag <= 1e-300 || mag <= 1e-20 * scale {
        m[(p, q)] = Complex64::new(0.0, 0.0);
        m[(q, p)] = Complex64::new(0.0, 0.0);
        return;
    }
    let phase = apq / mag;
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // G = diag(1, conj(phase)) * [[c, s], [-s, c]]
    let gpp = Complex64::new(c, 0.0);
    let gpq = Complex64::new(s, 0.0);
    let gqp = -phase.conj() * s;
    let gqq = phase.conj() * c;

    let n = m.dim();
    for k in 0..n {
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        m[(k, p)] = akp * gpp + akq * gqp;
        m[(k, q)] = akp * gpq + akq * gqq;
    }
    for k in 0..n {
        let apk = m[(p, k)];
        let aqk = m[(q, k)];
        m[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
        m[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
    }
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);
    m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * gpp + vkq * gqp;
        v[(k, q)] = vkp * gpq + vkq * gqq;
    }
}

fn dominant_position(vec: &[Complex64]) -> usize {
    let max = vec.iter().map(|z| z.norm()).fold(0.0, f64::max);
    vec.iter()
        .position(|z| z.norm() >= max * (1.0 - 1e-12))
        .unwrap_or(0)
}

fn canonicalize(values: Vec<f64>, v: ComplexMatrix) -> Diagonalization {
    let n = values.len();
    let vectors: Vec<Vec<Complex64>> = (0..n).map(|k| v.column(k)).collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| values[y].total_cmp(&values[x]));

    // Split the descending sequence into clusters of near-equal eigenvalues.
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[order[end - 1]] - values[order[end]] < DEGENERACY_GAP {
            end += 1;
        }
        order[start..end].sort_by_key(|&k| dominant_position(&vectors[k]));
        start = end;
    }

    let eigenvalues: Vec<f64> = order.iter().map(|&k| values[k]).collect();
    let mut rotation = ComplexMatrix::zeros(n);
    for (col, &k) in order.iter().enumerate() {
        let vec = &vectors[k];
        let pivot = vec[dominant_position(vec)];
        let fix = if pivot.norm() > 0.0 { pivot.conj() / pivot.norm() } else { Complex64::new(1.0, 0.0) };
        for (row, z) in vec.iter().enumerate() {
            rotation[(row, col)] = z * fix;
        }
    }
    Diagonalization { eigenvalues, rotation }
}
