use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use super::StateError;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for k in 0..dim {
                data.push(f(i, k));
            }
        }
        ComplexMatrix { dim, data }
    }

    pub fn from_real_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        Self::from_fn(dim, |i, k| Complex64::new(f(i, k), 0.0))
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// `|v><v|`.
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), |i, k| v[i] * v[k].conj())
    }

    /// Row-major entries; rejects non-square input and non-finite values.
    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> Result<Self, StateError> {
        if data.len() != dim * dim {
            return Err(StateError::NotSquare { rows: dim, cols: data.len() / dim.max(1) });
        }
        let m = ComplexMatrix { dim, data };
        m.check_finite()?;
        Ok(m)
    }

    /// Builds from separate real and imaginary row arrays, rejecting ragged input.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self, StateError> {
        let dim = re.len();
        if im.len() != dim {
            return Err(StateError::NotSquare { rows: im.len(), cols: dim });
        }
        let mut data = Vec::with_capacity(dim * dim);
        for (r, i) in re.iter().zip(im) {
            if r.len() != dim {
                return Err(StateError::NotSquare { rows: dim, cols: r.len() });
            }
            if i.len() != dim {
                return Err(StateError::NotSquare { rows: dim, cols: i.len() });
            }
            data.extend(r.iter().zip(i).map(|(&a, &b)| Complex64::new(a, b)));
        }
        Self::from_row_major(dim, data)
    }

    pub fn check_finite(&self) -> Result<(), StateError> {
        match self.data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            Some(p) => Err(StateError::NonFinite { row: p / self.dim, col: p % self.dim }),
            None => Ok(()),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, k: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, k)]).collect()
    }

    pub fn real_parts(&self) -> Vec<Vec<f64>> {
        (0..self.dim).map(|i| self.row(i).iter().map(|z| z.re).collect()).collect()
    }

    pub fn imag_parts(&self) -> Vec<Vec<f64>> {
        (0..self.dim).map(|i| self.row(i).iter().map(|z| z.im).collect()).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, k| self[(k, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn diag_real(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self[(i, i)].re).collect()
    }

    pub fn scale(&self, s: f64) -> Self {
        ComplexMatrix { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        ComplexMatrix { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    /// `u * self * u†`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        &(u * self) * &u.adjoint()
    }

    pub fn commutator(&self, other: &ComplexMatrix) -> Self {
        &(self * other) - &(other * self)
    }

    /// `Tr(self * other)` without forming the product.
    pub fn trace_product(&self, other: &ComplexMatrix) -> Complex64 {
        let n = self.dim;
        let mut acc = ZERO;
        for i in 0..n {
            for k in 0..n {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch in max_abs_diff");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |A_ik - conj(A_ki)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for k in i..self.dim {
                worst = worst.max((self[(i, k)] - self[(k, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, k| (self[(i, k)] + self[(k, i)].conj()) * 0.5)
    }

    /// `<v| self |v>`.
    pub fn expectation(&self, v: &[Complex64]) -> Complex64 {
        let n = self.dim;
        let mut acc = ZERO;
        for i in 0..n {
            let mut row = ZERO;
            for k in 0..n {
                row += self[(i, k)] * v[k];
            }
            acc += v[i].conj() * row;
        }
        acc
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, k): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + k]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, k): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + k]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix product");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for l in 0..n {
                let a = self[(i, l)];
                if a == ZERO {
                    continue;
                }
                for k in 0..n {
                    out.data[i * n + k] += a * rhs.data[l * n + k];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix sum");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix difference");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}
