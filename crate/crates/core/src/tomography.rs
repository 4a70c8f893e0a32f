//! Spin tomograms, grid reconstruction, dual symbols and the tomographic
//! trace pairing.
//!
//! The reconstruction kernel is the weighted least-squares inverse of the
//! sampling map `X -> <m| u X u† |m>` restricted to Hermitian operators.
//! Operators are handled through their real coordinates in the orthonormal
//! basis `{|a><a|, (|a><b| + |b><a|)/√2, (-i|a><b| + i|b><a|)/√2}`, so a
//! kernel entry `K(m, node)` is stored as an `N²` coefficient row.

use std::collections::HashMap;
use std::f64::consts::SQRT_2;
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::format::fmt17;
use crate::par;
use crate::qstate::{eigh, validate, ComplexMatrix, DensityMatrix, StateError};
use crate::spin::{Magnetic, Spin, SpinError};
use crate::su2::{irrep_matrix, EulerAngles, QuadratureGrid, Su2Error};

pub const UNITARITY_TOL: f64 = 1e-10;
/// Per-node `Σ_m w = 1`.
pub const ROW_SUM_TOL: f64 = 1e-10;
/// Per-`m` `(2j+1) Σ_node weight · w = 1`.
pub const COLUMN_SUM_TOL: f64 = 1e-8;
/// Relative singular-value cutoff of the sampling Gram matrix.
pub const RANK_CUTOFF: f64 = 1e-10;

pub const CSV_HEADER: &str = "m,alpha,beta,gamma,weight,value";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TomographyError {
    #[error("matrix is not unitary: max |u u† - I| = {defect:e}")]
    NotUnitary { defect: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("tomogram and map/symbol were built on different grids")]
    GridMismatch,
    #[error("grid resolves only {rank} of {needed} operator dimensions")]
    RankDeficient { rank: usize, needed: usize },
    #[error("operator is not Hermitian: defect {defect:e}")]
    NotHermitian { defect: f64 },
    #[error("normalization violated: {0}")]
    Normalization(String),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Grid(#[from] Su2Error),
    #[error(transparent)]
    Spin(#[from] SpinError),
    #[error("tomogram CSV: {0}")]
    Csv(String),
}

fn check_unitary(u: &ComplexMatrix) -> Result<(), TomographyError> {
    let defect = (u * &u.adjoint()).max_abs_diff(&ComplexMatrix::identity(u.dim()));
    if defect > UNITARITY_TOL {
        return Err(TomographyError::NotUnitary { defect });
    }
    Ok(())
}

/// Rank-one projector `u† |jm><jm| u`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dequantizer {
    pub spin: Spin,
    pub m: Magnetic,
    pub operator: ComplexMatrix,
}

pub fn dequantizer(spin: Spin, m: Magnetic, u: &ComplexMatrix) -> Result<Dequantizer, TomographyError> {
    if u.dim() != spin.dim() {
        return Err(TomographyError::DimensionMismatch { expected: spin.dim(), found: u.dim() });
    }
    check_unitary(u)?;
    let row = spin.index_of(m)?;
    Ok(Dequantizer { spin, m, operator: projector_from_row(u, row) })
}

/// `u† |row><row| u`, entries `conj(u[row, a]) u[row, b]`.
fn projector_from_row(u: &ComplexMatrix, row: usize) -> ComplexMatrix {
    let r = u.row(row);
    ComplexMatrix::from_fn(u.dim(), |a, b| r[a].conj() * r[b])
}

/// `<jm| u rho u† |jm>` for every `m`, in basis order.
fn probabilities(rho: &ComplexMatrix, u: &ComplexMatrix) -> Vec<f64> {
    let n = rho.dim();
    (0..n)
        .map(|row| {
            let r = u.row(row);
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..n {
                let mut inner = Complex64::new(0.0, 0.0);
                for b in 0..n {
                    inner += rho[(a, b)] * r[b].conj();
                }
                acc += r[a] * inner;
            }
            acc.re
        })
        .collect()
}

/// Tomogram value `w(m, u) = <jm| u rho u† |jm>` at an arbitrary unitary.
pub fn tomogram_eval(rho: &DensityMatrix, m: Magnetic, u: &ComplexMatrix) -> Result<f64, TomographyError> {
    if u.dim() != rho.dim() {
        return Err(TomographyError::DimensionMismatch { expected: rho.dim(), found: u.dim() });
    }
    check_unitary(u)?;
    let row = rho.spin().index_of(m)?;
    let r = u.row(row);
    Ok(rho.matrix().expectation(&r.iter().map(|z| z.conj()).collect::<Vec<_>>()).re)
}

/// Tomogram sampled on grid nodes; `values[node * N + i]` is `w(m_i, node)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tomogram {
    grid: Arc<QuadratureGrid>,
    values: Vec<f64>,
}

impl Tomogram {
    pub fn spin(&self) -> Spin {
        self.grid.spin()
    }

    pub fn grid(&self) -> &Arc<QuadratureGrid> {
        &self.grid
    }

    pub fn value(&self, m_index: usize, node: usize) -> f64 {
        self.values[node * self.spin().dim() + m_index]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Range, per-node sums and weighted per-`m` integrals.
    pub fn check_normalization(&self) -> Result<(), TomographyError> {
        let n = self.spin().dim();
        if let Some(v) = self.values.iter().find(|v| !(-1e-12..=1.0 + 1e-12).contains(*v)) {
            return Err(TomographyError::Normalization(format!("value {v} outside [0, 1]")));
        }
        let mut column = vec![0.0; n];
        for (node, (row, &w)) in self.values.chunks(n).zip(self.grid.weights()).enumerate() {
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(TomographyError::Normalization(format!("node {node}: Σ_m w = {sum}")));
            }
            for (c, v) in column.iter_mut().zip(row) {
                *c += w * v;
            }
        }
        for (i, c) in column.iter().enumerate() {
            let scaled = n as f64 * c;
            if (scaled - 1.0).abs() > COLUMN_SUM_TOL {
                let m = self.spin().magnetic_at(i);
                return Err(TomographyError::Normalization(format!("m={m}: (2j+1) Σ weight·w = {scaled}")));
            }
        }
        Ok(())
    }

    /// One row per `(m, node)`, `m` descending, nodes in grid order.
    pub fn to_csv(&self) -> String {
        let n = self.spin().dim();
        let mut out = String::with_capacity(self.values.len() * 100);
        out.push_str(CSV_HEADER);
        out.push('\n');
        for i in 0..n {
            let m = self.spin().magnetic_at(i);
            for (node, (a, w)) in self.grid.nodes().iter().zip(self.grid.weights()).enumerate() {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    m.value(),
                    fmt17(a.alpha),
                    fmt17(a.beta),
                    fmt17(a.gamma),
                    fmt17(*w),
                    fmt17(self.value(i, node))
                ));
            }
        }
        out
    }

    /// Parses the CSV export; the grid is rebuilt from the listed nodes.
    pub fn from_csv(text: &str) -> Result<Tomogram, TomographyError> {
        let bad = |msg: String| TomographyError::Csv(msg);
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        match lines.next() {
            Some(h) if h.trim() == CSV_HEADER => {}
            other => return Err(bad(format!("expected header `{CSV_HEADER}`, found {other:?}"))),
        }

        type Key = [u64; 4];
        let mut node_index: HashMap<Key, usize> = HashMap::new();
        let mut nodes: Vec<(EulerAngles, f64)> = Vec::new();
        let mut entries: Vec<(Magnetic, usize, f64)> = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 6 {
                return Err(bad(format!("line {}: expected 6 fields, found {}", lineno + 2, fields.len())));
            }
            let m: Magnetic = fields[0].parse()?;
            let mut nums = [0.0f64; 5];
            for (slot, f) in nums.iter_mut().zip(&fields[1..]) {
                *slot = f
                    .parse()
                    .map_err(|_| bad(format!("line {}: `{f}` is not a number", lineno + 2)))?;
            }
            let [alpha, beta, gamma, weight, value] = nums;
            let key = [alpha.to_bits(), beta.to_bits(), gamma.to_bits(), weight.to_bits()];
            let idx = *node_index.entry(key).or_insert_with(|| {
                nodes.push((EulerAngles { alpha, beta, gamma }, weight));
                nodes.len() - 1
            });
            entries.push((m, idx, value));
        }
        if nodes.is_empty() {
            return Err(bad("no data rows".into()));
        }
        if !entries.len().is_multiple_of(nodes.len()) {
            return Err(TomographyError::GridMismatch);
        }
        let spin = Spin::from_dim(entries.len() / nodes.len())?;
        let n = spin.dim();
        let mut values = vec![f64::NAN; nodes.len() * n];
        for (m, node, value) in entries {
            let i = spin.index_of(m)?;
            let slot = &mut values[node * n + i];
            if !slot.is_nan() {
                return Err(bad(format!("duplicate row for m={m} at node {node}")));
            }
            *slot = value;
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(TomographyError::GridMismatch);
        }
        let (angles, weights): (Vec<_>, Vec<_>) = nodes.into_iter().unzip();
        let grid = QuadratureGrid::from_nodes(spin, angles, weights)?;
        Ok(Tomogram { grid: Arc::new(grid), values })
    }
}

/// Samples `w(m, node)` at every grid node.
pub fn tomogram_sample(rho: &DensityMatrix, grid: &Arc<QuadratureGrid>) -> Result<Tomogram, TomographyError> {
    if grid.spin() != rho.spin() {
        return Err(TomographyError::DimensionMismatch { expected: grid.spin().dim(), found: rho.dim() });
    }
    let spin = rho.spin();
    let rows = par::map_collect(grid.nodes(), |a| probabilities(rho.matrix(), &irrep_matrix(spin, a)));
    Ok(Tomogram { grid: Arc::clone(grid), values: rows.concat() })
}

/// Real coordinates of a Hermitian operator in the orthonormal basis.
pub fn hermitian_coordinates(a: &ComplexMatrix) -> Vec<f64> {
    let n = a.dim();
    let mut x = Vec::with_capacity(n * n);
    for i in 0..n {
        x.push(a[(i, i)].re);
    }
    for i in 0..n {
        for k in i + 1..n {
            x.push(SQRT_2 * a[(i, k)].re);
            x.push(-SQRT_2 * a[(i, k)].im);
        }
    }
    x
}

/// Inverse of [`hermitian_coordinates`]; the result is exactly Hermitian.
pub fn from_hermitian_coordinates(n: usize, x: &[f64]) -> ComplexMatrix {
    assert_eq!(x.len(), n * n);
    let mut a = ComplexMatrix::zeros(n);
    for i in 0..n {
        a[(i, i)] = Complex64::new(x[i], 0.0);
    }
    let mut p = n;
    for i in 0..n {
        for k in i + 1..n {
            let z = Complex64::new(x[p], -x[p + 1]) / SQRT_2;
            a[(i, k)] = z;
            a[(k, i)] = z.conj();
            p += 2;
        }
    }
    a
}

/// Grid surrogate of the quantizer: `Σ weight · w(m,node) · K(m,node) = rho`.
#[derive(Debug, Clone)]
pub struct ReconstructionMap {
    grid: Arc<QuadratureGrid>,
    /// `coefficients[(node * N + i) * N² ..][..N²]` are the coordinates of `K(m_i, node)`.
    coefficients: Vec<f64>,
}

impl ReconstructionMap {
    pub fn spin(&self) -> Spin {
        self.grid.spin()
    }

    pub fn grid(&self) -> &Arc<QuadratureGrid> {
        &self.grid
    }

    fn row(&self, m_index: usize, node: usize) -> &[f64] {
        let n = self.spin().dim();
        let nn = n * n;
        let r = node * n + m_index;
        &self.coefficients[r * nn..(r + 1) * nn]
    }

    /// Kernel operator `K(m, node)`.
    pub fn kernel(&self, m_index: usize, node: usize) -> ComplexMatrix {
        from_hermitian_coordinates(self.spin().dim(), self.row(m_index, node))
    }

    fn same_grid(&self, other: &Arc<QuadratureGrid>) -> bool {
        Arc::ptr_eq(&self.grid, other) || *self.grid == **other
    }
}

pub fn build_reconstruction_map(grid: &Arc<QuadratureGrid>) -> Result<ReconstructionMap, TomographyError> {
    let spin = grid.spin();
    let n = spin.dim();
    let nn = n * n;

    // Sampling rows: coordinates of every dequantizer on the grid.
    let per_node: Vec<Vec<f64>> = par::map_collect(grid.nodes(), |a| {
        let u = irrep_matrix(spin, a);
        (0..n).flat_map(|i| hermitian_coordinates(&projector_from_row(&u, i))).collect()
    });

    let mut gram = vec![0.0; nn * nn];
    for (rows, &w) in per_node.iter().zip(grid.weights()) {
        for s in rows.chunks(nn) {
            for p in 0..nn {
                let sp = w * s[p];
                if sp == 0.0 {
                    continue;
                }
                for q in 0..nn {
                    gram[p * nn + q] += sp * s[q];
                }
            }
        }
    }
    let gram = ComplexMatrix::from_real_fn(nn, |p, q| 0.5 * (gram[p * nn + q] + gram[q * nn + p]));
    let spectrum = eigh(&gram)?;
    let top = spectrum.eigenvalues[0];
    let rank = spectrum.eigenvalues.iter().filter(|&&l| l > RANK_CUTOFF * top).count();
    if top <= 0.0 || rank < nn {
        return Err(TomographyError::RankDeficient { rank, needed: nn });
    }
    // Gram is real symmetric, so its eigenvectors may be taken real.
    let inverse: Vec<f64> = {
        let v = &spectrum.rotation;
        let mut inv = vec![0.0; nn * nn];
        for (k, &lambda) in spectrum.eigenvalues.iter().enumerate() {
            for p in 0..nn {
                let vp = v[(p, k)];
                for q in 0..nn {
                    inv[p * nn + q] += (vp * v[(q, k)].conj()).re / lambda;
                }
            }
        }
        inv
    };

    let coefficients: Vec<f64> = par::map_collect(&per_node, |rows| {
        let mut out = Vec::with_capacity(n * nn);
        for s in rows.chunks(nn) {
            for p in 0..nn {
                let g = &inverse[p * nn..(p + 1) * nn];
                out.push(g.iter().zip(s).map(|(a, b)| a * b).sum());
            }
        }
        out
    })
    .concat();

    Ok(ReconstructionMap { grid: Arc::clone(grid), coefficients })
}

/// `Σ_m Σ_node weight · w · K` as a Hermitian operator.
pub fn reconstruct_operator(t: &Tomogram, map: &ReconstructionMap) -> Result<ComplexMatrix, TomographyError> {
    if !map.same_grid(&t.grid) {
        return Err(TomographyError::GridMismatch);
    }
    let n = map.spin().dim();
    let nn = n * n;
    let mut x = vec![0.0; nn];
    for (node, &w) in t.grid.weights().iter().enumerate() {
        for i in 0..n {
            let coeff = w * t.value(i, node);
            for (acc, k) in x.iter_mut().zip(map.row(i, node)) {
                *acc += coeff * k;
            }
        }
    }
    Ok(from_hermitian_coordinates(n, &x))
}

/// Reconstructs and certifies the state a tomogram was sampled from.
pub fn reconstruct(t: &Tomogram, map: &ReconstructionMap) -> Result<DensityMatrix, TomographyError> {
    let m = reconstruct_operator(t, map)?;
    Ok(validate(&m, map.spin())?)
}

/// Dual symbol `w_A^d(m, node) = Tr(A K(m, node))`, laid out like [`Tomogram`].
#[derive(Debug, Clone, PartialEq)]
pub struct DualSymbol {
    grid: Arc<QuadratureGrid>,
    values: Vec<f64>,
}

impl DualSymbol {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, m_index: usize, node: usize) -> f64 {
        self.values[node * self.grid.spin().dim() + m_index]
    }
}

pub fn dual_symbol(a: &ComplexMatrix, map: &ReconstructionMap) -> Result<DualSymbol, TomographyError> {
    let n = map.spin().dim();
    if a.dim() != n {
        return Err(TomographyError::DimensionMismatch { expected: n, found: a.dim() });
    }
    let defect = a.hermiticity_defect();
    if defect > 1e-12 * a.max_abs().max(1.0) {
        return Err(TomographyError::NotHermitian { defect });
    }
    let coords = hermitian_coordinates(a);
    let nn = n * n;
    let values = map
        .coefficients
        .chunks(nn)
        .map(|k| k.iter().zip(&coords).map(|(x, y)| x * y).sum())
        .collect();
    Ok(DualSymbol { grid: Arc::clone(&map.grid), values })
}

/// `Σ_m Σ_node weight · w_rho · w_A^d`, which equals `Tr(rho A)`.
pub fn pair_average(t: &Tomogram, d: &DualSymbol) -> Result<f64, TomographyError> {
    if !(Arc::ptr_eq(&t.grid, &d.grid) || *t.grid == *d.grid) {
        return Err(TomographyError::GridMismatch);
    }
    let n = t.spin().dim();
    Ok(t.values
        .chunks(n)
        .zip(d.values.chunks(n))
        .zip(t.grid.weights())
        .map(|((wr, wd), &w)| w * wr.iter().zip(wd).map(|(a, b)| a * b).sum::<f64>())
        .sum())
}
