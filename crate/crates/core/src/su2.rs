//! SU(2) irreducible representations in the `|j m>` basis (m descending)
//! and Euler-angle quadrature grids for the normalized group integral
//! `(1/8pi^2) ∫ dα sinβ dβ dγ`.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::qstate::ComplexMatrix;
use crate::spin::Spin;

const TWO_PI: f64 = 2.0 * PI;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Su2Error {
    #[error("Euler angles out of range: alpha={alpha}, beta={beta}, gamma={gamma}")]
    AngleOutOfRange { alpha: f64, beta: f64, gamma: f64 },
    #[error("grid too coarse for j={j}: need n_beta >= {min_beta}, n_alpha, n_gamma >= {min_periodic}; got ({n_beta}, {n_alpha}, {n_gamma})")]
    GridTooCoarse {
        j: Spin,
        min_beta: usize,
        min_periodic: usize,
        n_beta: usize,
        n_alpha: usize,
        n_gamma: usize,
    },
    #[error("malformed grid: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl EulerAngles {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self, Su2Error> {
        let periodic = |x: f64| (0.0..TWO_PI).contains(&x);
        if periodic(alpha) && (0.0..=PI).contains(&beta) && periodic(gamma) {
            Ok(EulerAngles { alpha, beta, gamma })
        } else {
            Err(Su2Error::AngleOutOfRange { alpha, beta, gamma })
        }
    }

    pub const IDENTITY: EulerAngles = EulerAngles { alpha: 0.0, beta: 0.0, gamma: 0.0 };
}

/// `ln n!` for `n = 0..=max`.
fn log_factorials(max: usize) -> Vec<f64> {
    let mut table = Vec::with_capacity(max + 1);
    let mut acc = 0.0;
    table.push(acc);
    for k in 1..=max {
        acc += (k as f64).ln();
        table.push(acc);
    }
    table
}

/// Wigner small-d matrix `d^j_{m'm}(β)`, rows `m'` and columns `m` descending.
///
/// Uses the Jacobi-polynomial form with the three-term recurrence, which
/// stays unitary to ~1e-13 up to `j = 25`; the alternating factorial sum
/// (see [`small_d_factorial_sum`]) loses about 1e-9 there.
pub fn small_d(spin: Spin, beta: f64) -> Vec<Vec<f64>> {
    let n = spin.dim();
    let j2 = spin.twice() as i64;
    let lf = log_factorials(j2 as usize + 1);
    let (c, s, x) = ((beta / 2.0).cos(), (beta / 2.0).sin(), beta.cos());

    let mut d = vec![vec![0.0; n]; n];
    for (row, out_row) in d.iter_mut().enumerate() {
        let mp2 = j2 - 2 * row as i64;
        for (col, out) in out_row.iter_mut().enumerate() {
            let m2 = j2 - 2 * col as i64;
            let jpm = (j2 + m2) / 2;
            let jmm = (j2 - m2) / 2;
            let jpmp = (j2 + mp2) / 2;
            let jmmp = (j2 - mp2) / 2;
            let delta = (mp2 - m2) / 2; // m' - m
            let k = jpm.min(jmm).min(jpmp).min(jmmp);
            let (a, lambda) = if k == jpm {
                (delta, delta)
            } else if k == jmm || k == jpmp {
                (-delta, 0)
            } else {
                (delta, delta)
            };
            let b = j2 - 2 * k - a;
            let log_binom = |top: i64, bottom: i64| lf[top as usize] - lf[bottom as usize] - lf[(top - bottom) as usize];
            let norm = (0.5 * (log_binom(j2 - k, k + a) - log_binom(k + b, b))).exp();
            let sign = if lambda.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            *out = sign * norm * s.powi(a as i32) * c.powi(b as i32) * jacobi(k as usize, a as f64, b as f64, x);
        }
    }
    d
}

/// `P_n^{(a,b)}(x)` by the standard three-term recurrence.
fn jacobi(n: usize, a: f64, b: f64, x: f64) -> f64 {
    let mut p0 = 1.0;
    if n == 0 {
        return p0;
    }
    let mut p1 = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
    for k in 2..=n {
        let k = k as f64;
        let s = 2.0 * k + a + b;
        let lhs = 2.0 * k * (k + a + b) * (s - 2.0);
        let p2 = ((s - 1.0) * (s * (s - 2.0) * x + a * a - b * b) * p1 - 2.0 * (k + a - 1.0) * (k + b - 1.0) * s * p0) / lhs;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Small-d by the explicit alternating factorial sum. Kept as an
/// independent route for cross-checking [`small_d`].
pub fn small_d_factorial_sum(spin: Spin, beta: f64) -> Vec<Vec<f64>> {
    let n = spin.dim();
    let j2 = spin.twice() as i64;
    let lf = log_factorials(j2 as usize + 1);
    let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());

    let mut d = vec![vec![0.0; n]; n];
    for (row, out_row) in d.iter_mut().enumerate() {
        let mp2 = j2 - 2 * row as i64;
        for (col, out) in out_row.iter_mut().enumerate() {
            let m2 = j2 - 2 * col as i64;
            let jpmp = ((j2 + mp2) / 2) as usize;
            let jmmp = ((j2 - mp2) / 2) as usize;
            let jpm = ((j2 + m2) / 2) as usize;
            let jmm = ((j2 - m2) / 2) as usize;
            let prefactor = 0.5 * (lf[jpmp] + lf[jmmp] + lf[jpm] + lf[jmm]);
            let delta = (mp2 - m2) / 2;
            let k_min = 0.max(-delta) as usize;
            let k_max = jpm.min(jmmp);
            let mut sum = 0.0;
            for k in k_min..=k_max {
                let denom = lf[jpm - k] + lf[k] + lf[jmmp - k] + lf[(k as i64 + delta) as usize];
                let sign = if (k as i64 + delta) % 2 == 0 { 1.0 } else { -1.0 };
                let cos_pow = (j2 - 2 * k as i64 - delta) as i32;
                let sin_pow = (2 * k as i64 + delta) as i32;
                sum += sign * (prefactor - denom).exp() * c.powi(cos_pow) * s.powi(sin_pow);
            }
            *out = sum;
        }
    }
    d
}

/// `D^j_{m'm}(α,β,γ) = e^{-i m' α} d^j_{m'm}(β) e^{-i m γ}`.
pub fn irrep_matrix(spin: Spin, angles: &EulerAngles) -> ComplexMatrix {
    let d = small_d(spin, angles.beta);
    let phase = |twice_m: i64, angle: f64| Complex64::from_polar(1.0, -(twice_m as f64) * angle / 2.0);
    let j2 = spin.twice() as i64;
    let left: Vec<Complex64> = (0..spin.dim()).map(|i| phase(j2 - 2 * i as i64, angles.alpha)).collect();
    let right: Vec<Complex64> = (0..spin.dim()).map(|i| phase(j2 - 2 * i as i64, angles.gamma)).collect();
    ComplexMatrix::from_fn(spin.dim(), |r, c| left[r] * d[r][c] * right[c])
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, deriv) = legendre_with_derivative(n, x);
            dp = deriv;
            let step = p / deriv;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, deriv) = legendre_with_derivative(n, x);
        if deriv != 0.0 {
            dp = deriv;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let deriv = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, deriv)
}

/// Euler-angle nodes with weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    spin: Spin,
    nodes: Vec<EulerAngles>,
    weights: Vec<f64>,
}

impl QuadratureGrid {
    /// Grid from explicit nodes; no exactness minima are enforced.
    pub fn from_nodes(spin: Spin, nodes: Vec<EulerAngles>, weights: Vec<f64>) -> Result<Self, Su2Error> {
        if nodes.len() != weights.len() {
            return Err(Su2Error::Malformed(format!("{} nodes but {} weights", nodes.len(), weights.len())));
        }
        if nodes.is_empty() {
            return Err(Su2Error::Malformed("no nodes".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Su2Error::Malformed(format!("non-positive weight {w}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Su2Error::Malformed(format!("weights sum to {total}, not 1")));
        }
        for a in &nodes {
            EulerAngles::new(a.alpha, a.beta, a.gamma)?;
        }
        Ok(QuadratureGrid { spin, nodes, weights })
    }

    /// Tensor-product grid without the exactness check; used to probe
    /// under-resolved reconstructions.
    pub fn product_unchecked(spin: Spin, n_beta: usize, n_alpha: usize, n_gamma: usize) -> Self {
        assert!(n_beta >= 1 && n_alpha >= 1 && n_gamma >= 1, "grid orders must be positive");
        let (xs, ws) = gauss_legendre(n_beta);
        let mut nodes = Vec::with_capacity(n_beta * n_alpha * n_gamma);
        let mut weights = Vec::with_capacity(nodes.capacity());
        let periodic_weight = 1.0 / (n_alpha * n_gamma) as f64;
        for (x, w) in xs.iter().zip(&ws) {
            let beta = x.clamp(-1.0, 1.0).acos();
            for ia in 0..n_alpha {
                let alpha = TWO_PI * ia as f64 / n_alpha as f64;
                for ig in 0..n_gamma {
                    let gamma = TWO_PI * ig as f64 / n_gamma as f64;
                    nodes.push(EulerAngles { alpha, beta, gamma });
                    weights.push(0.5 * w * periodic_weight);
                }
            }
        }
        QuadratureGrid { spin, nodes, weights }
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn nodes(&self) -> &[EulerAngles] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ weight · f(node)`.
    pub fn integrate<T, F>(&self, f: F) -> T
    where
        T: std::iter::Sum<T> + std::ops::Mul<f64, Output = T>,
        F: Fn(&EulerAngles) -> T,
    {
        self.nodes.iter().zip(&self.weights).map(|(a, &w)| f(a) * w).sum()
    }
}

/// Smallest `(n_beta, n_periodic)` that integrate products of two
/// spin-`j` representation entries exactly.
pub fn grid_minima(spin: Spin) -> (usize, usize) {
    let j2 = spin.twice() as usize;
    (j2 + 1, 2 * j2 + 1)
}

pub fn default_orders(spin: Spin) -> (usize, usize, usize) {
    let j2 = spin.twice() as usize;
    (j2 + 2, 2 * j2 + 2, 2 * j2 + 2)
}

/// Gauss-Legendre in `cos β`, uniform periodic nodes in `α` and `γ`.
pub fn quadrature_grid(spin: Spin, n_beta: usize, n_alpha: usize, n_gamma: usize) -> Result<QuadratureGrid, Su2Error> {
    let (min_beta, min_periodic) = grid_minima(spin);
    if n_beta < min_beta || n_alpha < min_periodic || n_gamma < min_periodic {
        return Err(Su2Error::GridTooCoarse { j: spin, min_beta, min_periodic, n_beta, n_alpha, n_gamma });
    }
    Ok(QuadratureGrid::product_unchecked(spin, n_beta, n_alpha, n_gamma))
}

pub fn default_grid(spin: Spin) -> QuadratureGrid {
    let (b, a, g) = default_orders(spin);
    quadrature_grid(spin, b, a, g).expect("default orders satisfy the minima")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unitarity_defect(u: &ComplexMatrix) -> f64 {
        (u * &u.adjoint()).max_abs_diff(&ComplexMatrix::identity(u.dim()))
    }

    #[test]
    fn identity_at_origin() {
        for j2 in 0..8 {
            let spin = Spin::from_twice(j2);
            let d = irrep_matrix(spin, &EulerAngles::IDENTITY);
            assert!(d.max_abs_diff(&ComplexMatrix::identity(spin.dim())) < 1e-15);
        }
    }

    #[test]
    fn spin_half_closed_form() {
        for &beta in &[0.0, 0.3, 1.2, PI / 2.0, 2.9, PI] {
            let d = irrep_matrix(Spin::HALF, &EulerAngles::new(0.0, beta, 0.0).unwrap());
            let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
            let expected = ComplexMatrix::from_real_fn(2, |i, k| [[c, -s], [s, c]][i][k]);
            assert!(d.max_abs_diff(&expected) < 1e-15);
        }
    }

    #[test]
    fn spin_one_closed_form() {
        let beta: f64 = 0.7;
        let d = small_d(Spin::from_twice(2), beta);
        let (cb, sb) = (beta.cos(), beta.sin());
        let r2 = 2f64.sqrt();
        let expected = [
            [(1.0 + cb) / 2.0, -sb / r2, (1.0 - cb) / 2.0],
            [sb / r2, cb, -sb / r2],
            [(1.0 - cb) / 2.0, sb / r2, (1.0 + cb) / 2.0],
        ];
        for i in 0..3 {
            for k in 0..3 {
                assert!((d[i][k] - expected[i][k]).abs() < 1e-15, "({i},{k})");
            }
        }
        assert!(small_d(Spin::from_twice(2), PI / 2.0)[1][1].abs() < 1e-15);
    }

    #[test]
    fn unitary_up_to_j25() {
        let angles = EulerAngles::new(1.1, 2.2, 5.3).unwrap();
        for j2 in [1, 2, 5, 10, 21, 50] {
            let u = irrep_matrix(Spin::from_twice(j2), &angles);
            assert!(unitarity_defect(&u) <= 1e-10, "j2={j2}: {}", unitarity_defect(&u));
        }
    }

    #[test]
    fn recurrence_matches_factorial_sum() {
        for j2 in 0..=20u32 {
            let spin = Spin::from_twice(j2);
            for &beta in &[0.0, 0.01, 0.9, PI / 2.0, 2.4, PI] {
                let fast = small_d(spin, beta);
                let slow = small_d_factorial_sum(spin, beta);
                for (fr, sr) in fast.iter().zip(&slow) {
                    for (f, s) in fr.iter().zip(sr) {
                        assert!((f - s).abs() < 1e-11, "j2={j2} beta={beta}: {f} vs {s}");
                    }
                }
            }
        }
    }

    #[test]
    fn homomorphism_on_z_rotations() {
        let spin = Spin::from_twice(3);
        let full = irrep_matrix(spin, &EulerAngles::new(0.4, 0.0, 1.9).unwrap());
        let a = irrep_matrix(spin, &EulerAngles::new(0.4, 0.0, 0.0).unwrap());
        let g = irrep_matrix(spin, &EulerAngles::new(0.0, 0.0, 1.9).unwrap());
        assert!(full.max_abs_diff(&(&a * &g)) < 1e-15);
    }

    #[test]
    fn gauss_legendre_is_exact() {
        for n in 1..12 {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
            for deg in 0..2 * n {
                let quad: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((quad - exact).abs() < 1e-14, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn weights_normalized() {
        for j2 in 0..7 {
            let grid = default_grid(Spin::from_twice(j2));
            assert!((grid.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert_eq!(grid.nodes().len(), grid.weights().len());
        }
    }

    #[test]
    fn coarse_grid_rejected() {
        let spin = Spin::from_twice(3);
        assert!(matches!(quadrature_grid(spin, 3, 7, 7), Err(Su2Error::GridTooCoarse { .. })));
        assert!(matches!(quadrature_grid(spin, 4, 6, 7), Err(Su2Error::GridTooCoarse { .. })));
        assert!(quadrature_grid(spin, 4, 7, 7).is_ok());
    }

    #[test]
    fn from_nodes_validation() {
        let spin = Spin::HALF;
        let node = EulerAngles::IDENTITY;
        assert!(QuadratureGrid::from_nodes(spin, vec![node], vec![1.0]).is_ok());
        assert!(QuadratureGrid::from_nodes(spin, vec![node], vec![0.9]).is_err());
        assert!(QuadratureGrid::from_nodes(spin, vec![node, node], vec![1.0]).is_err());
        let bad = EulerAngles { alpha: 7.0, beta: 0.0, gamma: 0.0 };
        assert!(QuadratureGrid::from_nodes(spin, vec![bad], vec![1.0]).is_err());
    }

    #[test]
    fn integer_spin_entries_average_to_zero() {
        for j2 in [2u32, 4] {
            let spin = Spin::from_twice(j2);
            let grid = default_grid(spin);
            let mut mean = ComplexMatrix::zeros(spin.dim());
            for (a, &w) in grid.nodes().iter().zip(grid.weights()) {
                mean = &mean + &irrep_matrix(spin, a).scale(w);
            }
            assert!(mean.max_abs() < 1e-12, "j2={j2}: {}", mean.max_abs());
        }
    }

    #[test]
    fn schur_orthogonality_on_grid() {
        for j2 in 1..=5u32 {
            let spin = Spin::from_twice(j2);
            let n = spin.dim();
            let grid = default_grid(spin);
            let mats: Vec<ComplexMatrix> = grid.nodes().iter().map(|a| irrep_matrix(spin, a)).collect();
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        for d in 0..n {
                            let integral: Complex64 = mats
                                .iter()
                                .zip(grid.weights())
                                .map(|(m, &w)| m[(a, b)] * m[(c, d)].conj() * w)
                                .sum();
                            let expected = if a == c && b == d { 1.0 / n as f64 } else { 0.0 };
                            assert!((integral - expected).norm() < 1e-12, "j2={j2} ({a}{b}{c}{d})");
                        }
                    }
                }
            }
        }
    }
}
