//! Classical statistical model and the explicit quantumness witness
//! `B² - A²` built from a state's spectrum.
//!
//! For a diagonal state `diag(r)` on `N` levels, with `s = Σ (r_i - 1/N)²`,
//! `a = 3N / (4(N-1))` and `b = 1 / (4(N-1))`:
//!
//! ```text
//! v_i  = (1 - a (r_i - 1/N))^{1/2}
//! A_ik = v_i v_k / s
//! B    = A + b M,      M_ik = N δ_ik - 1
//! ```
//!
//! Classically `<B²> >= <A²>` whenever `B_i >= A_i >= 0`; quantum
//! mechanically the witness mean on its own state stays below
//! `-N / (16 (N-1))`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::par;
use crate::qstate::{diagonalize, eigh, ComplexMatrix, DensityMatrix, MatrixJson, StateError};
use crate::spin::Spin;
use crate::tomography::{tomogram_eval, TomographyError};

/// Gate on `s` below which the witness is not constructed.
pub const EPS_MIXED: f64 = 1e-8;
/// Excluded ball around the maximally mixed qutrit in the simplex scan.
pub const EPS_SCAN: f64 = 2.5e-3;
pub const PREMISE_TOL: f64 = 1e-10;
pub const SIMPLEX_TOL: f64 = 1e-12;
/// Allowed gap between the closed-form and matrix-trace evaluations.
pub const CROSS_CHECK_TOL: f64 = 1e-10;
pub const MAX_SCAN_SAMPLES: usize = 1000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WitnessError {
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("not a probability vector: {0}")]
    NotOnSimplex(String),
    #[error("non-finite observable outcome at index {0}")]
    NonFinite(usize),
    #[error("premise B_i >= A_i >= 0 violated at index {index}: A={a}, B={b}")]
    PremiseViolated { index: usize, a: f64, b: f64 },
    #[error("witness is not defined for this state: purity gap s = {s:e} <= {EPS_MIXED:e}")]
    WitnessUndefined { s: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("scan step must satisfy 0 < step <= 0.1, got {0}")]
    InvalidStep(f64),
    #[error("need at least two levels, got {0}")]
    TooFewLevels(usize),
    #[error("internal numerical failure: {0}")]
    Internal(String),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Tomography(#[from] TomographyError),
}

fn check_simplex(p: &[f64]) -> Result<(), WitnessError> {
    if p.is_empty() {
        return Err(WitnessError::NotOnSimplex("empty".into()));
    }
    if let Some(i) = p.iter().position(|x| !x.is_finite() || *x < 0.0) {
        return Err(WitnessError::NotOnSimplex(format!("entry {i} is {}", p[i])));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > SIMPLEX_TOL {
        return Err(WitnessError::NotOnSimplex(format!("entries sum to {total}")));
    }
    Ok(())
}

/// Point on the probability simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalState(Vec<f64>);

impl ClassicalState {
    pub fn new(p: Vec<f64>) -> Result<Self, WitnessError> {
        check_simplex(&p)?;
        Ok(ClassicalState(p))
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.0
    }
}

/// Outcomes `A_1 .. A_N` of a classical observable.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalObservable(Vec<f64>);

impl ClassicalObservable {
    pub fn new(outcomes: Vec<f64>) -> Result<Self, WitnessError> {
        if let Some(i) = outcomes.iter().position(|x| !x.is_finite()) {
            return Err(WitnessError::NonFinite(i));
        }
        Ok(ClassicalObservable(outcomes))
    }

    pub fn outcomes(&self) -> &[f64] {
        &self.0
    }
}

pub fn classical_mean(p: &ClassicalState, a: &ClassicalObservable) -> Result<f64, WitnessError> {
    if p.0.len() != a.0.len() {
        return Err(WitnessError::LengthMismatch { expected: p.0.len(), found: a.0.len() });
    }
    Ok(p.0.iter().zip(&a.0).map(|(p, a)| p * a).sum())
}

/// `<B²> - <A²>` evaluated as `Tr[P Q]` with `P` the `N×2` matrix whose
/// columns both equal `p` and `Q` the `2×N` matrix with rows `B²` and `-A²`.
pub fn classical_witness_value(
    p: &ClassicalState,
    a: &ClassicalObservable,
    b: &ClassicalObservable,
) -> Result<f64, WitnessError> {
    let n = p.0.len();
    for obs in [a, b] {
        if obs.0.len() != n {
            return Err(WitnessError::LengthMismatch { expected: n, found: obs.0.len() });
        }
    }
    for (index, (&ai, &bi)) in a.0.iter().zip(&b.0).enumerate() {
        if !(bi >= ai && ai >= 0.0) {
            return Err(WitnessError::PremiseViolated { index, a: ai, b: bi });
        }
    }

    let q = [
        b.0.iter().map(|x| x * x).collect::<Vec<_>>(),
        a.0.iter().map(|x| -x * x).collect::<Vec<_>>(),
    ];
    // Tr[P Q] = Σ_i Σ_c P[i][c] Q[c][i]
    let mut trace = 0.0;
    for (i, &pi) in p.0.iter().enumerate() {
        for row in &q {
            trace += pi * row[i];
        }
    }

    let scalar: f64 = p.0.iter().zip(&a.0).zip(&b.0).map(|((p, a), b)| p * (b * b - a * a)).sum();
    let scale = p.0.iter().zip(&b.0).map(|(p, b)| p * b * b).sum::<f64>().max(1.0);
    if (trace - scalar).abs() > 1e-12 * scale {
        return Err(WitnessError::Internal(format!("matrix form {trace} disagrees with scalar form {scalar}")));
    }
    Ok(trace)
}

/// Spectrum `r` of a state in its eigenbasis, with purity gap `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalState {
    r: Vec<f64>,
    s: f64,
}

impl DiagonalState {
    pub fn new(r: Vec<f64>) -> Result<Self, WitnessError> {
        check_simplex(&r)?;
        if r.len() < 2 {
            return Err(WitnessError::TooFewLevels(r.len()));
        }
        let n = r.len() as f64;
        let s = r.iter().map(|x| (x - 1.0 / n).powi(2)).sum();
        Ok(DiagonalState { r, s })
    }

    /// Basis state `e_k` on `n` levels.
    pub fn basis(n: usize, k: usize) -> Result<Self, WitnessError> {
        let mut r = vec![0.0; n];
        r[k] = 1.0;
        Self::new(r)
    }

    /// Eigenvalues of a state; round-off negatives are clipped and the
    /// vector renormalized.
    fn from_spectrum(eigenvalues: &[f64]) -> Result<Self, WitnessError> {
        let clipped: Vec<f64> = eigenvalues.iter().map(|x| x.max(0.0)).collect();
        let total: f64 = clipped.iter().sum();
        Self::new(clipped.iter().map(|x| x / total).collect())
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    /// `s = Tr ρ_d² - 1/N`.
    pub fn purity_gap(&self) -> f64 {
        self.s
    }

    pub fn dim(&self) -> usize {
        self.r.len()
    }
}

/// `a = 3N / (4(N-1))`.
pub fn coefficient_a(n: usize) -> f64 {
    3.0 * n as f64 / (4.0 * (n as f64 - 1.0))
}

/// `b = 1 / (4(N-1))`.
pub fn coefficient_b(n: usize) -> f64 {
    1.0 / (4.0 * (n as f64 - 1.0))
}

/// `-N / (16 (N-1))`.
pub fn violation_bound(n: usize) -> f64 {
    -(n as f64) / (16.0 * (n as f64 - 1.0))
}

/// `M = N I - J`.
pub fn mixing_matrix(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_real_fn(n, |i, k| if i == k { n as f64 - 1.0 } else { -1.0 })
}

fn radicands(r: &DiagonalState) -> Vec<f64> {
    let n = r.dim() as f64;
    let a = coefficient_a(r.dim());
    r.r.iter().map(|x| 1.0 - a * (x - 1.0 / n)).collect()
}

/// Closed-form `Tr(ρ_d (B_d² - A_d²))` for the witness built on `ρ_d` itself.
pub fn closed_form_expectation(r: &DiagonalState) -> Result<f64, WitnessError> {
    let s = r.s;
    if s <= EPS_MIXED {
        return Err(WitnessError::WitnessUndefined { s });
    }
    let n = r.dim();
    let nf = n as f64;
    let (a, b) = (coefficient_a(n), coefficient_b(n));
    let v: Vec<f64> = radicands(r).iter().map(|x| x.sqrt()).collect();
    let weighted: f64 = r.r.iter().zip(&v).map(|(rk, vk)| rk * vk).sum();
    let total: f64 = v.iter().sum();
    let double_sum = weighted * total;
    Ok(b / s * (2.0 * nf * (1.0 - a * s) + b * nf * (nf - 1.0) * s - 2.0 * double_sum))
}

/// Witness operators with their construction constants.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessPair {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    /// `B² - A²`, formed as `A D + D A + D²` with `D = B - A`.
    pub w: ComplexMatrix,
    pub a_const: f64,
    pub b_const: f64,
    /// `u` in `A = u A_d u†`; identity for the diagonal construction.
    pub rotation: ComplexMatrix,
    /// Spectrum the pair was built from, if built by this module.
    pub source: Option<DiagonalState>,
}

impl WitnessPair {
    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// Pair from arbitrary Hermitian `A`, `B` (no premise certification).
    pub fn from_operators(a: ComplexMatrix, b: ComplexMatrix) -> Result<Self, WitnessError> {
        if a.dim() != b.dim() {
            return Err(WitnessError::DimensionMismatch { expected: a.dim(), found: b.dim() });
        }
        let n = a.dim();
        let (a_const, b_const) = if n >= 2 { (coefficient_a(n), coefficient_b(n)) } else { (f64::NAN, f64::NAN) };
        let w = square_difference(&a, &b);
        Ok(WitnessPair { a, b, w, a_const, b_const, rotation: ComplexMatrix::identity(n), source: None })
    }

    /// `u ρ_d u†` for the spectrum the pair was built on.
    pub fn source_state(&self) -> Option<ComplexMatrix> {
        self.source
            .as_ref()
            .map(|r| ComplexMatrix::diagonal(r.r()).conjugate_by(&self.rotation))
    }
}

fn square_difference(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let d = b - a;
    let ad = a * &d;
    let da = &d * a;
    let dd = &d * &d;
    (&(&ad + &da) + &dd).hermitian_part()
}

/// Builds and certifies the witness for a diagonal state.
pub fn build_witness_diag(r: &DiagonalState) -> Result<WitnessPair, WitnessError> {
    let s = r.s;
    if s <= EPS_MIXED {
        return Err(WitnessError::WitnessUndefined { s });
    }
    let n = r.dim();
    let (a_const, b_const) = (coefficient_a(n), coefficient_b(n));
    let v: Vec<f64> = radicands(r).iter().map(|x| x.sqrt()).collect();
    let a = ComplexMatrix::from_real_fn(n, |i, k| v[i] * v[k] / s);
    let d = mixing_matrix(n).scale(b_const);
    let b = &a + &d;
    // B² - A² = b(AM + MA) + b² M², with M² = N M
    let am = &a * &d;
    let w = (&(&am + &am.adjoint()) + &mixing_matrix(n).scale(b_const * b_const * n as f64)).hermitian_part();
    let pair = WitnessPair {
        a,
        b,
        w,
        a_const,
        b_const,
        rotation: ComplexMatrix::identity(n),
        source: Some(r.clone()),
    };
    certify(&pair)?;
    Ok(pair)
}

/// Witness for an arbitrary state: the diagonal construction on its
/// spectrum, rotated into its eigenbasis.
pub fn build_witness(rho: &DensityMatrix) -> Result<WitnessPair, WitnessError> {
    let spectrum = diagonalize(rho)?;
    let r = DiagonalState::from_spectrum(&spectrum.eigenvalues)?;
    if r.s <= EPS_MIXED {
        return Err(WitnessError::WitnessUndefined { s: r.s });
    }
    let diag = build_witness_diag(&r)?;
    let u = spectrum.rotation;
    let pair = WitnessPair {
        a: diag.a.conjugate_by(&u).hermitian_part(),
        b: diag.b.conjugate_by(&u).hermitian_part(),
        w: diag.w.conjugate_by(&u).hermitian_part(),
        a_const: diag.a_const,
        b_const: diag.b_const,
        rotation: u,
        source: Some(r),
    };
    certify(&pair)?;
    Ok(pair)
}

fn certify(pair: &WitnessPair) -> Result<(), WitnessError> {
    let report = verify_premises(pair)?;
    if !report.passed {
        return Err(WitnessError::Internal(format!("built witness fails its premises: {report:?}")));
    }
    let n = pair.dim();
    let expected = mixing_matrix(n).scale(pair.b_const).conjugate_by(&pair.rotation);
    let gap = (&pair.b - &pair.a).max_abs_diff(&expected);
    if gap > 1e-10 * pair.a.max_abs().max(1.0) {
        return Err(WitnessError::Internal(format!("B - A departs from b u M u† by {gap:e}")));
    }
    let spectrum = eigh(&pair.a)?;
    let top = spectrum.eigenvalues[0].abs();
    if spectrum.eigenvalues.get(1).is_some_and(|&e| e.abs() > 1e-8 * top) {
        return Err(WitnessError::Internal("A is not rank one".into()));
    }
    Ok(())
}

/// Smallest eigenvalues of `A`, `B`, `B - A`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PremiseReport {
    #[serde(rename = "minA")]
    pub min_a: f64,
    #[serde(rename = "minB")]
    pub min_b: f64,
    #[serde(rename = "minBminusA")]
    pub min_b_minus_a: f64,
    #[serde(skip)]
    pub passed: bool,
    #[serde(skip)]
    pub failures: Vec<PremiseFailure>,
}

/// A negative eigenvalue of one of the premise operators.
#[derive(Debug, Clone, PartialEq)]
pub struct PremiseFailure {
    pub operator: &'static str,
    /// Position in the descending spectrum.
    pub eigen_index: usize,
    pub eigenvalue: f64,
}

/// Checks `A ⪰ 0`, `B ⪰ 0` and `B - A ⪰ 0`. The tolerance is
/// `PREMISE_TOL` scaled by the operator's largest entry when that exceeds one.
pub fn verify_premises(pair: &WitnessPair) -> Result<PremiseReport, WitnessError> {
    let diff = &pair.b - &pair.a;
    let mut failures = Vec::new();
    let mut mins = [0.0; 3];
    for (slot, (name, op)) in [("A", &pair.a), ("B", &pair.b), ("B-A", &diff)].into_iter().enumerate() {
        let spectrum = eigh(op)?;
        let tol = PREMISE_TOL * op.max_abs().max(1.0);
        for (eigen_index, &e) in spectrum.eigenvalues.iter().enumerate() {
            if e < -tol {
                failures.push(PremiseFailure { operator: name, eigen_index, eigenvalue: e });
            }
        }
        mins[slot] = spectrum.eigenvalues.last().copied().unwrap_or(0.0);
    }
    Ok(PremiseReport {
        min_a: mins[0],
        min_b: mins[1],
        min_b_minus_a: mins[2],
        passed: failures.is_empty(),
        failures,
    })
}

/// `Tr(ρ (B² - A²))`. When `ρ` is the state the pair was built on, the
/// closed form is evaluated too and any disagreement is an internal error.
pub fn witness_expectation(rho: &DensityMatrix, pair: &WitnessPair) -> Result<f64, WitnessError> {
    if rho.dim() != pair.dim() {
        return Err(WitnessError::DimensionMismatch { expected: pair.dim(), found: rho.dim() });
    }
    let value = rho.expectation(&pair.w).re;
    if let (Some(source), Some(r)) = (pair.source_state(), pair.source.as_ref()) {
        if source.max_abs_diff(rho.matrix()) <= 1e-12 {
            let closed = closed_form_expectation(r)?;
            let tol = CROSS_CHECK_TOL * pair.w.max_abs().max(1.0);
            if (closed - value).abs() > tol {
                return Err(WitnessError::Internal(format!(
                    "closed form {closed} and trace {value} disagree by {:e}",
                    (closed - value).abs()
                )));
            }
        }
    }
    Ok(value)
}

/// `Σ_m w(m, u_X) X_m` with `X = u_X† diag(X_m) u_X`.
pub fn tomographic_mean(rho: &DensityMatrix, op: &ComplexMatrix) -> Result<f64, WitnessError> {
    let (probs, spectrum) = eigen_tomogram(rho, op)?;
    Ok(probs.iter().zip(&spectrum).map(|(w, x)| w * x).sum())
}

/// Tomogram of `ρ` at the unitary diagonalizing `op`, and `op`'s spectrum.
fn eigen_tomogram(rho: &DensityMatrix, op: &ComplexMatrix) -> Result<(Vec<f64>, Vec<f64>), WitnessError> {
    if op.dim() != rho.dim() {
        return Err(WitnessError::DimensionMismatch { expected: rho.dim(), found: op.dim() });
    }
    let d = eigh(op)?;
    let u = d.rotation.adjoint();
    let spin: Spin = rho.spin();
    let probs = spin
        .magnetic_labels()
        .map(|m| tomogram_eval(rho, m, &u))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((probs, d.eigenvalues))
}

/// `Σ_m w(m, u_B) B_m² - Σ_m w(m, u_A) A_m²`.
pub fn witness_expectation_tomographic(rho: &DensityMatrix, pair: &WitnessPair) -> Result<f64, WitnessError> {
    let (wb, bs) = eigen_tomogram(rho, &pair.b)?;
    let (wa, as_) = eigen_tomogram(rho, &pair.a)?;
    let plus: f64 = wb.iter().zip(&bs).map(|(w, x)| w * x * x).sum();
    let minus: f64 = wa.iter().zip(&as_).map(|(w, x)| w * x * x).sum();
    Ok(plus - minus)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QutritPoint {
    pub r1: f64,
    pub r2: f64,
    pub value: f64,
}

/// Witness mean on `diag(r1, r2, 1 - r1 - r2)` over a simplex lattice,
/// skipping the ball `s <= EPS_SCAN` around the maximally mixed state.
pub fn qutrit_scan(step: f64) -> Result<Vec<QutritPoint>, WitnessError> {
    if !(step > 0.0 && step <= 0.1) {
        return Err(WitnessError::InvalidStep(step));
    }
    let ratio = 1.0 / step;
    let count = if (ratio - ratio.round()).abs() < 1e-9 { ratio.round() } else { ratio.floor() } as usize;
    let mut lattice = Vec::new();
    for i in 0..=count {
        for k in 0..=count - i {
            lattice.push((i as f64 * step, k as f64 * step));
        }
    }
    let evaluated = par::map_collect(&lattice, |&(r1, r2)| -> Result<Option<QutritPoint>, WitnessError> {
        let r3 = (1.0 - r1 - r2).max(0.0);
        let total = r1 + r2 + r3;
        let r = DiagonalState::new(vec![r1 / total, r2 / total, r3 / total])?;
        if r.s <= EPS_SCAN {
            return Ok(None);
        }
        Ok(Some(QutritPoint { r1, r2, value: closed_form_expectation(&r)? }))
    });
    evaluated.into_iter().filter_map(Result::transpose).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxWitnessRow {
    pub n: usize,
    /// Witness mean at the pure basis state.
    pub pure_value: f64,
    /// Largest witness mean over random diagonal states.
    pub grid_max: f64,
    pub bound: f64,
}

/// Uniform sample on the simplex (normalized exponentials).
fn random_simplex(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = e.iter().sum();
    e.into_iter().map(|x| x / total).collect()
}

/// For each `N` in `2..=n_max`: pure-state value, random-sample maximum and
/// the bound. Each `N` draws from its own ChaCha stream, so results do not
/// depend on evaluation order.
pub fn max_witness_scan(n_max: usize, seed: u64) -> Result<Vec<MaxWitnessRow>, WitnessError> {
    if n_max < 2 {
        return Err(WitnessError::TooFewLevels(n_max));
    }
    let dims: Vec<usize> = (2..=n_max).collect();
    let rows = par::map_collect(&dims, |&n| -> Result<MaxWitnessRow, WitnessError> {
        let pure_value = closed_form_expectation(&DiagonalState::basis(n, 0)?)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(n as u64);
        let mut grid_max = f64::NEG_INFINITY;
        let mut drawn = 0;
        while drawn < MAX_SCAN_SAMPLES {
            let r = DiagonalState::new(random_simplex(n, &mut rng))?;
            if r.s <= EPS_MIXED {
                continue;
            }
            grid_max = grid_max.max(closed_form_expectation(&r)?);
            drawn += 1;
        }
        let row = MaxWitnessRow { n, pure_value, grid_max, bound: violation_bound(n) };
        if row.grid_max > row.pure_value + 1e-9 || row.pure_value >= row.bound {
            return Err(WitnessError::Internal(format!("scan row violates the bound ordering: {row:?}")));
        }
        Ok(row)
    });
    rows.into_iter().collect()
}

pub fn qutrit_csv(points: &[QutritPoint]) -> String {
    use crate::format::fmt17;
    let mut out = String::from("r1,r2,value\n");
    for p in points {
        out.push_str(&format!("{},{},{}\n", fmt17(p.r1), fmt17(p.r2), fmt17(p.value)));
    }
    out
}

pub fn max_witness_csv(rows: &[MaxWitnessRow]) -> String {
    use crate::format::fmt17;
    let mut out = String::from("N,pure_value,grid_max,bound\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", r.n, fmt17(r.pure_value), fmt17(r.grid_max), fmt17(r.bound)));
    }
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReIm {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl ReIm {
    fn of(m: &ComplexMatrix) -> Self {
        ReIm { re: m.real_parts(), im: m.imag_parts() }
    }

    fn to_matrix(&self, dim: usize) -> Result<ComplexMatrix, WitnessError> {
        MatrixJson { dim, re: self.re.clone(), im: self.im.clone() }
            .to_matrix()
            .map_err(WitnessError::from)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PremisesJson {
    #[serde(rename = "minA")]
    pub min_a: f64,
    #[serde(rename = "minB")]
    pub min_b: f64,
    #[serde(rename = "minBminusA")]
    pub min_b_minus_a: f64,
}

/// Witness wire form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessJson {
    pub dim: usize,
    pub a: f64,
    pub b: f64,
    #[serde(rename = "A")]
    pub a_op: ReIm,
    #[serde(rename = "B")]
    pub b_op: ReIm,
    pub expectation: f64,
    pub bound: f64,
    pub premises: PremisesJson,
}

impl WitnessJson {
    pub fn new(pair: &WitnessPair, expectation: f64, report: &PremiseReport) -> Self {
        WitnessJson {
            dim: pair.dim(),
            a: pair.a_const,
            b: pair.b_const,
            a_op: ReIm::of(&pair.a),
            b_op: ReIm::of(&pair.b),
            expectation,
            bound: violation_bound(pair.dim()),
            premises: PremisesJson {
                min_a: report.min_a,
                min_b: report.min_b,
                min_b_minus_a: report.min_b_minus_a,
            },
        }
    }

    pub fn to_pair(&self) -> Result<WitnessPair, WitnessError> {
        WitnessPair::from_operators(self.a_op.to_matrix(self.dim)?, self.b_op.to_matrix(self.dim)?)
    }
}

/// Builds a witness for `rho`, evaluates it and reports the premises.
pub fn witness_report(rho: &DensityMatrix) -> Result<(WitnessPair, WitnessJson), WitnessError> {
    let pair = build_witness(rho)?;
    let expectation = witness_expectation(rho, &pair)?;
    let report = verify_premises(&pair)?;
    let json = WitnessJson::new(&pair, expectation, &report);
    Ok((pair, json))
}
