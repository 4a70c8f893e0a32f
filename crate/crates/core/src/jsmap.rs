//! Jordan-Schwinger correspondence between spin-`j` qudits and two-mode
//! photon-number states.
//!
//! `|j m>` ↔ `|n_a, n_b>` with `n_a = j + m`, `n_b = j - m`. Two-mode
//! operators are kept inside one total-photon sector `n_a + n_b = 2j`,
//! with basis order `n_a` descending so a qudit matrix lifts unchanged.

use serde::Serialize;
use thiserror::Error;

use crate::qstate::{ComplexMatrix, DensityMatrix};
use crate::spin::{Magnetic, Spin};
use crate::witness::{
    build_witness_diag, verify_premises, violation_bound, witness_expectation, DiagonalState, WitnessError,
    WitnessJson, WitnessPair,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JsError {
    #[error("invalid spin label j={j}, m={m}")]
    InvalidSpinLabel { j: Spin, m: Magnetic },
    #[error("dimension mismatch: sector j={j} has dimension {expected}, operator has {found}")]
    DimensionMismatch { j: Spin, expected: usize, found: usize },
    #[error("the vacuum |0,0> carries no qudit witness")]
    VacuumUndetectable,
    #[error(transparent)]
    Witness(#[from] WitnessError),
}

/// Photon numbers in modes `a` and `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FockLabel {
    pub n_a: u32,
    pub n_b: u32,
}

impl FockLabel {
    pub const fn new(n_a: u32, n_b: u32) -> Self {
        FockLabel { n_a, n_b }
    }

    pub const fn total(self) -> u32 {
        self.n_a + self.n_b
    }
}

/// `j = (n_a + n_b)/2`, `m = (n_a - n_b)/2`.
pub fn fock_to_spin(f: FockLabel) -> (Spin, Magnetic) {
    (Spin::from_twice(f.total()), Magnetic::from_twice(f.n_a as i32 - f.n_b as i32))
}

pub fn spin_to_fock(j: Spin, m: Magnetic) -> Result<FockLabel, JsError> {
    j.index_of(m).map_err(|_| JsError::InvalidSpinLabel { j, m })?;
    let j2 = j.twice() as i32;
    Ok(FockLabel { n_a: ((j2 + m.twice()) / 2) as u32, n_b: ((j2 - m.twice()) / 2) as u32 })
}

/// Mode ladder operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    CreateA,
    AnnihilateA,
    CreateB,
    AnnihilateB,
}

impl Ladder {
    /// Action on a number state: `a†|n> = √(n+1)|n+1>`, `a|n> = √n|n-1>`.
    pub fn apply(self, f: FockLabel) -> Option<(f64, FockLabel)> {
        let FockLabel { n_a, n_b } = f;
        match self {
            Ladder::CreateA => Some((f64::from(n_a + 1).sqrt(), FockLabel::new(n_a + 1, n_b))),
            Ladder::CreateB => Some((f64::from(n_b + 1).sqrt(), FockLabel::new(n_a, n_b + 1))),
            Ladder::AnnihilateA if n_a > 0 => Some((f64::from(n_a).sqrt(), FockLabel::new(n_a - 1, n_b))),
            Ladder::AnnihilateB if n_b > 0 => Some((f64::from(n_b).sqrt(), FockLabel::new(n_a, n_b - 1))),
            _ => None,
        }
    }
}

/// Operator restricted to the sector `n_a + n_b = 2j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorOperator {
    pub spin: Spin,
    pub matrix: ComplexMatrix,
}

impl SectorOperator {
    /// Sector basis, `n_a` descending.
    pub fn basis(&self) -> Vec<FockLabel> {
        sector_basis(self.spin)
    }

    /// `<f| op |f>` for a basis label of this sector.
    pub fn diagonal_element(&self, f: FockLabel) -> Result<f64, JsError> {
        let (j, m) = fock_to_spin(f);
        if j != self.spin {
            return Err(JsError::DimensionMismatch { j, expected: self.spin.dim(), found: j.dim() });
        }
        let i = j.index_of(m).map_err(|_| JsError::InvalidSpinLabel { j, m })?;
        Ok(self.matrix[(i, i)].re)
    }
}

pub fn sector_basis(spin: Spin) -> Vec<FockLabel> {
    spin.magnetic_labels()
        .map(|m| spin_to_fock(spin, m).expect("labels come from the multiplet"))
        .collect()
}

/// Matrix of a ladder-operator monomial (applied right to left) on a sector.
/// Terms leaving the sector are dropped; monomials with equal numbers of
/// creations and annihilations never produce any.
pub fn sector_monomial(spin: Spin, word: &[Ladder]) -> ComplexMatrix {
    let basis = sector_basis(spin);
    let n = basis.len();
    let mut m = ComplexMatrix::zeros(n);
    for (col, &f) in basis.iter().enumerate() {
        let mut state = Some((1.0, f));
        for &op in word.iter().rev() {
            state = state.and_then(|(amp, g)| op.apply(g).map(|(a, h)| (amp * a, h)));
        }
        if let Some((amp, out)) = state {
            if let Some(row) = basis.iter().position(|&g| g == out) {
                m[(row, col)] += num_complex::Complex64::new(amp, 0.0);
            }
        }
    }
    m
}

/// `(J₊, J₋, J_z)` as `a†b`, `a b†` and `(a†a - b†b)/2` on the sector.
pub fn sector_generators(spin: Spin) -> (SectorOperator, SectorOperator, SectorOperator) {
    use Ladder::*;
    let plus = sector_monomial(spin, &[CreateA, AnnihilateB]);
    let minus = sector_monomial(spin, &[AnnihilateA, CreateB]);
    let na = sector_monomial(spin, &[CreateA, AnnihilateA]);
    let nb = sector_monomial(spin, &[CreateB, AnnihilateB]);
    let z = (&na - &nb).scale(0.5);
    let wrap = |matrix| SectorOperator { spin, matrix };
    (wrap(plus), wrap(minus), wrap(z))
}

/// Qudit `(J₊, J₋, J_z)` from `<m+1|J₊|m> = √((j-m)(j+m+1))`, `m` descending.
pub fn spin_matrices(spin: Spin) -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let n = spin.dim();
    let j = spin.value();
    let plus = ComplexMatrix::from_real_fn(n, |row, col| {
        if row + 1 == col {
            let m = spin.magnetic_at(col).value();
            ((j - m) * (j + m + 1.0)).sqrt()
        } else {
            0.0
        }
    });
    let minus = plus.adjoint();
    let z = ComplexMatrix::diagonal(&spin.magnetic_labels().map(Magnetic::value).collect::<Vec<_>>());
    (plus, minus, z)
}

/// Relabels `|j m>` as `|j+m, j-m>`; entries are unchanged.
pub fn lift_operator(spin: Spin, qudit_op: &ComplexMatrix) -> Result<SectorOperator, JsError> {
    if qudit_op.dim() != spin.dim() {
        return Err(JsError::DimensionMismatch { j: spin, expected: spin.dim(), found: qudit_op.dim() });
    }
    Ok(SectorOperator { spin, matrix: qudit_op.clone() })
}

/// Witness for a two-mode number state and its lifted operators.
#[derive(Debug, Clone)]
pub struct TwoModeWitness {
    pub label: FockLabel,
    pub spin: Spin,
    pub m: Magnetic,
    pub pair: WitnessPair,
    pub a: SectorOperator,
    pub b: SectorOperator,
    pub witness: SectorOperator,
    /// `<n_a n_b| lift(B² - A²) |n_a n_b>`.
    pub expectation: f64,
    /// Same mean evaluated on the qudit `|j m>`.
    pub qudit_expectation: f64,
}

/// Maps `|n_a n_b>` to `|j m>`, builds that pure state's witness, lifts it
/// back to the sector and evaluates it on `|n_a n_b>`.
pub fn two_mode_witness(f: FockLabel) -> Result<TwoModeWitness, JsError> {
    if f.total() == 0 {
        return Err(JsError::VacuumUndetectable);
    }
    let (spin, m) = fock_to_spin(f);
    let n = spin.dim();
    let index = spin.index_of(m).map_err(|_| JsError::InvalidSpinLabel { j: spin, m })?;
    let pair = build_witness_diag(&DiagonalState::basis(n, index)?)?;

    let mut r = vec![0.0; n];
    r[index] = 1.0;
    let qudit_state = DensityMatrix::from_diagonal(&r).map_err(WitnessError::from)?;
    let qudit_expectation = witness_expectation(&qudit_state, &pair)?;

    let a = lift_operator(spin, &pair.a)?;
    let b = lift_operator(spin, &pair.b)?;
    let witness = lift_operator(spin, &pair.w)?;
    let expectation = witness.diagonal_element(f)?;
    Ok(TwoModeWitness { label: f, spin, m, pair, a, b, witness, expectation, qudit_expectation })
}

/// Witness JSON plus the mode and spin labels.
#[derive(Debug, Clone, Serialize)]
pub struct TwoModeWitnessJson {
    #[serde(flatten)]
    pub witness: WitnessJson,
    pub n_a: u32,
    pub n_b: u32,
    pub j: f64,
    pub m: f64,
}

impl TwoModeWitnessJson {
    pub fn new(t: &TwoModeWitness) -> Result<Self, JsError> {
        let report = verify_premises(&t.pair)?;
        let mut witness = WitnessJson::new(&t.pair, t.expectation, &report);
        witness.bound = violation_bound(t.spin.dim());
        Ok(TwoModeWitnessJson { witness, n_a: t.label.n_a, n_b: t.label.n_b, j: t.spin.value(), m: t.m.value() })
    }
}

/// Sector operator wire form.
#[derive(Debug, Clone, Serialize)]
pub struct SectorOperatorJson {
    pub j: f64,
    pub dim: usize,
    pub basis: Vec<[u32; 2]>,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl SectorOperatorJson {
    pub fn new(op: &SectorOperator) -> Self {
        SectorOperatorJson {
            j: op.spin.value(),
            dim: op.spin.dim(),
            basis: op.basis().iter().map(|f| [f.n_a, f.n_b]).collect(),
            re: op.matrix.real_parts(),
            im: op.matrix.imag_parts(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::random_unitary;
    use crate::witness::closed_form_expectation;

    #[test]
    fn label_examples() {
        assert_eq!(fock_to_spin(FockLabel::new(1, 0)), (Spin::HALF, Magnetic::from_twice(1)));
        assert_eq!(fock_to_spin(FockLabel::new(0, 0)), (Spin::ZERO, Magnetic::from_twice(0)));
        assert_eq!(fock_to_spin(FockLabel::new(2, 1)), (Spin::from_twice(3), Magnetic::from_twice(1)));
        assert_eq!(spin_to_fock(Spin::HALF, Magnetic::from_twice(1)).unwrap(), FockLabel::new(1, 0));
        assert_eq!(spin_to_fock(Spin::ZERO, Magnetic::from_twice(0)).unwrap(), FockLabel::new(0, 0));
        assert_eq!(spin_to_fock(Spin::from_twice(3), Magnetic::from_twice(1)).unwrap(), FockLabel::new(2, 1));
        assert!(matches!(
            spin_to_fock(Spin::HALF, Magnetic::from_twice(3)),
            Err(JsError::InvalidSpinLabel { .. })
        ));
        assert!(spin_to_fock(Spin::from_twice(2), Magnetic::from_twice(1)).is_err());
    }

    #[test]
    fn spin_half_raising() {
        let (plus, _, _) = sector_generators(Spin::HALF);
        let expected = ComplexMatrix::from_real_fn(2, |i, k| if (i, k) == (0, 1) { 1.0 } else { 0.0 });
        assert_eq!(plus.matrix, expected);
        assert_eq!(plus.basis(), vec![FockLabel::new(1, 0), FockLabel::new(0, 1)]);
    }

    #[test]
    fn scalar_sector_is_zero() {
        let (p, m, z) = sector_generators(Spin::ZERO);
        for op in [p, m, z] {
            assert_eq!(op.matrix, ComplexMatrix::zeros(1));
        }
    }

    #[test]
    fn generators_match_spin_matrices() {
        for j2 in 0..=8 {
            let spin = Spin::from_twice(j2);
            let (p, m, z) = sector_generators(spin);
            let (sp, sm, sz) = spin_matrices(spin);
            assert!(p.matrix.max_abs_diff(&sp) < 1e-14);
            assert!(m.matrix.max_abs_diff(&sm) < 1e-14);
            assert!(z.matrix.max_abs_diff(&sz) < 1e-15);
            assert_eq!(lift_operator(spin, &sp).unwrap().matrix, sp);
        }
    }

    #[test]
    fn lift_preserves_structure() {
        let spin = Spin::from_twice(3);
        assert_eq!(lift_operator(spin, &ComplexMatrix::identity(4)).unwrap().matrix, ComplexMatrix::identity(4));
        assert!(matches!(
            lift_operator(spin, &ComplexMatrix::identity(3)),
            Err(JsError::DimensionMismatch { .. })
        ));
        let u = random_unitary(4, 1);
        let lifted = lift_operator(spin, &u).unwrap();
        assert_eq!(lifted.matrix.adjoint(), lift_operator(spin, &u.adjoint()).unwrap().matrix);
    }

    #[test]
    fn two_mode_examples() {
        let t = two_mode_witness(FockLabel::new(1, 0)).unwrap();
        assert!((t.expectation - (0.375 - 7f64.sqrt() / 4.0)).abs() < 1e-15);
        assert!((t.expectation - t.qudit_expectation).abs() < 1e-12);

        assert!(matches!(two_mode_witness(FockLabel::new(0, 0)), Err(JsError::VacuumUndetectable)));

        let t = two_mode_witness(FockLabel::new(1, 1)).unwrap();
        let oracle = closed_form_expectation(&DiagonalState::basis(3, 1).unwrap()).unwrap();
        let pure = closed_form_expectation(&DiagonalState::basis(3, 0).unwrap()).unwrap();
        assert!((t.expectation - oracle).abs() < 1e-12);
        assert!((oracle - pure).abs() < 1e-14);
        assert!(t.expectation < violation_bound(3));
    }

    #[test]
    fn two_mode_json_fields() {
        let t = two_mode_witness(FockLabel::new(2, 1)).unwrap();
        let text = crate::format::to_json(&TwoModeWitnessJson::new(&t).unwrap());
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["n_a"], 2);
        assert_eq!(v["n_b"], 1);
        assert_eq!(v["j"].as_f64().unwrap(), 1.5);
        assert_eq!(v["m"].as_f64().unwrap(), 0.5);
        assert_eq!(v["dim"], 4);
        assert!(v["premises"]["minBminusA"].is_number());
    }
}
