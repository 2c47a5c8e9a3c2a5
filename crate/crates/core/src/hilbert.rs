//! States, labeled measurements and product-structure tests on C⁴ ≅ C² ⊗ C².
//!
//! A measurement is always kept as a labeled orthonormal basis with one
//! outcome value per vector. Operators are derived from it in spectral form,
//! never the other way round: with ±1 outcomes the spectrum is degenerate and
//! the operator does not determine the final states.

use crate::bell::{chsh, ChshResult};
use crate::error::{Error, Result};
use crate::linalg::{expectation, inner, CMatrix, CVector, Complex, DIM, EXACT_TOL};
use crate::tables::{Experiment, JointTable, SettingPair, SideLabels};

/// Outcome values used for expectation measurements: +1 when both sides give
/// the same outcome index, −1 otherwise.
pub const CORRELATION_OUTCOMES: [f64; 4] = [1.0, -1.0, -1.0, 1.0];

/// Threshold on |det| (vectors) or 2×2 minors (operators) used by model
/// verdicts when flagging entanglement.
pub const ENTANGLEMENT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateVector {
    vector: CVector,
    tol: f64,
}

impl StateVector {
    /// Accepts `v` if its norm is within `tol` of 1 and stores it rescaled to
    /// unit norm.
    pub fn new(v: CVector, tol: f64) -> Result<Self> {
        let norm = v.norm();
        if (norm - 1.0).abs() > tol {
            return Err(Error::NotUnit { norm, tol });
        }
        Ok(Self {
            vector: v.normalized()?,
            tol,
        })
    }

    pub fn exact(v: CVector) -> Result<Self> {
        Self::new(v, EXACT_TOL)
    }

    pub fn vector(&self) -> &CVector {
        &self.vector
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub state: CVector,
    pub value: f64,
    pub label: String,
}

/// Four final states, in the order `11, 12, 21, 22` of the joint table.
#[derive(Clone, Debug, PartialEq)]
pub struct Measurement {
    pair: SettingPair,
    outcomes: [Outcome; 4],
}

impl Measurement {
    pub fn new(pair: SettingPair, outcomes: [Outcome; 4]) -> Result<Self> {
        for (i, a) in outcomes.iter().enumerate() {
            if !a.value.is_finite() {
                return Err(Error::NonFinite("outcome value"));
            }
            for (j, b) in outcomes.iter().enumerate().skip(i) {
                let overlap = inner(&a.state, &b.state);
                let expected = if i == j { Complex::ONE } else { Complex::ZERO };
                if (overlap - expected).norm() > EXACT_TOL {
                    return Err(Error::NotOrthonormal(format!(
                        "⟨{}|{}⟩ = {overlap}",
                        a.label, b.label
                    )));
                }
                if i != j && a.label == b.label {
                    return Err(Error::DuplicateLabel(a.label.clone()));
                }
            }
        }
        Ok(Self { pair, outcomes })
    }

    /// Labels each state with its outcome key (`"A1,B'2"` etc.).
    pub fn labeled(
        pair: SettingPair,
        states: [CVector; 4],
        values: [f64; 4],
        labels: &SideLabels,
    ) -> Result<Self> {
        let outcomes = std::array::from_fn(|k| Outcome {
            state: states[k],
            value: values[k],
            label: labels.outcome_label(pair, k / 2, k % 2),
        });
        Self::new(pair, outcomes)
    }

    /// ±1 outcomes with the default side labels.
    pub fn correlation(pair: SettingPair, states: [CVector; 4]) -> Result<Self> {
        Self::labeled(pair, states, CORRELATION_OUTCOMES, &SideLabels::default())
    }

    pub fn pair(&self) -> SettingPair {
        self.pair
    }

    pub fn outcomes(&self) -> &[Outcome; 4] {
        &self.outcomes
    }

    pub fn states(&self) -> [CVector; 4] {
        std::array::from_fn(|k| self.outcomes[k].state)
    }
}

pub fn born_probabilities(s: &StateVector, m: &Measurement) -> JointTable {
    let p = m
        .outcomes
        .each_ref()
        .map(|o| inner(&o.state, s.vector()).norm_sqr());
    JointTable::from_born(p)
}

/// Σ λ_k |e_k⟩⟨e_k|
pub fn operator_from_measurement(m: &Measurement) -> CMatrix {
    m.outcomes.iter().fold(CMatrix::zero(), |acc, o| {
        acc + CMatrix::outer(&o.state, &o.state).scale(Complex::from(o.value))
    })
}

/// `E_{A'B'} + E_{A'B} + E_{AB'} − E_{AB}`, with `ops` in [`SettingPair::ALL`] order.
pub fn bell_operator(ops: &[CMatrix; 4]) -> CMatrix {
    let [ab, abp, apb, apbp] = *ops;
    apbp + apb + abp - ab
}

/// Assignment of the four coordinates of C⁴ to cells `(row, col)` of a 2×2
/// array, i.e. to basis vectors `|row⟩ ⊗ |col⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Isomorphism {
    /// `cells[k] = 2·row + col` for coordinate `k`.
    cells: [usize; 4],
}

impl Isomorphism {
    /// Coordinate `k` ↔ cell `(k div 2, k mod 2)`.
    pub const CANONICAL: Self = Self {
        cells: [0, 1, 2, 3],
    };

    /// Coordinates 1 and 2 trade cells `(0,1)` and `(1,0)`.
    pub const SWAPPED: Self = Self {
        cells: [0, 2, 1, 3],
    };

    pub fn new(cells: [usize; 4]) -> Result<Self> {
        let mut seen = [false; 4];
        for &c in &cells {
            if c >= 4 || seen[c] {
                return Err(Error::InvalidIsomorphism(cells));
            }
            seen[c] = true;
        }
        Ok(Self { cells })
    }

    pub fn cell(&self, k: usize) -> (usize, usize) {
        (self.cells[k] / 2, self.cells[k] % 2)
    }

    /// Inverse of [`Isomorphism::cell`].
    pub fn coordinate(&self, row: usize, col: usize) -> usize {
        let target = 2 * row + col;
        self.cells
            .iter()
            .position(|&c| c == target)
            .expect("isomorphism is bijective")
    }
}

impl Default for Isomorphism {
    fn default() -> Self {
        Self::CANONICAL
    }
}

pub type Block = [[Complex; 2]; 2];

pub fn reshape(v: &CVector, iso: &Isomorphism) -> Block {
    let mut out = [[Complex::ZERO; 2]; 2];
    for k in 0..DIM {
        let (r, c) = iso.cell(k);
        out[r][c] = v[k];
    }
    out
}

fn det2(x: &Block) -> Complex {
    x[0][0] * x[1][1] - x[0][1] * x[1][0]
}

/// |det(reshape(v))|
pub fn product_defect(v: &CVector, iso: &Isomorphism) -> f64 {
    det2(&reshape(v, iso)).norm()
}

/// Singular values of the reshaped vector, largest first.
///
/// For a 2×2 matrix `s₁² + s₂² = ‖X‖²_F` and `s₁·s₂ = |det X|`.
pub fn schmidt_coefficients(v: &CVector, iso: &Isomorphism) -> (f64, f64) {
    let x = reshape(v, iso);
    let frob: f64 = x.iter().flatten().map(|z| z.norm_sqr()).sum();
    let det = det2(&x).norm();
    let disc = (frob * frob - 4.0 * det * det).max(0.0).sqrt();
    let s1 = ((frob + disc) / 2.0).sqrt();
    // s₂ from the product avoids cancellation in (frob − disc).
    let s2 = if s1 > 0.0 { det / s1 } else { 0.0 };
    (s1, s2)
}

pub fn is_product_vector(v: &CVector, iso: &Isomorphism, tol: f64) -> bool {
    product_defect(v, iso) <= tol
}

/// `R[(i,i'),(j,j')] = M[(i,j),(i',j')]`, with `(i,j)` the cell of a row
/// coordinate and `(i',j')` the cell of a column coordinate.
pub fn realign(m: &CMatrix, iso: &Isomorphism) -> [[Complex; 4]; 4] {
    let mut r = [[Complex::ZERO; 4]; 4];
    for row in 0..DIM {
        let (i, j) = iso.cell(row);
        for col in 0..DIM {
            let (ip, jp) = iso.cell(col);
            r[2 * i + ip][2 * j + jp] = m[(row, col)];
        }
    }
    r
}

/// Largest 2×2 minor of the realigned matrix; zero exactly when `M = A ⊗ B`.
pub fn operator_product_defect(m: &CMatrix, iso: &Isomorphism) -> f64 {
    let r = realign(m, iso);
    let mut worst = 0.0f64;
    for r1 in 0..4 {
        for r2 in r1 + 1..4 {
            for c1 in 0..4 {
                for c2 in c1 + 1..4 {
                    let minor = r[r1][c1] * r[r2][c2] - r[r1][c2] * r[r2][c1];
                    worst = worst.max(minor.norm());
                }
            }
        }
    }
    worst
}

pub fn is_product_operator(m: &CMatrix, iso: &Isomorphism, tol: f64) -> bool {
    operator_product_defect(m, iso) <= tol
}

pub fn is_entangled_measurement(m: &Measurement, iso: &Isomorphism, tol: f64) -> bool {
    m.outcomes
        .iter()
        .any(|o| !is_product_vector(&o.state, iso, tol))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelVerdict {
    /// Born tables predicted by the model, in [`SettingPair::ALL`] order.
    pub predicted: [JointTable; 4],
    /// Largest entrywise |model − data| per setting pair.
    pub probability_residuals: [f64; 4],
    pub measurement_entangled: [bool; 4],
    pub state_entangled: bool,
    pub hermiticity_residuals: [f64; 4],
    /// ⟨s|B|s⟩ for the Bell operator built from the model's measurements.
    pub bell_expectation: f64,
    /// CHSH of the predicted tables.
    pub predicted_chsh: ChshResult,
    pub pass: bool,
}

impl ModelVerdict {
    pub fn max_probability_residual(&self) -> f64 {
        self.probability_residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Checks a state and four measurements (in [`SettingPair::ALL`] order)
/// against data. Passes iff every Born probability is within `tol` of the
/// corresponding data entry.
pub fn verify_model(
    s: &StateVector,
    ms: &[Measurement; 4],
    data: &Experiment,
    iso: &Isomorphism,
    tol: f64,
) -> ModelVerdict {
    debug_assert!(ms
        .iter()
        .zip(SettingPair::ALL)
        .all(|(m, p)| m.pair() == p));

    let predicted = ms.each_ref().map(|m| born_probabilities(s, m));
    let probability_residuals =
        std::array::from_fn(|k| predicted[k].max_abs_diff(data.table(SettingPair::ALL[k])));
    let ops = ms.each_ref().map(operator_from_measurement);
    let hermiticity_residuals = ops.map(|o| o.hermiticity_residual());
    let bell_expectation = expectation(&bell_operator(&ops), s.vector()).value;
    let predicted_chsh = chsh(&Experiment::new(data.labels().clone(), predicted));
    let pass = probability_residuals.iter().all(|&r| r <= tol);

    ModelVerdict {
        predicted,
        probability_residuals,
        measurement_entangled: ms
            .each_ref()
            .map(|m| is_entangled_measurement(m, iso, ENTANGLEMENT_TOL)),
        state_entangled: !is_product_vector(s.vector(), iso, ENTANGLEMENT_TOL),
        hermiticity_residuals,
        bell_expectation,
        predicted_chsh,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, polar_deg};

    fn h() -> f64 {
        0.5f64.sqrt()
    }

    fn ent(alpha: f64, beta: f64, sign: f64) -> CVector {
        CVector::new([
            Complex::ZERO,
            Complex::from_polar(h(), alpha),
            Complex::from_polar(sign * h(), beta),
            Complex::ZERO,
        ])
        .unwrap()
    }

    fn canonical() -> [CVector; 4] {
        std::array::from_fn(CVector::basis)
    }

    #[test]
    fn born_examples() {
        let p = StateVector::exact(ent(0.3, 1.2, 1.0)).unwrap();
        let ab = Measurement::correlation(SettingPair::AB, canonical()).unwrap();
        let t = born_probabilities(&p, &ab).probabilities();
        assert!(t.iter().zip([0.0, 0.5, 0.5, 0.0]).all(|(a, b)| (a - b).abs() < 1e-15));

        let abp = Measurement::correlation(
            SettingPair::ABp,
            [ent(0.3, 1.2, 1.0), ent(0.3, 1.2, -1.0), CVector::basis(0), CVector::basis(3)],
        )
        .unwrap();
        let t = born_probabilities(&p, &abp).probabilities();
        assert!(t.iter().zip([1.0, 0.0, 0.0, 0.0]).all(|(a, b)| (a - b).abs() < 1e-15));

        let e0 = StateVector::exact(CVector::basis(0)).unwrap();
        assert_eq!(born_probabilities(&e0, &ab).probabilities(), [1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn measurement_rejects_bad_bases() {
        let mut states = canonical();
        states[3] = CVector::basis(2);
        assert!(matches!(
            Measurement::correlation(SettingPair::AB, states),
            Err(Error::NotOrthonormal(_))
        ));
        let outcomes = canonical().map(|s| Outcome {
            state: s,
            value: 1.0,
            label: "x".into(),
        });
        assert!(matches!(
            Measurement::new(SettingPair::AB, outcomes),
            Err(Error::DuplicateLabel(_))
        ));
    }

    #[test]
    fn state_requires_unit_norm() {
        let v = CVector::from_real([1.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(StateVector::exact(v), Err(Error::NotUnit { .. })));
        let s = StateVector::new(CVector::from_real([0.9999, 0.0, 0.0, 0.0]).unwrap(), 1e-3).unwrap();
        assert!((s.vector()[0].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn operator_examples() {
        let ab = Measurement::correlation(SettingPair::AB, canonical()).unwrap();
        assert_eq!(
            operator_from_measurement(&ab),
            CMatrix::diag_real([1.0, -1.0, -1.0, 1.0])
        );

        // α = β: middle block collapses to [[0,1],[1,0]], corners −1 and +1
        let abp = Measurement::correlation(
            SettingPair::ABp,
            [ent(0.4, 0.4, 1.0), ent(0.4, 0.4, -1.0), CVector::basis(0), CVector::basis(3)],
        )
        .unwrap();
        let op = operator_from_measurement(&abp);
        let mut expected = CMatrix::diag_real([-1.0, 0.0, 0.0, 1.0]);
        expected = expected + CMatrix::outer(&CVector::basis(1), &CVector::basis(2));
        expected = expected + CMatrix::outer(&CVector::basis(2), &CVector::basis(1));
        assert!(op.max_abs_diff(&expected) < 1e-15);
        assert!(op.hermiticity_residual() < 1e-12);
        assert!((op * op).max_abs_diff(&CMatrix::identity()) < 1e-12);
    }

    #[test]
    fn bell_operator_of_zeros() {
        assert_eq!(bell_operator(&[CMatrix::zero(); 4]), CMatrix::zero());
    }

    #[test]
    fn isomorphism_must_be_bijective() {
        assert!(Isomorphism::new([0, 1, 1, 3]).is_err());
        assert!(Isomorphism::new([0, 1, 2, 4]).is_err());
        let iso = Isomorphism::new([3, 2, 1, 0]).unwrap();
        assert_eq!(iso.cell(0), (1, 1));
        assert_eq!(iso.coordinate(1, 1), 0);
    }

    #[test]
    fn reshape_examples() {
        let v = CVector::new([c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)]).unwrap();
        let x = reshape(&v, &Isomorphism::CANONICAL);
        assert_eq!(x, [[c(1.0, 0.0), c(2.0, 0.0)], [c(3.0, 0.0), c(4.0, 0.0)]]);
        let x = reshape(&v, &Isomorphism::SWAPPED);
        assert_eq!(x, [[c(1.0, 0.0), c(3.0, 0.0)], [c(2.0, 0.0), c(4.0, 0.0)]]);

        let p = ent(0.2, 0.9, 1.0);
        let x = reshape(&p, &Isomorphism::CANONICAL);
        assert_eq!(x[0][0], Complex::ZERO);
        assert_eq!(x[1][1], Complex::ZERO);
        assert_eq!(x[0][1], p[1]);
        assert_eq!(x[1][0], p[2]);

        for cells in [[0, 1, 2, 3], [3, 1, 0, 2], [2, 0, 3, 1]] {
            let iso = Isomorphism::new(cells).unwrap();
            let nonzero = reshape(&CVector::basis(0), &iso)
                .iter()
                .flatten()
                .filter(|z| **z != Complex::ZERO)
                .count();
            assert_eq!(nonzero, 1);
        }
    }

    #[test]
    fn schmidt_examples() {
        let iso = Isomorphism::CANONICAL;
        assert_eq!(schmidt_coefficients(&CVector::basis(0), &iso), (1.0, 0.0));
        let (s1, s2) = schmidt_coefficients(&CVector::from_real([0.0, h(), h(), 0.0]).unwrap(), &iso);
        assert!((s1 - h()).abs() < 1e-12 && (s2 - h()).abs() < 1e-12);
        let (s1, s2) = schmidt_coefficients(&CVector::from_real([0.5; 4]).unwrap(), &iso);
        assert!((s1 - 1.0).abs() < 1e-12 && s2.abs() < 1e-12);
    }

    #[test]
    fn product_vector_examples() {
        let iso = Isomorphism::CANONICAL;
        assert!(is_product_vector(&CVector::basis(1), &iso, 1e-9));
        assert!(!is_product_vector(&ent(0.5, -0.5, 1.0), &iso, 1e-9));
        let v = CVector::new([
            polar_deg(0.23, 13.93),
            polar_deg(0.62, 16.72),
            polar_deg(0.75, 9.69),
            Complex::ZERO,
        ])
        .unwrap();
        assert!((product_defect(&v, &iso) - 0.465).abs() < 1e-12);
        assert!(!is_product_vector(&v, &iso, 1e-9));
    }

    #[test]
    fn product_operator_examples() {
        let iso = Isomorphism::CANONICAL;
        let zz = CMatrix::diag_real([1.0, -1.0, -1.0, 1.0]);
        assert!(is_product_operator(&zz, &iso, 1e-12));
        assert!(is_product_operator(&CMatrix::identity(), &iso, 1e-12));

        let abp = Measurement::correlation(
            SettingPair::ABp,
            [ent(0.0, 0.0, 1.0), ent(0.0, 0.0, -1.0), CVector::basis(0), CVector::basis(3)],
        )
        .unwrap();
        assert!(!is_product_operator(&operator_from_measurement(&abp), &iso, 1e-9));
    }

    #[test]
    fn entangled_measurement_examples() {
        let iso = Isomorphism::CANONICAL;
        let ab = Measurement::correlation(SettingPair::AB, canonical()).unwrap();
        assert!(!is_entangled_measurement(&ab, &iso, 1e-9));
        let apbp = Measurement::correlation(
            SettingPair::ApBp,
            [ent(0.1, 0.2, 1.0), CVector::basis(0), CVector::basis(3), ent(0.1, 0.2, -1.0)],
        )
        .unwrap();
        assert!(is_entangled_measurement(&apbp, &iso, 1e-9));
    }
}
