//! Built-in datasets and the explicit C⁴ models that reproduce them.

use crate::bell::ZooClass;
use crate::error::{Error, Result};
use crate::hilbert::{verify_model, Isomorphism, Measurement, ModelVerdict, StateVector};
use crate::linalg::{
    c, expectation, inner, polar_deg, CMatrix, CVector, Complex, EXACT_TOL,
};
use crate::tables::{
    expectation_value, normalize, Experiment, JointTable, SettingPair, SideLabels,
    DEFAULT_NORMALIZE_TOL,
};

/// Residual allowed between the cognitive model and the survey data, which
/// is only known to three decimals.
pub const ANIMAL_ACTS_TOL: f64 = 0.03;

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    /// Names of the two subsystems.
    pub sides: [&'static str; 2],
    pub experiment: Experiment,
    pub expected_chsh: f64,
    pub expected_class: ZooClass,
}

#[derive(Clone, Debug)]
pub struct NamedModel {
    pub name: &'static str,
    pub description: &'static str,
    pub state: StateVector,
    /// In [`SettingPair::ALL`] order.
    pub measurements: [Measurement; 4],
    /// Operators known only in printed, rounded form; checked through their
    /// expectation values instead of per-outcome probabilities.
    pub reference_operators: Option<[CMatrix; 4]>,
    pub tolerance: f64,
}

impl NamedModel {
    pub fn verify(&self, data: &Experiment, iso: &Isomorphism) -> ModelVerdict {
        verify_model(&self.state, &self.measurements, data, iso, self.tolerance)
    }
}

/// Expectation of a printed operator in the model state, next to the value
/// measured in the data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OperatorCheck {
    pub pair: SettingPair,
    pub hermiticity_residual: f64,
    pub model_expectation: f64,
    pub data_expectation: f64,
    pub residual: f64,
    pub pass: bool,
}

/// Compares each reference operator's expectation with the data at `tol`.
/// Empty when the model has no reference operators.
pub fn check_reference_operators(
    model: &NamedModel,
    data: &Experiment,
    tol: f64,
) -> Vec<OperatorCheck> {
    let Some(ops) = &model.reference_operators else {
        return Vec::new();
    };
    SettingPair::ALL
        .into_iter()
        .zip(ops)
        .map(|(pair, op)| {
            let model_expectation = expectation(op, model.state.vector()).value;
            let data_expectation = expectation_value(data.table(pair));
            let residual = (model_expectation - data_expectation).abs();
            OperatorCheck {
                pair,
                hermiticity_residual: op.hermiticity_residual(),
                model_expectation,
                data_expectation,
                residual,
                pass: residual <= tol,
            }
        })
        .collect()
}

fn table(p: [f64; 4]) -> JointTable {
    normalize(p, DEFAULT_NORMALIZE_TOL).expect("built-in table is valid")
}

/// Published survey frequencies, in [`SettingPair::ALL`] order.
pub const ANIMAL_ACTS_RAW: [[f64; 4]; 4] = [
    [0.049, 0.630, 0.259, 0.062],
    [0.593, 0.025, 0.296, 0.086],
    [0.778, 0.086, 0.086, 0.049],
    [0.148, 0.086, 0.099, 0.667],
];

pub fn animal_acts_labels() -> SideLabels {
    SideLabels::default()
}

pub fn animal_acts_data() -> Fixture {
    Fixture {
        name: "animal-acts",
        description: "The Animal Acts: 81 subjects choosing exemplar pairs \
                      (A: Horse/Bear, A': Tiger/Cat, B: Growls/Whinnies, B': Snorts/Meows)",
        sides: ["Animal", "Acts"],
        experiment: Experiment::from_fn(animal_acts_labels(), |p| table(ANIMAL_ACTS_RAW[p.index()])),
        expected_chsh: 2.4197,
        expected_class: ZooClass::NonlocalNonMarginalBox1,
    }
}

const ANTI: [f64; 4] = [0.0, 0.5, 0.5, 0.0];
const SAME: [f64; 4] = [1.0, 0.0, 0.0, 0.0];

pub fn vessels_data() -> Fixture {
    Fixture {
        name: "vessels",
        description: "two vessels of water connected by a tube, 20 liters in total",
        sides: ["left vessel", "right vessel"],
        experiment: Experiment::from_fn(SideLabels::default(), |p| match p {
            SettingPair::AB => table(ANTI),
            _ => table(SAME),
        }),
        expected_chsh: 4.0,
        expected_class: ZooClass::NonlocalNonMarginalBox2,
    }
}

/// Tube removed, with the A'B correlation turned into an anti-correlation.
pub fn vessels_separated_data() -> Fixture {
    vessels_separated_data_with(SettingPair::ApB).expect("A'B is a mixed setting")
}

/// Tube removed; `flipped` (AB' or A'B) selects which perfect correlation
/// becomes an anti-correlation. Both choices give CHSH +2.
pub fn vessels_separated_data_with(flipped: SettingPair) -> Result<Fixture> {
    if !matches!(flipped, SettingPair::ABp | SettingPair::ApB) {
        return Err(Error::InvalidTargets(format!(
            "only AB' or A'B can flip, got {flipped}"
        )));
    }
    Ok(Fixture {
        name: "vessels-separated",
        description: "two vessels of water with the tube removed before measuring",
        sides: ["left vessel", "right vessel"],
        experiment: Experiment::from_fn(SideLabels::default(), |p| {
            if p == SettingPair::AB || p == flipped {
                table(ANTI)
            } else {
                table(SAME)
            }
        }),
        expected_chsh: 2.0,
        expected_class: ZooClass::KolmogorovianCompatible,
    })
}

pub fn fixture(name: &str) -> Result<Fixture> {
    match name {
        "animal-acts" => Ok(animal_acts_data()),
        "vessels" | "vessels-alt" => Ok(vessels_data()),
        "vessels-separated" => Ok(vessels_separated_data()),
        other => Err(Error::UnknownModel(other.to_string())),
    }
}

pub const FIXTURE_NAMES: [&str; 3] = ["animal-acts", "vessels", "vessels-separated"];

/// Printed amplitudes of the cognitive state. The last amplitude carries a
/// phase on a zero modulus, which is dropped.
pub fn animal_acts_state() -> StateVector {
    let v = CVector::new([
        polar_deg(0.23, 13.93),
        polar_deg(0.62, 16.72),
        polar_deg(0.75, 9.69),
        Complex::ZERO,
    ])
    .expect("finite amplitudes");
    // printed moduli give ‖v‖² = 0.9998
    StateVector::new(v, 1e-3).expect("printed state is unit to three decimals")
}

fn printed(rows: [[(f64, f64); 4]; 4]) -> CMatrix {
    CMatrix::new(rows.map(|r| r.map(|(re, im)| c(re, im)))).expect("finite entries")
}

/// The four printed ±1 operators of the cognitive model, in
/// [`SettingPair::ALL`] order, entries as published.
pub fn animal_acts_printed_operators() -> [CMatrix; 4] {
    let ab = printed([
        [(0.952, 0.0), (-0.207, -0.030), (0.224, 0.007), (0.003, -0.006)],
        [(-0.207, 0.030), (-0.930, 0.0), (0.028, -0.001), (-0.163, 0.251)],
        [(0.224, -0.007), (0.028, 0.001), (-0.916, 0.0), (-0.193, 0.266)],
        [(0.003, 0.006), (-0.163, -0.251), (-0.193, -0.266), (0.895, 0.0)],
    ]);
    let abp = printed([
        [(-0.001, 0.0), (0.587, 0.397), (0.555, 0.434), (0.035, 0.0259)],
        [(0.587, -0.397), (-0.489, 0.0), (0.497, 0.0341), (-0.106, -0.005)],
        [(0.555, -0.434), (0.497, -0.0341), (-0.503, 0.0), (0.045, -0.001)],
        [(0.035, -0.0259), (-0.106, 0.005), (0.045, 0.001), (0.992, 0.0)],
    ]);
    let apb = printed([
        [(-0.587, 0.0), (0.568, 0.353), (0.274, 0.365), (0.002, 0.004)],
        [(0.568, -0.353), (0.090, 0.0), (0.681, 0.263), (-0.110, -0.007)],
        [(0.274, -0.365), (0.681, -0.263), (-0.484, 0.0), (0.150, -0.050)],
        [(0.002, -0.004), (-0.110, 0.007), (0.150, 0.050), (0.981, 0.0)],
    ]);
    let apbp = printed([
        [(0.854, 0.0), (0.385, 0.243), (-0.035, -0.164), (-0.115, -0.146)],
        [(0.385, -0.243), (-0.700, 0.0), (0.483, 0.132), (-0.086, 0.212)],
        [(-0.035, 0.164), (0.483, -0.132), (0.542, 0.0), (0.093, 0.647)],
        [(-0.115, 0.146), (-0.086, -0.212), (0.093, -0.647), (-0.697, 0.0)],
    ]);
    [ab, abp, apb, apbp]
}

/// Cognitive model: the printed state, with per-outcome bases synthesized
/// from the data (the printed operators are degenerate and do not fix them)
/// and the printed operators attached for expectation checks.
pub fn animal_acts_model() -> NamedModel {
    let state = animal_acts_state();
    let data = animal_acts_data().experiment;
    let measurements = SettingPair::ALL.map(|pair| {
        basis_from_probabilities(&state, &data.table(pair).probabilities(), pair)
            .expect("data tables are normalized")
    });
    NamedModel {
        name: "animal-acts",
        description: "entangled cognitive state with data-synthesized bases and printed ±1 operators",
        state,
        measurements,
        reference_operators: Some(animal_acts_printed_operators()),
        tolerance: ANIMAL_ACTS_TOL,
    }
}

/// `(0, √½e^{iα}, ±√½e^{iβ}, 0)`
pub fn middle_superposition(alpha: f64, beta: f64, sign: f64) -> CVector {
    let h = 0.5f64.sqrt();
    CVector::new([
        Complex::ZERO,
        Complex::from_polar(h, alpha),
        Complex::from_polar(h, beta) * sign,
        Complex::ZERO,
    ])
    .expect("finite phases")
}

/// `(√½e^{iα}, 0, 0, ±√½e^{iβ})`
pub fn corner_superposition(alpha: f64, beta: f64, sign: f64) -> CVector {
    let h = 0.5f64.sqrt();
    CVector::new([
        Complex::from_polar(h, alpha),
        Complex::ZERO,
        Complex::ZERO,
        Complex::from_polar(h, beta) * sign,
    ])
    .expect("finite phases")
}

fn vessels_bases(plus: CVector, minus: CVector) -> [Measurement; 4] {
    let e = CVector::basis;
    let bases = [
        [e(0), e(1), e(2), e(3)],
        [plus, minus, e(0), e(3)],
        [plus, e(0), minus, e(3)],
        [plus, e(0), e(3), minus],
    ];
    std::array::from_fn(|k| {
        Measurement::correlation(SettingPair::ALL[k], bases[k]).expect("orthonormal by construction")
    })
}

/// Connected vessels: entangled state, product AB measurement, entangled
/// AB', A'B and A'B'.
pub fn vessels_model(alpha: f64, beta: f64) -> NamedModel {
    let plus = middle_superposition(alpha, beta, 1.0);
    NamedModel {
        name: "vessels",
        description: "connected vessels, transparent water: entangled state, product AB",
        state: StateVector::exact(plus).expect("unit"),
        measurements: vessels_bases(plus, middle_superposition(alpha, beta, -1.0)),
        reference_operators: None,
        tolerance: EXACT_TOL,
    }
}

/// The same construction for non-transparent water, built on
/// `(0, √½e^{iα}, −√½e^{iβ}, 0)`.
pub fn vessels_nontransparent_model(alpha: f64, beta: f64) -> NamedModel {
    let minus = middle_superposition(alpha, beta, -1.0);
    NamedModel {
        name: "vessels-nontransparent",
        description: "connected vessels, non-transparent water",
        state: StateVector::exact(minus).expect("unit"),
        measurements: vessels_bases(minus, middle_superposition(alpha, beta, 1.0)),
        reference_operators: None,
        tolerance: EXACT_TOL,
    }
}

/// Product state `|1,0,0,0⟩` with canonical AB', A'B, A'B' and the only
/// entangled measurement on AB.
pub fn vessels_alternative_model(alpha: f64, beta: f64) -> NamedModel {
    let e = CVector::basis;
    let ab = [
        e(1),
        corner_superposition(alpha, beta, 1.0),
        corner_superposition(alpha, beta, -1.0),
        e(2),
    ];
    let canonical = [e(0), e(1), e(2), e(3)];
    let measurements = std::array::from_fn(|k| {
        let pair = SettingPair::ALL[k];
        let basis = if pair == SettingPair::AB { ab } else { canonical };
        Measurement::correlation(pair, basis).expect("orthonormal by construction")
    });
    NamedModel {
        name: "vessels-alt",
        description: "connected vessels with a product state; entanglement moved into AB",
        state: StateVector::exact(e(0)).expect("unit"),
        measurements,
        reference_operators: None,
        tolerance: EXACT_TOL,
    }
}

pub fn model(name: &str, alpha: f64, beta: f64) -> Result<Option<NamedModel>> {
    match name {
        "animal-acts" => Ok(Some(animal_acts_model())),
        "vessels" => Ok(Some(vessels_model(alpha, beta))),
        "vessels-alt" => Ok(Some(vessels_alternative_model(alpha, beta))),
        "vessels-separated" => Ok(None),
        other => Err(Error::UnknownModel(other.to_string())),
    }
}

pub const MODEL_NAMES: [&str; 4] = ["animal-acts", "vessels", "vessels-alt", "vessels-separated"];

/// Orthonormal basis `{e_k}` with `⟨e_k|s⟩ = √target_k`, real and nonnegative.
///
/// Let `t = (√target_k)`. A Householder reflection takes `s` to `e^{iφ} t`
/// (φ chosen so the reflection exists), and a phase reflection along `t`
/// removes `e^{iφ}`. For the product `U` of the two, `U s = t`, and the basis
/// is `e_k = U† c_k`.
pub fn synthesize_basis(s: &StateVector, target: &[f64; 4]) -> Result<[CVector; 4]> {
    if target.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::InvalidTargets(format!(
            "entries must be finite and nonnegative: {target:?}"
        )));
    }
    let sum: f64 = target.iter().sum();
    if (sum - 1.0).abs() > EXACT_TOL {
        return Err(Error::InvalidTargets(format!("entries sum to {sum}")));
    }

    let t = CVector::from_real(target.map(f64::sqrt))?.normalized()?;
    let s = *s.vector();

    let overlap = inner(&t, &s);
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        Complex::ONE
    };
    let u = t.scale(phase);

    let w = s - u;
    let householder = if w.norm_sqr() > 1e-30 {
        CMatrix::identity() - CMatrix::outer(&w, &w).scale(c(2.0 / w.norm_sqr(), 0.0))
    } else {
        CMatrix::identity()
    };
    let unphase = CMatrix::identity() - CMatrix::outer(&t, &t).scale(Complex::ONE - phase.conj());

    let inverse = (unphase * householder).adjoint();
    Ok(std::array::from_fn(|k| {
        CVector::new(std::array::from_fn(|i| inverse[(i, k)])).expect("finite")
    }))
}

/// [`synthesize_basis`] wrapped as a ±1 measurement for `pair`.
pub fn basis_from_probabilities(
    s: &StateVector,
    target: &[f64; 4],
    pair: SettingPair,
) -> Result<Measurement> {
    Measurement::correlation(pair, synthesize_basis(s, target)?)
}
