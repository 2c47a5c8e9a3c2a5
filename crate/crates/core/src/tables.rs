//! Joint outcome tables of 2×2 coincidence experiments.
//!
//! A [`JointTable`] holds `p11, p12, p21, p22`, where the first index is the
//! outcome on the first side and the second index the outcome on the second
//! side. An [`Experiment`] groups the four tables of the settings
//! `AB, AB', A'B, A'B'`.

use std::fmt;

use crate::error::{Error, Result};

/// Row sums of the published data are off by up to 1e-3, so the default
/// accepts them.
pub const DEFAULT_NORMALIZE_TOL: f64 = 0.01;

/// Tolerance used when a table is built from values that are already exact.
pub const TABLE_TOL: f64 = 1e-9;

/// One of the four setting pairs. `P` marks the primed setting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SettingPair {
    AB,
    ABp,
    ApB,
    ApBp,
}

impl SettingPair {
    pub const ALL: [SettingPair; 4] = [Self::AB, Self::ABp, Self::ApB, Self::ApBp];

    pub fn from_settings(first: usize, second: usize) -> Self {
        match (first, second) {
            (0, 0) => Self::AB,
            (0, 1) => Self::ABp,
            (1, 0) => Self::ApB,
            (1, 1) => Self::ApBp,
            _ => panic!("setting index out of range: ({first}, {second})"),
        }
    }

    /// 0 for the unprimed setting on the first side, 1 for the primed one.
    pub fn first_setting(self) -> usize {
        matches!(self, Self::ApB | Self::ApBp) as usize
    }

    pub fn second_setting(self) -> usize {
        matches!(self, Self::ABp | Self::ApBp) as usize
    }

    pub fn index(self) -> usize {
        2 * self.first_setting() + self.second_setting()
    }
}

/// Names of the two settings on each side, e.g. `A, A'` and `B, B'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SideLabels {
    pub first: [String; 2],
    pub second: [String; 2],
}

impl Default for SideLabels {
    fn default() -> Self {
        Self {
            first: ["A".into(), "A'".into()],
            second: ["B".into(), "B'".into()],
        }
    }
}

impl SideLabels {
    pub fn first_setting(&self, pair: SettingPair) -> &str {
        &self.first[pair.first_setting()]
    }

    pub fn second_setting(&self, pair: SettingPair) -> &str {
        &self.second[pair.second_setting()]
    }

    /// `"AB'"` style key of a setting pair.
    pub fn pair_label(&self, pair: SettingPair) -> String {
        format!("{}{}", self.first_setting(pair), self.second_setting(pair))
    }

    /// `"A1,B'2"` style key of one cell; `i` and `j` are 0-based outcomes.
    pub fn outcome_label(&self, pair: SettingPair, i: usize, j: usize) -> String {
        format!(
            "{}{},{}{}",
            self.first_setting(pair),
            i + 1,
            self.second_setting(pair),
            j + 1
        )
    }

    pub fn swapped(&self) -> Self {
        Self {
            first: self.second.clone(),
            second: self.first.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JointTable([f64; 4]);

impl JointTable {
    /// Validates without rescaling; the sum must be within [`TABLE_TOL`] of 1.
    pub fn new(p: [f64; 4]) -> Result<Self> {
        Self::validate(&p, TABLE_TOL)?;
        Ok(Self(p))
    }

    fn validate(p: &[f64; 4], tol: f64) -> Result<f64> {
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("joint table"));
        }
        if let Some((index, &value)) = p.iter().enumerate().find(|(_, x)| **x < 0.0) {
            return Err(Error::NegativeEntry { index, value });
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > tol {
            return Err(Error::NotNormalizable { sum, tol });
        }
        Ok(sum)
    }

    /// Born probabilities of an orthonormal basis; valid by construction.
    pub(crate) fn from_born(p: [f64; 4]) -> Self {
        Self(p)
    }

    pub fn uniform() -> Self {
        Self([0.25; 4])
    }

    /// Outer product of a first-side and a second-side distribution.
    pub fn product(first: [f64; 2], second: [f64; 2]) -> Result<Self> {
        Self::new([
            first[0] * second[0],
            first[0] * second[1],
            first[1] * second[0],
            first[1] * second[1],
        ])
    }

    pub fn probabilities(&self) -> [f64; 4] {
        self.0
    }

    /// Probability of first-side outcome `i` and second-side outcome `j`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[2 * i + j]
    }

    /// Same table seen with the sides exchanged.
    pub fn transpose(&self) -> Self {
        let [a, b, c, d] = self.0;
        Self([a, c, b, d])
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Checks the entries and rescales them to sum to 1. Sums already within a
/// few ulps of 1 are left alone, so normalizing twice changes nothing.
pub fn normalize(raw: [f64; 4], tol: f64) -> Result<JointTable> {
    let sum = JointTable::validate(&raw, tol)?;
    if (sum - 1.0).abs() <= 4.0 * f64::EPSILON {
        return Ok(JointTable(raw));
    }
    Ok(JointTable(raw.map(|x| x / sum)))
}

/// E = p11 − p12 − p21 + p22 for ±1 outcomes with equal outcomes scoring +1.
pub fn expectation_value(t: &JointTable) -> f64 {
    let [p11, p12, p21, p22] = t.0;
    p11 - p12 - p21 + p22
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Marginals {
    pub first: [f64; 2],
    pub second: [f64; 2],
}

pub fn marginals(t: &JointTable) -> Marginals {
    let [p11, p12, p21, p22] = t.0;
    Marginals {
        first: [p11 + p12, p21 + p22],
        second: [p11 + p21, p12 + p22],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

#[derive(Clone, Debug)]
pub struct Experiment {
    labels: SideLabels,
    tables: [JointTable; 4],
}

impl Experiment {
    /// Tables are indexed by [`SettingPair::index`].
    pub fn new(labels: SideLabels, tables: [JointTable; 4]) -> Self {
        Self { labels, tables }
    }

    pub fn from_fn(labels: SideLabels, f: impl FnMut(SettingPair) -> JointTable) -> Self {
        Self::new(labels, SettingPair::ALL.map(f))
    }

    pub fn labels(&self) -> &SideLabels {
        &self.labels
    }

    pub fn table(&self, pair: SettingPair) -> &JointTable {
        &self.tables[pair.index()]
    }

    pub fn tables(&self) -> impl Iterator<Item = (SettingPair, &JointTable)> {
        SettingPair::ALL.into_iter().map(move |p| (p, self.table(p)))
    }

    pub fn expectation(&self, pair: SettingPair) -> f64 {
        expectation_value(self.table(pair))
    }

    /// Exchanges the roles of the two sides: every table is transposed and
    /// the mixed settings trade places.
    pub fn swap_sides(&self) -> Self {
        Self::from_fn(self.labels.swapped(), |pair| {
            let old = SettingPair::from_settings(pair.second_setting(), pair.first_setting());
            self.table(old).transpose()
        })
    }
}

/// Marginal of one setting on one side, computed from the two tables that
/// contain that setting.
#[derive(Clone, Debug, PartialEq)]
pub struct MarginalComparison {
    pub side: Side,
    pub setting: usize,
    pub via: [SettingPair; 2],
    pub marginals: [[f64; 2]; 2],
    pub difference: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MarginalLawReport {
    pub comparisons: Vec<MarginalComparison>,
    pub holds: bool,
}

impl MarginalLawReport {
    pub fn max_difference(&self) -> f64 {
        self.comparisons
            .iter()
            .map(|c| c.difference)
            .fold(0.0, f64::max)
    }
}

pub fn marginal_law_report(e: &Experiment, tol: f64) -> MarginalLawReport {
    let mut comparisons = Vec::with_capacity(4);
    for side in [Side::First, Side::Second] {
        for setting in 0..2 {
            let via = match side {
                Side::First => [0, 1].map(|other| SettingPair::from_settings(setting, other)),
                Side::Second => [0, 1].map(|other| SettingPair::from_settings(other, setting)),
            };
            let m = via.map(|pair| {
                let m = marginals(e.table(pair));
                match side {
                    Side::First => m.first,
                    Side::Second => m.second,
                }
            });
            let difference = (m[0][0] - m[1][0]).abs().max((m[0][1] - m[1][1]).abs());
            comparisons.push(MarginalComparison {
                side,
                setting,
                via,
                marginals: m,
                difference,
                holds: difference <= tol,
            });
        }
    }
    let holds = comparisons.iter().all(|c| c.holds);
    MarginalLawReport { comparisons, holds }
}

/// `p11 = a·b, p12 = a·b', p21 = a'·b, p22 = a'·b'`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Factors {
    pub a: f64,
    pub a_prime: f64,
    pub b: f64,
    pub b_prime: f64,
}

impl Factors {
    pub fn reconstruct(&self) -> [f64; 4] {
        [
            self.a * self.b,
            self.a * self.b_prime,
            self.a_prime * self.b,
            self.a_prime * self.b_prime,
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FactorizationVerdict {
    pub factorizable: bool,
    pub factors: Option<Factors>,
    /// |p11·p22 − p12·p21|
    pub residual: f64,
}

/// A nonnegative 2×2 table factorizes iff its determinant vanishes. The
/// returned factors are the marginals, so `a + a' = 1` and `b + b' = 1`.
pub fn factorization_test(t: &JointTable, tol: f64) -> FactorizationVerdict {
    let [p11, p12, p21, p22] = t.0;
    let residual = (p11 * p22 - p12 * p21).abs();
    let factorizable = residual <= tol;
    let factors = factorizable.then(|| {
        let m = marginals(t);
        Factors {
            a: m.first[0],
            a_prime: m.first[1],
            b: m.second[0],
            b_prime: m.second[1],
        }
    });
    FactorizationVerdict {
        factorizable,
        factors,
        residual,
    }
}

impl fmt::Display for SettingPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&SideLabels::default().pair_label(*self))
    }
}
