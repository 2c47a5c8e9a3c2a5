//! CHSH evaluation and the entanglement-zoo classification of an experiment.

use std::fmt;

use crate::error::{Error, Result};
use crate::tables::{marginal_law_report, Experiment, SettingPair};

pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bounds {
    pub classical: f64,
    pub tsirelson: f64,
    pub algebraic: f64,
}

pub const BOUNDS: Bounds = Bounds {
    classical: 2.0,
    tsirelson: 2.0 * std::f64::consts::SQRT_2,
    algebraic: 4.0,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChshResult {
    /// E(A',B') + E(A',B) + E(A,B') − E(A,B)
    pub paper_combination: f64,
    pub max_abs_over_variants: f64,
    /// Signs applied to the expectations in [`SettingPair::ALL`] order for
    /// the variant reaching the maximum (already including the global sign).
    pub variant_signs: [i8; 4],
}

pub fn chsh(e: &Experiment) -> ChshResult {
    let ev = SettingPair::ALL.map(|p| e.expectation(p));
    let combine = |signs: [i8; 4]| -> f64 {
        signs
            .iter()
            .zip(&ev)
            .map(|(&s, &x)| f64::from(s) * x)
            .sum()
    };

    let paper_combination = combine([-1, 1, 1, 1]);

    let mut best = (f64::NEG_INFINITY, [0i8; 4]);
    for minus in 0..4 {
        for global in [1i8, -1] {
            let signs: [i8; 4] =
                std::array::from_fn(|k| if k == minus { -global } else { global });
            let value = combine(signs);
            if value > best.0 {
                best = (value, signs);
            }
        }
    }

    ChshResult {
        paper_combination,
        max_abs_over_variants: best.0,
        variant_signs: best.1,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ZooClass {
    KolmogorovianCompatible,
    NonlocalBox,
    NonlocalNonMarginalBox1,
    NonlocalNonMarginalBox2,
}

impl ZooClass {
    pub fn name(self) -> &'static str {
        match self {
            Self::KolmogorovianCompatible => "KolmogorovianCompatible",
            Self::NonlocalBox => "NonlocalBox",
            Self::NonlocalNonMarginalBox1 => "NonlocalNonMarginalBox1",
            Self::NonlocalNonMarginalBox2 => "NonlocalNonMarginalBox2",
        }
    }
}

impl fmt::Display for ZooClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Places an experiment in the zoo using the largest CHSH variant and the
/// marginal law, both judged at `tol`.
///
/// A value above the Tsirelson bound with intact marginals is not one of the
/// named classes and is reported as [`Error::AmbiguousClass`].
pub fn classify(e: &Experiment, tol: f64) -> Result<ZooClass> {
    let s = chsh(e).max_abs_over_variants;
    if s <= BOUNDS.classical + tol {
        return Ok(ZooClass::KolmogorovianCompatible);
    }
    let marginal_law = marginal_law_report(e, tol).holds;
    match (marginal_law, s <= BOUNDS.tsirelson + tol) {
        (true, true) => Ok(ZooClass::NonlocalBox),
        (true, false) => Err(Error::AmbiguousClass { max_abs: s }),
        (false, true) => Ok(ZooClass::NonlocalNonMarginalBox1),
        (false, false) => Ok(ZooClass::NonlocalNonMarginalBox2),
    }
}
