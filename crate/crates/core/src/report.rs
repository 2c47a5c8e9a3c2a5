//! Analysis reports in text and machine-readable (JSON) form.
//!
//! Machine output is deterministic: fields appear in a fixed order and every
//! real number is printed with exactly six decimals.

use std::fmt::Write as _;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use serde_json::value::RawValue;

use crate::bell::{chsh, classify, ChshResult, ZooClass, BOUNDS, DEFAULT_CLASSIFY_TOL};
use crate::error::Error;
use crate::hilbert::{schmidt_coefficients, Isomorphism, ModelVerdict};
use crate::linalg::PRINTED_TOL;
use crate::models::{check_reference_operators, NamedModel, OperatorCheck};
use crate::tables::{
    expectation_value, factorization_test, marginal_law_report, Experiment,
    FactorizationVerdict, JointTable, MarginalLawReport, SettingPair, Side, SideLabels,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalysisOptions {
    /// Threshold for the CHSH bounds and the marginal law.
    pub tol: f64,
    /// Determinant threshold of the factorizability test.
    pub factor_tol: f64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_CLASSIFY_TOL,
            factor_tol: 1e-6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Classification {
    Class(ZooClass),
    /// Above the Tsirelson bound with the marginal law intact.
    Ambiguous { max_abs: f64 },
}

#[derive(Clone, Debug)]
pub struct ModelBlock {
    pub name: String,
    pub isomorphism: String,
    pub alpha: f64,
    pub beta: f64,
    pub tolerance: f64,
    pub verdict: ModelVerdict,
    pub operator_checks: Vec<OperatorCheck>,
    pub state_schmidt: (f64, f64),
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub sides: [String; 2],
    pub labels: SideLabels,
    pub tables: [JointTable; 4],
    pub expectations: [f64; 4],
    pub chsh: ChshResult,
    pub marginal_law: MarginalLawReport,
    pub factorization: [FactorizationVerdict; 4],
    pub classification: Classification,
    pub model: Option<ModelBlock>,
}

pub fn analyze(sides: [String; 2], e: &Experiment, opts: &AnalysisOptions) -> Report {
    let classification = match classify(e, opts.tol) {
        Ok(c) => Classification::Class(c),
        Err(Error::AmbiguousClass { max_abs }) => Classification::Ambiguous { max_abs },
        Err(other) => unreachable!("classify only reports ambiguity: {other}"),
    };
    Report {
        sides,
        labels: e.labels().clone(),
        tables: SettingPair::ALL.map(|p| *e.table(p)),
        expectations: SettingPair::ALL.map(|p| expectation_value(e.table(p))),
        chsh: chsh(e),
        marginal_law: marginal_law_report(e, opts.tol),
        factorization: SettingPair::ALL.map(|p| factorization_test(e.table(p), opts.factor_tol)),
        classification,
        model: None,
    }
}

/// Verifies `model` against `data`. `tol` overrides the model's own
/// tolerance for the Born probabilities; printed operators are always held
/// to the printed-matrix tolerance.
pub fn model_block(
    model: &NamedModel,
    data: &Experiment,
    iso: &Isomorphism,
    iso_name: &str,
    (alpha, beta): (f64, f64),
    tol: Option<f64>,
) -> ModelBlock {
    let tolerance = tol.unwrap_or(model.tolerance);
    let verdict = crate::hilbert::verify_model(&model.state, &model.measurements, data, iso, tolerance);
    let operator_checks = check_reference_operators(model, data, PRINTED_TOL);
    let pass = verdict.pass && operator_checks.iter().all(|c| c.pass);
    ModelBlock {
        name: model.name.to_string(),
        isomorphism: iso_name.to_string(),
        alpha,
        beta,
        tolerance,
        state_schmidt: schmidt_coefficients(model.state.vector(), iso),
        verdict,
        operator_checks,
        pass,
    }
}

fn fixed(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

struct Fixed(f64);

impl Serialize for Fixed {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawValue::from_string(fixed(self.0))
            .expect("decimal literal is valid JSON")
            .serialize(s)
    }
}

struct Ordered<V>(Vec<(String, V)>);

impl<V: Serialize> Serialize for Ordered<V> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct MFactors {
    a: Fixed,
    a_prime: Fixed,
    b: Fixed,
    b_prime: Fixed,
}

#[derive(Serialize)]
struct MFactorization {
    factorizable: bool,
    residual: Fixed,
    factors: Option<MFactors>,
}

#[derive(Serialize)]
struct MTable {
    pair: String,
    probabilities: Ordered<Fixed>,
    expectation: Fixed,
    factorization: MFactorization,
}

#[derive(Serialize)]
struct MChsh {
    paper_combination: Fixed,
    max_abs_over_variants: Fixed,
    variant_signs: [i8; 4],
    classical_bound: Fixed,
    tsirelson_bound: Fixed,
}

#[derive(Serialize)]
struct MComparison {
    side: &'static str,
    setting: String,
    via: [String; 2],
    marginals: [[Fixed; 2]; 2],
    difference: Fixed,
    holds: bool,
}

#[derive(Serialize)]
struct MMarginalLaw {
    holds: bool,
    max_difference: Fixed,
    comparisons: Vec<MComparison>,
}

#[derive(Serialize)]
struct MClassification {
    class: Option<&'static str>,
    ambiguous: bool,
}

#[derive(Serialize)]
struct MOperatorCheck {
    pair: String,
    hermiticity_residual: Fixed,
    model_expectation: Fixed,
    data_expectation: Fixed,
    residual: Fixed,
    pass: bool,
}

#[derive(Serialize)]
struct MMeasurement {
    pair: String,
    probability_residual: Fixed,
    hermiticity_residual: Fixed,
    entangled: bool,
}

#[derive(Serialize)]
struct MModel {
    name: String,
    isomorphism: String,
    alpha: Fixed,
    beta: Fixed,
    tolerance: String,
    state_entangled: bool,
    state_schmidt: [Fixed; 2],
    measurements: Vec<MMeasurement>,
    bell_expectation: Fixed,
    operator_checks: Vec<MOperatorCheck>,
    pass: bool,
}

#[derive(Serialize)]
struct MReport {
    format: &'static str,
    sides: [String; 2],
    settings: Ordered<[String; 2]>,
    tables: Vec<MTable>,
    chsh: MChsh,
    marginal_law: MMarginalLaw,
    classification: MClassification,
    model: Option<MModel>,
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::First => "first",
        Side::Second => "second",
    }
}

fn setting_name(labels: &SideLabels, side: Side, setting: usize) -> String {
    match side {
        Side::First => labels.first[setting].clone(),
        Side::Second => labels.second[setting].clone(),
    }
}

impl Report {
    pub fn render(&self, machine: bool) -> String {
        if machine {
            self.render_machine()
        } else {
            self.render_text()
        }
    }

    pub fn render_machine(&self) -> String {
        let l = &self.labels;
        let tables = SettingPair::ALL
            .iter()
            .enumerate()
            .map(|(k, &pair)| {
                let f = &self.factorization[k];
                MTable {
                    pair: l.pair_label(pair),
                    probabilities: Ordered(
                        (0..4)
                            .map(|c| (l.outcome_label(pair, c / 2, c % 2), Fixed(self.tables[k].probabilities()[c])))
                            .collect(),
                    ),
                    expectation: Fixed(self.expectations[k]),
                    factorization: MFactorization {
                        factorizable: f.factorizable,
                        residual: Fixed(f.residual),
                        factors: f.factors.map(|x| MFactors {
                            a: Fixed(x.a),
                            a_prime: Fixed(x.a_prime),
                            b: Fixed(x.b),
                            b_prime: Fixed(x.b_prime),
                        }),
                    },
                }
            })
            .collect();
        let marginal_law = MMarginalLaw {
            holds: self.marginal_law.holds,
            max_difference: Fixed(self.marginal_law.max_difference()),
            comparisons: self
                .marginal_law
                .comparisons
                .iter()
                .map(|c| MComparison {
                    side: side_name(c.side),
                    setting: setting_name(l, c.side, c.setting),
                    via: c.via.map(|p| l.pair_label(p)),
                    marginals: c.marginals.map(|m| m.map(Fixed)),
                    difference: Fixed(c.difference),
                    holds: c.holds,
                })
                .collect(),
        };
        let classification = match self.classification {
            Classification::Class(c) => MClassification {
                class: Some(c.name()),
                ambiguous: false,
            },
            Classification::Ambiguous { .. } => MClassification {
                class: None,
                ambiguous: true,
            },
        };
        let model = self.model.as_ref().map(|m| MModel {
            name: m.name.clone(),
            isomorphism: m.isomorphism.clone(),
            alpha: Fixed(m.alpha),
            beta: Fixed(m.beta),
            tolerance: format!("{:e}", m.tolerance),
            state_entangled: m.verdict.state_entangled,
            state_schmidt: [Fixed(m.state_schmidt.0), Fixed(m.state_schmidt.1)],
            measurements: SettingPair::ALL
                .iter()
                .enumerate()
                .map(|(k, &p)| MMeasurement {
                    pair: l.pair_label(p),
                    probability_residual: Fixed(m.verdict.probability_residuals[k]),
                    hermiticity_residual: Fixed(m.verdict.hermiticity_residuals[k]),
                    entangled: m.verdict.measurement_entangled[k],
                })
                .collect(),
            bell_expectation: Fixed(m.verdict.bell_expectation),
            operator_checks: m
                .operator_checks
                .iter()
                .map(|c| MOperatorCheck {
                    pair: l.pair_label(c.pair),
                    hermiticity_residual: Fixed(c.hermiticity_residual),
                    model_expectation: Fixed(c.model_expectation),
                    data_expectation: Fixed(c.data_expectation),
                    residual: Fixed(c.residual),
                    pass: c.pass,
                })
                .collect(),
            pass: m.pass,
        });
        let report = MReport {
            format: "bellzoo-report/1",
            sides: self.sides.clone(),
            settings: Ordered(vec![
                ("first".into(), l.first.clone()),
                ("second".into(), l.second.clone()),
            ]),
            tables,
            chsh: MChsh {
                paper_combination: Fixed(self.chsh.paper_combination),
                max_abs_over_variants: Fixed(self.chsh.max_abs_over_variants),
                variant_signs: self.chsh.variant_signs,
                classical_bound: Fixed(BOUNDS.classical),
                tsirelson_bound: Fixed(BOUNDS.tsirelson),
            },
            marginal_law,
            classification,
            model,
        };
        let mut out = serde_json::to_string_pretty(&report).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn render_text(&self) -> String {
        let l = &self.labels;
        let mut o = String::new();
        let _ = writeln!(o, "sides: {} / {}", self.sides[0], self.sides[1]);
        let _ = writeln!(o);
        let _ = writeln!(o, "{:<6} {:>10} {:>10} {:>10} {:>10} {:>10}  factorizable", "pair", "p11", "p12", "p21", "p22", "E");
        for (k, pair) in SettingPair::ALL.into_iter().enumerate() {
            let p = self.tables[k].probabilities();
            let f = &self.factorization[k];
            let _ = writeln!(
                o,
                "{:<6} {:>10} {:>10} {:>10} {:>10} {:>10}  {} (|det| {})",
                l.pair_label(pair),
                fixed(p[0]),
                fixed(p[1]),
                fixed(p[2]),
                fixed(p[3]),
                fixed(self.expectations[k]),
                if f.factorizable { "yes" } else { "no" },
                fixed(f.residual),
            );
        }
        let _ = writeln!(o);
        let signs: Vec<String> = SettingPair::ALL
            .iter()
            .zip(self.chsh.variant_signs)
            .map(|(p, s)| format!("{}E({})", if s > 0 { "+" } else { "-" }, l.pair_label(*p)))
            .collect();
        let _ = writeln!(
            o,
            "CHSH  E({})+E({})+E({})-E({}) = {}",
            l.pair_label(SettingPair::ApBp),
            l.pair_label(SettingPair::ApB),
            l.pair_label(SettingPair::ABp),
            l.pair_label(SettingPair::AB),
            fixed(self.chsh.paper_combination)
        );
        let _ = writeln!(
            o,
            "      max over sign variants = {}  ({})",
            fixed(self.chsh.max_abs_over_variants),
            signs.join(" ")
        );
        let _ = writeln!(o, "      bounds: classical 2, Tsirelson {}, algebraic 4", fixed(BOUNDS.tsirelson));
        let _ = writeln!(o);
        let _ = writeln!(
            o,
            "marginal law: {} (max difference {})",
            if self.marginal_law.holds { "holds" } else { "violated" },
            fixed(self.marginal_law.max_difference())
        );
        for c in &self.marginal_law.comparisons {
            let _ = writeln!(
                o,
                "  {:<4} via {:<4} ({}, {})  via {:<4} ({}, {})  diff {}",
                setting_name(l, c.side, c.setting),
                l.pair_label(c.via[0]),
                fixed(c.marginals[0][0]),
                fixed(c.marginals[0][1]),
                l.pair_label(c.via[1]),
                fixed(c.marginals[1][0]),
                fixed(c.marginals[1][1]),
                fixed(c.difference),
            );
        }
        let _ = writeln!(o);
        match self.classification {
            Classification::Class(c) => {
                let _ = writeln!(o, "class: {c}");
            }
            Classification::Ambiguous { max_abs } => {
                let _ = writeln!(
                    o,
                    "class: ambiguous (CHSH {} above Tsirelson with the marginal law intact)",
                    fixed(max_abs)
                );
            }
        }
        if let Some(m) = &self.model {
            let _ = writeln!(o);
            let _ = writeln!(
                o,
                "model {} (isomorphism {}, alpha {}, beta {}, tolerance {:e}): {}",
                m.name,
                m.isomorphism,
                fixed(m.alpha),
                fixed(m.beta),
                m.tolerance,
                if m.pass { "PASS" } else { "FAIL" }
            );
            let _ = writeln!(
                o,
                "  state: {} (Schmidt {}, {})",
                if m.verdict.state_entangled { "entangled" } else { "product" },
                fixed(m.state_schmidt.0),
                fixed(m.state_schmidt.1)
            );
            for (k, pair) in SettingPair::ALL.into_iter().enumerate() {
                let _ = writeln!(
                    o,
                    "  {:<4} {:<9} max |model - data| {}",
                    l.pair_label(pair),
                    if m.verdict.measurement_entangled[k] { "entangled" } else { "product" },
                    fixed(m.verdict.probability_residuals[k]),
                );
            }
            let _ = writeln!(o, "  <p|B|p> = {}", fixed(m.verdict.bell_expectation));
            for c in &m.operator_checks {
                let _ = writeln!(
                    o,
                    "  printed E({}): <p|E|p> = {} vs data {} (residual {}, hermiticity {})",
                    l.pair_label(c.pair),
                    fixed(c.model_expectation),
                    fixed(c.data_expectation),
                    fixed(c.residual),
                    fixed(c.hermiticity_residual),
                );
            }
        }
        o
    }
}
