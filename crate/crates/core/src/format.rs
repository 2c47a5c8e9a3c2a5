//! Experiment files.
//!
//! A versioned TOML document. Every probability is keyed by the outcome pair
//! it belongs to, so a file cannot silently swap `A1,B2` with `A2,B1`:
//!
//! ```toml
//! version = 1
//!
//! [sides]
//! first = "left vessel"
//! second = "right vessel"
//!
//! [settings]
//! first = ["A", "A'"]
//! second = ["B", "B'"]
//!
//! [tables."AB"]
//! "A1,B1" = "0"
//! "A1,B2" = "0.5"
//! "A2,B1" = "0.5"
//! "A2,B2" = "0"
//!
//! # ... one table per setting pair: AB, AB', A'B, A'B'
//!
//! [metadata]
//! source = "where the numbers come from"
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;
use toml::Spanned;

use crate::error::{Error, Result};
use crate::models::Fixture;
use crate::tables::{normalize, Experiment, JointTable, SettingPair, SideLabels};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Metadata {
    pub source: Option<String>,
    pub notes: Option<String>,
}

#[derive(Clone, Debug)]
pub struct ExperimentFile {
    pub sides: [String; 2],
    pub experiment: Experiment,
    pub metadata: Metadata,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    version: Spanned<u32>,
    sides: RawSides,
    settings: RawSettings,
    tables: BTreeMap<Spanned<String>, BTreeMap<Spanned<String>, Spanned<String>>>,
    #[serde(default)]
    metadata: RawMetadata,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSides {
    first: String,
    second: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSettings {
    first: Spanned<[String; 2]>,
    second: Spanned<[String; 2]>,
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMetadata {
    source: Option<String>,
    notes: Option<String>,
}

fn line_of(src: &str, offset: usize) -> usize {
    src[..offset.min(src.len())].matches('\n').count() + 1
}

fn parse_error(src: &str, span: Option<std::ops::Range<usize>>, field: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        line: span.map(|s| line_of(src, s.start)),
        field: field.to_string(),
        message: message.into(),
    }
}

/// Plain decimal: optional sign, digits, optional fraction, optional exponent.
fn parse_decimal(s: &str) -> Option<f64> {
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    let mantissa = body.split(['e', 'E']).next().unwrap_or("");
    let mut parts = mantissa.splitn(2, '.');
    let int = parts.next().unwrap_or("");
    let frac = parts.next().unwrap_or("");
    let digits = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
    if int.is_empty() && frac.is_empty() || !digits(int) || !digits(frac) {
        return None;
    }
    s.parse::<f64>().ok().filter(|x| x.is_finite())
}

fn quote(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

impl ExperimentFile {
    pub fn from_fixture(f: &Fixture) -> Self {
        Self {
            sides: f.sides.map(str::to_string),
            experiment: f.experiment.clone(),
            metadata: Metadata {
                source: Some(f.description.to_string()),
                notes: Some(format!("built-in fixture `{}`", f.name)),
            },
        }
    }

    /// Parses a document and normalizes every table with `normalize_tol`.
    pub fn parse(src: &str, normalize_tol: f64) -> Result<Self> {
        let raw: RawFile = toml::from_str(src).map_err(|e| {
            let field = e
                .message()
                .split('`')
                .nth(1)
                .unwrap_or("document")
                .to_string();
            parse_error(src, e.span(), &field, e.message().trim())
        })?;

        if *raw.version.get_ref() != FORMAT_VERSION {
            return Err(parse_error(
                src,
                Some(raw.version.span()),
                "version",
                format!("unsupported version {}, expected {FORMAT_VERSION}", raw.version.get_ref()),
            ));
        }

        let labels = SideLabels {
            first: raw.settings.first.get_ref().clone(),
            second: raw.settings.second.get_ref().clone(),
        };
        for (name, spanned) in [("settings.first", &raw.settings.first), ("settings.second", &raw.settings.second)] {
            let [a, b] = spanned.get_ref();
            if a.is_empty() || b.is_empty() || a == b {
                return Err(parse_error(
                    src,
                    Some(spanned.span()),
                    name,
                    "setting names must be non-empty and distinct",
                ));
            }
        }

        let mut tables = raw.tables;
        let mut parsed: Vec<JointTable> = Vec::with_capacity(4);
        for pair in SettingPair::ALL {
            let key = labels.pair_label(pair);
            let field = format!("tables.{key}");
            let cells = tables
                .remove(&Spanned::new(0..0, key.clone()))
                .ok_or_else(|| parse_error(src, None, &field, "missing table"))?;
            let mut cells = cells;
            let mut raw_probs = [0.0; 4];
            let mut first_line = None;
            for (k, p) in raw_probs.iter_mut().enumerate() {
                let cell = labels.outcome_label(pair, k / 2, k % 2);
                let cell_field = format!("{field}.{cell}");
                let value = cells
                    .remove(&Spanned::new(0..0, cell.clone()))
                    .ok_or_else(|| parse_error(src, None, &cell_field, "missing probability"))?;
                first_line.get_or_insert(value.span());
                *p = parse_decimal(value.get_ref()).ok_or_else(|| {
                    parse_error(
                        src,
                        Some(value.span()),
                        &cell_field,
                        format!("{:?} is not a decimal number", value.get_ref()),
                    )
                })?;
            }
            if let Some((extra, _)) = cells.into_iter().next() {
                return Err(parse_error(
                    src,
                    Some(extra.span()),
                    &format!("{field}.{}", extra.get_ref()),
                    format!("unexpected outcome label; expected keys like {:?}", labels.outcome_label(pair, 0, 0)),
                ));
            }
            let table = normalize(raw_probs, normalize_tol)
                .map_err(|e| parse_error(src, first_line, &field, e.to_string()))?;
            parsed.push(table);
        }
        if let Some((extra, _)) = tables.into_iter().next() {
            return Err(parse_error(
                src,
                Some(extra.span()),
                &format!("tables.{}", extra.get_ref()),
                "unexpected table; setting pairs are formed from the `settings` names",
            ));
        }

        let tables: [JointTable; 4] = parsed.try_into().expect("four setting pairs");
        Ok(Self {
            sides: [raw.sides.first, raw.sides.second],
            experiment: Experiment::new(labels, tables),
            metadata: Metadata {
                source: raw.metadata.source,
                notes: raw.metadata.notes,
            },
        })
    }

    pub fn read(path: impl AsRef<Path>, normalize_tol: f64) -> Result<Self> {
        let path = path.as_ref();
        let src = std::fs::read_to_string(path).map_err(|source| io_error(path, source))?;
        Self::parse(&src, normalize_tol)
    }

    /// Probabilities are written with the shortest decimal that parses back
    /// to the same `f64`.
    pub fn to_toml(&self) -> String {
        let labels = self.experiment.labels();
        let mut out = String::new();
        let _ = writeln!(out, "version = {FORMAT_VERSION}\n");
        let _ = writeln!(out, "[sides]");
        let _ = writeln!(out, "first = {}", quote(&self.sides[0]));
        let _ = writeln!(out, "second = {}\n", quote(&self.sides[1]));
        let _ = writeln!(out, "[settings]");
        for (name, s) in [("first", &labels.first), ("second", &labels.second)] {
            let _ = writeln!(out, "{name} = [{}, {}]", quote(&s[0]), quote(&s[1]));
        }
        for (pair, table) in self.experiment.tables() {
            let _ = writeln!(out, "\n[tables.{}]", quote(&labels.pair_label(pair)));
            for k in 0..4 {
                let _ = writeln!(
                    out,
                    "{} = \"{}\"",
                    quote(&labels.outcome_label(pair, k / 2, k % 2)),
                    table.probabilities()[k]
                );
            }
        }
        if self.metadata != Metadata::default() {
            let _ = writeln!(out, "\n[metadata]");
            if let Some(s) = &self.metadata.source {
                let _ = writeln!(out, "source = {}", quote(s));
            }
            if let Some(n) = &self.metadata.notes {
                let _ = writeln!(out, "notes = {}", quote(n));
            }
        }
        out
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_toml()).map_err(|source| io_error(path, source))
    }
}

fn io_error(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}
