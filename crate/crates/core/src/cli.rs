//! Command line front end. `main.rs` only parses arguments and prints.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::Result;
use crate::format::ExperimentFile;
use crate::hilbert::Isomorphism;
use crate::models;
use crate::report::{analyze, model_block, AnalysisOptions, Report};
use crate::tables::DEFAULT_NORMALIZE_TOL;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Machine,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum IsoChoice {
    #[default]
    Canonical,
    Swapped,
}

impl IsoChoice {
    pub fn isomorphism(self) -> Isomorphism {
        match self {
            Self::Canonical => Isomorphism::CANONICAL,
            Self::Swapped => Isomorphism::SWAPPED,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Canonical => "canonical",
            Self::Swapped => "swapped",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "bellzoo", version, about = "CHSH, marginal-law and entanglement analysis of 2x2 coincidence experiments")]
pub struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,

    /// How far a table's sum may be from 1 before it is rejected
    #[arg(long, global = true, default_value_t = DEFAULT_NORMALIZE_TOL)]
    pub normalize_tol: f64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyze an experiment file
    Analyze { file: PathBuf },
    /// Build a built-in model and verify it against its data
    Model {
        /// animal-acts, vessels, vessels-alt or vessels-separated
        name: String,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long, value_enum, default_value_t = IsoChoice::Canonical)]
        iso: IsoChoice,
        /// Probability tolerance; defaults to the model's own
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Write a built-in dataset as an experiment file
    Export { name: String, file: PathBuf },
}

pub fn cmd_analyze(path: &Path, normalize_tol: f64) -> Result<Report> {
    let file = ExperimentFile::read(path, normalize_tol)?;
    Ok(analyze(file.sides, &file.experiment, &AnalysisOptions::default()))
}

pub fn cmd_model(name: &str, alpha: f64, beta: f64, iso: IsoChoice, tol: Option<f64>) -> Result<Report> {
    let model = models::model(name, alpha, beta)?;
    let fixture = models::fixture(name)?;
    let mut report = analyze(
        fixture.sides.map(String::from),
        &fixture.experiment,
        &AnalysisOptions::default(),
    );
    report.model = model.map(|m| {
        model_block(&m, &fixture.experiment, &iso.isomorphism(), iso.name(), (alpha, beta), tol)
    });
    Ok(report)
}

pub fn cmd_export(name: &str, path: &Path) -> Result<()> {
    let fixture = models::fixture(name)?;
    ExperimentFile::from_fixture(&fixture).write(path)
}

/// Runs a parsed command line and returns what should go to stdout.
pub fn run(cli: &Cli) -> Result<String> {
    let machine = cli.format == OutputFormat::Machine;
    match &cli.command {
        Command::Analyze { file } => Ok(cmd_analyze(file, cli.normalize_tol)?.render(machine)),
        Command::Model { name, alpha, beta, iso, tol } => {
            Ok(cmd_model(name, *alpha, *beta, *iso, *tol)?.render(machine))
        }
        Command::Export { name, file } => {
            cmd_export(name, file)?;
            Ok(if machine {
                String::new()
            } else {
                format!("wrote {name} to {}\n", file.display())
            })
        }
    }
}
