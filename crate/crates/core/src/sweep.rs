//! Seeded Monte Carlo sweeps.
//!
//! Trial `i` of a sweep with seed `s` always draws from the same ChaCha
//! stream, so results are identical whether the trials run on one thread or
//! on the rayon pool. Parallel execution needs the `parallel` feature;
//! without it [`Execution::Parallel`] runs sequentially.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::bell::chsh;
use crate::hilbert::born_probabilities;
use crate::linalg::{expectation, inner, Complex};
use crate::models::{synthesize_basis, vessels_data, vessels_model};
use crate::random;
use crate::tables::SettingPair;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Self::Parallel
        } else {
            Self::Sequential
        }
    }
}

pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

pub fn run<T, F>(execution: Execution, trials: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> T + Sync + Send,
{
    match execution {
        Execution::Sequential => run_sequential(trials, seed, f),
        #[cfg(feature = "parallel")]
        Execution::Parallel => run_parallel(trials, seed, f),
        #[cfg(not(feature = "parallel"))]
        Execution::Parallel => run_sequential(trials, seed, f),
    }
}

pub fn run_sequential<T, F>(trials: usize, seed: u64, f: F) -> Vec<T>
where
    F: Fn(&mut ChaCha8Rng) -> T,
{
    (0..trials).map(|i| f(&mut trial_rng(seed, i))).collect()
}

#[cfg(feature = "parallel")]
pub fn run_parallel<T, F>(trials: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> T + Sync + Send,
{
    (0..trials)
        .into_par_iter()
        .map(|i| f(&mut trial_rng(seed, i)))
        .collect()
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

/// Largest max-variant CHSH over random experiments built from
/// setting-local marginals.
pub fn local_chsh_max(execution: Execution, trials: usize, seed: u64) -> f64 {
    max_of(run(execution, trials, seed, |rng| {
        chsh(&random::local_experiment(rng)).max_abs_over_variants
    }))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseSweep {
    pub trials: usize,
    /// Largest |Born − data| over all tables and phase pairs.
    pub max_probability_residual: f64,
    /// Largest |⟨p|B|p⟩ − 4|.
    pub max_bell_deviation: f64,
}

/// Connected-vessels model at random phases `(α, β)`.
pub fn vessels_phase_sweep(execution: Execution, trials: usize, seed: u64) -> PhaseSweep {
    let data = vessels_data().experiment;
    let results = run(execution, trials, seed, |rng| {
        let m = vessels_model(random::phase(rng), random::phase(rng));
        let v = m.verify(&data, &Default::default());
        (v.max_probability_residual(), (v.bell_expectation - 4.0).abs())
    });
    PhaseSweep {
        trials,
        max_probability_residual: max_of(results.iter().map(|r| r.0)),
        max_bell_deviation: max_of(results.iter().map(|r| r.1)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SynthesisSweep {
    pub trials: usize,
    /// Largest |⟨e_j|e_k⟩ − δ_jk|.
    pub max_orthonormality_error: f64,
    /// Largest ||⟨e_k|s⟩|² − target_k|.
    pub max_target_error: f64,
}

/// Basis synthesis for random states and random target distributions.
pub fn basis_synthesis_sweep(execution: Execution, trials: usize, seed: u64) -> SynthesisSweep {
    let results = run(execution, trials, seed, |rng| {
        let s = random::state(rng);
        let target: [f64; 4] = random::simplex(rng);
        let basis = synthesize_basis(&s, &target).expect("valid targets");
        let mut ortho = 0.0f64;
        for (j, a) in basis.iter().enumerate() {
            for (k, b) in basis.iter().enumerate() {
                let delta = if j == k { Complex::ONE } else { Complex::ZERO };
                ortho = ortho.max((inner(a, b) - delta).norm());
            }
        }
        let fit = basis
            .iter()
            .zip(target)
            .map(|(e, t)| (inner(e, s.vector()).norm_sqr() - t).abs())
            .fold(0.0, f64::max);
        (ortho, fit)
    });
    SynthesisSweep {
        trials,
        max_orthonormality_error: max_of(results.iter().map(|r| r.0)),
        max_target_error: max_of(results.iter().map(|r| r.1)),
    }
}

/// Largest gap between ⟨s|E|s⟩ and Σ λ·p over random states and
/// synthesized measurements.
pub fn spectral_consistency_max(execution: Execution, trials: usize, seed: u64) -> f64 {
    max_of(run(execution, trials, seed, |rng| {
        let s = random::state(rng);
        let m = crate::models::basis_from_probabilities(
            &random::state(rng),
            &random::simplex(rng),
            SettingPair::AB,
        )
        .expect("valid targets");
        let op = crate::hilbert::operator_from_measurement(&m);
        let born = born_probabilities(&s, &m).probabilities();
        let weighted: f64 = m.outcomes().iter().zip(born).map(|(o, p)| o.value * p).sum();
        (expectation(&op, s.vector()).value - weighted).abs()
    }))
}
