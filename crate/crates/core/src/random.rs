//! Random states, tables and experiments for Monte Carlo checks.

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::hilbert::StateVector;
use crate::linalg::{CVector, Complex};
use crate::tables::{Experiment, JointTable, SideLabels};

/// Haar-random unit vector (normalized complex Gaussian).
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R) -> CVector {
    loop {
        let v = CVector::new(std::array::from_fn(|_| {
            Complex::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
        }))
        .expect("gaussian samples are finite");
        if let Ok(u) = v.normalized() {
            return u;
        }
    }
}

pub fn state<R: Rng + ?Sized>(rng: &mut R) -> StateVector {
    StateVector::exact(unit_vector(rng)).expect("normalized")
}

/// Uniform point of the probability simplex (flat Dirichlet).
pub fn simplex<R: Rng + ?Sized, const N: usize>(rng: &mut R) -> [f64; N] {
    let draws: [f64; N] = std::array::from_fn(|_| Exp1.sample(rng));
    let sum: f64 = draws.iter().sum();
    draws.map(|x| x / sum)
}

pub fn table<R: Rng + ?Sized>(rng: &mut R) -> JointTable {
    crate::tables::normalize(simplex(rng), 1e-9).expect("simplex point")
}

pub fn binary<R: Rng + ?Sized>(rng: &mut R) -> [f64; 2] {
    let p: f64 = rng.random();
    [p, 1.0 - p]
}

/// Every table is the outer product of a first-side marginal that depends
/// only on the first-side setting and a second-side marginal that depends
/// only on the second-side setting.
pub fn local_experiment<R: Rng + ?Sized>(rng: &mut R) -> Experiment {
    let first = [binary(rng), binary(rng)];
    let second = [binary(rng), binary(rng)];
    Experiment::from_fn(SideLabels::default(), |pair| {
        JointTable::product(first[pair.first_setting()], second[pair.second_setting()])
            .expect("product of distributions")
    })
}

pub fn phase<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)
}
