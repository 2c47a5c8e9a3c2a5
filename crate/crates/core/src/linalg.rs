//! Dense complex linear algebra on C^4.
//!
//! Every state and operator in this crate lives in a four dimensional space,
//! so vectors and matrices are fixed-size arrays. Routines are written over
//! [`DIM`] and never assume anything else about it.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

pub use num_complex::Complex64 as Complex;

use crate::error::{Error, Result};

pub const DIM: usize = 4;

/// Tolerance for constructions that are exact up to floating point.
pub const EXACT_TOL: f64 = 1e-9;

/// Tolerance for comparisons against matrices printed to three decimals.
pub const PRINTED_TOL: f64 = 5e-2;

pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

/// `modulus * e^{i degrees}`.
pub fn polar_deg(modulus: f64, degrees: f64) -> Complex {
    Complex::from_polar(modulus, degrees.to_radians())
}

fn all_finite<'a>(it: impl IntoIterator<Item = &'a Complex>) -> bool {
    it.into_iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

#[derive(Clone, Copy, PartialEq)]
pub struct CVector([Complex; DIM]);

impl CVector {
    pub fn new(amplitudes: [Complex; DIM]) -> Result<Self> {
        if !all_finite(&amplitudes) {
            return Err(Error::NonFinite("vector"));
        }
        Ok(Self(amplitudes))
    }

    pub fn from_real(amplitudes: [f64; DIM]) -> Result<Self> {
        Self::new(amplitudes.map(|x| c(x, 0.0)))
    }

    pub fn zero() -> Self {
        Self([Complex::ZERO; DIM])
    }

    /// Canonical basis vector `e_k`.
    pub fn basis(k: usize) -> Self {
        let mut v = Self::zero();
        v.0[k] = Complex::ONE;
        v
    }

    pub fn amplitudes(&self) -> &[Complex; DIM] {
        &self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotUnit { norm: n, tol: 0.0 });
        }
        Ok(self.scale(c(1.0 / n, 0.0)))
    }

    pub fn scale(&self, k: Complex) -> Self {
        Self(self.0.map(|z| z * k))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<usize> for CVector {
    type Output = Complex;
    fn index(&self, k: usize) -> &Complex {
        &self.0[k]
    }
}

impl Add for CVector {
    type Output = CVector;
    fn add(self, rhs: CVector) -> CVector {
        Self(std::array::from_fn(|k| self.0[k] + rhs.0[k]))
    }
}

impl Sub for CVector {
    type Output = CVector;
    fn sub(self, rhs: CVector) -> CVector {
        Self(std::array::from_fn(|k| self.0[k] - rhs.0[k]))
    }
}

impl Neg for CVector {
    type Output = CVector;
    fn neg(self) -> CVector {
        Self(self.0.map(|z| -z))
    }
}

impl fmt::Debug for CVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// ⟨u|v⟩, antilinear in the first argument.
pub fn inner(u: &CVector, v: &CVector) -> Complex {
    u.0.iter().zip(&v.0).map(|(a, b)| a.conj() * b).sum()
}

/// 4×4 complex matrix, row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct CMatrix([[Complex; DIM]; DIM]);

impl CMatrix {
    pub fn new(rows: [[Complex; DIM]; DIM]) -> Result<Self> {
        if !all_finite(rows.iter().flatten()) {
            return Err(Error::NonFinite("matrix"));
        }
        Ok(Self(rows))
    }

    pub fn zero() -> Self {
        Self([[Complex::ZERO; DIM]; DIM])
    }

    pub fn identity() -> Self {
        Self::diag_real([1.0; DIM])
    }

    pub fn diag_real(d: [f64; DIM]) -> Self {
        let mut m = Self::zero();
        for (k, x) in d.into_iter().enumerate() {
            m.0[k][k] = c(x, 0.0);
        }
        m
    }

    /// |u⟩⟨v|
    pub fn outer(u: &CVector, v: &CVector) -> Self {
        Self(std::array::from_fn(|i| {
            std::array::from_fn(|j| u.0[i] * v.0[j].conj())
        }))
    }

    /// Kronecker product of two 2×2 blocks, `a ⊗ b` in the canonical ordering.
    pub fn kron(a: &[[Complex; 2]; 2], b: &[[Complex; 2]; 2]) -> Self {
        Self(std::array::from_fn(|r| {
            std::array::from_fn(|s| a[r / 2][s / 2] * b[r % 2][s % 2])
        }))
    }

    pub fn rows(&self) -> &[[Complex; DIM]; DIM] {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> Complex {
        self.0[i][j]
    }

    pub fn adjoint(&self) -> Self {
        Self(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[j][i].conj())
        }))
    }

    pub fn scale(&self, k: Complex) -> Self {
        Self(self.0.map(|row| row.map(|z| z * k)))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// max |M[i][j] − conj(M[j][i])|
    pub fn hermiticity_residual(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex;
    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.0[i][j]
    }
}

impl Add for CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: CMatrix) -> CMatrix {
        Self(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j] + rhs.0[i][j])
        }))
    }
}

impl Sub for CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: CMatrix) -> CMatrix {
        Self(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j] - rhs.0[i][j])
        }))
    }
}

impl Mul for CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: CMatrix) -> CMatrix {
        Self(std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..DIM).map(|k| self.0[i][k] * rhs.0[k][j]).sum())
        }))
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

pub fn apply(m: &CMatrix, v: &CVector) -> CVector {
    CVector(std::array::from_fn(|i| {
        (0..DIM).map(|j| m.0[i][j] * v.0[j]).sum()
    }))
}

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    m.hermiticity_residual() <= tol
}

/// ⟨v|M|v⟩ split into the real value and the leftover imaginary part,
/// which vanishes for Hermitian `M`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Expectation {
    pub value: f64,
    pub imaginary: f64,
}

pub fn expectation(m: &CMatrix, v: &CVector) -> Expectation {
    let z = inner(v, &apply(m, v));
    Expectation {
        value: z.re,
        imaginary: z.im,
    }
}
