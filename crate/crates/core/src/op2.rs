//! Exact algebra of 2×2 complex operators on the two-level Hilbert space.
//!
//! Basis order is `(|e⟩, |g⟩)`: index 1 is the excited state, so
//! `σ_z = |e⟩⟨e| - |g⟩⟨g| = diag(1, -1)` and `ρ(0) = |e⟩⟨e| = diag(1, 0)`.

use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::math;

/// A 2×2 complex matrix; houses Hamiltonians, decay operators, density
/// matrices and the Pauli operators. All operations are exact entry algebra.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Operator2 {
    pub m11: Complex64,
    pub m12: Complex64,
    pub m21: Complex64,
    pub m22: Complex64,
}

impl Operator2 {
    pub const ZERO: Operator2 = Operator2::new(
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
    );

    pub const fn new(m11: Complex64, m12: Complex64, m21: Complex64, m22: Complex64) -> Self {
        Operator2 { m11, m12, m21, m22 }
    }

    /// Matrix with real entries.
    pub const fn from_real(m11: f64, m12: f64, m21: f64, m22: f64) -> Self {
        Operator2::new(
            Complex64::new(m11, 0.0),
            Complex64::new(m12, 0.0),
            Complex64::new(m21, 0.0),
            Complex64::new(m22, 0.0),
        )
    }

    pub const fn diagonal(m11: Complex64, m22: Complex64) -> Self {
        Operator2::new(m11, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), m22)
    }

    /// Projector `|ψ⟩⟨ψ|` of a (not necessarily normalized) state vector.
    pub fn projector(psi: &[Complex64; 2]) -> Self {
        Operator2::new(
            psi[0] * psi[0].conj(),
            psi[0] * psi[1].conj(),
            psi[1] * psi[0].conj(),
            psi[1] * psi[1].conj(),
        )
    }

    pub fn adjoint(&self) -> Self {
        Operator2::new(
            self.m11.conj(),
            self.m21.conj(),
            self.m12.conj(),
            self.m22.conj(),
        )
    }

    pub fn trace(&self) -> Complex64 {
        self.m11 + self.m22
    }

    pub fn determinant(&self) -> Complex64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    /// `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()) * 0.5
    }

    /// `(A - A†)/2`.
    pub fn antihermitian_part(&self) -> Self {
        (*self - self.adjoint()) * 0.5
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    /// `AB + BA`.
    pub fn anticommutator(&self, other: &Self) -> Self {
        *self * *other + *other * *self
    }

    /// Apply to a state vector.
    pub fn apply(&self, psi: &[Complex64; 2]) -> [Complex64; 2] {
        [
            self.m11 * psi[0] + self.m12 * psi[1],
            self.m21 * psi[0] + self.m22 * psi[1],
        ]
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        let mut m = math::cabs(self.m11);
        for z in [self.m12, self.m21, self.m22] {
            let a = math::cabs(z);
            if a > m {
                m = a;
            }
        }
        m
    }

    /// `‖A - A†‖_max`, the Hermiticity deviation.
    pub fn herm_deviation(&self) -> f64 {
        (*self - self.adjoint()).max_abs()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.herm_deviation() <= tol
    }
}

/// `max_ij |A_ij - B_ij|`.
pub fn max_abs_diff(a: &Operator2, b: &Operator2) -> f64 {
    (*a - *b).max_abs()
}

impl Add for Operator2 {
    type Output = Operator2;
    fn add(self, rhs: Operator2) -> Operator2 {
        Operator2::new(
            self.m11 + rhs.m11,
            self.m12 + rhs.m12,
            self.m21 + rhs.m21,
            self.m22 + rhs.m22,
        )
    }
}

impl Sub for Operator2 {
    type Output = Operator2;
    fn sub(self, rhs: Operator2) -> Operator2 {
        Operator2::new(
            self.m11 - rhs.m11,
            self.m12 - rhs.m12,
            self.m21 - rhs.m21,
            self.m22 - rhs.m22,
        )
    }
}

impl Neg for Operator2 {
    type Output = Operator2;
    fn neg(self) -> Operator2 {
        Operator2::new(-self.m11, -self.m12, -self.m21, -self.m22)
    }
}

impl Mul for Operator2 {
    type Output = Operator2;
    fn mul(self, rhs: Operator2) -> Operator2 {
        Operator2::new(
            self.m11 * rhs.m11 + self.m12 * rhs.m21,
            self.m11 * rhs.m12 + self.m12 * rhs.m22,
            self.m21 * rhs.m11 + self.m22 * rhs.m21,
            self.m21 * rhs.m12 + self.m22 * rhs.m22,
        )
    }
}

impl Mul<Complex64> for Operator2 {
    type Output = Operator2;
    fn mul(self, rhs: Complex64) -> Operator2 {
        Operator2::new(
            self.m11 * rhs,
            self.m12 * rhs,
            self.m21 * rhs,
            self.m22 * rhs,
        )
    }
}

impl Mul<f64> for Operator2 {
    type Output = Operator2;
    fn mul(self, rhs: f64) -> Operator2 {
        Operator2::new(
            self.m11 * rhs,
            self.m12 * rhs,
            self.m21 * rhs,
            self.m22 * rhs,
        )
    }
}

/// The Pauli basis in the `(|e⟩, |g⟩)` ordering.
pub mod pauli {
    use super::Operator2;
    use num_complex::Complex64;

    pub const I: Operator2 = Operator2::from_real(1.0, 0.0, 0.0, 1.0);
    pub const SX: Operator2 = Operator2::from_real(0.0, 1.0, 1.0, 0.0);
    pub const SY: Operator2 = Operator2::new(
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, -1.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, 0.0),
    );
    pub const SZ: Operator2 = Operator2::from_real(1.0, 0.0, 0.0, -1.0);

    /// Real combination `c_x σ_x + c_y σ_y + c_z σ_z + c_0 I`.
    pub fn combination(cx: f64, cy: f64, cz: f64, c0: f64) -> Operator2 {
        SX * cx + SY * cy + SZ * cz + I * c0
    }
}

/// Split a Hamiltonian into `H₊ = (H+H†)/2`, `H₋ = (H-H†)/2` and the decay
/// rate operator `Γ̂ = iH₋`; `H₊` and `Γ̂` are Hermitian and `H = H₊ + H₋`
/// exactly.
pub fn split_hamiltonian(h: &Operator2) -> (Operator2, Operator2, Operator2) {
    let h_plus = h.hermitian_part();
    let h_minus = h.antihermitian_part();
    let gamma = h_minus * Complex64::new(0.0, 1.0);
    (h_plus, h_minus, gamma)
}
