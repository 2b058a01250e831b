//! Non-Hermitian dynamics of a dissipative two-level system.
//!
//! A two-level system with Hermitian part `H₊ = -ħΩσₓ` is coupled to an
//! effective environment through an anti-Hermitian part `H₋ = -iΓ̂`, where the
//! decay rate operator `Γ̂` is a real combination of the Pauli operators and
//! the identity. The crate provides
//!
//! - exact 2×2 complex operator algebra ([`op2`]),
//! - the parametrized Hamiltonian family and its named special cases
//!   ([`model`]),
//! - fixed-step RK4 propagation of the density matrix in raw (linear),
//!   normalized (nonlinear) and state-vector form ([`propagator`]),
//! - closed-form solutions used as oracles for every scenario ([`analytic`]),
//! - spin averages, purity, determinant and the associated conservation laws
//!   ([`observables`]).
//!
//! Units: `ħ = 1`, energies in `ħΩ`, times in `1/Ω`.
//!
//! The crate is `no_std` (with `alloc`); all IO, file formats and the CLI
//! live in the companion `nhtls-cli` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analytic;
pub mod error;
mod math;
pub mod model;
pub mod observables;
pub mod op2;
pub mod propagator;
pub mod state;

pub use error::Error;
pub use model::{HamiltonianSpec, RootSign, Scenario};
pub use observables::{ObservableRecord, SpinAverages};
pub use op2::{pauli, split_hamiltonian, Operator2};
pub use propagator::{propagate, EvolutionForm, IntegratorConfig, StateTrajectory};
pub use state::{DensityState, MixedEnsemble};

/// Trace floor below which normalization aborts instead of amplifying noise.
pub const EPS_TR: f64 = 1e-12;

/// Maximum tolerated Hermiticity deviation `‖ρ - ρ†‖_max` before projection.
pub const TOL_HERM: f64 = 1e-10;

/// Floor for the `β² + γ²` denominator of the general closed-form solution.
pub const EPS_DEN: f64 = 1e-12;

/// Width of the `Υ = 0` constraint surface used to classify purification
/// branches. `Υ` multiplies the dominant `e^{2Γt}` term, so classification is
/// sharp well above machine noise.
pub const EPS_UPS: f64 = 1e-6;

/// Raw-trace ceiling for growing modes in linear propagation; beyond this the
/// run aborts with [`Error::Overflow`] (switch to the normalized form).
pub const RAW_TRACE_CEILING: f64 = 1e12;
