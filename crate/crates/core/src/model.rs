//! The parametrized non-Hermitian Hamiltonian family and its named special
//! cases.
//!
//! The Hermitian part is the tunneling Hamiltonian `H₊ = -ħΩσₓ`. The decay
//! rate operator of the general family is
//!
//! ```text
//! Γ̂ = ħΩ (-γβ σₓ + a₂ σᵧ - W σ_z + a₀ Î),      W = w_sign·√((1+γ²)(1-β²) - a₂²),
//! ```
//!
//! and the total Hamiltonian is `H = H₊ - iΓ̂`. The signs of the `σₓ` and
//! `σ_z` coefficients are fixed so that the closed forms in [`crate::analytic`]
//! solve the equation of motion exactly; with them the coherence relaxes to
//! `⟨σₓ⟩ → β` and the population difference to `(a₂ + γW)/(γ² + 1)`.
//!
//! Scenario resolution pins parameters eagerly, so invalid configurations
//! fail at build time rather than during propagation:
//!
//! - conserved-energy scenarios force `β = 0` and use `Γ̂ = ħΩ(a₂σᵧ + σ_z + γÎ)`
//!   (exponential relaxation) or `Γ̂ = ħΩ(σ_z + γÎ)` (polynomial relaxation),
//!   which lie outside the `W` family;
//! - the vanishing-population scenario sets `a₂ = γ√(1-β²)` with the negative
//!   root, `W = -√(1-β²)`;
//! - dephasing sets `a₂ = -1` and the root sign that makes the `σ_z`
//!   coefficient equal `γ`, i.e. `Γ̂ = -ħΩ[σᵧ - γ(σ_z + Î)]`;
//! - purification keeps `a₂` free with `β = 0` and the negative root, so the
//!   `σ_z` coefficient is `+√(1+γ²-a₂²)`.

use num_complex::Complex64;

use crate::error::Error;
use crate::math;
use crate::op2::{pauli, Operator2};

/// Sign of the square root in `W`, which the parametrization leaves free.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RootSign {
    #[default]
    Positive,
    Negative,
}

impl RootSign {
    pub fn as_f64(self) -> f64 {
        match self {
            RootSign::Positive => 1.0,
            RootSign::Negative => -1.0,
        }
    }

    pub fn from_f64(v: f64) -> Result<Self, Error> {
        if v == 1.0 {
            Ok(RootSign::Positive)
        } else if v == -1.0 {
            Ok(RootSign::Negative)
        } else {
            Err(Error::ConstraintViolation("w_sign must be +1 or -1"))
        }
    }
}

/// Named dynamical regimes of the model.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Scenario {
    /// Full four-parameter family, initial state `|e⟩⟨e|` for the closed form.
    #[default]
    General,
    /// Conserved average energy, exponential relaxation of `⟨σᵧ⟩`, `⟨σ_z⟩`.
    ConservedEnergyExp,
    /// Conserved average energy, polynomial relaxation.
    ConservedEnergyPoly,
    /// Population difference relaxing to zero.
    VanishingPopulation,
    /// Off-diagonal decay toward the ground state from a coherent initial
    /// superposition.
    Dephasing,
    /// Mixed initial state `diag(1-p, p)` evolving toward a pure (or, on the
    /// constraint surface, mixed) asymptotic state.
    Purification { p: f64 },
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::General => "general",
            Scenario::ConservedEnergyExp => "conserved-energy-exp",
            Scenario::ConservedEnergyPoly => "conserved-energy-poly",
            Scenario::VanishingPopulation => "vanishing-population",
            Scenario::Dephasing => "dephasing",
            Scenario::Purification { .. } => "purification",
        }
    }
}

/// Resolved coefficients of `Γ̂ = ħΩ(a₁σₓ + a₂σᵧ + a₃σ_z + a₀Î)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayCoefficients {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

/// Physical parameters of the Hamiltonian family.
///
/// `a0` is the gauge parameter: the normalized dynamics is independent of it,
/// and the default `a0 = γ` keeps the raw density matrix bounded for `γ > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianSpec {
    /// Tunneling frequency `Ω > 0` (rad/time).
    pub omega: f64,
    pub gamma: f64,
    pub beta: f64,
    pub a2: f64,
    pub a0: f64,
    pub w_sign: RootSign,
    pub scenario: Scenario,
}

impl HamiltonianSpec {
    /// General-family spec with the default gauge `a0 = γ` and positive root.
    pub fn general(omega: f64, gamma: f64, beta: f64, a2: f64) -> Self {
        HamiltonianSpec {
            omega,
            gamma,
            beta,
            a2,
            a0: gamma,
            w_sign: RootSign::Positive,
            scenario: Scenario::General,
        }
    }

    /// Left-hand side of the reality condition, `(1+γ²)(1-β²) - a₂²`.
    pub fn reality_margin(&self) -> f64 {
        (1.0 + self.gamma * self.gamma) * (1.0 - self.beta * self.beta) - self.a2 * self.a2
    }

    /// `W = w_sign·√((1+γ²)(1-β²) - a₂²)`; fails when the root is imaginary.
    /// The boundary `W = 0` is accepted.
    pub fn w(&self) -> Result<f64, Error> {
        let margin = self.reality_margin();
        if margin < 0.0 {
            return Err(Error::ConstraintViolation("(1+γ²)(1-β²) < a₂²"));
        }
        Ok(self.w_sign.as_f64() * math::sqrt(margin))
    }

    /// Decay rate coefficient `Γ = 2γΩ`.
    pub fn decay_rate(&self) -> f64 {
        2.0 * self.gamma * self.omega
    }

    /// Oscillation frequency `ω = 2βΩ`.
    pub fn oscillation_frequency(&self) -> f64 {
        2.0 * self.beta * self.omega
    }

    /// Critical frequency `ω_c = 2Ω√(1 - a₂²/(γ²+1))`, the upper bound of the
    /// oscillation frequency at fixed `γ`, `a₂`; itself bounded by `2Ω`.
    pub fn critical_frequency(&self) -> f64 {
        let bc2 = 1.0 - self.a2 * self.a2 / (self.gamma * self.gamma + 1.0);
        2.0 * self.omega * math::sqrt(bc2.max(0.0))
    }

    pub fn validate(&self) -> Result<(), Error> {
        for v in [self.omega, self.gamma, self.beta, self.a2, self.a0] {
            if !v.is_finite() {
                return Err(Error::ConstraintViolation("parameters must be finite"));
            }
        }
        if self.omega <= 0.0 {
            return Err(Error::ConstraintViolation("omega must be positive"));
        }
        match self.scenario {
            Scenario::General | Scenario::VanishingPopulation => {
                self.w()?;
            }
            Scenario::ConservedEnergyExp => {
                if self.beta != 0.0 {
                    return Err(Error::ConstraintViolation(
                        "conserved-energy scenarios require beta = 0",
                    ));
                }
                if self.a2 == 0.0 {
                    return Err(Error::ConstraintViolation(
                        "exponential conserved-energy scenario requires a2 != 0 \
                         (a2 = 0 is the polynomial scenario)",
                    ));
                }
            }
            Scenario::ConservedEnergyPoly => {
                if self.beta != 0.0 {
                    return Err(Error::ConstraintViolation(
                        "conserved-energy scenarios require beta = 0",
                    ));
                }
                if self.a2 != 0.0 {
                    return Err(Error::ConstraintViolation(
                        "polynomial conserved-energy scenario requires a2 = 0",
                    ));
                }
            }
            Scenario::Dephasing => {
                if self.beta != 0.0 {
                    return Err(Error::ConstraintViolation("dephasing requires beta = 0"));
                }
                if self.gamma == 0.0 {
                    return Err(Error::DegenerateParameters("dephasing requires gamma != 0"));
                }
            }
            Scenario::Purification { p } => {
                if self.beta != 0.0 {
                    return Err(Error::ConstraintViolation("purification requires beta = 0"));
                }
                if self.gamma == 0.0 {
                    return Err(Error::DegenerateParameters(
                        "purification requires gamma != 0",
                    ));
                }
                if 1.0 + self.gamma * self.gamma < self.a2 * self.a2 {
                    return Err(Error::DegenerateParameters(
                        "purification requires 1+γ² ≥ a₂²",
                    ));
                }
                if !(p > 0.0 && p < 1.0) {
                    return Err(Error::ConstraintViolation(
                        "purification mixing parameter requires 0 < p < 1",
                    ));
                }
                self.w()?;
            }
        }
        Ok(())
    }

    /// Resolve the coefficients of `Γ̂` for this spec's scenario.
    pub fn decay_coefficients(&self) -> Result<DecayCoefficients, Error> {
        match self.scenario {
            Scenario::ConservedEnergyExp | Scenario::ConservedEnergyPoly => Ok(DecayCoefficients {
                a0: self.a0,
                a1: 0.0,
                a2: self.a2,
                a3: 1.0,
            }),
            _ => {
                let w = self.w()?;
                Ok(DecayCoefficients {
                    a0: self.a0,
                    a1: -self.gamma * self.beta,
                    a2: self.a2,
                    a3: -w,
                })
            }
        }
    }
}

/// `H₊ = -ħΩσₓ`, the tunneling Hamiltonian of the closed system.
pub fn build_hermitian(spec: &HamiltonianSpec) -> Operator2 {
    pauli::SX * (-spec.omega)
}

/// The decay rate operator `Γ̂` resolved for the spec's scenario; Hermitian
/// with `tr Γ̂ = 2ħ a₀ Ω` (`= 2ħγΩ` at the default gauge).
pub fn build_decay_operator(spec: &HamiltonianSpec) -> Result<Operator2, Error> {
    spec.validate()?;
    let c = spec.decay_coefficients()?;
    Ok(pauli::combination(c.a1, c.a2, c.a3, c.a0) * spec.omega)
}

/// The total Hamiltonian `H = H₊ - iΓ̂`.
pub fn build_total(spec: &HamiltonianSpec) -> Result<Operator2, Error> {
    let gamma_op = build_decay_operator(spec)?;
    Ok(build_hermitian(spec) + gamma_op * Complex64::new(0.0, -1.0))
}

/// Resolve a scenario against base parameters.
///
/// Free parameters are read from `base`; scenario-pinned ones are derived.
/// A base value that contradicts a pinned one is rejected rather than
/// silently overwritten, except for quantities the scenario derives outright
/// (`a₂` and the root sign for vanishing population, `a₂` and the root sign
/// for dephasing).
pub fn build_scenario(scenario: Scenario, base: HamiltonianSpec) -> Result<HamiltonianSpec, Error> {
    let mut spec = base;
    spec.scenario = scenario;
    match scenario {
        Scenario::General => {}
        Scenario::ConservedEnergyExp | Scenario::ConservedEnergyPoly => {
            if base.beta != 0.0 {
                return Err(Error::ConstraintViolation(
                    "conserved-energy scenarios require beta = 0",
                ));
            }
        }
        Scenario::VanishingPopulation => {
            if math::abs(base.beta) > 1.0 {
                return Err(Error::ConstraintViolation(
                    "vanishing-population scenario requires β² ≤ 1",
                ));
            }
            let root = math::sqrt(1.0 - base.beta * base.beta);
            spec.a2 = base.gamma * root;
            spec.w_sign = RootSign::Negative;
        }
        Scenario::Dephasing => {
            if base.beta != 0.0 {
                return Err(Error::ConstraintViolation("dephasing requires beta = 0"));
            }
            spec.a2 = -1.0;
            spec.w_sign = if base.gamma >= 0.0 {
                RootSign::Negative
            } else {
                RootSign::Positive
            };
        }
        Scenario::Purification { .. } => {
            if base.beta != 0.0 {
                return Err(Error::ConstraintViolation("purification requires beta = 0"));
            }
            spec.w_sign = RootSign::Negative;
        }
    }
    spec.validate()?;
    Ok(spec)
}
