//! Closed-form solutions for the general model and every named scenario.
//!
//! These are the oracles the numerical propagator is verified against, and a
//! fast exact evaluation path in their own right. All raw-matrix expressions
//! assume the gauge `a₀ = γ`; a spec with a different `a₀` only rescales the
//! raw matrix by `e^{-2Ω(a₀-γ)t}`, which [`GeneralSolutionCoefficients`]
//! applies automatically.
//!
//! Exponentially growing and decaying factors are combined before evaluation
//! (`e^{-Γt}cosh(Γt)` is computed as `(1+e^{-2Γt})/2` and so on), so averages
//! and traces stay finite for arbitrarily long times.

use num_complex::Complex64;

use crate::error::Error;
use crate::math;
use crate::model::{HamiltonianSpec, Scenario};
use crate::observables::{spin_averages, SpinAverages};
use crate::op2::Operator2;
use crate::{EPS_DEN, EPS_UPS};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Coefficient table of the general closed-form solution for the initial
/// state `|e⟩⟨e|`.
///
/// Row `i` of the density matrix is
/// `ρᵢ(t) = e^{-Γt}/(2(β²+γ²)) · [Aᵢcos(ωt) + Bᵢsin(ωt) + Cᵢcosh(Γt) + Dᵢsinh(Γt)]`
/// with `Γ = 2γΩ`, `ω = 2βΩ`. The table satisfies `A₃ = A₂*`, `B₃ = B₂*`,
/// `D₃ = D₂*`, `C₂ = -A₂`, `A₄ = -C₄` and `B₄ = D₄ = 0`, so the assembled
/// matrix is Hermitian; this is asserted, not assumed.
///
/// Coefficients are computed once per spec; evaluation at each `t` is O(1).
#[derive(Debug, Clone, Copy)]
pub struct GeneralSolutionCoefficients {
    pub a1: f64,
    pub b1: f64,
    pub c1: f64,
    pub d1: f64,
    pub a2: Complex64,
    pub b2: Complex64,
    pub c2: Complex64,
    pub d2: Complex64,
    pub a3: Complex64,
    pub b3: Complex64,
    pub c3: Complex64,
    pub d3: Complex64,
    pub a4: f64,
    pub c4: f64,
    /// Trace coefficients: `tr ρ = e^{-Γt}/(β²+γ²)·[A₅cos + ½B₁sin + C₅cosh + ½D₁sinh]`.
    pub a5: f64,
    pub c5: f64,
    /// Average coefficients `A₆ = -γβW`, `A₇ = C₅ - W²`, `C₇ = A₅ + W²`.
    pub a6: f64,
    pub a7: f64,
    pub c7: f64,
    /// Decay rate coefficient `Γ = 2γΩ`.
    pub decay_rate: f64,
    /// Oscillation frequency `ω = 2βΩ`.
    pub omega_osc: f64,
    /// `α = 2a₂Ω`, the relaxation rate of the exponential conserved-energy
    /// scenario.
    pub alpha: f64,
    /// `γ̃ = √(1+γ²)`.
    pub gamma_tilde: f64,
    pub w: f64,
    gamma: f64,
    beta: f64,
    a2_param: f64,
    /// `2Ω(a₀-γ)`: extra raw decay relative to the `a₀ = γ` gauge.
    extra_decay: f64,
    /// `1/(2(β²+γ²))`.
    k: f64,
}

impl GeneralSolutionCoefficients {
    pub fn new(spec: &HamiltonianSpec) -> Result<Self, Error> {
        match spec.scenario {
            Scenario::ConservedEnergyExp | Scenario::ConservedEnergyPoly => {
                return Err(Error::FormMismatch(
                    "conserved-energy scenarios have dedicated closed forms",
                ))
            }
            _ => {}
        }
        spec.validate()?;
        let w = spec.w()?;
        let (gamma, beta, a2p) = (spec.gamma, spec.beta, spec.a2);
        let den = beta * beta + gamma * gamma;
        if den < EPS_DEN {
            return Err(Error::DegenerateParameters(
                "general closed form needs β² + γ² > 0 (use the propagator at β = γ = 0)",
            ));
        }

        let u = c(1.0 - a2p, gamma * beta);
        let a2 = I * w * u;
        let b2 = -c(gamma, beta) * u;
        let d2 = I * b2;
        let a5 = a2p - 1.0 + beta * beta;
        let c5 = 1.0 - a2p + gamma * gamma;
        Ok(GeneralSolutionCoefficients {
            a1: den - w * w,
            b1: 2.0 * beta * w,
            c1: den + w * w,
            d1: 2.0 * gamma * w,
            a2,
            b2,
            c2: -a2,
            d2,
            a3: a2.conj(),
            b3: b2.conj(),
            c3: -a2.conj(),
            d3: d2.conj(),
            a4: -(1.0 - a2p) * (1.0 - a2p) - gamma * gamma * beta * beta,
            c4: (1.0 - a2p) * (1.0 - a2p) + gamma * gamma * beta * beta,
            a5,
            c5,
            a6: -gamma * beta * w,
            a7: c5 - w * w,
            c7: a5 + w * w,
            decay_rate: 2.0 * gamma * spec.omega,
            omega_osc: 2.0 * beta * spec.omega,
            alpha: 2.0 * a2p * spec.omega,
            gamma_tilde: math::sqrt(1.0 + gamma * gamma),
            w,
            gamma,
            beta,
            a2_param: a2p,
            extra_decay: 2.0 * spec.omega * (spec.a0 - gamma),
            k: 0.5 / den,
        })
    }

    /// Damped basis functions `e^{-Γt}·(cos ωt, sin ωt, cosh Γt, sinh Γt)`.
    fn basis(&self, t: f64) -> (f64, f64, f64, f64) {
        let g = self.decay_rate;
        let e2 = math::exp(-2.0 * g * t);
        let damp = math::exp(-g * t);
        (
            damp * math::cos(self.omega_osc * t),
            damp * math::sin(self.omega_osc * t),
            0.5 * (1.0 + e2),
            0.5 * (1.0 - e2),
        )
    }

    /// The raw density matrix at time `t` (units `1/Ω`).
    pub fn rho(&self, t: f64) -> Operator2 {
        let (dc, ds, ec, es) = self.basis(t);
        let gauge = math::exp(-self.extra_decay * t);
        let scale = self.k * gauge;
        let r11 = scale * (self.a1 * dc + self.b1 * ds + self.c1 * ec + self.d1 * es);
        let r12 = (self.a2 * dc + self.b2 * ds + self.c2 * ec + self.d2 * es) * scale;
        let r21 = (self.a3 * dc + self.b3 * ds + self.c3 * ec + self.d3 * es) * scale;
        let r22 = scale * (self.a4 * dc + self.c4 * ec);
        let rho = Operator2::new(c(r11, 0.0), r12, r21, c(r22, 0.0));
        debug_assert!(rho.herm_deviation() <= 1e-12 * (1.0 + rho.max_abs()));
        rho
    }

    /// The raw trace at time `t`; equals `tr(self.rho(t))` identically.
    pub fn trace(&self, t: f64) -> f64 {
        let (dc, ds, ec, es) = self.basis(t);
        let gauge = math::exp(-self.extra_decay * t);
        2.0 * self.k
            * gauge
            * (self.a5 * dc + 0.5 * self.b1 * ds + self.c5 * ec + 0.5 * self.d1 * es)
    }

    /// Spin averages at time `t`. Gauge independent.
    pub fn averages(&self, t: f64) -> SpinAverages {
        let (dc, ds, ec, es) = self.basis(t);
        let trace = self.a5 * dc + 0.5 * self.b1 * ds + self.c5 * ec + 0.5 * self.d1 * es;
        let osc = dc - ec;
        let sx = (self.a6 * osc + self.gamma * self.a5 * ds + self.beta * self.c5 * es) / trace;
        let sy = (self.w * (self.a2_param - 1.0) * osc + self.beta * self.c5 * ds
            - self.gamma * self.a5 * es)
            / trace;
        let sz = (self.a7 * dc + 0.5 * self.b1 * ds + self.c7 * ec + 0.5 * self.d1 * es) / trace;
        SpinAverages { sx, sy, sz }
    }

    /// Long-time limits of the spin averages; needs `γ > 0` for relaxation.
    pub fn asymptotic_averages(&self) -> Result<SpinAverages, Error> {
        if self.gamma <= 0.0 {
            return Err(Error::DegenerateParameters(
                "asymptotic averages require gamma > 0",
            ));
        }
        let (gamma, w, a2) = (self.gamma, self.w, self.a2_param);
        let den = a2 - 1.0 - gamma * (gamma + w);
        if math::abs(den) < 1e-12 {
            return Err(Error::DegenerateParameters(
                "the ⟨σy⟩ asymptote denominator a₂-1-γ(γ+W) vanishes",
            ));
        }
        Ok(SpinAverages {
            sx: self.beta,
            sy: ((a2 - 1.0) * (gamma + w) + gamma * self.beta * self.beta) / den,
            sz: (a2 + gamma * w) / (gamma * gamma + 1.0),
        })
    }
}

/// Raw general-family density matrix at time `t` for the initial state
/// `|e⟩⟨e|`.
pub fn general_rho(spec: &HamiltonianSpec, t: f64) -> Result<Operator2, Error> {
    Ok(GeneralSolutionCoefficients::new(spec)?.rho(t))
}

/// Raw trace of the general solution at time `t`.
pub fn general_trace(spec: &HamiltonianSpec, t: f64) -> Result<f64, Error> {
    Ok(GeneralSolutionCoefficients::new(spec)?.trace(t))
}

/// Spin averages of the general solution at time `t`.
pub fn general_averages(spec: &HamiltonianSpec, t: f64) -> Result<SpinAverages, Error> {
    Ok(GeneralSolutionCoefficients::new(spec)?.averages(t))
}

/// Long-time spin averages of the general solution.
pub fn asymptotic_averages(spec: &HamiltonianSpec) -> Result<SpinAverages, Error> {
    GeneralSolutionCoefficients::new(spec)?.asymptotic_averages()
}

/// Conserved-energy scenario with exponential relaxation:
/// `Γ̂ = ħΩ(a₂σᵧ + σ_z + γÎ)`, initial state `|e⟩⟨e|`.
///
/// The averages do not depend on `γ`; only the raw matrix does.
pub fn exp_decay_solution(
    a2: f64,
    gamma: f64,
    omega: f64,
    t: f64,
) -> Result<(Operator2, SpinAverages), Error> {
    if a2 == 0.0 {
        return Err(Error::DegenerateParameters(
            "a₂ = 0 is the polynomial scenario (poly_decay_solution)",
        ));
    }
    let alpha = 2.0 * a2 * omega;
    let damp = math::exp(-2.0 * gamma * omega * t);
    let half = 0.5 * alpha * t;
    let r11_root = a2 * math::cosh(half) - math::sinh(half);
    let r11 = r11_root * r11_root / (a2 * a2) * damp;
    let r12_im = 0.5 * (a2 - 1.0) / (a2 * a2)
        * (1.0 - math::cosh(alpha * t) + a2 * math::sinh(alpha * t))
        * damp;
    let sh = math::sinh(half);
    let r22 = (a2 - 1.0) * (a2 - 1.0) / (a2 * a2) * sh * sh * damp;
    let rho = Operator2::new(c(r11, 0.0), c(0.0, r12_im), c(0.0, -r12_im), c(r22, 0.0));

    // Averages, rescaled by e^{-|α|t} so they stay finite at large t.
    let s = math::abs(alpha) * t;
    let e1 = math::exp(-s);
    let e2 = math::exp(-2.0 * s);
    let ch = 0.5 * (1.0 + e2);
    let sh = if alpha >= 0.0 {
        0.5 * (1.0 - e2)
    } else {
        -0.5 * (1.0 - e2)
    };
    let exp_neg_alpha = if alpha >= 0.0 { e2 } else { 1.0 };
    let tsc = (a2 * a2 - a2 + 1.0) * ch - a2 * sh + (a2 - 1.0) * e1;
    let sy = (a2 - 1.0) * (ch - a2 * sh - e1) / tsc;
    let sz = a2 * ((a2 - 1.0) * e1 + exp_neg_alpha) / tsc;
    Ok((rho, SpinAverages { sx: 0.0, sy, sz }))
}

/// Conserved-energy scenario with polynomial relaxation:
/// `Γ̂ = ħΩ(σ_z + γÎ)`, initial state `|e⟩⟨e|`.
///
/// `T = 2Ωt(Ωt-1) + 1 ≥ 1/2`, so the averages are singularity free.
pub fn poly_decay_solution(gamma: f64, omega: f64, t: f64) -> (Operator2, SpinAverages) {
    let x = omega * t;
    let damp = math::exp(-2.0 * gamma * omega * t);
    let rho = Operator2::new(
        c((x - 1.0) * (x - 1.0) * damp, 0.0),
        c(0.0, x * (x - 1.0) * damp),
        c(0.0, -x * (x - 1.0) * damp),
        c(x * x * damp, 0.0),
    );
    let tpd = 2.0 * x * (x - 1.0) + 1.0;
    (
        rho,
        SpinAverages {
            sx: 0.0,
            sy: 2.0 * x * (1.0 - x) / tpd,
            sz: (1.0 - 2.0 * x) / tpd,
        },
    )
}

/// Vanishing-population scenario: `a₂ = γ√(1-β²)` with the negative root
/// `W = -√(1-β²)`, initial state `|e⟩⟨e|`. The asymptotic averages are
/// `(β, -√(1-β²), 0)`.
///
/// This is an independent transcription of the specialized matrix elements;
/// it agrees with [`general_rho`] on the resolved spec.
pub fn vanishing_population_solution(
    beta: f64,
    gamma: f64,
    omega: f64,
    t: f64,
) -> Result<(Operator2, SpinAverages), Error> {
    if beta * beta > 1.0 {
        return Err(Error::ConstraintViolation(
            "vanishing-population scenario requires β² ≤ 1",
        ));
    }
    let den = beta * beta + gamma * gamma;
    if den < EPS_DEN {
        return Err(Error::DegenerateParameters(
            "vanishing-population closed form needs β² + γ² > 0",
        ));
    }
    let w = math::sqrt(1.0 - beta * beta);
    let gt2 = 1.0 + gamma * gamma;
    let k = 0.5 / den;
    let g = 2.0 * gamma * omega;
    let e2 = math::exp(-2.0 * g * t);
    let damp = math::exp(-g * t);
    let dc = damp * math::cos(2.0 * beta * omega * t);
    let ds = damp * math::sin(2.0 * beta * omega * t);
    let ec = 0.5 * (1.0 + e2);
    let es = 0.5 * (1.0 - e2);

    let r11 = k * ((gt2 - 2.0 * w * w) * dc + gt2 * ec - 2.0 * w * (beta * ds + gamma * es));
    let a9 = c(w * gamma * beta, w * (gamma * w - 1.0));
    let b5 = c(beta * (gt2 - gamma * w), gamma * w * (gamma - w));
    let r12 = (a9 * (dc - ec) + b5 * (c(es, 0.0) - I * ds)) * k;
    let r22 = k * (2.0 * gamma * w - gt2) * (dc - ec);
    let rho = Operator2::new(c(r11, 0.0), r12, r12.conj(), c(r22, 0.0));
    let averages = spin_averages(&rho)?;
    Ok((rho, averages))
}

/// Dephasing scenario: `Γ̂ = -ħΩ[σᵧ - γ(σ_z + Î)]`, initial state with all
/// entries `1/2`. The normalized state relaxes to `|g⟩⟨g|` and the raw one
/// to `½(1+γ⁻²)|g⟩⟨g|`.
pub fn dephasing_solution(
    gamma: f64,
    omega: f64,
    t: f64,
) -> Result<(Operator2, SpinAverages), Error> {
    if gamma == 0.0 {
        return Err(Error::DegenerateParameters("dephasing requires gamma != 0"));
    }
    let x = math::exp(-2.0 * gamma * omega * t);
    let rho = Operator2::new(
        c(0.5 * x * x, 0.0),
        c(0.5 * x, x * (x - 1.0) / (2.0 * gamma)),
        c(0.5 * x, -x * (x - 1.0) / (2.0 * gamma)),
        c(
            ((x - 1.0) * (x - 1.0) + gamma * gamma) / (2.0 * gamma * gamma),
            0.0,
        ),
    );
    let gt2 = 1.0 + gamma * gamma;
    // Averages with numerator and denominator damped by e^{-Γt}.
    let den = gt2 * 0.5 * (1.0 + x * x) - x;
    let averages = SpinAverages {
        sx: gamma * gamma * x / den,
        sy: gamma * (1.0 - x) * x / den,
        sz: (x - 0.5 * (1.0 + x * x) - 0.5 * gamma * gamma * (1.0 - x * x)) / den,
    };
    Ok((rho, averages))
}

/// Asymptotic fate of the purification scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PurificationBranch {
    /// `Υ ≠ 0`: `det ρ′(t) → 0`.
    AsymptoticallyPure,
    /// `Υ = 0`: `det ρ′(t)` approaches a finite nonzero limit.
    AsymptoticallyMixed,
}

/// Building blocks of the purification solution for
/// `Γ̂ = ħΩ(a₂σᵧ + Wσ_z + a₀Î)` with `W = √(1+γ²-a₂²)` and initial state
/// `diag(1-p, p)`.
///
/// The matrix elements are linear in the initial state, so they remain valid
/// for any real `p`; `0 < p < 1` is required only for the ensemble
/// interpretation (and is enforced by scenario validation, not here). That
/// matters because the constraint surface `Υ = 0` is unreachable for
/// `0 < p < 1`: `|a₂ + γW| ≤ γ̃²` holds identically on this family, with
/// equality only at `a₂ = ±1`, so `Υ = p₁(a₂+γW) + γ̃² = 0` needs `|p₁| ≥ 1`.
#[derive(Debug, Clone, Copy)]
pub struct PurificationSolutionTerms {
    pub p: f64,
    pub a2: f64,
    pub gamma: f64,
    pub a0: f64,
    pub omega: f64,
    /// `W = √(1+γ²-a₂²)` (positive root).
    pub w: f64,
    /// `γ̃² = 1+γ²`.
    pub gamma_tilde_sq: f64,
    /// `p₁ = 2p-1`.
    pub p1: f64,
    /// `p± = γ̃² ± p₁γW`.
    pub p_plus: f64,
    pub p_minus: f64,
    /// `Υ = p₁(a₂+γW) + γ̃²`.
    pub upsilon: f64,
    /// `Γ = 2γΩ`.
    pub decay_rate: f64,
    /// `Γ̃ = Γ + 2a₀Ω`.
    pub tilde_rate: f64,
}

impl PurificationSolutionTerms {
    pub fn new(p: f64, a2: f64, gamma: f64, a0: f64, omega: f64) -> Result<Self, Error> {
        if gamma == 0.0 {
            return Err(Error::DegenerateParameters(
                "purification requires gamma != 0",
            ));
        }
        let margin = 1.0 + gamma * gamma - a2 * a2;
        if margin < 0.0 {
            return Err(Error::DegenerateParameters(
                "purification requires 1+γ² ≥ a₂²",
            ));
        }
        if !p.is_finite() || omega <= 0.0 {
            return Err(Error::ConstraintViolation(
                "p must be finite and omega positive",
            ));
        }
        let w = math::sqrt(margin);
        let gamma_tilde_sq = 1.0 + gamma * gamma;
        let p1 = 2.0 * p - 1.0;
        Ok(PurificationSolutionTerms {
            p,
            a2,
            gamma,
            a0,
            omega,
            w,
            gamma_tilde_sq,
            p1,
            p_plus: gamma_tilde_sq + p1 * gamma * w,
            p_minus: gamma_tilde_sq - p1 * gamma * w,
            upsilon: p1 * (a2 + gamma * w) + gamma_tilde_sq,
            decay_rate: 2.0 * gamma * omega,
            tilde_rate: 2.0 * (gamma + a0) * omega,
        })
    }

    /// `Λ(t) = (2γ)⁻² e^{-Γ̃t}`.
    pub fn lambda(&self, t: f64) -> f64 {
        math::exp(-self.tilde_rate * t) / (4.0 * self.gamma * self.gamma)
    }

    pub fn k1(&self, eta: f64) -> f64 {
        self.gamma * self.gamma
            + self.w * self.w
            + 2.0 * self.p * (1.0 + self.a2 - self.w * self.w + eta * self.gamma)
    }

    pub fn k2(&self, eta: f64) -> f64 {
        self.gamma * self.gamma
            - self.w * self.w
            - 2.0 * self.p * (1.0 - self.w * self.w + eta * self.gamma)
            + 2.0
    }

    /// Raw density matrix at time `t`.
    pub fn rho(&self, t: f64) -> Operator2 {
        let (g, w, a2, p1) = (self.gamma, self.w, self.a2, self.p1);
        // Λe^{2Γt}, Λe^{Γt}, Λ evaluated without intermediate overflow.
        let quarter = 0.25 / (g * g);
        let l2 = quarter * math::exp((self.decay_rate - self.tilde_rate + self.decay_rate) * t);
        let l1 = quarter * math::exp((self.decay_rate - self.tilde_rate) * t);
        let l0 = quarter * math::exp(-self.tilde_rate * t);
        let sq = l2 - 2.0 * l1 + l0; // Λ(e^{Γt}-1)²
        let r11 = (self.k1(w) - 2.0 * g * w) * l2 - 2.0 * (self.k1(g) - 2.0 * g * g) * l1
            + (self.k1(-w) + 2.0 * g * w) * l0;
        let r12_im = g * (a2 + p1) * (l2 - l0) + w * (a2 * p1 + 1.0) * sq;
        let r22 = self.k2(-w) * l2 + 2.0 * a2 * (self.p - 1.0) * sq - 2.0 * self.k2(g) * l1
            + self.k2(w) * l0;
        Operator2::new(c(r11, 0.0), c(0.0, r12_im), c(0.0, -r12_im), c(r22, 0.0))
    }

    /// Raw trace at time `t`; equals `tr(self.rho(t))` identically.
    pub fn trace(&self, t: f64) -> f64 {
        let quarter = 0.25 / (self.gamma * self.gamma);
        let l2 = quarter * math::exp((2.0 * self.decay_rate - self.tilde_rate) * t);
        let l1 = quarter * math::exp((self.decay_rate - self.tilde_rate) * t);
        let l0 = quarter * math::exp(-self.tilde_rate * t);
        let sq = l2 - 2.0 * l1 + l0;
        2.0 * (self.p_plus * l2 + self.a2 * self.p1 * sq - 2.0 * l1 + self.p_minus * l0)
    }

    pub fn branch(&self) -> PurificationBranch {
        if math::abs(self.upsilon) < EPS_UPS {
            PurificationBranch::AsymptoticallyMixed
        } else {
            PurificationBranch::AsymptoticallyPure
        }
    }

    /// `t → ∞` limit of the normalized density matrix on the pure branch
    /// (`Υ ≠ 0`, `γ > 0`).
    pub fn asymptotic_normalized(&self) -> Result<Operator2, Error> {
        if self.gamma <= 0.0 {
            return Err(Error::DegenerateParameters("asymptotics require gamma > 0"));
        }
        if self.branch() == PurificationBranch::AsymptoticallyMixed {
            return Err(Error::DegenerateParameters(
                "Υ = 0: the e^{2Γt} coefficients vanish; use mixed_branch_det_limit",
            ));
        }
        let (g, w, a2, p1) = (self.gamma, self.w, self.a2, self.p1);
        let two_upsilon = 2.0 * self.upsilon;
        let r11 = (self.k1(w) - 2.0 * g * w) / two_upsilon;
        let r12_im = (g * (a2 + p1) + w * (a2 * p1 + 1.0)) / two_upsilon;
        let r22 = (self.k2(-w) + 2.0 * a2 * (self.p - 1.0)) / two_upsilon;
        Ok(Operator2::new(
            c(r11, 0.0),
            c(0.0, r12_im),
            c(0.0, -r12_im),
            c(r22, 0.0),
        ))
    }

    /// `t → ∞` limit of `det ρ′` on the `Υ = 0` surface.
    pub fn mixed_branch_det_limit(&self) -> Result<f64, Error> {
        if self.gamma <= 0.0 {
            return Err(Error::DegenerateParameters("asymptotics require gamma > 0"));
        }
        let (g, w, a2) = (self.gamma, self.w, self.a2);
        let den = w - a2 * g;
        if math::abs(den) < 1e-12 {
            return Err(Error::DegenerateParameters(
                "W - a₂γ vanishes in the det limit",
            ));
        }
        let gt2 = self.gamma_tilde_sq;
        Ok(0.25 * g * g * (w * w * (g * g - 1.0) + 2.0 * a2 * g * w - g * g * gt2) / (den * den))
    }

    /// The initial-state parameter that puts `(p, a₂, γ)` on the constraint
    /// surface `Υ = 0`. Lies outside `(0, 1)` for every admissible `(a₂, γ)`.
    pub fn mixed_branch_p(a2: f64, gamma: f64) -> Result<f64, Error> {
        if gamma == 0.0 {
            return Err(Error::DegenerateParameters(
                "purification requires gamma != 0",
            ));
        }
        let margin = 1.0 + gamma * gamma - a2 * a2;
        if margin < 0.0 {
            return Err(Error::DegenerateParameters(
                "purification requires 1+γ² ≥ a₂²",
            ));
        }
        let s = a2 + gamma * math::sqrt(margin);
        if math::abs(s) < 1e-12 {
            return Err(Error::DegenerateParameters(
                "a₂ + γW vanishes; Υ = 0 is unreachable",
            ));
        }
        Ok(0.5 * (s - (1.0 + gamma * gamma)) / s)
    }
}

/// Raw purification density matrix at time `t` for the initial state
/// `diag(1-p, p)`.
pub fn purification_solution(
    p: f64,
    a2: f64,
    gamma: f64,
    a0: f64,
    omega: f64,
    t: f64,
) -> Result<Operator2, Error> {
    Ok(PurificationSolutionTerms::new(p, a2, gamma, a0, omega)?.rho(t))
}

/// Classify the asymptotic branch of a purification run.
pub fn purification_branch(p: f64, a2: f64, gamma: f64) -> Result<PurificationBranch, Error> {
    Ok(PurificationSolutionTerms::new(p, a2, gamma, gamma, 1.0)?.branch())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math;
    use crate::model::{build_scenario, HamiltonianSpec, Scenario};
    use crate::op2::max_abs_diff;
    use approx::assert_abs_diff_eq;

    fn excited() -> Operator2 {
        Operator2::from_real(1.0, 0.0, 0.0, 0.0)
    }

    #[test]
    fn general_solution_recovers_the_initial_state() {
        let spec = HamiltonianSpec::general(1.0, 0.5, 0.9, 0.01);
        let coeffs = GeneralSolutionCoefficients::new(&spec).unwrap();
        assert!(max_abs_diff(&coeffs.rho(0.0), &excited()) < 1e-14);
        assert_abs_diff_eq!(coeffs.trace(0.0), 1.0, epsilon = 1e-14);
        let s0 = coeffs.averages(0.0);
        assert_abs_diff_eq!(s0.sx, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s0.sy, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s0.sz, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn general_solution_keeps_zero_determinant_and_unit_purity() {
        let spec = HamiltonianSpec::general(1.0, 0.5, 0.9, 0.01);
        let coeffs = GeneralSolutionCoefficients::new(&spec).unwrap();
        for k in 0..60 {
            let t = 0.25 * k as f64;
            let rho = coeffs.rho(t);
            assert!(math::cabs(rho.determinant()) < 1e-10, "t = {t}");
            let tr = rho.trace().re;
            let purity = (rho * rho).trace().re / (tr * tr);
            assert_abs_diff_eq!(purity, 1.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn trace_formula_matches_matrix_trace() {
        let spec = HamiltonianSpec::general(1.0, 0.9, 0.9, 0.01);
        let coeffs = GeneralSolutionCoefficients::new(&spec).unwrap();
        for k in 0..40 {
            let t = 0.3 * k as f64;
            assert_abs_diff_eq!(coeffs.trace(t), coeffs.rho(t).trace().re, epsilon = 1e-12);
        }
    }

    #[test]
    fn averages_match_trace_weighted_expectations() {
        let spec = HamiltonianSpec::general(1.0, 0.45, 0.9, 0.01);
        let coeffs = GeneralSolutionCoefficients::new(&spec).unwrap();
        for k in 1..40 {
            let t = 0.25 * k as f64;
            let s = coeffs.averages(t);
            let from_rho = spin_averages(&coeffs.rho(t)).unwrap();
            assert_abs_diff_eq!(s.sx, from_rho.sx, epsilon = 1e-12);
            assert_abs_diff_eq!(s.sy, from_rho.sy, epsilon = 1e-12);
            assert_abs_diff_eq!(s.sz, from_rho.sz, epsilon = 1e-12);
        }
    }

    #[test]
    fn coherence_vanishes_identically_at_beta_zero() {
        let spec = HamiltonianSpec::general(1.0, 0.8, 0.0, 0.3);
        let coeffs = GeneralSolutionCoefficients::new(&spec).unwrap();
        for k in 0..30 {
            let s = coeffs.averages(0.4 * k as f64);
            assert!(math::abs(s.sx) <= 1e-10);
        }
    }

    #[test]
    fn asymptotic_averages_match_the_printed_limits() {
        // β = 0, a₂ = 0, γ = 1 (W = √2): ⟨σz⟩∞ = √2/2.
        let spec = HamiltonianSpec::general(1.0, 1.0, 0.0, 0.0);
        let inf = asymptotic_averages(&spec).unwrap();
        assert_abs_diff_eq!(inf.sz, core::f64::consts::SQRT_2 / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(inf.sx, 0.0, epsilon = 1e-15);

        // sx∞ = β for any γ, a₂.
        for gamma in [0.18, 0.45, 0.9] {
            let spec = HamiltonianSpec::general(1.0, gamma, 0.9, 0.01);
            let inf = asymptotic_averages(&spec).unwrap();
            assert_abs_diff_eq!(inf.sx, 0.9, epsilon = 1e-15);
        }

        // The time-dependent averages approach the limits.
        let spec = HamiltonianSpec::general(1.0, 0.45, 0.9, 0.01);
        let coeffs = GeneralSolutionCoefficients::new(&spec).unwrap();
        let inf = coeffs.asymptotic_averages().unwrap();
        let late = coeffs.averages(80.0);
        assert_abs_diff_eq!(late.sx, inf.sx, epsilon = 1e-9);
        assert_abs_diff_eq!(late.sy, inf.sy, epsilon = 1e-9);
        assert_abs_diff_eq!(late.sz, inf.sz, epsilon = 1e-9);
    }

    #[test]
    fn degenerate_origin_is_rejected() {
        let spec = HamiltonianSpec::general(1.0, 0.0, 0.0, 0.0);
        assert!(matches!(
            general_rho(&spec, 1.0),
            Err(Error::DegenerateParameters(_))
        ));
    }

    #[test]
    fn vanishing_sy_denominator_is_rejected() {
        // γ = 1, β = 0, a₂ = 1 with the negative root gives W = -1 and
        // a₂ - 1 - γ(γ+W) = 0.
        let mut spec = HamiltonianSpec::general(1.0, 1.0, 0.0, 1.0);
        spec.w_sign = crate::model::RootSign::Negative;
        assert_abs_diff_eq!(spec.w().unwrap(), -1.0, epsilon = 1e-15);
        assert!(matches!(
            asymptotic_averages(&spec),
            Err(Error::DegenerateParameters(_))
        ));
    }

    #[test]
    fn gauge_parameter_rescales_raw_matrix_only() {
        let mut spec = HamiltonianSpec::general(1.0, 0.5, 0.9, 0.01);
        let reference = GeneralSolutionCoefficients::new(&spec).unwrap();
        spec.a0 = 1.3;
        let shifted = GeneralSolutionCoefficients::new(&spec).unwrap();
        let t = 2.0;
        let factor = math::exp(-2.0 * (1.3 - 0.5) * t);
        assert!(max_abs_diff(&shifted.rho(t), &(reference.rho(t) * factor)) < 1e-12);
        let a = reference.averages(t);
        let b = shifted.averages(t);
        assert_abs_diff_eq!(a.sz, b.sz, epsilon = 1e-15);
    }

    #[test]
    fn exp_decay_matches_spot_values() {
        // t = 0: excited state.
        let (rho0, s0) = exp_decay_solution(0.5, 0.9, 1.0, 0.0).unwrap();
        assert!(max_abs_diff(&rho0, &excited()) < 1e-14);
        assert_abs_diff_eq!(s0.sz, 1.0, epsilon = 1e-14);

        // Case (i) 0 < a₂ < γ: (sy, sz) → (-1, 0).
        let (_, late) = exp_decay_solution(0.5, 0.9, 1.0, 40.0).unwrap();
        assert_abs_diff_eq!(late.sy, -1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(late.sz, 0.0, epsilon = 1e-9);

        // Case (ii) a₂ = -0.3: (sy, sz) → ((a₂²-1)/(a₂²+1), 2a₂/(a₂²+1)).
        let (_, late) = exp_decay_solution(-0.3, 0.9, 1.0, 60.0).unwrap();
        assert_abs_diff_eq!(late.sy, -0.91 / 1.09, epsilon = 1e-9);
        assert_abs_diff_eq!(late.sz, -0.6 / 1.09, epsilon = 1e-9);
        assert_abs_diff_eq!(late.sy, -0.83486, epsilon = 1e-5);
        assert_abs_diff_eq!(late.sz, -0.55046, epsilon = 1e-5);
    }

    #[test]
    fn exp_decay_averages_are_gamma_independent() {
        for k in 0..30 {
            let t = 0.3 * k as f64;
            let (_, a) = exp_decay_solution(0.4, 0.5, 1.0, t).unwrap();
            let (_, b) = exp_decay_solution(0.4, 1.7, 1.0, t).unwrap();
            assert_abs_diff_eq!(a.sy, b.sy, epsilon = 1e-12);
            assert_abs_diff_eq!(a.sz, b.sz, epsilon = 1e-12);
        }
    }

    #[test]
    fn exp_decay_rejects_zero_a2() {
        assert!(matches!(
            exp_decay_solution(0.0, 0.5, 1.0, 1.0),
            Err(Error::DegenerateParameters(_))
        ));
    }

    #[test]
    fn poly_decay_spot_values() {
        let (_, s0) = poly_decay_solution(0.7, 1.0, 0.0);
        assert_abs_diff_eq!(s0.sz, 1.0, epsilon = 1e-15);

        // Ωt = 1: T = 1, sz = -1, sy = 0 exactly.
        let (_, s1) = poly_decay_solution(0.7, 1.0, 1.0);
        assert_abs_diff_eq!(s1.sz, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s1.sy, 0.0, epsilon = 1e-15);

        // Polynomial approach to (sy, sz) → (-1, 0).
        let (_, s) = poly_decay_solution(0.7, 1.0, 1.0e6);
        assert_abs_diff_eq!(s.sy, -1.0, epsilon = 1e-5);
        assert_abs_diff_eq!(s.sz, 0.0, epsilon = 1e-5);
    }

    #[test]
    fn vanishing_population_matches_the_general_solution() {
        let base = HamiltonianSpec::general(1.0, 0.45, 0.9, 0.0);
        let spec = build_scenario(Scenario::VanishingPopulation, base).unwrap();
        let coeffs = GeneralSolutionCoefficients::new(&spec).unwrap();
        for k in 0..50 {
            let t = 0.25 * k as f64;
            let (rho_vp, _) = vanishing_population_solution(0.9, 0.45, 1.0, t).unwrap();
            assert!(
                max_abs_diff(&rho_vp, &coeffs.rho(t)) < 1e-12,
                "mismatch at t = {t}"
            );
        }
    }

    #[test]
    fn vanishing_population_asymptotics() {
        let (_, late) = vanishing_population_solution(0.9, 0.45, 1.0, 80.0).unwrap();
        assert_abs_diff_eq!(late.sx, 0.9, epsilon = 1e-9);
        assert_abs_diff_eq!(late.sy, -math::sqrt(1.0 - 0.81), epsilon = 1e-9);
        assert_abs_diff_eq!(late.sy, -0.43589, epsilon = 1e-5);
        assert_abs_diff_eq!(late.sz, 0.0, epsilon = 1e-9);

        // β = 0 reduces to a β = 0 member of the general family: sx ≡ 0.
        for k in 0..20 {
            let (_, s) = vanishing_population_solution(0.0, 0.45, 1.0, 0.4 * k as f64).unwrap();
            assert!(math::abs(s.sx) < 1e-12);
        }
    }

    #[test]
    fn dephasing_initial_state_and_asymptotics() {
        let (rho0, s0) = dephasing_solution(1.0, 1.0, 0.0).unwrap();
        assert!(max_abs_diff(&rho0, &Operator2::from_real(0.5, 0.5, 0.5, 0.5)) < 1e-14);
        assert_abs_diff_eq!(s0.sx, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s0.sy, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s0.sz, 0.0, epsilon = 1e-14);

        for gamma in [4.0, 1.0, 0.2] {
            let t_end = 20.0 / (2.0 * gamma);
            let (rho, s) = dephasing_solution(gamma, 1.0, t_end).unwrap();
            assert_abs_diff_eq!(s.sz, -1.0, epsilon = 1e-4);
            assert!(math::abs(s.sx) < 1e-4 && math::abs(s.sy) < 1e-4);
            // Raw ρ(∞) = ½(1+γ⁻²)|g⟩⟨g|.
            let expected = 0.5 * (1.0 + 1.0 / (gamma * gamma));
            assert_abs_diff_eq!(rho.trace().re, expected, epsilon = 1e-4);
            assert_abs_diff_eq!(rho.m22.re, expected, epsilon = 1e-4);
        }
    }

    #[test]
    fn dephasing_frozen_coherence_value() {
        // γ = 1, Γt = 2: sx = γ²/(γ̃²cosh(Γt) - 1) = 1/(2cosh 2 - 1).
        let (_, s) = dephasing_solution(1.0, 1.0, 1.0).unwrap();
        let expected = 1.0 / (2.0 * math::cosh(2.0) - 1.0);
        assert_abs_diff_eq!(s.sx, expected, epsilon = 1e-12);
        assert_abs_diff_eq!(s.sx, 0.153_271, epsilon = 1e-6);
    }

    #[test]
    fn dephasing_rejects_zero_gamma() {
        assert!(matches!(
            dephasing_solution(0.0, 1.0, 1.0),
            Err(Error::DegenerateParameters(_))
        ));
    }

    #[test]
    fn purification_recovers_initial_state_and_trace() {
        let terms = PurificationSolutionTerms::new(0.3, 0.2, 0.8, 0.8, 1.0).unwrap();
        let rho0 = terms.rho(0.0);
        assert!(max_abs_diff(&rho0, &Operator2::from_real(0.7, 0.0, 0.0, 0.3)) < 1e-12);
        assert_abs_diff_eq!(terms.trace(0.0), 1.0, epsilon = 1e-12);
        for k in 0..40 {
            let t = 0.2 * k as f64;
            assert_abs_diff_eq!(terms.trace(t), terms.rho(t).trace().re, epsilon = 1e-10);
        }
    }

    #[test]
    fn purification_pure_branch_det_vanishes() {
        let terms = PurificationSolutionTerms::new(0.3, 0.2, 0.8, 0.8, 1.0).unwrap();
        assert_eq!(terms.branch(), PurificationBranch::AsymptoticallyPure);
        let t_end = 25.0 / terms.tilde_rate * 4.0;
        let rho = terms.rho(t_end);
        let tr = rho.trace().re;
        let det = rho.determinant().re / (tr * tr);
        assert!(math::abs(det) < 1e-8);
        let limit = terms.asymptotic_normalized().unwrap();
        let normalized = rho * (1.0 / tr);
        assert!(max_abs_diff(&normalized, &limit) < 1e-6);
    }

    #[test]
    fn purification_branch_inequality_is_never_satisfied_inside_unit_p() {
        // a₂ = 0, γ = 1: |a₂ + γW| = √2 < γ̃² = 2 → pure for every p in (0,1).
        for k in 1..20 {
            let p = k as f64 / 20.0;
            assert_eq!(
                purification_branch(p, 0.0, 1.0).unwrap(),
                PurificationBranch::AsymptoticallyPure
            );
        }
        // Tolerance boundary: Υ = 1e-3 with eps_ups = 1e-6 is still pure.
        let s = 0.0 + 1.0 * math::sqrt(2.0);
        let p = 0.5 * ((1e-3 - 2.0) / s + 1.0);
        let terms = PurificationSolutionTerms::new(p, 0.0, 1.0, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(terms.upsilon, 1e-3, epsilon = 1e-12);
        assert_eq!(terms.branch(), PurificationBranch::AsymptoticallyPure);
    }

    #[test]
    fn purification_mixed_branch_limit() {
        // γ = 1, a₂ = 0: Υ = 0 at p = (1-√2)/2, outside (0,1).
        let p = PurificationSolutionTerms::mixed_branch_p(0.0, 1.0).unwrap();
        assert_abs_diff_eq!(p, 0.5 * (1.0 - core::f64::consts::SQRT_2), epsilon = 1e-14);
        let terms = PurificationSolutionTerms::new(p, 0.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(terms.branch(), PurificationBranch::AsymptoticallyMixed);
        let limit = terms.mixed_branch_det_limit().unwrap();
        assert_abs_diff_eq!(limit, -0.25, epsilon = 1e-12);

        // The closed-form solution approaches that determinant.
        let t_end = 20.0 / terms.tilde_rate;
        let rho = terms.rho(t_end);
        let tr = rho.trace().re;
        let det_norm = rho.determinant().re / (tr * tr);
        assert_abs_diff_eq!(det_norm, limit, epsilon = 1e-3);
    }

    #[test]
    fn conserved_energy_scenarios_are_not_in_the_general_family() {
        let mut spec = HamiltonianSpec::general(1.0, 0.5, 0.0, 0.3);
        spec.scenario = Scenario::ConservedEnergyExp;
        assert!(matches!(
            GeneralSolutionCoefficients::new(&spec),
            Err(Error::FormMismatch(_))
        ));
    }
}
