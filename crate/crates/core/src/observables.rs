//! Physical quantities derived from density matrices: spin averages, trace,
//! determinant, purity, the purity-rate functional and the conservation-law
//! checks built on them.

use crate::error::Error;
use crate::math;
use crate::op2::{pauli, Operator2};
use crate::propagator::StateTrajectory;
use crate::state::normalize;
use crate::EPS_TR;

/// Imaginary parts of averages of Hermitian observables above this bound are
/// reported as errors instead of silently dropped.
const TOL_IMAG: f64 = 1e-10;

/// The three spin averages `(⟨σₓ⟩, ⟨σᵧ⟩, ⟨σ_z⟩)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinAverages {
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
}

impl SpinAverages {
    pub fn norm_sq(&self) -> f64 {
        self.sx * self.sx + self.sy * self.sy + self.sz * self.sz
    }
}

/// All recorded quantities at one instant. Energies are in units of `ħΩ`,
/// times in `1/Ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableRecord {
    pub t: f64,
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
    /// Raw (unnormalized) trace.
    pub trace: f64,
    pub det_raw: f64,
    pub det_norm: f64,
    pub purity: f64,
    /// `⟨H₊⟩/ħΩ`.
    pub energy_avg: f64,
    /// `⟨Γ̂⟩/ħΩ`.
    pub gamma_avg: f64,
    /// `⟨σₓ⟩² + ⟨σᵧ⟩² + ⟨σ_z⟩²`; equals `1 - 4 det ρ′`.
    pub bloch_norm_sq: f64,
}

impl ObservableRecord {
    pub fn spin(&self) -> SpinAverages {
        SpinAverages {
            sx: self.sx,
            sy: self.sy,
            sz: self.sz,
        }
    }

    /// `|⟨σ⟩² - (1 - 4 det ρ′)|`, the Bloch-identity residual.
    pub fn bloch_residual(&self) -> f64 {
        math::abs(self.bloch_norm_sq - (1.0 - 4.0 * self.det_norm))
    }
}

/// Quantum average `⟨χ⟩ = tr(ρχ)/tr(ρ)`; normalization is built in, so the
/// result is invariant under `ρ → cρ`.
pub fn average(rho: &Operator2, obs: &Operator2) -> Result<num_complex::Complex64, Error> {
    let tr = rho.trace().re;
    if math::abs(tr) < EPS_TR {
        return Err(Error::TraceCollapse { trace: tr });
    }
    Ok((*rho * *obs).trace() / tr)
}

/// Average of a Hermitian observable; the imaginary part must be negligible.
pub fn real_average(rho: &Operator2, obs: &Operator2) -> Result<f64, Error> {
    let a = average(rho, obs)?;
    let scale = 1.0 + math::abs(a.re);
    if math::abs(a.im) > TOL_IMAG * scale {
        return Err(Error::HermiticityDrift {
            deviation: math::abs(a.im),
        });
    }
    Ok(a.re)
}

/// The three Pauli averages of a density matrix (any normalization).
pub fn spin_averages(rho: &Operator2) -> Result<SpinAverages, Error> {
    Ok(SpinAverages {
        sx: real_average(rho, &pauli::SX)?,
        sy: real_average(rho, &pauli::SY)?,
        sz: real_average(rho, &pauli::SZ)?,
    })
}

/// Purity `tr(ρ²)/(tr ρ)²`; equals 1 exactly when `ρ` is a (generalized)
/// projector, regardless of its normalization.
pub fn purity(rho: &Operator2) -> Result<f64, Error> {
    let tr = rho.trace().re;
    if math::abs(tr) < EPS_TR {
        return Err(Error::TraceCollapse { trace: tr });
    }
    Ok((*rho * *rho).trace().re / (tr * tr))
}

/// The purity-rate functional
/// `ℛ(ρ, Γ̂) = tr(ρ′Γ̂)tr(ρ′²) - tr(ρ′²Γ̂)`; the purity evolves as
/// `dP/dt = (4/ħ)ℛ`.
pub fn purity_rate(rho: &Operator2, gamma_op: &Operator2) -> Result<f64, Error> {
    let rho_n = normalize(rho)?;
    let rho_sq = rho_n * rho_n;
    Ok((rho_n * *gamma_op).trace().re * rho_sq.trace().re - (rho_sq * *gamma_op).trace().re)
}

/// Rank-2 factorized form of the purity rate,
/// `ℛ = det ρ′ (tr Γ̂ - 2 tr(ρ′Γ̂))`; agrees with [`purity_rate`] on any 2×2
/// state and shows directly that zero-determinant states keep their purity.
pub fn purity_rate_factorized(rho: &Operator2, gamma_op: &Operator2) -> Result<f64, Error> {
    let rho_n = normalize(rho)?;
    Ok(rho_n.determinant().re * (gamma_op.trace().re - 2.0 * (rho_n * *gamma_op).trace().re))
}

/// Maximum relative deviation of the recorded raw determinants from
/// `det ρ(0) e^{-(2/ħ) t tr Γ̂}` over a raw trajectory.
pub fn determinant_law_check(traj: &StateTrajectory, gamma_op: &Operator2) -> Result<f64, Error> {
    let raw = traj.raw_states.as_ref().ok_or(Error::FormMismatch(
        "determinant law needs a raw (linear) trajectory",
    ))?;
    let det0 = raw[0].determinant().re;
    let rate = 2.0 * gamma_op.trace().re;
    let mut max_rel = 0.0_f64;
    for (t, rho) in traj.times.iter().zip(raw.iter()) {
        let expected = det0 * math::exp(-rate * (t - traj.times[0]));
        let rel = math::abs(rho.determinant().re - expected) / math::abs(expected).max(1e-14);
        if rel > max_rel {
            max_rel = rel;
        }
    }
    Ok(max_rel)
}

/// Assemble the full record for one instant from the normalized state and
/// the reconstructed raw trace.
pub fn observable_record(
    t: f64,
    rho_norm: &Operator2,
    trace_raw: f64,
    h_plus: &Operator2,
    gamma_op: &Operator2,
    omega: f64,
) -> Result<ObservableRecord, Error> {
    let spin = spin_averages(rho_norm)?;
    let det_norm = rho_norm.determinant().re;
    Ok(ObservableRecord {
        t,
        sx: spin.sx,
        sy: spin.sy,
        sz: spin.sz,
        trace: trace_raw,
        det_raw: det_norm * trace_raw * trace_raw,
        det_norm,
        purity: purity(rho_norm)?,
        energy_avg: real_average(rho_norm, h_plus)? / omega,
        gamma_avg: real_average(rho_norm, gamma_op)? / omega,
        bloch_norm_sq: spin.norm_sq(),
    })
}
