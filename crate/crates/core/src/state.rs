//! Density-matrix states and statistical ensembles.

use alloc::vec::Vec;

use crate::error::Error;
use crate::math;
use crate::op2::Operator2;
use crate::{EPS_TR, TOL_HERM};

/// An (in general unnormalized) density matrix at a given time.
///
/// Hermiticity within `TOL_HERM` and a strictly positive trace are enforced
/// at construction; positivity of the matrix itself is not, since the linear
/// evolution is well defined for any Hermitian initial operator. Times are in
/// units of `1/Ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityState {
    pub rho: Operator2,
    pub t: f64,
}

impl DensityState {
    pub fn new(rho: Operator2, t: f64) -> Result<Self, Error> {
        let deviation = rho.herm_deviation();
        if deviation > TOL_HERM {
            return Err(Error::HermiticityDrift { deviation });
        }
        let tr = rho.trace();
        if math::abs(tr.im) > TOL_HERM {
            return Err(Error::HermiticityDrift {
                deviation: math::abs(tr.im),
            });
        }
        if tr.re < EPS_TR {
            return Err(Error::TraceCollapse { trace: tr.re });
        }
        Ok(DensityState { rho, t })
    }

    /// `|e⟩⟨e|` at `t = 0`.
    pub fn excited() -> Self {
        DensityState {
            rho: Operator2::from_real(1.0, 0.0, 0.0, 0.0),
            t: 0.0,
        }
    }

    /// `|g⟩⟨g|` at `t = 0`.
    pub fn ground() -> Self {
        DensityState {
            rho: Operator2::from_real(0.0, 0.0, 0.0, 1.0),
            t: 0.0,
        }
    }

    /// The coherent superposition `(|e⟩ + |g⟩)/√2` as a projector: all four
    /// entries equal `1/2`. Initial state of the dephasing scenario.
    pub fn plus_coherent() -> Self {
        DensityState {
            rho: Operator2::from_real(0.5, 0.5, 0.5, 0.5),
            t: 0.0,
        }
    }

    /// The diagonal mixture `diag(1-p, p)` at `t = 0`. Initial state of the
    /// purification scenario.
    pub fn diag_mixed(p: f64) -> Result<Self, Error> {
        if !(p.is_finite()) {
            return Err(Error::ConstraintViolation(
                "mixing parameter p must be finite",
            ));
        }
        DensityState::new(Operator2::from_real(1.0 - p, 0.0, 0.0, p), 0.0)
    }

    /// `ρ / tr(ρ)`; unit trace, Hermitian.
    pub fn normalized(&self) -> Result<Operator2, Error> {
        normalize(&self.rho)
    }
}

/// Divide by the (real) trace. Fails with [`Error::TraceCollapse`] below the
/// `EPS_TR` floor, where normalization is numerically meaningless.
pub fn normalize(rho: &Operator2) -> Result<Operator2, Error> {
    let tr = rho.trace().re;
    if math::abs(tr) < EPS_TR {
        return Err(Error::TraceCollapse { trace: tr });
    }
    Ok(*rho * (1.0 / tr))
}

/// A statistical ensemble of weighted components, `ρ = Σᵢ pᵢ ρ⁽ⁱ⁾`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedEnsemble {
    pub components: Vec<(f64, DensityState)>,
}

impl MixedEnsemble {
    pub fn new(components: Vec<(f64, DensityState)>) -> Result<Self, Error> {
        if components.is_empty() {
            return Err(Error::FormMismatch("ensemble needs at least one component"));
        }
        for (p, _) in &components {
            if !(*p >= 0.0 && *p <= 1.0) {
                return Err(Error::ConstraintViolation(
                    "ensemble weights must lie in [0, 1]",
                ));
            }
        }
        Ok(MixedEnsemble { components })
    }

    /// The combined operator `Σᵢ pᵢ ρ⁽ⁱ⁾`.
    pub fn combined(&self) -> Operator2 {
        let mut sum = Operator2::ZERO;
        for (p, state) in &self.components {
            sum = sum + state.rho * *p;
        }
        sum
    }

    /// Time-dependent weights `p′ᵢ = pᵢ tr(ρ⁽ⁱ⁾) / tr(Σⱼ pⱼ ρ⁽ʲ⁾)`.
    ///
    /// They sum to one whenever the total trace has not collapsed.
    pub fn weights(&self) -> Result<Vec<f64>, Error> {
        let total = self.combined().trace().re;
        if math::abs(total) < EPS_TR {
            return Err(Error::TraceCollapse { trace: total });
        }
        Ok(self
            .components
            .iter()
            .map(|(p, state)| p * state.rho.trace().re / total)
            .collect())
    }
}

/// Free-function form of [`MixedEnsemble::weights`].
pub fn ensemble_weights(ensemble: &MixedEnsemble) -> Result<Vec<f64>, Error> {
    ensemble.weights()
}
