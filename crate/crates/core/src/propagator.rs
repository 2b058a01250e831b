//! Fixed-step RK4 time evolution of the density matrix and of pure state
//! vectors.
//!
//! Three equivalent forms are integrated (`ħ = 1`, `Γ̂ = iH₋`):
//!
//! - linear raw:      `dρ/dt  = -i[H₊,ρ] - i{H₋,ρ}`
//! - nonlinear:       `dρ′/dt = -i[H₊,ρ′] - i{H₋,ρ′} + 2i·tr(ρ′H₋)ρ′`
//! - state vector:    `d|Ψ′⟩/dt = -i(H₊ + H₋ - ⟨H₋⟩)|Ψ′⟩`
//!
//! The normalized form is the default: the raw trace grows or decays
//! exponentially and is only retained (via an integrated log-trace in the
//! other forms) so that raw-trace laws stay checkable. The state is projected
//! back onto the Hermitian (and unit-trace or unit-norm) manifold after every
//! step; drift beyond `TOL_HERM` before projection is a hard error.
//!
//! Steps are fixed: the fastest dynamical scale is bounded by
//! `2Ω√(1+γ²)`, so the default `dt = 0.002/Ω` resolves every period in the
//! parameter ranges of interest, and verification wants deterministic grids.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::Error;
use crate::math;
use crate::model::{build_decay_operator, build_hermitian, HamiltonianSpec};
use crate::observables::{observable_record, ObservableRecord};
use crate::op2::Operator2;
use crate::state::{normalize, DensityState};
use crate::{EPS_TR, RAW_TRACE_CEILING, TOL_HERM};

const MINUS_I: Complex64 = Complex64::new(0.0, -1.0);

/// Which equation of motion to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvolutionForm {
    /// Raw density matrix; keeps the unnormalized states.
    LinearRaw,
    /// Trace-preserving nonlinear equation for `ρ′`.
    #[default]
    NonlinearNormalized,
    /// Norm-preserving nonlinear state-vector equation; requires a pure
    /// initial state.
    StateVector,
}

impl EvolutionForm {
    pub fn name(&self) -> &'static str {
        match self {
            EvolutionForm::LinearRaw => "linear-raw",
            EvolutionForm::NonlinearNormalized => "nonlinear-normalized",
            EvolutionForm::StateVector => "state-vector",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IntegrationMethod {
    #[default]
    Rk4,
}

/// Integration settings. Times are in units of `1/Ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub t_max: f64,
    pub method: IntegrationMethod,
    pub form: EvolutionForm,
    /// Record every n-th step (the final step is always recorded).
    pub record_every: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            dt: 0.002,
            t_max: 10.0,
            method: IntegrationMethod::Rk4,
            form: EvolutionForm::NonlinearNormalized,
            record_every: 1,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::ConstraintViolation("dt must be positive and finite"));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(Error::ConstraintViolation(
                "t_max must be positive and finite",
            ));
        }
        if self.dt > self.t_max {
            return Err(Error::ConstraintViolation("dt must not exceed t_max"));
        }
        if self.record_every == 0 {
            return Err(Error::ConstraintViolation(
                "record_every must be at least 1",
            ));
        }
        if self.t_max / self.dt > 2e8 {
            return Err(Error::ConstraintViolation(
                "t_max/dt exceeds the step budget",
            ));
        }
        Ok(())
    }

    fn steps(&self) -> usize {
        (math::round(self.t_max / self.dt) as usize).max(1)
    }
}

/// A recorded trajectory. All arrays share one length and the times are
/// strictly increasing; `raw_states` is present only for
/// [`EvolutionForm::LinearRaw`]. Every normalized state has unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct StateTrajectory {
    pub times: Vec<f64>,
    pub raw_states: Option<Vec<Operator2>>,
    pub normalized_states: Vec<Operator2>,
    pub observables: Vec<ObservableRecord>,
}

impl StateTrajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_record(&self) -> &ObservableRecord {
        self.observables
            .last()
            .expect("trajectory has at least one record")
    }

    /// Mean record over the final `fraction` of the time span — the
    /// asymptotic-value estimator (no extrapolation). Uses at least the final
    /// record.
    pub fn tail_mean(&self, fraction: f64) -> ObservableRecord {
        let t_end = *self.times.last().expect("non-empty trajectory");
        let t_start = self.times[0];
        let cut = t_end - fraction.clamp(0.0, 1.0) * (t_end - t_start);
        let mut acc = [0.0_f64; 11];
        let mut n = 0.0;
        for r in self.observables.iter().filter(|r| r.t >= cut) {
            for (slot, v) in acc.iter_mut().zip([
                r.t,
                r.sx,
                r.sy,
                r.sz,
                r.trace,
                r.det_raw,
                r.det_norm,
                r.purity,
                r.energy_avg,
                r.gamma_avg,
                r.bloch_norm_sq,
            ]) {
                *slot += v;
            }
            n += 1.0;
        }
        if n == 0.0 {
            return *self.final_record();
        }
        ObservableRecord {
            t: acc[0] / n,
            sx: acc[1] / n,
            sy: acc[2] / n,
            sz: acc[3] / n,
            trace: acc[4] / n,
            det_raw: acc[5] / n,
            det_norm: acc[6] / n,
            purity: acc[7] / n,
            energy_avg: acc[8] / n,
            gamma_avg: acc[9] / n,
            bloch_norm_sq: acc[10] / n,
        }
    }
}

fn rhs_linear(rho: &Operator2, h_plus: &Operator2, h_minus: &Operator2) -> Operator2 {
    (h_plus.commutator(rho) + h_minus.anticommutator(rho)) * MINUS_I
}

fn rhs_nonlinear(rho: &Operator2, h_plus: &Operator2, h_minus: &Operator2) -> Operator2 {
    let feedback = (*rho * *h_minus).trace() * 2.0;
    (h_plus.commutator(rho) + h_minus.anticommutator(rho) - *rho * feedback) * MINUS_I
}

/// `d ln tr ρ_raw/dt = -2 tr(ρ′Γ̂)` evaluated on a unit-trace state.
fn log_trace_rate(rho: &Operator2, gamma_op: &Operator2) -> f64 {
    -2.0 * (*rho * *gamma_op).trace().re
}

fn check_drift(rho: &Operator2) -> Result<Operator2, Error> {
    let deviation = rho.herm_deviation();
    if deviation > TOL_HERM {
        return Err(Error::HermiticityDrift { deviation });
    }
    Ok(rho.hermitian_part())
}

/// One RK4 step of the linear (raw) equation; the result is re-hermitized.
pub fn step_linear(
    rho: &Operator2,
    h_plus: &Operator2,
    h_minus: &Operator2,
    dt: f64,
) -> Result<Operator2, Error> {
    let f = |r: &Operator2| rhs_linear(r, h_plus, h_minus);
    let k1 = f(rho);
    let k2 = f(&(*rho + k1 * (0.5 * dt)));
    let k3 = f(&(*rho + k2 * (0.5 * dt)));
    let k4 = f(&(*rho + k3 * dt));
    let next = *rho + (k1 + (k2 + k3) * 2.0 + k4) * (dt / 6.0);
    check_drift(&next)
}

/// One RK4 step of the nonlinear normalized equation together with the
/// integrated raw log-trace.
fn step_nonlinear_logged(
    rho: &Operator2,
    log_tr: f64,
    h_plus: &Operator2,
    h_minus: &Operator2,
    gamma_op: &Operator2,
    dt: f64,
) -> Result<(Operator2, f64), Error> {
    let f = |r: &Operator2| rhs_nonlinear(r, h_plus, h_minus);
    let g = |r: &Operator2| log_trace_rate(r, gamma_op);
    let k1 = f(rho);
    let s1 = g(rho);
    let r2 = *rho + k1 * (0.5 * dt);
    let k2 = f(&r2);
    let s2 = g(&r2);
    let r3 = *rho + k2 * (0.5 * dt);
    let k3 = f(&r3);
    let s3 = g(&r3);
    let r4 = *rho + k3 * dt;
    let k4 = f(&r4);
    let s4 = g(&r4);
    let next = *rho + (k1 + (k2 + k3) * 2.0 + k4) * (dt / 6.0);
    let next = check_drift(&next)?;
    let next = normalize(&next)?;
    let next_log = log_tr + (s1 + 2.0 * (s2 + s3) + s4) * (dt / 6.0);
    Ok((next, next_log))
}

/// One RK4 step of the nonlinear normalized equation; the result is
/// re-hermitized and re-normalized to unit trace.
pub fn step_nonlinear(
    rho_n: &Operator2,
    h_plus: &Operator2,
    h_minus: &Operator2,
    dt: f64,
) -> Result<Operator2, Error> {
    let gamma_op = *h_minus * Complex64::new(0.0, 1.0);
    Ok(step_nonlinear_logged(rho_n, 0.0, h_plus, h_minus, &gamma_op, dt)?.0)
}

fn vec_add(a: &[Complex64; 2], b: &[Complex64; 2], s: f64) -> [Complex64; 2] {
    [a[0] + b[0] * s, a[1] + b[1] * s]
}

fn rhs_statevector(
    psi: &[Complex64; 2],
    h_plus: &Operator2,
    h_minus: &Operator2,
) -> [Complex64; 2] {
    // ⟨H₋⟩ = ⟨Ψ′|H₋|Ψ′⟩ subtracts the trace-changing part of the flow.
    let h_minus_psi = h_minus.apply(psi);
    let expectation = psi[0].conj() * h_minus_psi[0] + psi[1].conj() * h_minus_psi[1];
    let h_plus_psi = h_plus.apply(psi);
    [
        (h_plus_psi[0] + h_minus_psi[0] - expectation * psi[0]) * MINUS_I,
        (h_plus_psi[1] + h_minus_psi[1] - expectation * psi[1]) * MINUS_I,
    ]
}

/// One RK4 step of the state-vector equation; the result is re-normalized.
pub fn step_statevector(
    psi: &[Complex64; 2],
    h_plus: &Operator2,
    h_minus: &Operator2,
    dt: f64,
) -> [Complex64; 2] {
    let f = |p: &[Complex64; 2]| rhs_statevector(p, h_plus, h_minus);
    let k1 = f(psi);
    let k2 = f(&vec_add(psi, &k1, 0.5 * dt));
    let k3 = f(&vec_add(psi, &k2, 0.5 * dt));
    let k4 = f(&vec_add(psi, &k3, dt));
    let sixth = dt / 6.0;
    let mut next = [
        psi[0] + (k1[0] + (k2[0] + k3[0]) * 2.0 + k4[0]) * sixth,
        psi[1] + (k1[1] + (k2[1] + k3[1]) * 2.0 + k4[1]) * sixth,
    ];
    let norm = math::sqrt(next[0].norm_sqr() + next[1].norm_sqr());
    next[0] /= norm;
    next[1] /= norm;
    next
}

/// Extract the state vector of a (numerically) pure unit-trace density
/// matrix, fixing the phase so the dominant amplitude is real non-negative.
fn pure_state_vector(rho_n: &Operator2) -> [Complex64; 2] {
    let (r11, r22) = (rho_n.m11.re, rho_n.m22.re);
    let mut psi = if r11 >= r22 {
        let a = math::sqrt(r11.max(0.0));
        [Complex64::new(a, 0.0), rho_n.m21 / a]
    } else {
        let a = math::sqrt(r22.max(0.0));
        [rho_n.m12 / a, Complex64::new(a, 0.0)]
    };
    let norm = math::sqrt(psi[0].norm_sqr() + psi[1].norm_sqr());
    psi[0] /= norm;
    psi[1] /= norm;
    psi
}

struct Recorder {
    times: Vec<f64>,
    raw_states: Option<Vec<Operator2>>,
    normalized_states: Vec<Operator2>,
    observables: Vec<ObservableRecord>,
    h_plus: Operator2,
    gamma_op: Operator2,
    omega: f64,
}

impl Recorder {
    fn push(
        &mut self,
        t: f64,
        rho_norm: Operator2,
        trace_raw: f64,
        raw: Option<Operator2>,
    ) -> Result<(), Error> {
        let record = observable_record(
            t,
            &rho_norm,
            trace_raw,
            &self.h_plus,
            &self.gamma_op,
            self.omega,
        )?;
        self.times.push(t);
        self.normalized_states.push(rho_norm);
        if let (Some(store), Some(rho)) = (self.raw_states.as_mut(), raw) {
            store.push(rho);
        }
        self.observables.push(record);
        Ok(())
    }

    fn into_trajectory(self) -> StateTrajectory {
        StateTrajectory {
            times: self.times,
            raw_states: self.raw_states,
            normalized_states: self.normalized_states,
            observables: self.observables,
        }
    }
}

/// Propagate an initial state under the spec's Hamiltonian, recording
/// observables on the configured grid.
pub fn propagate(
    spec: &HamiltonianSpec,
    initial: &DensityState,
    cfg: &IntegratorConfig,
) -> Result<StateTrajectory, Error> {
    cfg.validate()?;
    spec.validate()?;
    let h_plus = build_hermitian(spec);
    let gamma_op = build_decay_operator(spec)?;
    let h_minus = gamma_op * MINUS_I;
    let n = cfg.steps();
    let dt = cfg.dt;
    let should_record = |k: usize| k.is_multiple_of(cfg.record_every) || k == n;

    let capacity = n / cfg.record_every + 2;
    let mut rec = Recorder {
        times: Vec::with_capacity(capacity),
        raw_states: matches!(cfg.form, EvolutionForm::LinearRaw)
            .then(|| Vec::with_capacity(capacity)),
        normalized_states: Vec::with_capacity(capacity),
        observables: Vec::with_capacity(capacity),
        h_plus,
        gamma_op,
        omega: spec.omega,
    };

    match cfg.form {
        EvolutionForm::LinearRaw => {
            let mut raw = initial.rho.hermitian_part();
            for k in 0..=n {
                let trace = raw.trace().re;
                if trace > RAW_TRACE_CEILING {
                    return Err(Error::Overflow { trace });
                }
                if should_record(k) {
                    let rho_norm = normalize(&raw)?;
                    rec.push(k as f64 * dt, rho_norm, trace, Some(raw))?;
                }
                if k < n {
                    raw = step_linear(&raw, &h_plus, &h_minus, dt)?;
                }
            }
        }
        EvolutionForm::NonlinearNormalized => {
            let trace0 = initial.rho.trace().re;
            if trace0 < EPS_TR {
                return Err(Error::TraceCollapse { trace: trace0 });
            }
            let mut rho_n = normalize(&initial.rho.hermitian_part())?;
            let mut log_tr = math::ln(trace0);
            for k in 0..=n {
                if should_record(k) {
                    rec.push(k as f64 * dt, rho_n, math::exp(log_tr), None)?;
                }
                if k < n {
                    (rho_n, log_tr) =
                        step_nonlinear_logged(&rho_n, log_tr, &h_plus, &h_minus, &gamma_op, dt)?;
                }
            }
        }
        EvolutionForm::StateVector => {
            let trace0 = initial.rho.trace().re;
            if trace0 < EPS_TR {
                return Err(Error::TraceCollapse { trace: trace0 });
            }
            let rho_n0 = normalize(&initial.rho.hermitian_part())?;
            let det = rho_n0.determinant().re;
            if math::abs(det) > 1e-8 {
                return Err(Error::FormMismatch(
                    "state-vector form needs a pure initial state",
                ));
            }
            let mut psi = pure_state_vector(&rho_n0);
            let mut log_tr = math::ln(trace0);
            for k in 0..=n {
                if should_record(k) {
                    rec.push(
                        k as f64 * dt,
                        Operator2::projector(&psi),
                        math::exp(log_tr),
                        None,
                    )?;
                }
                if k < n {
                    // Advance the log-trace with the same stages as the state.
                    let g = |p: &[Complex64; 2]| {
                        let gp = gamma_op.apply(p);
                        -2.0 * (p[0].conj() * gp[0] + p[1].conj() * gp[1]).re
                    };
                    let f = |p: &[Complex64; 2]| rhs_statevector(p, &h_plus, &h_minus);
                    let k1 = f(&psi);
                    let s1 = g(&psi);
                    let p2 = vec_add(&psi, &k1, 0.5 * dt);
                    let s2 = g(&p2);
                    let k2 = f(&p2);
                    let p3 = vec_add(&psi, &k2, 0.5 * dt);
                    let s3 = g(&p3);
                    let k3 = f(&p3);
                    let p4 = vec_add(&psi, &k3, dt);
                    let s4 = g(&p4);
                    let k4 = f(&p4);
                    let sixth = dt / 6.0;
                    psi = [
                        psi[0] + (k1[0] + (k2[0] + k3[0]) * 2.0 + k4[0]) * sixth,
                        psi[1] + (k1[1] + (k2[1] + k3[1]) * 2.0 + k4[1]) * sixth,
                    ];
                    let norm = math::sqrt(psi[0].norm_sqr() + psi[1].norm_sqr());
                    psi[0] /= norm;
                    psi[1] /= norm;
                    log_tr += (s1 + 2.0 * (s2 + s3) + s4) * sixth;
                }
            }
        }
    }
    Ok(rec.into_trajectory())
}
