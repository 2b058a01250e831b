//! Conservation laws along numerically propagated trajectories: trace rate,
//! determinant decay, purity rate (general and rank-2 factorized forms).

mod common;

use common::rng;
use nhtls_core::model::{build_decay_operator, HamiltonianSpec};
use nhtls_core::observables::{determinant_law_check, purity, purity_rate, purity_rate_factorized};
use nhtls_core::op2::Operator2;
use nhtls_core::propagator::{propagate, EvolutionForm, IntegratorConfig};
use nhtls_core::state::DensityState;
use num_complex::Complex64;

fn mixed_initial() -> DensityState {
    let rho = Operator2::new(
        Complex64::new(0.6, 0.0),
        Complex64::new(0.1, -0.05),
        Complex64::new(0.1, 0.05),
        Complex64::new(0.4, 0.0),
    );
    DensityState::new(rho, 0.0).unwrap()
}

fn raw_config(t_max: f64) -> IntegratorConfig {
    IntegratorConfig {
        form: EvolutionForm::LinearRaw,
        t_max,
        record_every: 1,
        ..Default::default()
    }
}

#[test]
fn trace_rate_law_holds_to_second_order_in_dt() {
    let spec = HamiltonianSpec::general(1.0, 0.5, 0.9, 0.01);
    let gamma_op = build_decay_operator(&spec).unwrap();
    let traj = propagate(&spec, &mixed_initial(), &raw_config(4.0)).unwrap();
    let raw = traj.raw_states.as_ref().unwrap();
    let dt = traj.times[1] - traj.times[0];
    let mut max_residual = 0.0_f64;
    for k in 1..raw.len() - 1 {
        let fd = (raw[k + 1].trace().re - raw[k - 1].trace().re) / (2.0 * dt);
        let law = -2.0 * (raw[k] * gamma_op).trace().re;
        max_residual = max_residual.max((fd - law).abs());
    }
    assert!(max_residual < 1e-3, "trace-rate residual {max_residual:e}");
}

#[test]
fn determinant_law_along_a_trajectory() {
    let spec = HamiltonianSpec::general(1.0, 0.5, 0.9, 0.01);
    let gamma_op = build_decay_operator(&spec).unwrap();
    let traj = propagate(&spec, &mixed_initial(), &raw_config(10.0)).unwrap();
    let rel = determinant_law_check(&traj, &gamma_op).unwrap();
    assert!(rel < 1e-6, "determinant-law relative error {rel:e}");

    // Frozen reference: ρ(0) = diag(1/2, 1/2), γ = 0.5, Ω = 1 ⇒ tr Γ̂ = 1 and
    // det ρ(1) = 0.25 e⁻².
    let half = DensityState::new(Operator2::from_real(0.5, 0.0, 0.0, 0.5), 0.0).unwrap();
    let traj = propagate(&spec, &half, &raw_config(1.0)).unwrap();
    let raw = traj.raw_states.as_ref().unwrap();
    let det_end = raw.last().unwrap().determinant().re;
    let expected = 0.25 * (-2.0_f64).exp();
    assert!((det_end - expected).abs() / expected < 1e-6);
    assert!((expected - 0.033_834).abs() < 1e-6);
}

#[test]
fn traceless_decay_operator_conserves_the_determinant() {
    // γ = 0 (with a₀ = 0) gives tr Γ̂ = 0 and a constant determinant.
    let mut spec = HamiltonianSpec::general(1.0, 0.0, 0.6, 0.3);
    spec.a0 = 0.0;
    let traj = propagate(&spec, &mixed_initial(), &raw_config(6.0)).unwrap();
    let raw = traj.raw_states.as_ref().unwrap();
    let det0 = raw[0].determinant().re;
    for rho in raw.iter() {
        assert!((rho.determinant().re - det0).abs() < 1e-7);
    }
}

#[test]
fn purity_rate_law_holds_to_second_order_in_dt() {
    let spec = HamiltonianSpec::general(1.0, 0.5, 0.9, 0.01);
    let gamma_op = build_decay_operator(&spec).unwrap();
    let traj = propagate(&spec, &mixed_initial(), &raw_config(4.0)).unwrap();
    let raw = traj.raw_states.as_ref().unwrap();
    let dt = traj.times[1] - traj.times[0];
    let mut max_residual = 0.0_f64;
    for k in 1..raw.len() - 1 {
        let fd = (purity(&raw[k + 1]).unwrap() - purity(&raw[k - 1]).unwrap()) / (2.0 * dt);
        let law = 4.0 * purity_rate(&raw[k], &gamma_op).unwrap();
        max_residual = max_residual.max((fd - law).abs());
    }
    assert!(max_residual < 1e-3, "purity-rate residual {max_residual:e}");
}

#[test]
fn purity_rate_factorization_holds_along_trajectories() {
    let mut sampler = rng(21);
    for _ in 0..5 {
        let spec = common::sample_general_spec(&mut sampler);
        let gamma_op = build_decay_operator(&spec).unwrap();
        let mut cfg = raw_config(5.0);
        cfg.record_every = 20;
        let traj = propagate(&spec, &mixed_initial(), &cfg).unwrap();
        for rho in traj.raw_states.as_ref().unwrap() {
            let a = purity_rate(rho, &gamma_op).unwrap();
            let b = purity_rate_factorized(rho, &gamma_op).unwrap();
            assert!(
                (a - b).abs() < 1e-10,
                "factorization gap {:e}",
                (a - b).abs()
            );
        }
    }
}

#[test]
fn bloch_identity_holds_at_every_recorded_step() {
    let mut sampler = rng(22);
    for _ in 0..5 {
        let spec = common::sample_general_spec(&mut sampler);
        let mut cfg = raw_config(6.0);
        cfg.record_every = 10;
        // Mixed and pure initial states both satisfy the identity; the pure
        // one additionally pins the sum to one.
        let traj = propagate(&spec, &mixed_initial(), &cfg).unwrap();
        for r in &traj.observables {
            assert!(r.bloch_residual() < 1e-8);
        }
        let pure = propagate(&spec, &DensityState::excited(), &cfg).unwrap();
        for r in &pure.observables {
            assert!(r.bloch_residual() < 1e-8);
            assert!((r.bloch_norm_sq - 1.0).abs() < 1e-7);
        }
    }
}
