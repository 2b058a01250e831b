//! Shared helpers for the integration tests: an independent
//! matrix-exponential evolution oracle and seeded parameter samplers.

#![allow(dead_code)]

use nhtls_core::model::{build_scenario, HamiltonianSpec, Scenario};
use nhtls_core::op2::Operator2;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `e^{-iHt}` for an arbitrary complex 2×2 matrix via the closed form of the
/// exponential in the Pauli decomposition `H = c₀I + c·σ`:
/// `e^{-iHt} = e^{-ic₀t}[cos(λt)I - i sin(λt)(c·σ)/λ]`, `λ = √(c·c)`.
pub fn evolution_operator(h: &Operator2, t: f64) -> Operator2 {
    let c0 = (h.m11 + h.m22) * 0.5;
    let cz = (h.m11 - h.m22) * 0.5;
    let cx = (h.m12 + h.m21) * 0.5;
    let cy = (h.m12 - h.m21) * 0.5 * Complex64::i();
    let lambda_sq = cx * cx + cy * cy + cz * cz;
    let lambda = lambda_sq.sqrt();
    let phase = (-Complex64::i() * c0 * t).exp();
    let arg = lambda * t;
    // sin(λt)/λ with a series fallback at the nilpotent point λ → 0.
    let (cos_term, sinc_term) = if arg.norm() < 1e-6 {
        (
            c(1.0, 0.0) - arg * arg * 0.5,
            (c(1.0, 0.0) - arg * arg / 6.0) * t,
        )
    } else {
        (arg.cos(), arg.sin() / lambda)
    };
    let pauli_part = Operator2::new(cz, cx - Complex64::i() * cy, cx + Complex64::i() * cy, -cz);
    let unit = Operator2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
    (unit * cos_term + pauli_part * (-Complex64::i() * sinc_term)) * phase
}

/// Exact raw evolution `ρ(t) = V ρ(0) V†`, `V = e^{-iHt}` — the independent
/// oracle every other evolution path is checked against.
pub fn evolve_exact(h: &Operator2, rho0: &Operator2, t: f64) -> Operator2 {
    let v = evolution_operator(h, t);
    v * *rho0 * v.adjoint()
}

pub fn sample_general_spec<R: Rng>(rng: &mut R) -> HamiltonianSpec {
    loop {
        let gamma: f64 = rng.gen_range(0.05..1.5);
        let beta: f64 = rng.gen_range(0.0..0.95);
        if beta * beta + gamma * gamma < 0.05 {
            continue;
        }
        let bound = 0.9 * ((1.0 + gamma * gamma) * (1.0 - beta * beta)).sqrt();
        let a2 = rng.gen_range(-bound..bound);
        return HamiltonianSpec::general(1.0, gamma, beta, a2);
    }
}

pub fn sample_exp_spec<R: Rng>(rng: &mut R) -> HamiltonianSpec {
    let gamma = rng.gen_range(0.6..1.2);
    let magnitude = rng.gen_range(0.15..0.9 * gamma);
    let a2 = if rng.gen_bool(0.5) {
        magnitude
    } else {
        -magnitude
    };
    let base = HamiltonianSpec::general(1.0, gamma, 0.0, a2);
    build_scenario(Scenario::ConservedEnergyExp, base).expect("valid exp spec")
}

pub fn sample_poly_spec<R: Rng>(rng: &mut R) -> HamiltonianSpec {
    let gamma = rng.gen_range(0.2..1.2);
    let base = HamiltonianSpec::general(1.0, gamma, 0.0, 0.0);
    build_scenario(Scenario::ConservedEnergyPoly, base).expect("valid poly spec")
}

pub fn sample_vanishing_spec<R: Rng>(rng: &mut R) -> HamiltonianSpec {
    let gamma = rng.gen_range(0.1..1.2);
    let beta = rng.gen_range(0.0..0.95);
    let base = HamiltonianSpec::general(1.0, gamma, beta, 0.0);
    build_scenario(Scenario::VanishingPopulation, base).expect("valid vp spec")
}

pub fn sample_dephasing_spec<R: Rng>(rng: &mut R) -> HamiltonianSpec {
    let gamma = rng.gen_range(0.2..3.0);
    let base = HamiltonianSpec::general(1.0, gamma, 0.0, 0.0);
    build_scenario(Scenario::Dephasing, base).expect("valid dephasing spec")
}

/// Returns the resolved spec together with the sampled mixing parameter `p`.
pub fn sample_purification_spec<R: Rng>(rng: &mut R) -> (HamiltonianSpec, f64) {
    let gamma = rng.gen_range(0.4..1.2);
    let a2 = rng.gen_range(-0.8..0.8);
    let p = rng.gen_range(0.1..0.9);
    let base = HamiltonianSpec::general(1.0, gamma, 0.0, a2);
    let spec = build_scenario(Scenario::Purification { p }, base).expect("valid purification spec");
    (spec, p)
}
