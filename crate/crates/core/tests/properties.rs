//! Property tests for the algebraic invariants.

mod common;

use nhtls_core::analytic::exp_decay_solution;
use nhtls_core::model::HamiltonianSpec;
use nhtls_core::observables::{purity_rate, purity_rate_factorized, spin_averages};
use nhtls_core::op2::{max_abs_diff, pauli, split_hamiltonian, Operator2};
use nhtls_core::state::{normalize, DensityState, MixedEnsemble};
use num_complex::Complex64;
use proptest::prelude::*;

fn entry() -> impl Strategy<Value = Complex64> {
    (-10.0..10.0, -10.0..10.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn operator() -> impl Strategy<Value = Operator2> {
    (entry(), entry(), entry(), entry()).prop_map(|(a, b, c, d)| Operator2::new(a, b, c, d))
}

/// A physical density matrix from a Bloch vector inside the unit ball,
/// optionally scaled: `ρ = s(I + r·σ)/2`.
fn physical_rho() -> impl Strategy<Value = Operator2> {
    ((-1.0..1.0), (-1.0..1.0), (-1.0..1.0), (0.1..5.0)).prop_filter_map(
        "inside the Bloch ball",
        |(x, y, z, s): (f64, f64, f64, f64)| {
            if x * x + y * y + z * z >= 1.0 {
                return None;
            }
            Some(pauli::combination(x, y, z, 1.0) * (0.5 * s))
        },
    )
}

fn hermitian() -> impl Strategy<Value = Operator2> {
    ((-2.0..2.0), (-2.0..2.0), (-2.0..2.0), (-2.0..2.0))
        .prop_map(|(x, y, z, c)| pauli::combination(x, y, z, c))
}

proptest! {
    #[test]
    fn hermitian_plus_antihermitian_recovers_the_operator(a in operator()) {
        let sum = a.hermitian_part() + a.antihermitian_part();
        prop_assert!(max_abs_diff(&sum, &a) <= 1e-14 * (1.0 + a.max_abs()));
    }

    #[test]
    fn split_parts_have_the_right_symmetry(a in operator()) {
        let (h_plus, h_minus, gamma) = split_hamiltonian(&a);
        prop_assert!(h_plus.herm_deviation() <= 1e-13 * (1.0 + a.max_abs()));
        prop_assert!(gamma.herm_deviation() <= 1e-13 * (1.0 + a.max_abs()));
        let anti = h_minus + h_minus.adjoint();
        prop_assert!(anti.max_abs() <= 1e-13 * (1.0 + a.max_abs()));
    }

    #[test]
    fn ensemble_weights_sum_to_one(
        p in 0.0..1.0f64,
        s1 in 0.1..4.0f64,
        s2 in 0.1..4.0f64,
    ) {
        let a = DensityState::new(Operator2::from_real(s1, 0.0, 0.0, 0.0), 0.0).unwrap();
        let b = DensityState::new(Operator2::from_real(0.0, 0.0, 0.0, s2), 0.0).unwrap();
        let e = MixedEnsemble::new(vec![(p, a), (1.0 - p, b)]).unwrap();
        let w = e.weights().unwrap();
        prop_assert!((w.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        prop_assert!(w.iter().all(|x| (-1e-12..=1.0 + 1e-12).contains(x)));
    }

    #[test]
    fn oscillation_frequency_never_exceeds_the_critical_value(
        gamma in -2.0..2.0f64,
        beta in 0.0..1.0f64,
        a2_frac in -0.999..0.999f64,
    ) {
        let bound = ((1.0 + gamma * gamma) * (1.0 - beta * beta)).sqrt();
        let spec = HamiltonianSpec::general(1.0, gamma, beta, a2_frac * bound);
        prop_assert!(spec.w().is_ok());
        let omega_osc = spec.oscillation_frequency();
        let omega_c = spec.critical_frequency();
        prop_assert!(omega_osc <= omega_c + 1e-12);
        prop_assert!(omega_c <= 2.0 * spec.omega + 1e-12);
    }

    #[test]
    fn purity_rate_equals_its_factorized_form(rho in physical_rho(), g in hermitian()) {
        let a = purity_rate(&rho, &g).unwrap();
        let b = purity_rate_factorized(&rho, &g).unwrap();
        prop_assert!((a - b).abs() <= 1e-10);
    }

    #[test]
    fn averages_are_bounded_and_satisfy_the_bloch_identity(rho in physical_rho()) {
        let s = spin_averages(&rho).unwrap();
        for v in [s.sx, s.sy, s.sz] {
            prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&v));
        }
        let det = normalize(&rho).unwrap().determinant().re;
        prop_assert!((s.norm_sq() - (1.0 - 4.0 * det)).abs() <= 1e-8);
    }

    #[test]
    fn exp_decay_averages_do_not_depend_on_gamma(
        a2_mag in 0.05..0.9f64,
        negative in any::<bool>(),
        gamma_a in 0.1..2.0f64,
        gamma_b in 0.1..2.0f64,
        t in 0.0..8.0f64,
    ) {
        let a2 = if negative { -a2_mag } else { a2_mag };
        let (_, sa) = exp_decay_solution(a2, gamma_a, 1.0, t).unwrap();
        let (_, sb) = exp_decay_solution(a2, gamma_b, 1.0, t).unwrap();
        prop_assert!((sa.sy - sb.sy).abs() <= 1e-12);
        prop_assert!((sa.sz - sb.sz).abs() <= 1e-12);
        prop_assert_eq!(sa.sx, 0.0);
    }
}
