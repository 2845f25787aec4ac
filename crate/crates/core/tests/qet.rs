use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use warmstart::circuit::{grid_gaussian, simulate, unitary, GridSpec};
use warmstart::qet::{
    approx_gaussian_poly, conjugate_phases, plan_amplification, prepare_vacuum, qsp_real_circuit, signal_value,
    sin_block_encoding, solve_phase_factors, AmplificationPlan, ChebyshevPolynomial, PhaseConvention, PhaseFactorSet,
    SAFETY_SCALE,
};
use warmstart::QuantumState;

fn gaussian_phases(w: f64, d: usize) -> (ChebyshevPolynomial, PhaseFactorSet) {
    let p = approx_gaussian_poly(w, d).unwrap().poly.scaled(SAFETY_SCALE);
    let phases = solve_phase_factors(&p, 1e-10).unwrap();
    (p, phases)
}

fn max_unitarity_defect(u: &[Vec<Complex64>]) -> f64 {
    let n = u.len();
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            let dot: Complex64 = (0..n).map(|k| u[a][k].conj() * u[b][k]).sum();
            let want = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((dot - want).norm());
        }
    }
    worst
}

#[test]
fn block_encoding_diagonal() {
    for m in 1..=7 {
        let u = unitary(&sin_block_encoding(m).unwrap()).unwrap();
        for y in 0..1usize << m {
            let want = (2.0 * y as f64 / (1u64 << m) as f64 - 1.0).sin();
            assert!((u[y][y] - Complex64::new(want, 0.0)).norm() < 1e-12, "m {m} y {y}");
        }
        assert!(u[1 << (m - 1)][1 << (m - 1)].norm() < 1e-15);
        if m <= 5 {
            assert!(max_unitarity_defect(&u) < 1e-12);
        }
    }
    let u = unitary(&sin_block_encoding(3).unwrap()).unwrap();
    assert!((u[0][0].re + 0.841_470_984_807_896_5).abs() < 1e-12);
}

#[test]
fn gaussian_approximant_accuracy() {
    let a22 = approx_gaussian_poly(6.0, 22).unwrap();
    let a8 = approx_gaussian_poly(6.0, 8).unwrap();
    assert!(a22.meets(2e-2), "{}", a22.sup_error);
    assert!(a8.sup_error > a22.sup_error);
    assert!(a22.poly.coeffs().iter().skip(1).step_by(2).all(|&c| c == 0.0));
    assert!(a22.poly.max_abs(20001) <= 1.0);
    let flat = approx_gaussian_poly(1e-4, 2).unwrap();
    assert!(flat.sup_error < 1e-6);
}

#[test]
fn trivial_phase_sets() {
    let x = ChebyshevPolynomial::new(vec![0.0, 1.0]).unwrap();
    let zero = PhaseFactorSet::symmetric(vec![0.0, 0.0]).unwrap();
    assert!(zero.reconstruction_error(&x) < 1e-15);
    let solved = solve_phase_factors(&x, 1e-10).unwrap();
    assert!(solved.reconstruction_error(&x) < 1e-10);

    let t2 = ChebyshevPolynomial::new(vec![0.0, 0.0, 1.0]).unwrap();
    assert!(PhaseFactorSet::symmetric(vec![0.0; 3]).unwrap().reconstruction_error(&t2) < 1e-15);
    assert!(solve_phase_factors(&t2, 1e-10).unwrap().reconstruction_error(&t2) < 1e-10);
}

#[test]
fn gaussian_phase_solve() {
    let (p, phases) = gaussian_phases(6.0, 22);
    assert_eq!(phases.degree, 22);
    assert!(phases.reconstruction_error(&p) < 1e-8);
    assert!(phases.symmetry_defect() < 1e-10);
    for k in 0..=100 {
        let x = k as f64 / 100.0;
        assert!((phases.real_polynomial(x) - phases.real_polynomial(-x)).abs() < 1e-10);
    }
}

#[test]
fn phase_solver_rejects_bad_input() {
    let mixed = ChebyshevPolynomial::new(vec![0.1, 0.2, 0.3]).unwrap();
    assert!(solve_phase_factors(&mixed, 1e-10).is_err());
    let big = ChebyshevPolynomial::new(vec![0.5, 0.0, 0.8]).unwrap();
    assert!(solve_phase_factors(&big, 1e-10).is_err());
}

#[test]
fn conjugate_set_rules() {
    let set = PhaseFactorSet::new(PhaseConvention::Varphi, vec![0.1, 0.2, 0.3]).unwrap();
    let c = conjugate_phases(&set);
    assert_eq!(c.angles, vec![0.1 + PI, 0.2 + PI, 0.3]);
    let twice = conjugate_phases(&c);
    for (a, b) in twice.angles.iter().zip(&set.angles) {
        let diff = (a - b).rem_euclid(2.0 * PI);
        assert!(diff < 1e-12 || 2.0 * PI - diff < 1e-12);
    }

    let (_, phases) = gaussian_phases(6.0, 10);
    let v = phases.to_varphi();
    let minus = conjugate_phases(&v);
    let negated = PhaseFactorSet::new(PhaseConvention::Varphi, v.angles.iter().map(|a| -a).collect()).unwrap();
    for k in 0..=50 {
        let x = -1.0 + k as f64 / 25.0;
        let p = v.reconstruct(x);
        // The shift rule alone reproduces the real part of the conjugate;
        // negating every angle reproduces the full conjugate.
        assert!((minus.reconstruct(x).re - p.conj().re).abs() < 1e-12);
        assert!((negated.reconstruct(x) - p.conj()).norm() < 1e-12);
    }
}

#[test]
fn qsp_block_is_half_the_polynomial() {
    let m = 3;
    let be = sin_block_encoding(m).unwrap();
    for d in [2, 4, 6, 8, 10] {
        let (p, phases) = gaussian_phases(4.0, d);
        let c = qsp_real_circuit(&phases, &be).unwrap();
        assert_eq!(c.num_qubits(), m + 3);
        assert_eq!(c.active_qubits().len(), m + 3);
        let u = unitary(&c).unwrap();
        for y in 0..1usize << m {
            let want = 0.5 * p.eval(signal_value(y, m));
            assert!((u[y][y] - Complex64::new(want, 0.0)).norm() < 1e-8, "d {d} y {y}");
            for z in 0..1usize << m {
                if z != y {
                    assert!(u[y][z].norm() < 1e-12);
                }
            }
        }
        if d == 2 {
            assert!(max_unitarity_defect(&u) < 1e-12);
        }
    }
}

#[test]
fn qsp_block_for_constant() {
    let phases = PhaseFactorSet::symmetric(vec![0.0]).unwrap();
    let u = unitary(&qsp_real_circuit(&phases, &sin_block_encoding(2).unwrap()).unwrap()).unwrap();
    for y in 0..4 {
        assert!((u[y][y] - Complex64::new(0.5, 0.0)).norm() < 1e-14);
    }
}

#[test]
fn amplification_plans() {
    let constant = ChebyshevPolynomial::new(vec![0.7]).unwrap();
    let plan = plan_amplification(&constant, 5).unwrap();
    assert!((plan.p_succ - 0.25).abs() < 1e-15);
    assert_eq!(plan.m_prime, 1);
    assert_eq!(AmplificationPlan::rounds_for(plan.p_succ), 1);

    let (p, _) = gaussian_phases(6.0, 22);
    let mut previous: Option<f64> = None;
    for m in 6..=12 {
        let plan = plan_amplification(&p, m).unwrap();
        assert!((plan.p_succ - 0.0369).abs() < 0.05 * 0.0369, "m {m}: {}", plan.p_succ);
        assert_eq!(plan.m_prime, 4);
        if let Some(prev) = previous {
            assert!((plan.p_succ / prev - 1.0f64).abs() < 0.01);
        }
        previous = Some(plan.p_succ);
    }
    let zero = ChebyshevPolynomial::new(vec![0.0, 0.0, 0.0]).unwrap();
    assert!(plan_amplification(&zero, 4).is_err());
}

fn post_selected(state: &QuantumState, m: usize) -> (Vec<Complex64>, f64) {
    let n = 1usize << m;
    let good: Vec<Complex64> = state.amplitudes()[..n].to_vec();
    let prob: f64 = good.iter().map(|a| a.norm_sqr()).sum();
    (good.into_iter().map(|a| a / prob.sqrt()).collect(), prob)
}

#[test]
fn vacuum_preparation_end_to_end() {
    for m in [4, 5, 6] {
        let prep = prepare_vacuum(m, 6.0, 22).unwrap();
        assert_eq!(prep.circuit.active_qubits().len(), m + 3);
        let out = simulate(&prep.circuit, &QuantumState::zero_qubits(m + 3)).unwrap();
        let (state, prob) = post_selected(&out, m);
        let bound = prep.schedule.final_amplitude_bound();
        let formula = ((2 * prep.plan.m_prime + 1) as f64 * prep.plan.p_succ.sqrt().asin()).sin();
        assert!(prob.sqrt() >= bound.min(formula) - 1e-6, "m {m}: {prob}");
        assert!(prob > 1.0 - 1e-9, "m {m}: exact amplification left {prob}");

        let vacuum = grid_gaussian(&GridSpec::new(m, 6.0, 1.0).unwrap(), 0.0);
        let overlap: Complex64 = state.iter().zip(&vacuum).map(|(a, v)| a.conj() * v).sum();
        assert!(overlap.norm_sqr() >= 0.99, "m {m}: {}", overlap.norm_sqr());
        let phase = overlap / overlap.norm();
        let dist = state
            .iter()
            .zip(&vacuum)
            .map(|(a, v)| (a * phase - v).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(dist <= 2.0 * prep.approximation.sup_error + 1e-6, "m {m}: {dist}");
    }
}

#[test]
fn amplification_round_structure() {
    let prep = prepare_vacuum(4, 6.0, 22).unwrap();
    let per_round = (prep.circuit.len() - prep.stage.len()) / prep.schedule.rounds;
    assert_eq!(per_round, 2 * prep.stage.len() + 6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn solved_phases_are_symmetric_and_even(coeffs in prop::collection::vec(-1.0..1.0f64, 2..6)) {
        let mut full = Vec::new();
        for c in &coeffs {
            full.push(*c);
            full.push(0.0);
        }
        full.pop();
        let raw = ChebyshevPolynomial::new(full).unwrap();
        let peak = raw.max_abs(20001);
        prop_assume!(peak > 1e-3);
        let p = raw.scaled(0.9 / peak);
        let phases = solve_phase_factors(&p, 1e-9).unwrap();
        prop_assert!(phases.symmetry_defect() < 1e-10);
        for k in 0..=20 {
            let x = k as f64 / 20.0;
            prop_assert!((phases.real_polynomial(x) - phases.real_polynomial(-x)).abs() < 1e-10);
        }
    }
}
