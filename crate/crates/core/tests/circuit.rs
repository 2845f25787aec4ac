use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use warmstart::circuit::{
    build_lf_circuit, controlled_fragment, displacement_fragment, fidelity_grid_lf, gaussian_loader, grid_gaussian,
    qft_fragment, simulate, unitary, Circuit, Control, Gate, GateKind, GridSpec, RegisterLayout,
};
use warmstart::lattice::ModelParams;
use warmstart::QuantumState;

fn fidelity(a: &[Complex64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum::<Complex64>().norm_sqr()
}

fn real_state(v: &[f64]) -> QuantumState {
    QuantumState::from_real(v).unwrap()
}

#[test]
fn qft_matches_dft_matrix() {
    for m in 1..=6 {
        let dim = 1usize << m;
        let reg: Vec<usize> = (0..m).collect();
        let u = unitary(&qft_fragment(&reg, m).unwrap()).unwrap();
        let mut worst: f64 = 0.0;
        for (j, col) in u.iter().enumerate() {
            for (k, v) in col.iter().enumerate() {
                let want = Complex64::from_polar(1.0 / (dim as f64).sqrt(), 2.0 * PI * (j * k) as f64 / dim as f64);
                worst = worst.max((v - want).norm());
            }
        }
        assert!(worst < 1e-12, "m = {m}: {worst}");
    }
}

#[test]
fn qft_of_zero_is_uniform() {
    let out = simulate(&qft_fragment(&[0, 1, 2], 3).unwrap(), &QuantumState::zero_qubits(3)).unwrap();
    for a in out.amplitudes() {
        assert!((a - Complex64::new(8f64.sqrt().recip(), 0.0)).norm() < 1e-15);
    }
}

#[test]
fn integer_shift_is_cyclic_permutation() {
    let grid = GridSpec::new(5, 6.0, 1.0).unwrap();
    for s in [-3i64, 1, 2, 7] {
        let alpha = s as f64 * grid.dx() / (2f64.sqrt() * grid.sigma);
        let u = unitary(&displacement_fragment(&grid, alpha).unwrap()).unwrap();
        let dim = grid.points() as i64;
        let phase = u[0][s.rem_euclid(dim) as usize];
        assert!((phase.norm() - 1.0).abs() < 1e-12);
        for (j, col) in u.iter().enumerate() {
            let target = (j as i64 + s).rem_euclid(dim) as usize;
            for (i, v) in col.iter().enumerate() {
                let want = if i == target { phase } else { Complex64::new(0.0, 0.0) };
                assert!((v - want).norm() < 1e-12, "s {s}: <{i}|U|{j}>");
            }
        }
    }
}

#[test]
fn displaced_gaussian_matches_closed_form() {
    let grid = GridSpec::new(6, 8.0, 1.0).unwrap();
    for alpha in [1.0, -0.37, 1.9] {
        let out = simulate(&displacement_fragment(&grid, alpha).unwrap(), &real_state(&grid_gaussian(&grid, 0.0))).unwrap();
        let f = fidelity(out.amplitudes(), &grid_gaussian(&grid, grid.shift(alpha)));
        assert!(f >= 0.999, "alpha {alpha}: {f}");
    }
}

#[test]
fn displacements_compose() {
    let grid = GridSpec::new(6, 8.0, 1.0).unwrap();
    let input = real_state(&grid_gaussian(&grid, -0.4));
    for (a, b) in [(0.3, 0.45), (-0.8, 1.1), (0.71, 0.71)] {
        let two = displacement_fragment(&grid, a)
            .unwrap()
            .then(&displacement_fragment(&grid, b).unwrap())
            .unwrap();
        let one = displacement_fragment(&grid, a + b).unwrap();
        let x = simulate(&two, &input).unwrap();
        let y = simulate(&one, &input).unwrap();
        let f = x.inner(&y).unwrap().norm_sqr();
        assert!(f >= 1.0 - 1e-9, "{a} + {b}: {f}");
    }
}

fn embedded_shift(grid: &GridSpec, alpha: f64, electrons: usize) -> Circuit {
    let reg: Vec<usize> = (electrons..electrons + grid.m).collect();
    displacement_fragment(grid, alpha).unwrap().remap(&reg, electrons + grid.m).unwrap()
}

#[test]
fn inactive_controls_give_identity_matrix() {
    let grid = GridSpec::new(3, 6.0, 1.0).unwrap();
    let inner = embedded_shift(&grid, 0.83, 2);
    let c = controlled_fragment(&inner, &[0, 1], 2).unwrap();
    let u = unitary(&c).unwrap();
    let u_inner = unitary(&inner).unwrap();
    for (j, col) in u.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            let want = if j & 3 == 2 {
                if i & 3 == 2 { u_inner[j][i] } else { Complex64::new(0.0, 0.0) }
            } else if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            assert!((v - want).norm() < 1e-12, "<{i}|U|{j}>");
        }
    }
    for g in c.gates() {
        let is_rz = matches!(g.kind, GateKind::Rz(_));
        assert_eq!(g.controls.iter().any(|c| c.qubit < 2), is_rz);
    }
}

#[test]
fn superposed_control_matches_block_oracle() {
    let grid = GridSpec::new(4, 6.0, 1.0).unwrap();
    let inner = embedded_shift(&grid, 0.6, 1);
    let c = controlled_fragment(&inner, &[0], 1).unwrap();
    let g = grid_gaussian(&grid, 0.0);
    let mut input = vec![0.0; 32];
    for (j, a) in g.iter().enumerate() {
        input[j << 1] = a / 2f64.sqrt();
        input[(j << 1) | 1] = a / 2f64.sqrt();
    }
    let out = simulate(&c, &real_state(&input)).unwrap();
    let moved = simulate(&inner, &real_state(&input)).unwrap();
    for (idx, a) in out.amplitudes().iter().enumerate() {
        let want = if idx & 1 == 1 {
            moved.amplitudes()[idx]
        } else {
            Complex64::new(input[idx], 0.0)
        };
        assert!((a - want).norm() < 1e-12);
    }
}

#[test]
fn lf_circuit_layout_and_alpha_zero() {
    let grid = GridSpec::new(3, 6.0, 1.0).unwrap();
    let params = ModelParams::new(1.0, 1.0, 1.0, 4, 4).unwrap();
    let u0 = gaussian_loader(&grid, 0.0).unwrap();
    let c = build_lf_circuit(&params, 0.0, &grid, &u0).unwrap();
    assert_eq!(c.num_qubits(), 2 + 4 * 3);
    let out = simulate(&c, &QuantumState::zero_qubits(14)).unwrap();
    assert!((fidelity_grid_lf(&out, &params, 0.0, &grid).unwrap() - 1.0).abs() < 1e-10);
    assert_eq!(RegisterLayout::new(4, 6).unwrap().total_qubits(), 26);
    assert!(build_lf_circuit(&params, 0.0, &GridSpec::new(4, 6.0, 1.0).unwrap(), &u0).is_err());
}

#[test]
fn lf_circuit_two_sites() {
    for (m, alpha) in [(5, 1.0), (6, 0.5)] {
        let grid = GridSpec {
            m,
            ..GridSpec::for_alpha(alpha)
        };
        let params = ModelParams::new(1.0, 1.0, 1.0, 2, 4).unwrap();
        let u0 = gaussian_loader(&grid, 0.0).unwrap();
        let c = build_lf_circuit(&params, alpha, &grid, &u0).unwrap();
        let out = simulate(&c, &QuantumState::zero_qubits(c.num_qubits())).unwrap();
        let f = fidelity_grid_lf(&out, &params, alpha, &grid).unwrap();
        assert!(f >= if m == 6 { 0.999 } else { 0.995 }, "m {m} alpha {alpha}: {f}");
    }
}

fn analytic_lf(params: &ModelParams, alpha: f64, grid: &GridSpec) -> Vec<f64> {
    let vac = grid_gaussian(grid, 0.0);
    let dis = grid_gaussian(grid, -grid.shift(alpha));
    let mut v = Vec::new();
    for j1 in 0..grid.points() {
        for j0 in 0..grid.points() {
            v.push(dis[j0] * vac[j1] / 2f64.sqrt());
            v.push(vac[j0] * dis[j1] / 2f64.sqrt());
        }
    }
    let _ = params;
    v
}

#[test]
fn fidelity_oracle_extremes() {
    let grid = GridSpec::new(3, 6.0, 1.0).unwrap();
    let params = ModelParams::new(1.0, 1.0, 1.0, 2, 4).unwrap();
    let v = analytic_lf(&params, 0.8, &grid);
    assert!((fidelity_grid_lf(&real_state(&v), &params, 0.8, &grid).unwrap() - 1.0).abs() < 1e-12);
    let mut w: Vec<f64> = (0..v.len()).map(|i| ((i * 7919) % 13) as f64 - 6.0).collect();
    let proj: f64 = w.iter().zip(&v).map(|(a, b)| a * b).sum();
    w.iter_mut().zip(&v).for_each(|(a, b)| *a -= proj * b);
    assert!(fidelity_grid_lf(&real_state(&w), &params, 0.8, &grid).unwrap() < 1e-24);
}

fn arb_gate(n: usize) -> impl Strategy<Value = Gate> {
    let kind = prop_oneof![
        Just(GateKind::H),
        Just(GateKind::X),
        Just(GateKind::Z),
        (-7.0..7.0f64).prop_map(GateKind::Ry),
        (-7.0..7.0f64).prop_map(GateKind::Rz),
        (-7.0..7.0f64).prop_map(GateKind::Phase),
    ];
    (kind, Just(()).prop_perturb(move |_, mut rng| {
        let mut qubits: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            qubits.swap(i, (rng.next_u32() as usize) % (i + 1));
        }
        let k = (rng.next_u32() as usize) % n.min(4);
        let controls = qubits[1..=k]
            .iter()
            .map(|&q| Control {
                qubit: q,
                positive: rng.next_u32() & 1 == 1,
            })
            .collect::<Vec<_>>();
        (qubits[0], controls)
    }))
        .prop_map(|(kind, (target, controls))| Gate::controlled(kind, target, controls))
}

fn arb_circuit() -> impl Strategy<Value = Circuit> {
    (1usize..=12).prop_flat_map(|n| {
        prop::collection::vec(arb_gate(n), 0..=200).prop_map(move |g| Circuit::from_gates(n, g).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn simulation_preserves_norm(c in arb_circuit(), seed in any::<u64>()) {
        let dim = 1usize << c.num_qubits();
        let raw: Vec<Complex64> = (0..dim)
            .map(|i| {
                let h = (i as u64 ^ seed).wrapping_mul(0x9E37_79B9_7F4A_7C15);
                Complex64::new((h >> 40) as f64 - 8e6, (h & 0xFF_FFFF) as f64 - 8e6)
            })
            .collect();
        let init = QuantumState::from_amplitudes(raw).unwrap();
        let out = simulate(&c, &init).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-10);
        let back = simulate(&c.inverse(), &out).unwrap();
        let dev = back.amplitudes().iter().zip(init.amplitudes()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(dev < 1e-10);
    }

    #[test]
    fn text_round_trip(c in arb_circuit()) {
        let back: Circuit = c.to_string().parse().unwrap();
        prop_assert_eq!(back, c);
    }
}
