use num_complex::Complex64;

use super::{Circuit, Gate, GateKind};
use crate::{Error, QuantumState, Result};

/// Largest register the dense simulator accepts by default (16 GiB would be 30).
pub const DEFAULT_SIMULATION_QUBITS: usize = 26;

type Mat2 = [[Complex64; 2]; 2];

fn matrix(kind: GateKind) -> Mat2 {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let zero = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    match kind {
        GateKind::H => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]]
        }
        GateKind::X => [[zero, one], [one, zero]],
        GateKind::Z => [[one, zero], [zero, -one]],
        GateKind::Ry(t) => {
            let (s, co) = (0.5 * t).sin_cos();
            [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
        }
        GateKind::Rz(t) => [[Complex64::from_polar(1.0, -0.5 * t), zero], [zero, Complex64::from_polar(1.0, 0.5 * t)]],
        GateKind::Phase(t) => [[one, zero], [zero, Complex64::from_polar(1.0, t)]],
    }
}

/// Runs `circuit` on a copy of `init`.
pub fn simulate(circuit: &Circuit, init: &QuantumState) -> Result<QuantumState> {
    let mut state = init.clone();
    simulate_in_place(circuit, &mut state, DEFAULT_SIMULATION_QUBITS)?;
    Ok(state)
}

pub fn simulate_in_place(circuit: &Circuit, state: &mut QuantumState, max_qubits: usize) -> Result<()> {
    let n = circuit.num_qubits();
    if n > max_qubits {
        return Err(Error::SimulationCap {
            required: n,
            cap: max_qubits,
        });
    }
    if state.dim() != 1usize << n {
        return Err(Error::DimensionMismatch {
            expected: 1usize << n,
            found: state.dim(),
        });
    }
    if state.amplitudes().iter().any(|a| !a.is_finite()) {
        return Err(Error::NonFinite { gate: 0 });
    }
    let amps = state.amplitudes_mut();
    for gate in circuit.gates() {
        apply_gate(amps, n, gate);
    }
    if amps.iter().any(|a| !a.is_finite()) {
        return Err(Error::NonFinite { gate: circuit.len() });
    }
    Ok(())
}

pub(crate) fn apply_gate(amps: &mut [Complex64], n: usize, gate: &Gate) {
    let m = matrix(gate.kind);
    let t = gate.target;
    let tbit = 1usize << t;
    let diagonal = gate.kind.is_diagonal();
    if gate.controls.is_empty() {
        for block in (0..amps.len()).step_by(2 * tbit) {
            let (lo, hi) = amps[block..block + 2 * tbit].split_at_mut(tbit);
            apply_pairs(lo, hi, &m, diagonal);
        }
        return;
    }
    if let [c] = gate.controls[..] {
        // One control: whole runs of amplitudes share the control bit.
        let cbit = 1usize << c.qubit;
        let want = if c.positive { cbit } else { 0 };
        for block in (0..amps.len()).step_by(2 * tbit) {
            let (lo, hi) = amps[block..block + 2 * tbit].split_at_mut(tbit);
            if cbit > tbit {
                if block & cbit == want {
                    apply_pairs(lo, hi, &m, diagonal);
                }
            } else {
                let skip = usize::from(c.positive);
                for (lo, hi) in lo.chunks_mut(cbit).zip(hi.chunks_mut(cbit)).skip(skip).step_by(2) {
                    apply_pairs(lo, hi, &m, diagonal);
                }
            }
        }
        return;
    }
    let mut fixed: Vec<usize> = gate.controls.iter().map(|c| c.qubit).chain([t]).collect();
    fixed.sort_unstable();
    let ctrl_val: usize = gate
        .controls
        .iter()
        .filter(|c| c.positive)
        .map(|c| 1usize << c.qubit)
        .sum();
    // Indices below the lowest fixed bit form contiguous runs.
    let run = 1usize << fixed[0];
    let count = 1usize << (n - fixed.len());
    for r in (0..count).step_by(run) {
        let mut i0 = r;
        for &p in &fixed {
            i0 = ((i0 >> p) << (p + 1)) | (i0 & ((1usize << p) - 1));
        }
        i0 |= ctrl_val;
        let (left, right) = amps.split_at_mut(i0 + tbit);
        apply_pairs(&mut left[i0..i0 + run], &mut right[..run], &m, diagonal);
    }
}

fn apply_pairs(lo: &mut [Complex64], hi: &mut [Complex64], m: &Mat2, diagonal: bool) {
    if diagonal {
        apply_diagonal(lo, hi, m);
        return;
    }
    for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
        let (x, y) = (*a0, *a1);
        *a0 = m[0][0] * x + m[0][1] * y;
        *a1 = m[1][0] * x + m[1][1] * y;
    }
}

fn apply_diagonal(lo: &mut [Complex64], hi: &mut [Complex64], m: &Mat2) {
    if m[0][0] != Complex64::new(1.0, 0.0) {
        lo.iter_mut().for_each(|a| *a *= m[0][0]);
    }
    hi.iter_mut().for_each(|a| *a *= m[1][1]);
}

/// Dense unitary of a small circuit, column `j` being the image of `|j>`.
pub fn unitary(circuit: &Circuit) -> Result<Vec<Vec<Complex64>>> {
    let n = circuit.num_qubits();
    if n > 14 {
        return Err(Error::SimulationCap { required: n, cap: 14 });
    }
    (0..1usize << n)
        .map(|j| {
            let mut s = QuantumState::basis(1 << n, j);
            simulate_in_place(circuit, &mut s, n)?;
            Ok(s.into_amplitudes())
        })
        .collect()
}
