use std::f64::consts::PI;

use num_complex::Complex64;

use super::{grid_gaussian, Circuit, Control, Gate, GateKind, GridSpec, RegisterLayout};
use crate::lattice::ModelParams;
use crate::{Error, QuantumState, Result};

/// QFT with `<k|QFT|j> = exp(+2 pi i j k / 2^m) / 2^{m/2}` on `register`,
/// whose first entry is the least significant qubit.
pub fn qft_fragment(register: &[usize], num_qubits: usize) -> Result<Circuit> {
    let m = register.len();
    if m == 0 {
        return Err(Error::Layout("QFT register is empty".into()));
    }
    let mut c = Circuit::new(num_qubits);
    for i in (0..m).rev() {
        c.h(register[i])?;
        for l in (0..i).rev() {
            let angle = PI / (1u64 << (i - l)) as f64;
            c.push(Gate::controlled(GateKind::Phase(angle), register[i], vec![Control::pos(register[l])]))?;
        }
    }
    for i in 0..m / 2 {
        let (a, b) = (register[i], register[m - 1 - i]);
        c.cx(a, b)?;
        c.cx(b, a)?;
        c.cx(a, b)?;
    }
    Ok(c)
}

pub fn iqft_fragment(register: &[usize], num_qubits: usize) -> Result<Circuit> {
    Ok(qft_fragment(register, num_qubits)?.inverse())
}

/// Coherent displacement by `alpha` on an `m`-qubit register: QFT, one Rz
/// per qubit, inverse QFT. The packet moves by `sqrt(2) alpha sigma`.
///
/// The momentum index is read in two's complement, so the top qubit carries
/// the negated gradient angle. For integer shifts this coincides with the
/// plain gradient and the result is an exact cyclic shift.
pub fn displacement_fragment(grid: &GridSpec, alpha: f64) -> Result<Circuit> {
    let m = grid.m;
    let register: Vec<usize> = (0..m).collect();
    let x0 = grid.shift(alpha);
    let mut c = qft_fragment(&register, m)?;
    for l in 0..m {
        let mut phi = x0 * grid.dp() * (1u64 << l) as f64;
        if l == m - 1 {
            phi = -phi;
        }
        c.push(Gate::new(GateKind::Rz(phi), l))?;
    }
    c.append(&iqft_fragment(&register, m)?)?;
    Ok(c)
}

/// Conditions the Rz gates of `inner` on the electron register holding `site`.
/// Every other gate is left uncontrolled; the QFT pair cancels when the
/// condition fails.
pub fn controlled_fragment(inner: &Circuit, electron_register: &[usize], site: usize) -> Result<Circuit> {
    let sites = 1usize << electron_register.len();
    if site >= sites {
        return Err(Error::SiteOutOfRange { site, sites });
    }
    let controls: Vec<Control> = electron_register
        .iter()
        .enumerate()
        .map(|(b, &q)| Control {
            qubit: q,
            positive: (site >> b) & 1 == 1,
        })
        .collect();
    let gates = inner
        .gates()
        .iter()
        .map(|g| {
            let mut g = g.clone();
            if matches!(g.kind, GateKind::Rz(_)) {
                g.controls.extend_from_slice(&controls);
            }
            g
        })
        .collect();
    Circuit::from_gates(inner.num_qubits(), gates)
}

/// Loads nonnegative amplitudes with a binary tree of uniformly controlled
/// Ry rotations, most significant qubit first.
pub fn amplitude_loader(amplitudes: &[f64]) -> Result<Circuit> {
    let len = amplitudes.len();
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::InvalidParams(format!("loader needs 2^m >= 2 amplitudes, got {len}")));
    }
    if amplitudes.iter().any(|a| !(*a >= 0.0) || !a.is_finite()) {
        return Err(Error::InvalidParams("loader amplitudes must be finite and nonnegative".into()));
    }
    let m = len.trailing_zeros() as usize;
    let weights: Vec<f64> = amplitudes.iter().map(|a| a * a).collect();
    let mut c = Circuit::new(m);
    for level in 0..m {
        let q = m - 1 - level;
        let block = len >> level;
        for prefix in 0..1usize << level {
            let start = prefix * block;
            let p0: f64 = weights[start..start + block / 2].iter().sum();
            let p1: f64 = weights[start + block / 2..start + block].iter().sum();
            if p0 + p1 == 0.0 {
                continue;
            }
            let theta = 2.0 * p1.sqrt().atan2(p0.sqrt());
            let controls = (0..level)
                .map(|b| Control {
                    qubit: m - level + b,
                    positive: (prefix >> b) & 1 == 1,
                })
                .collect();
            c.push(Gate::controlled(GateKind::Ry(theta), q, controls))?;
        }
    }
    Ok(c)
}

/// Loader for the grid Gaussian of width `sigma` centred at `centre`.
pub fn gaussian_loader(grid: &GridSpec, centre: f64) -> Result<Circuit> {
    amplitude_loader(&grid_gaussian(grid, centre))
}

/// Hadamards on the electron register, `u0` on every phonon register, then one
/// controlled displacement by `-alpha` per site.
pub fn build_lf_circuit(params: &ModelParams, alpha: f64, grid: &GridSpec, u0: &Circuit) -> Result<Circuit> {
    if u0.num_qubits() != grid.m {
        return Err(Error::Layout(format!(
            "u0 acts on {} qubits but phonon registers have {}",
            u0.num_qubits(),
            grid.m
        )));
    }
    let layout = RegisterLayout::new(params.sites, grid.m)?;
    let total = layout.total_qubits();
    let electrons: Vec<usize> = layout.electron_register().collect();
    let mut c = Circuit::new(total);
    for &q in &electrons {
        c.h(q)?;
    }
    for site in 0..params.sites {
        let reg: Vec<usize> = layout.phonon_register(site).collect();
        c.append(&u0.remap(&reg, total)?)?;
    }
    let shift = displacement_fragment(grid, -alpha)?;
    for site in 0..params.sites {
        let reg: Vec<usize> = layout.phonon_register(site).collect();
        c.append(&controlled_fragment(&shift.remap(&reg, total)?, &electrons, site)?)?;
    }
    Ok(c)
}

/// `|<LF_grid|state>|^2` against the grid-encoded trial state, whose occupied
/// site holds a Gaussian centred at `-sqrt(2) alpha sigma`.
pub fn fidelity_grid_lf(state: &QuantumState, params: &ModelParams, alpha: f64, grid: &GridSpec) -> Result<f64> {
    let layout = RegisterLayout::new(params.sites, grid.m)?;
    let dim = 1usize << layout.total_qubits();
    if state.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: state.dim(),
        });
    }
    let vacuum = grid_gaussian(grid, 0.0);
    let displaced = grid_gaussian(grid, -grid.shift(alpha));
    let k_e = layout.electron_qubits();
    let mask = grid.points() - 1;
    let weight = 1.0 / (params.sites as f64).sqrt();
    let mut acc = Complex64::new(0.0, 0.0);
    for (idx, a) in state.amplitudes().iter().enumerate() {
        if a.re == 0.0 && a.im == 0.0 {
            continue;
        }
        let electron = idx & ((1 << k_e) - 1);
        let mut rest = idx >> k_e;
        let mut amp = weight;
        for site in 0..params.sites {
            let j = rest & mask;
            rest >>= grid.m;
            amp *= if site == electron { displaced[j] } else { vacuum[j] };
        }
        acc += a * amp;
    }
    Ok(acc.norm_sqr())
}
