use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::phases::{solve_phase_factors, PhaseFactorSet};
use super::poly::{approx_gaussian_poly, ChebyshevPolynomial, GaussianApproximation};
use crate::circuit::{Circuit, Control, Gate, GateKind};
use crate::{Error, Result};

/// Safety factor applied to the approximant before phase solving.
pub const SAFETY_SCALE: f64 = 0.999;
/// Reconstruction tolerance used when assembling the vacuum preparation.
pub const PHASE_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_DEGREE: usize = 22;

/// Signal value encoded for grid index `y`.
pub fn signal_value(y: usize, m: usize) -> f64 {
    (2.0 * y as f64 / (1u64 << m) as f64 - 1.0).sin()
}

/// `(1, 1, 0)` block-encoding of `diag(sin(2y/2^m - 1))` on data qubits
/// `0..m` with the ancilla on qubit `m`.
pub fn sin_block_encoding(m: usize) -> Result<Circuit> {
    if m == 0 {
        return Err(Error::InvalidParams("block-encoding needs m >= 1".into()));
    }
    let anc = m;
    let mut c = Circuit::new(m + 1);
    c.push(Gate::new(GateKind::Ry(-2.0), anc))?;
    for j in 0..m {
        let angle = 2.0 * 2f64.powi(j as i32 + 1 - m as i32);
        c.push(Gate::controlled(GateKind::Ry(angle), anc, vec![Control::pos(j)]))?;
    }
    c.x(anc)?;
    Ok(c)
}

/// Qubit roles in the `m + 3`-qubit QSP circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QspQubits {
    pub m: usize,
}

impl QspQubits {
    pub fn ancilla(&self) -> usize {
        self.m
    }

    /// Selects `U_sin` or its adjoint.
    pub fn branch(&self) -> usize {
        self.m + 1
    }

    /// LCU qubit; its `|1>` branch runs the conjugate sequence.
    pub fn lcu(&self) -> usize {
        self.m + 2
    }

    pub fn total(&self) -> usize {
        self.m + 3
    }
}

fn projector_phase(c: &mut Circuit, q: QspQubits, varphi: f64) -> Result<()> {
    let flip = Gate::controlled(
        GateKind::X,
        q.lcu(),
        vec![Control::neg(q.branch()), Control::neg(q.ancilla())],
    );
    c.push(flip.clone())?;
    c.push(Gate::new(GateKind::Rz(2.0 * varphi), q.lcu()))?;
    c.push(flip)
}

/// Real-part symmetric-QSP circuit on `m + 3` qubits. The block with the
/// three extra qubits in `|0>` equals `diag(p(sin(2y/2^m - 1))) / 2`, where
/// `p = Re P_W` of `phases`.
///
/// The LCU qubit's `|1>` branch sees every projector phase negated, which
/// realises the conjugate sequence. A Z on that qubit before each of the
/// `d` inner phases adds the `+pi` of the `-Phi` set. The closing CNOT moves
/// the branch qubit's `|1>` component out of the block, which fixes the LCU
/// normalisation at 1/2.
pub fn qsp_real_circuit(phases: &PhaseFactorSet, be: &Circuit) -> Result<Circuit> {
    let m = be
        .num_qubits()
        .checked_sub(1)
        .filter(|&m| m > 0)
        .ok_or_else(|| Error::Layout("block-encoding needs data qubits and one ancilla".into()))?;
    let q = QspQubits { m };
    let total = q.total();
    let mut map: Vec<usize> = (0..be.num_qubits()).collect();
    map.truncate(m + 1);
    let be = be.remap(&map, total)?;
    let forward = be.controlled_by(&[Control::neg(q.branch())])?;
    let backward = be.inverse().controlled_by(&[Control::pos(q.branch())])?;
    let varphi = phases.to_varphi();
    let d = varphi.degree;
    let mut angles = varphi.angles.clone();
    angles[d] -= d as f64 * PI / 2.0;

    let mut c = Circuit::new(total);
    c.h(q.lcu())?;
    for j in (1..=d).rev() {
        c.h(q.branch())?;
        if j < d {
            c.push(Gate::new(GateKind::Z, q.lcu()))?;
        }
        projector_phase(&mut c, q, angles[j])?;
        c.h(q.branch())?;
        c.append(&forward)?;
        c.append(&backward)?;
        c.x(q.branch())?;
    }
    c.h(q.branch())?;
    if d > 0 {
        c.push(Gate::new(GateKind::Z, q.lcu()))?;
    }
    projector_phase(&mut c, q, angles[0])?;
    c.cx(q.branch(), q.ancilla())?;
    c.h(q.lcu())?;
    c.h(q.branch())?;
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmplificationPlan {
    /// `(1/4) sum_y p(x_y)^2 / (N max_y p(x_y)^2)`.
    pub p_succ: f64,
    /// `ceil(pi / (4 arcsin sqrt(p_succ)) - 1/2)`.
    pub m_prime: usize,
}

impl AmplificationPlan {
    pub fn rounds_for(p_succ: f64) -> usize {
        let v = PI / (4.0 * p_succ.sqrt().asin()) - 0.5;
        (v - 1e-9).ceil().max(0.0) as usize
    }
}

/// Success probability of the QSP block applied to the uniform superposition
/// over `2^m` grid points, normalised by the largest grid value.
pub fn plan_amplification(p: &ChebyshevPolynomial, m: usize) -> Result<AmplificationPlan> {
    if m == 0 || m > 30 {
        return Err(Error::InvalidParams(format!("grid qubits m = {m} outside 1..=30")));
    }
    let n = 1usize << m;
    let (mut sum, mut peak) = (0.0f64, 0.0f64);
    for y in 0..n {
        let v = p.eval(signal_value(y, m));
        sum += v * v;
        peak = peak.max(v * v);
    }
    if peak == 0.0 {
        return Err(Error::DegeneratePolynomial);
    }
    let p_succ = 0.25 * sum / (n as f64 * peak);
    Ok(AmplificationPlan {
        p_succ,
        m_prime: AmplificationPlan::rounds_for(p_succ),
    })
}

/// Exact amplitude amplification schedule for a known success amplitude.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactSchedule {
    pub rounds: usize,
    /// Angle of both phase reflections.
    pub phase: f64,
    /// `|<good|A|0>|` before amplification.
    pub amplitude: f64,
}

impl ExactSchedule {
    /// Uses `rounds` unless the amplitude is too small for that many, then the
    /// smallest count that works.
    pub fn new(amplitude: f64, rounds: usize) -> Result<Self> {
        if !(amplitude > 0.0 && amplitude <= 1.0) {
            return Err(Error::DegeneratePolynomial);
        }
        let beta = amplitude.asin();
        let needed = (PI / (4.0 * beta) - 0.5 - 1e-12).ceil().max(0.0) as usize;
        let rounds = rounds.max(needed);
        let phase = if rounds == 0 {
            0.0
        } else {
            let ratio = ((PI / (4 * rounds + 2) as f64).sin() / beta.sin()).min(1.0);
            2.0 * ratio.asin()
        };
        Ok(Self {
            rounds,
            phase,
            amplitude,
        })
    }

    pub fn final_amplitude_bound(&self) -> f64 {
        ((2 * self.rounds + 1) as f64 * self.amplitude.asin()).sin()
    }
}

/// `e^{i phase}` on states whose `qubits` are all zero.
pub fn zero_reflection(num_qubits: usize, qubits: &[usize], phase: f64) -> Result<Circuit> {
    let (&target, rest) = qubits
        .split_last()
        .ok_or_else(|| Error::Layout("reflection needs at least one qubit".into()))?;
    let mut c = Circuit::new(num_qubits);
    c.x(target)?;
    c.push(Gate::controlled(
        GateKind::Phase(phase),
        target,
        rest.iter().map(|&q| Control::neg(q)).collect(),
    ))?;
    c.x(target)?;
    Ok(c)
}

#[derive(Clone, Debug)]
pub struct VacuumPreparation {
    pub circuit: Circuit,
    pub plan: AmplificationPlan,
    pub schedule: ExactSchedule,
    pub approximation: GaussianApproximation,
    /// The polynomial actually encoded, after the safety rescale.
    pub encoded: ChebyshevPolynomial,
    pub phases: PhaseFactorSet,
    /// One application of `H^m` followed by the QSP circuit.
    pub stage: Circuit,
}

/// Grid-vacuum preparation on `m + 3` qubits: `H^m`, the real QSP circuit for
/// the degree-`d` Gaussian approximant, then exact amplitude amplification
/// marked on the three extra qubits being `|000>`.
pub fn prepare_vacuum_u0(m: usize, w: f64, degree: usize) -> Result<(Circuit, AmplificationPlan)> {
    let prep = prepare_vacuum(m, w, degree)?;
    Ok((prep.circuit, prep.plan))
}

pub fn prepare_vacuum(m: usize, w: f64, degree: usize) -> Result<VacuumPreparation> {
    let approximation = approx_gaussian_poly(w, degree)?;
    let encoded = approximation.poly.scaled(SAFETY_SCALE);
    let phases = solve_phase_factors(&encoded, PHASE_TOLERANCE)?;
    prepare_with_phases(m, approximation, encoded, phases)
}

pub fn prepare_with_phases(
    m: usize,
    approximation: GaussianApproximation,
    encoded: ChebyshevPolynomial,
    phases: PhaseFactorSet,
) -> Result<VacuumPreparation> {
    let q = QspQubits { m };
    let total = q.total();
    let qsp = qsp_real_circuit(&phases, &sin_block_encoding(m)?)?;
    let mut stage = Circuit::new(total);
    for j in 0..m {
        stage.h(j)?;
    }
    stage.append(&qsp)?;

    let plan = plan_amplification(&encoded, m)?;
    let n = 1usize << m;
    let norm2: f64 = (0..n).map(|y| encoded.eval(signal_value(y, m)).powi(2)).sum();
    let amplitude = 0.5 * (norm2 / n as f64).sqrt();
    let schedule = ExactSchedule::new(amplitude, plan.m_prime)?;

    let marker = zero_reflection(total, &[q.ancilla(), q.branch(), q.lcu()], schedule.phase)?;
    let all: Vec<usize> = (0..total).collect();
    let origin = zero_reflection(total, &all, schedule.phase)?;
    let inverse = stage.inverse();
    let mut circuit = stage.clone();
    for _ in 0..schedule.rounds {
        circuit.append(&marker)?;
        circuit.append(&inverse)?;
        circuit.append(&origin)?;
        circuit.append(&stage)?;
    }
    Ok(VacuumPreparation {
        circuit,
        plan,
        schedule,
        approximation,
        encoded,
        phases,
        stage,
    })
}
