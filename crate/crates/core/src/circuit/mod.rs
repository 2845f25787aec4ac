//! Gate-level circuits over little-endian qubit registers and a dense
//! statevector simulator.

mod build;
mod layout;
mod sim;
mod text;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use build::{
    amplitude_loader, build_lf_circuit, controlled_fragment, displacement_fragment, fidelity_grid_lf, gaussian_loader,
    iqft_fragment,
    qft_fragment,
};
pub use layout::{grid_gaussian, GridSpec, RegisterLayout};
pub use text::parse_circuit;
pub use sim::{simulate, simulate_in_place, unitary, DEFAULT_SIMULATION_QUBITS};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum GateKind {
    H,
    X,
    Z,
    /// `exp(-i theta Y / 2)`.
    Ry(f64),
    /// `diag(exp(-i theta / 2), exp(i theta / 2))`.
    Rz(f64),
    /// `diag(1, exp(i theta))`.
    Phase(f64),
}

impl GateKind {
    pub fn angle(&self) -> Option<f64> {
        match *self {
            GateKind::Ry(a) | GateKind::Rz(a) | GateKind::Phase(a) => Some(a),
            _ => None,
        }
    }

    pub fn inverse(&self) -> GateKind {
        match *self {
            GateKind::Ry(a) => GateKind::Ry(-a),
            GateKind::Rz(a) => GateKind::Rz(-a),
            GateKind::Phase(a) => GateKind::Phase(-a),
            k => k,
        }
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self, GateKind::Z | GateKind::Rz(_) | GateKind::Phase(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Z => "Z",
            GateKind::Ry(_) => "RY",
            GateKind::Rz(_) => "RZ",
            GateKind::Phase(_) => "P",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Control {
    pub qubit: usize,
    /// Active on `|1>` when true, on `|0>` otherwise.
    pub positive: bool,
}

impl Control {
    pub fn pos(qubit: usize) -> Self {
        Self { qubit, positive: true }
    }

    pub fn neg(qubit: usize) -> Self {
        Self { qubit, positive: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub target: usize,
    pub controls: Vec<Control>,
}

impl Gate {
    pub fn new(kind: GateKind, target: usize) -> Self {
        Self {
            kind,
            target,
            controls: Vec::new(),
        }
    }

    pub fn controlled(kind: GateKind, target: usize, controls: Vec<Control>) -> Self {
        Self { kind, target, controls }
    }

    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        if let Some(a) = self.kind.angle() {
            if !a.is_finite() {
                return Err(Error::InvalidGate(format!("non-finite angle on {}", self.kind.name())));
            }
        }
        if self.target >= num_qubits {
            return Err(Error::QubitOutOfRange {
                qubit: self.target,
                num_qubits,
            });
        }
        for (i, c) in self.controls.iter().enumerate() {
            if c.qubit >= num_qubits {
                return Err(Error::QubitOutOfRange {
                    qubit: c.qubit,
                    num_qubits,
                });
            }
            if c.qubit == self.target {
                return Err(Error::InvalidGate(format!("qubit {} is both target and control", c.qubit)));
            }
            if self.controls[..i].iter().any(|d| d.qubit == c.qubit) {
                return Err(Error::InvalidGate(format!("duplicate control on qubit {}", c.qubit)));
            }
        }
        Ok(())
    }

    pub fn inverse(&self) -> Gate {
        Gate {
            kind: self.kind.inverse(),
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(num_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Self::new(num_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn h(&mut self, q: usize) -> Result<()> {
        self.push(Gate::new(GateKind::H, q))
    }

    pub fn x(&mut self, q: usize) -> Result<()> {
        self.push(Gate::new(GateKind::X, q))
    }

    pub fn cx(&mut self, control: usize, target: usize) -> Result<()> {
        self.push(Gate::controlled(GateKind::X, target, vec![Control::pos(control)]))
    }

    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.num_qubits > self.num_qubits {
            return Err(Error::Layout(format!(
                "cannot append a {}-qubit circuit to a {}-qubit one",
                other.num_qubits, self.num_qubits
            )));
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    pub fn then(mut self, other: &Circuit) -> Result<Self> {
        self.append(other)?;
        Ok(self)
    }

    pub fn inverse(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    /// Relabels qubit `q` as `map[q]` inside a `num_qubits`-qubit circuit.
    pub fn remap(&self, map: &[usize], num_qubits: usize) -> Result<Circuit> {
        if map.len() != self.num_qubits {
            return Err(Error::Layout(format!(
                "qubit map has {} entries for a {}-qubit circuit",
                map.len(),
                self.num_qubits
            )));
        }
        let gates = self
            .gates
            .iter()
            .map(|g| Gate {
                kind: g.kind,
                target: map[g.target],
                controls: g
                    .controls
                    .iter()
                    .map(|c| Control {
                        qubit: map[c.qubit],
                        positive: c.positive,
                    })
                    .collect(),
            })
            .collect();
        Circuit::from_gates(num_qubits, gates)
    }

    /// Adds `extra` controls to every gate.
    pub fn controlled_by(&self, extra: &[Control]) -> Result<Circuit> {
        let gates = self
            .gates
            .iter()
            .map(|g| {
                let mut g = g.clone();
                g.controls.extend_from_slice(extra);
                g
            })
            .collect();
        Circuit::from_gates(self.num_qubits, gates)
    }

    /// Qubits touched by at least one gate, ascending.
    pub fn active_qubits(&self) -> Vec<usize> {
        let mut used = vec![false; self.num_qubits];
        for g in &self.gates {
            used[g.target] = true;
            for c in &g.controls {
                used[c.qubit] = true;
            }
        }
        (0..self.num_qubits).filter(|&q| used[q]).collect()
    }

    pub fn count_where(&self, pred: impl Fn(&Gate) -> bool) -> usize {
        self.gates.iter().filter(|g| pred(g)).count()
    }
}
