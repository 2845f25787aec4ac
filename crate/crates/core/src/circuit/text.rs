//! Line-oriented circuit format.
//!
//! ```text
//! # qubits 3
//! H 0
//! RZ 2 ctrl:+0 ctrl:-1 7.8539816339744828e-1
//! ```
//!
//! Angles are radians written with 17 significant digits so that a
//! round trip reproduces every bit.

use std::fmt;
use std::str::FromStr;

use super::{Circuit, Control, Gate, GateKind};
use crate::{Error, Result};

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind.name(), self.target)?;
        for c in &self.controls {
            write!(f, " ctrl:{}{}", if c.positive { '+' } else { '-' }, c.qubit)?;
        }
        if let Some(a) = self.kind.angle() {
            write!(f, " {a:.16e}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# qubits {}", self.num_qubits())?;
        for g in self.gates() {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

impl FromStr for Circuit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_circuit(s)
    }
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |message: String| Error::Parse { line: line_no, message };
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let mut words = comment.split_whitespace();
            if words.next() == Some("qubits") {
                if circuit.is_some() {
                    return Err(err("repeated qubit header".into()));
                }
                let n = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| err("qubit header needs a count".into()))?;
                circuit = Some(Circuit::new(n));
            }
            continue;
        }
        let c = circuit
            .as_mut()
            .ok_or_else(|| err("gate before the '# qubits' header".into()))?;
        let gate = parse_gate(line).map_err(err)?;
        c.push(gate).map_err(|e| err(e.to_string()))?;
    }
    circuit.ok_or(Error::Parse {
        line: 0,
        message: "missing '# qubits' header".into(),
    })
}

fn parse_gate(line: &str) -> std::result::Result<Gate, String> {
    let mut tokens = line.split_whitespace();
    let name = tokens.next().ok_or("empty gate line")?;
    let target: usize = tokens
        .next()
        .ok_or("missing target")?
        .parse()
        .map_err(|e| format!("bad target: {e}"))?;
    let mut controls = Vec::new();
    let mut angle = None;
    for tok in tokens {
        if let Some(ctrl) = tok.strip_prefix("ctrl:") {
            let (positive, q) = match ctrl.split_at_checked(1) {
                Some(("+", q)) => (true, q),
                Some(("-", q)) => (false, q),
                _ => return Err(format!("bad control '{tok}'")),
            };
            let qubit = q.parse().map_err(|e| format!("bad control qubit: {e}"))?;
            controls.push(Control { qubit, positive });
        } else if angle.is_none() {
            angle = Some(tok.parse::<f64>().map_err(|e| format!("bad angle '{tok}': {e}"))?);
        } else {
            return Err(format!("unexpected token '{tok}'"));
        }
    }
    let need_angle = |a: Option<f64>| a.ok_or_else(|| format!("{name} needs an angle"));
    let kind = match name {
        "H" => GateKind::H,
        "X" => GateKind::X,
        "Z" => GateKind::Z,
        "RY" => GateKind::Ry(need_angle(angle)?),
        "RZ" => GateKind::Rz(need_angle(angle)?),
        "P" => GateKind::Phase(need_angle(angle)?),
        other => return Err(format!("unknown gate kind '{other}'")),
    };
    if kind.angle().is_none() && angle.is_some() {
        return Err(format!("{name} takes no angle"));
    }
    Ok(Gate::controlled(kind, target, controls))
}
