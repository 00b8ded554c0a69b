use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    H,
    X,
    Cx,
    Cz,
    Rx,
    Ry,
    Rz,
}

impl GateKind {
    pub fn mnemonic(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Cx => "cx",
            GateKind::Cz => "cz",
            GateKind::Rx => "rx",
            GateKind::Ry => "ry",
            GateKind::Rz => "rz",
        }
    }

    pub fn from_mnemonic(s: &str) -> Option<Self> {
        Some(match s {
            "h" => GateKind::H,
            "x" => GateKind::X,
            "cx" => GateKind::Cx,
            "cz" => GateKind::Cz,
            "rx" => GateKind::Rx,
            "ry" => GateKind::Ry,
            "rz" => GateKind::Rz,
            _ => return None,
        })
    }

    pub fn arity(self) -> usize {
        match self {
            GateKind::Cx | GateKind::Cz => 2,
            _ => 1,
        }
    }

    pub fn is_rotation(self) -> bool {
        matches!(self, GateKind::Rx | GateKind::Ry | GateKind::Rz)
    }
}

/// A gate from the supported set. For `Cx` the first target is the control.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate<T> {
    kind: GateKind,
    targets: [usize; 2],
    angle: Option<T>,
}

impl<T: Real> Gate<T> {
    pub fn h(q: usize) -> Self {
        Self::single(GateKind::H, q, None)
    }

    pub fn x(q: usize) -> Self {
        Self::single(GateKind::X, q, None)
    }

    pub fn rx(theta: T, q: usize) -> Self {
        Self::single(GateKind::Rx, q, Some(theta))
    }

    pub fn ry(theta: T, q: usize) -> Self {
        Self::single(GateKind::Ry, q, Some(theta))
    }

    pub fn rz(theta: T, q: usize) -> Self {
        Self::single(GateKind::Rz, q, Some(theta))
    }

    pub fn cx(control: usize, target: usize) -> Result<Self> {
        Self::pair(GateKind::Cx, control, target)
    }

    pub fn cz(a: usize, b: usize) -> Result<Self> {
        Self::pair(GateKind::Cz, a, b)
    }

    /// Generic constructor enforcing arity and angle presence.
    pub fn new(kind: GateKind, targets: &[usize], angle: Option<T>) -> Result<Self> {
        if targets.len() != kind.arity() {
            return Err(Error::validation(format!(
                "{} takes {} qubit(s), got {}",
                kind.mnemonic(),
                kind.arity(),
                targets.len()
            )));
        }
        if kind.is_rotation() != angle.is_some() {
            return Err(Error::validation(format!(
                "{} {} an angle",
                kind.mnemonic(),
                if kind.is_rotation() { "needs" } else { "does not take" }
            )));
        }
        if let Some(a) = angle {
            if !a.is_finite() {
                return Err(Error::validation("rotation angle must be finite"));
            }
        }
        if kind.arity() == 2 {
            Self::pair(kind, targets[0], targets[1])
        } else {
            Ok(Self::single(kind, targets[0], angle))
        }
    }

    fn single(kind: GateKind, q: usize, angle: Option<T>) -> Self {
        Gate {
            kind,
            targets: [q, q],
            angle,
        }
    }

    fn pair(kind: GateKind, a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::validation(format!(
                "{} needs two distinct qubits, got {a} twice",
                kind.mnemonic()
            )));
        }
        Ok(Gate {
            kind,
            targets: [a, b],
            angle: None,
        })
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets[..self.kind.arity()]
    }

    pub fn angle(&self) -> Option<T> {
        self.angle
    }

    pub fn max_qubit(&self) -> usize {
        self.targets[0].max(self.targets[1])
    }

    /// The inverse gate (all fixed gates here are self-inverse).
    pub fn inverse(&self) -> Self {
        Gate {
            angle: self.angle.map(|a| -a),
            ..self.clone()
        }
    }
}

impl<T: Real> fmt::Display for Gate<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.mnemonic())?;
        if let Some(a) = self.angle {
            write!(f, "({a})")?;
        }
        for q in self.targets() {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

/// Ordered gate list on `num_qubits` qubits (1 to 6).
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit<T> {
    num_qubits: usize,
    gates: Vec<Gate<T>>,
}

impl<T: Real> Circuit<T> {
    pub const MAX_QUBITS: usize = 6;

    pub fn new(num_qubits: usize) -> Result<Self> {
        if !(1..=Self::MAX_QUBITS).contains(&num_qubits) {
            return Err(Error::validation(format!(
                "qubit count {num_qubits} outside 1..={}",
                Self::MAX_QUBITS
            )));
        }
        Ok(Circuit {
            num_qubits,
            gates: Vec::new(),
        })
    }

    pub fn with_gates(num_qubits: usize, gates: impl IntoIterator<Item = Gate<T>>) -> Result<Self> {
        let mut c = Self::new(num_qubits)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate<T>) -> Result<()> {
        if gate.max_qubit() >= self.num_qubits {
            return Err(Error::validation(format!(
                "qubit {} out of range for {} qubit(s)",
                gate.max_qubit(),
                self.num_qubits
            )));
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate<T>] {
        &self.gates
    }

    /// DSL text that parses back to this circuit.
    pub fn to_text(&self) -> String {
        let mut out = format!("qubits {}\n", self.num_qubits);
        for g in &self.gates {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }
}
