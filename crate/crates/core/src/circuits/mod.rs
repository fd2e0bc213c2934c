//! Gate IR shared by execution, noise injection and propagation.

mod clifford;
mod exec;
mod grover;
mod inject;
mod text;

use std::fmt;

pub use crate::noise::PauliAxis;
pub use clifford::{build_random_clifford, RandomCliffordSpec};
pub use exec::{execute, execute_on};
pub use grover::{build_grover, optimal_iterations, paper_iterations, GroverSpec, IterationRule};
pub use inject::inject_noise;
pub use text::parse_circuit;

use crate::error::{Error, Result};
use crate::noise::{error_unitary, Matrix2};

/// Classical condition: the bits `clbits` (first entry least significant)
/// read as an integer equal `value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub clbits: Vec<usize>,
    pub value: u64,
}

impl Condition {
    pub fn is_satisfied(&self, bits: &[u8]) -> bool {
        let read = self
            .clbits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (k, &c)| acc | (u64::from(bits[c]) << k));
        read == self.value
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GateOp {
    H(usize),
    X(usize),
    Y(usize),
    Z(usize),
    S(usize),
    Cnot { control: usize, target: usize },
    Cz(usize, usize),
    Swap(usize, usize),
    /// Multi-controlled Z; symmetric in its qubits.
    Mcz(Vec<usize>),
    /// `U(θ, α, β)` on one qubit.
    ErrorRotation { qubit: usize, theta: f64, alpha: f64, beta: f64 },
    /// An injected Pauli fault.
    Pauli { qubit: usize, axis: PauliAxis },
    Measure { qubit: usize, clbit: usize },
    CondPauli { qubit: usize, axis: PauliAxis, condition: Condition },
}

impl GateOp {
    /// The five single-qubit gates after which noise is injected.
    pub fn is_single_qubit_gate(&self) -> bool {
        matches!(self, GateOp::H(_) | GateOp::X(_) | GateOp::Y(_) | GateOp::Z(_) | GateOp::S(_))
    }

    pub fn qubits(&self) -> Vec<usize> {
        match self {
            GateOp::H(q) | GateOp::X(q) | GateOp::Y(q) | GateOp::Z(q) | GateOp::S(q) => vec![*q],
            GateOp::Cnot { control, target } => vec![*control, *target],
            GateOp::Cz(a, b) | GateOp::Swap(a, b) => vec![*a, *b],
            GateOp::Mcz(qs) => qs.clone(),
            GateOp::ErrorRotation { qubit, .. }
            | GateOp::Pauli { qubit, .. }
            | GateOp::Measure { qubit, .. }
            | GateOp::CondPauli { qubit, .. } => vec![*qubit],
        }
    }

    /// The 2×2 matrix of an unconditional single-qubit op.
    pub fn matrix(&self) -> Option<Result<Matrix2>> {
        let m = match self {
            GateOp::H(_) => Matrix2::H,
            GateOp::X(_) => Matrix2::X,
            GateOp::Y(_) => Matrix2::Y,
            GateOp::Z(_) => Matrix2::Z,
            GateOp::S(_) => Matrix2::S,
            GateOp::Pauli { axis, .. } => axis.matrix(),
            GateOp::ErrorRotation { theta, alpha, beta, .. } => {
                return Some(error_unitary(*theta, *alpha, *beta))
            }
            _ => return None,
        };
        Some(Ok(m))
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateOp::H(_) => "H",
            GateOp::X(_) => "X",
            GateOp::Y(_) => "Y",
            GateOp::Z(_) => "Z",
            GateOp::S(_) => "S",
            GateOp::Cnot { .. } => "CNOT",
            GateOp::Cz(..) => "CZ",
            GateOp::Swap(..) => "SWAP",
            GateOp::Mcz(_) => "MCZ",
            GateOp::ErrorRotation { .. } => "ERR",
            GateOp::Pauli { .. } => "PAULI",
            GateOp::Measure { .. } => "MEASURE",
            GateOp::CondPauli { .. } => "COND_PAULI",
        }
    }

    /// The same op with every qubit index passed through `map`.
    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> GateOp {
        let mut op = self.clone();
        match &mut op {
            GateOp::H(q) | GateOp::X(q) | GateOp::Y(q) | GateOp::Z(q) | GateOp::S(q) => *q = map(*q),
            GateOp::Cnot { control, target } => {
                *control = map(*control);
                *target = map(*target);
            }
            GateOp::Cz(a, b) | GateOp::Swap(a, b) => {
                *a = map(*a);
                *b = map(*b);
            }
            GateOp::Mcz(qs) => qs.iter_mut().for_each(|q| *q = map(*q)),
            GateOp::ErrorRotation { qubit, .. }
            | GateOp::Pauli { qubit, .. }
            | GateOp::Measure { qubit, .. }
            | GateOp::CondPauli { qubit, .. } => *qubit = map(*qubit),
        }
        op
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        text::write_op(f, self)
    }
}

/// An ordered gate list over `n_qubits` qubits and `n_clbits` classical bits.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub n_qubits: usize,
    pub n_clbits: usize,
    pub ops: Vec<GateOp>,
    /// Free-form provenance, e.g. which builder produced the circuit.
    pub label: String,
}

impl Circuit {
    pub fn new(n_qubits: usize, n_clbits: usize) -> Self {
        Circuit { n_qubits, n_clbits, ops: Vec::new(), label: String::new() }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Append an op after checking its operands.
    pub fn push(&mut self, op: GateOp) -> Result<&mut Self> {
        self.check_op(&op)?;
        self.ops.push(op);
        Ok(self)
    }

    pub fn h(&mut self, q: usize) -> Result<&mut Self> {
        self.push(GateOp::H(q))
    }

    pub fn x(&mut self, q: usize) -> Result<&mut Self> {
        self.push(GateOp::X(q))
    }

    pub fn z(&mut self, q: usize) -> Result<&mut Self> {
        self.push(GateOp::Z(q))
    }

    pub fn s(&mut self, q: usize) -> Result<&mut Self> {
        self.push(GateOp::S(q))
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> Result<&mut Self> {
        self.push(GateOp::Cnot { control, target })
    }

    pub fn cz(&mut self, a: usize, b: usize) -> Result<&mut Self> {
        self.push(GateOp::Cz(a, b))
    }

    pub fn swap(&mut self, a: usize, b: usize) -> Result<&mut Self> {
        self.push(GateOp::Swap(a, b))
    }

    pub fn mcz(&mut self, qubits: &[usize]) -> Result<&mut Self> {
        self.push(GateOp::Mcz(qubits.to_vec()))
    }

    pub fn measure(&mut self, qubit: usize, clbit: usize) -> Result<&mut Self> {
        self.push(GateOp::Measure { qubit, clbit })
    }

    /// Append every op of `other`, which must fit inside this register.
    pub fn extend_from(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.n_qubits > self.n_qubits || other.n_clbits > self.n_clbits {
            return Err(Error::InvalidCircuit(format!(
                "cannot append a {}q/{}c circuit to a {}q/{}c circuit",
                other.n_qubits, other.n_clbits, self.n_qubits, self.n_clbits
            )));
        }
        self.ops.extend(other.ops.iter().cloned());
        Ok(self)
    }

    /// Number of noise-bearing single-qubit gates.
    pub fn single_qubit_gate_count(&self) -> usize {
        self.ops.iter().filter(|op| op.is_single_qubit_gate()).count()
    }

    fn check_op(&self, op: &GateOp) -> Result<()> {
        let qubits = op.qubits();
        for (i, &q) in qubits.iter().enumerate() {
            if q >= self.n_qubits {
                return Err(Error::InvalidCircuit(format!(
                    "{} acts on qubit {q} of a {}-qubit circuit",
                    op.name(),
                    self.n_qubits
                )));
            }
            if qubits[..i].contains(&q) {
                return Err(Error::InvalidCircuit(format!("{} repeats qubit {q}", op.name())));
            }
        }
        if let GateOp::Mcz(qs) = op {
            if qs.is_empty() {
                return Err(Error::InvalidCircuit("MCZ needs at least one qubit".into()));
            }
        }
        let clbits: &[usize] = match op {
            GateOp::Measure { clbit, .. } => std::slice::from_ref(clbit),
            GateOp::CondPauli { condition, .. } => {
                if condition.clbits.len() > 64 {
                    return Err(Error::InvalidCircuit("condition wider than 64 bits".into()));
                }
                &condition.clbits
            }
            _ => &[],
        };
        if let Some(&c) = clbits.iter().find(|&&c| c >= self.n_clbits) {
            return Err(Error::InvalidCircuit(format!(
                "{} references classical bit {c} of {}",
                op.name(),
                self.n_clbits
            )));
        }
        Ok(())
    }

    /// Check every op's operands.
    pub fn validate(&self) -> Result<()> {
        for (index, op) in self.ops.iter().enumerate() {
            self.check_op(op).map_err(|e| Error::Execution {
                index,
                op: op.to_string(),
                source: Box::new(e),
            })?;
        }
        Ok(())
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        text::write_circuit(f, self)
    }
}
