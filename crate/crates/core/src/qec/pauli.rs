use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::noise::PauliAxis;
use crate::statevector::StateVector;

/// An `n`-qubit Pauli operator up to phase, stored as X and Z bit masks
/// (qubit `q` at bit `q`; Y sets both).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
}

impl PauliString {
    pub const MAX_QUBITS: usize = 64;

    pub fn identity(n: usize) -> Result<Self> {
        if n > Self::MAX_QUBITS {
            return Err(domain(format!("Pauli strings are limited to 64 qubits, got {n}")));
        }
        Ok(PauliString { n, x: 0, z: 0 })
    }

    /// `axis` on `qubit`, identity elsewhere.
    pub fn single(n: usize, qubit: usize, axis: PauliAxis) -> Result<Self> {
        let mut p = Self::identity(n)?;
        p.set(qubit, Some(axis))?;
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letter(&self, q: usize) -> Option<PauliAxis> {
        match ((self.x >> q) & 1, (self.z >> q) & 1) {
            (1, 0) => Some(PauliAxis::X),
            (1, 1) => Some(PauliAxis::Y),
            (0, 1) => Some(PauliAxis::Z),
            _ => None,
        }
    }

    pub fn set(&mut self, q: usize, letter: Option<PauliAxis>) -> Result<()> {
        if q >= self.n {
            return Err(domain(format!("qubit {q} outside a {}-qubit Pauli string", self.n)));
        }
        let bit = 1u64 << q;
        let (x, z) = match letter {
            None => (false, false),
            Some(PauliAxis::X) => (true, false),
            Some(PauliAxis::Y) => (true, true),
            Some(PauliAxis::Z) => (false, true),
        };
        self.x = if x { self.x | bit } else { self.x & !bit };
        self.z = if z { self.z | bit } else { self.z & !bit };
        Ok(())
    }

    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    /// Qubits with a non-identity letter, ascending.
    pub fn support(&self) -> impl Iterator<Item = (usize, PauliAxis)> + '_ {
        (0..self.n).filter_map(|q| self.letter(q).map(|a| (q, a)))
    }

    /// Symplectic product test.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z) ^ (self.z & other.x)).count_ones() % 2 == 0
    }

    /// Apply the operator (letter matrices, no extra phase) to the low qubits
    /// of `state`.
    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        if self.n > state.n_qubits() {
            return Err(domain(format!(
                "{}-qubit Pauli string on a {}-qubit state",
                self.n,
                state.n_qubits()
            )));
        }
        for (q, a) in self.support() {
            state.apply_1q(&a.matrix(), q)?;
        }
        Ok(())
    }

    /// `⟨ψ|P|ψ⟩`.
    pub fn expectation(&self, state: &StateVector) -> Result<Complex64> {
        let mut moved = state.clone();
        self.apply(&mut moved)?;
        state.overlap(&moved)
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Self::identity(s.chars().count())?;
        for (q, c) in s.chars().enumerate() {
            let letter = match c {
                'I' => None,
                other => Some(
                    PauliAxis::from_letter(other)
                        .ok_or_else(|| domain(format!("bad Pauli letter {other:?} in {s:?}")))?,
                ),
            };
            p.set(q, letter)?;
        }
        Ok(p)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n {
            let c = self.letter(q).map_or('I', PauliAxis::letter);
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}
