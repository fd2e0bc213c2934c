use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::Circuit;
use crate::error::{domain, Result};

/// The fixed iteration rule `⌊πN/2 − 1/2⌋`.
pub fn paper_iterations(n: usize) -> usize {
    (PI * n as f64 / 2.0 - 0.5).floor() as usize
}

/// The amplitude-amplification optimum `round(π/(4·asin(2^{−N/2})) − 1/2)`.
pub fn optimal_iterations(n: usize) -> usize {
    let theta = (0.5f64).powf(n as f64 / 2.0).asin();
    (PI / (4.0 * theta) - 0.5).round().max(0.0) as usize
}

/// Which iteration count a Grover circuit uses when not overridden.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IterationRule {
    #[default]
    Paper,
    Optimal,
}

impl IterationRule {
    pub fn count(self, n: usize) -> usize {
        match self {
            IterationRule::Paper => paper_iterations(n),
            IterationRule::Optimal => optimal_iterations(n),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroverSpec {
    pub n: usize,
    /// Marked basis state, qubit 0 first.
    pub marked: String,
    pub iterations: Option<usize>,
}

impl GroverSpec {
    pub fn new(marked: &str) -> Self {
        GroverSpec { n: marked.len(), marked: marked.to_string(), iterations: None }
    }

    pub fn with_iterations(mut self, r: usize) -> Self {
        self.iterations = Some(r);
        self
    }

    /// Iterations the built circuit will contain.
    pub fn rounds(&self) -> usize {
        self.iterations.unwrap_or_else(|| paper_iterations(self.n))
    }

    /// Basis index of the marked state.
    pub fn marked_index(&self) -> Result<usize> {
        self.validate()?;
        Ok(self.marked.bytes().enumerate().filter(|(_, b)| *b == b'1').map(|(q, _)| 1 << q).sum())
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(domain(format!("Grover search needs at least 2 qubits, got {}", self.n)));
        }
        if self.marked.len() != self.n || !self.marked.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(domain(format!(
                "marked state {:?} is not a {}-bit string",
                self.marked, self.n
            )));
        }
        Ok(())
    }
}

/// `H⊗N`, then `r` rounds of oracle and diffuser, each an X-conjugated MCZ.
pub fn build_grover(spec: &GroverSpec) -> Result<Circuit> {
    spec.validate()?;
    let n = spec.n;
    let all: Vec<usize> = (0..n).collect();
    let zeros: Vec<usize> =
        spec.marked.bytes().enumerate().filter(|(_, b)| *b == b'0').map(|(q, _)| q).collect();
    let mut c = Circuit::new(n, 0).with_label(format!("grover n={n} marked={}", spec.marked));
    for &q in &all {
        c.h(q)?;
    }
    for _ in 0..spec.rounds() {
        for &q in &zeros {
            c.x(q)?;
        }
        c.mcz(&all)?;
        for &q in &zeros {
            c.x(q)?;
        }
        for &q in &all {
            c.h(q)?;
        }
        for &q in &all {
            c.x(q)?;
        }
        c.mcz(&all)?;
        for &q in &all {
            c.x(q)?;
        }
        for &q in &all {
            c.h(q)?;
        }
    }
    Ok(c)
}
