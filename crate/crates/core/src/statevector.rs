//! Dense state-vector engine.
//!
//! Amplitude index bit `q` holds qubit `q` (qubit 0 is least significant).
//! Gates never renormalise; only measurement collapse does.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::noise::Matrix2;

pub const DEFAULT_MAX_QUBITS: usize = 24;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Multi-qubit gates with a fixed action.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ControlledKind {
    /// `[control, target]`
    Cnot,
    Cz,
    Swap,
    /// Multi-controlled Z over all listed qubits (symmetric in its operands).
    Mcz,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

/// Classical outcomes of an execution.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MeasurementRecord {
    pub bits: Vec<u8>,
    /// Probability of each recorded outcome at the time it was drawn.
    pub probabilities: Option<Vec<f64>>,
}

impl StateVector {
    /// `|0…0⟩` on `n_qubits`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::check_size(n_qubits)?;
        let mut amps = vec![ZERO; 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amps })
    }

    /// The basis state named by `bits`, written qubit 0 first.
    pub fn init_basis(n_qubits: usize, bits: &str) -> Result<Self> {
        if bits.chars().count() != n_qubits {
            return Err(Error::Domain(format!(
                "bitstring {bits:?} does not have {n_qubits} characters"
            )));
        }
        let mut index = 0usize;
        for (q, c) in bits.chars().enumerate() {
            match c {
                '0' => {}
                '1' => index |= 1 << q,
                _ => return Err(Error::Domain(format!("bitstring {bits:?} is not binary"))),
            }
        }
        let mut state = Self::zero(n_qubits)?;
        state.amps.swap(0, index);
        Ok(state)
    }

    /// Wrap raw amplitudes. The length must be a power of two.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(Error::Domain(format!("{} amplitudes is not a power of two", amps.len())));
        }
        let n_qubits = amps.len().trailing_zeros() as usize;
        Self::check_size(n_qubits)?;
        Ok(StateVector { n_qubits, amps })
    }

    fn check_size(n_qubits: usize) -> Result<()> {
        if n_qubits > DEFAULT_MAX_QUBITS {
            return Err(Error::Domain(format!(
                "{n_qubits} qubits exceeds the cap of {DEFAULT_MAX_QUBITS}"
            )));
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(Error::Domain(format!(
                "qubit {q} out of range for {} qubits",
                self.n_qubits
            )));
        }
        Ok(())
    }

    /// Apply a single-qubit matrix to qubit `q`.
    pub fn apply_1q(&mut self, m: &Matrix2, q: usize) -> Result<()> {
        self.check_qubit(q)?;
        let [[m00, m01], [m10, m11]] = m.0;
        let stride = 1 << q;
        for block in self.amps.chunks_exact_mut(stride << 1) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = m00 * x + m01 * y;
                *b = m10 * x + m11 * y;
            }
        }
        Ok(())
    }

    /// As [`apply_1q`](Self::apply_1q), rejecting matrices that are not unitary to `1e-10`.
    pub fn apply_1q_checked(&mut self, m: &Matrix2, q: usize) -> Result<()> {
        if !m.is_finite() || m.unitarity_defect() > 1e-10 {
            return Err(Error::Domain(format!("matrix is not unitary: {m:?}")));
        }
        self.apply_1q(m, q)
    }

    pub fn apply_controlled(&mut self, kind: ControlledKind, qubits: &[usize]) -> Result<()> {
        for (i, &q) in qubits.iter().enumerate() {
            self.check_qubit(q)?;
            if qubits[..i].contains(&q) {
                return Err(Error::Domain(format!("repeated qubit {q} in {qubits:?}")));
            }
        }
        let arity_ok = match kind {
            ControlledKind::Mcz => !qubits.is_empty(),
            _ => qubits.len() == 2,
        };
        if !arity_ok {
            return Err(Error::Domain(format!("{kind:?} cannot act on {qubits:?}")));
        }
        match kind {
            ControlledKind::Cnot => {
                let (c, t) = (1usize << qubits[0], 1usize << qubits[1]);
                for i in 0..self.amps.len() {
                    if i & c != 0 && i & t == 0 {
                        self.amps.swap(i, i | t);
                    }
                }
            }
            ControlledKind::Swap => {
                let (a, b) = (1usize << qubits[0], 1usize << qubits[1]);
                for i in 0..self.amps.len() {
                    if i & a != 0 && i & b == 0 {
                        self.amps.swap(i, (i & !a) | b);
                    }
                }
            }
            ControlledKind::Cz | ControlledKind::Mcz => {
                let mask = qubits.iter().fold(0usize, |m, &q| m | (1 << q));
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if i & mask == mask {
                        *a = -*a;
                    }
                }
            }
        }
        Ok(())
    }

    /// Probability that qubit `q` reads 1.
    pub fn prob_one(&self, q: usize) -> Result<f64> {
        self.check_qubit(q)?;
        let bit = 1usize << q;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Projective Z measurement of qubit `q`; the state collapses and is
    /// renormalised. Returns the outcome and its probability.
    pub fn measure<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> Result<(u8, f64)> {
        let p1 = self.prob_one(q)?;
        let total = self.norm_sqr();
        let u = rng.random::<f64>() * total;
        let outcome = u8::from(u < p1);
        let p = if outcome == 1 { p1 } else { total - p1 };
        if p < 1e-14 {
            return Err(Error::Numeric(format!(
                "measured branch of qubit {q} has probability {p:e}"
            )));
        }
        let bit = 1usize << q;
        let scale = 1.0 / p.sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            if ((i & bit != 0) as u8) == outcome {
                *a *= scale;
            } else {
                *a = ZERO;
            }
        }
        Ok((outcome, p / total))
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &StateVector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::Domain(format!(
                "overlap between {} and {} qubits",
                self.n_qubits, other.n_qubits
            )));
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `1 − |⟨self|other⟩|²`.
    pub fn infidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(1.0 - self.overlap(other)?.norm_sqr())
    }

    /// Joint Z-basis distribution of `qubits`, indexed with `qubits[k]` at bit `k`.
    pub fn marginal(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        for &q in qubits {
            self.check_qubit(q)?;
        }
        let mut probs = vec![0.0; 1 << qubits.len()];
        for (i, a) in self.amps.iter().enumerate() {
            let key = qubits
                .iter()
                .enumerate()
                .fold(0usize, |k, (pos, &q)| k | (((i >> q) & 1) << pos));
            probs[key] += a.norm_sqr();
        }
        Ok(probs)
    }

    /// Draw `n_shots` Z-basis samples of `qubits` without disturbing the state.
    /// Keys are bitstrings written in the order of `qubits`.
    pub fn sample_shots<R: Rng + ?Sized>(
        &self,
        qubits: &[usize],
        n_shots: usize,
        rng: &mut R,
    ) -> Result<BTreeMap<String, usize>> {
        let probs = self.marginal(qubits)?;
        let keys = sample_indices(&probs, n_shots, rng);
        let mut counts = BTreeMap::new();
        for key in keys {
            let label: String = (0..qubits.len())
                .map(|pos| if (key >> pos) & 1 == 1 { '1' } else { '0' })
                .collect();
            *counts.entry(label).or_insert(0) += 1;
        }
        Ok(counts)
    }

    /// Sub-vector of the low `n_low` qubits for a fixed value of the rest.
    pub fn slice_low(&self, n_low: usize, high: usize) -> Result<Vec<Complex64>> {
        if n_low > self.n_qubits || high >= 1 << (self.n_qubits - n_low) {
            return Err(Error::Domain(format!(
                "cannot slice {n_low} low qubits at high index {high} of {} qubits",
                self.n_qubits
            )));
        }
        let width = 1 << n_low;
        Ok(self.amps[high * width..(high + 1) * width].to_vec())
    }

    /// `⟨e|ρ|e⟩` where `ρ` is the reduced state of the low `expected.n_qubits()`
    /// qubits and `e` is `expected`.
    pub fn reduced_fidelity(&self, expected: &StateVector) -> Result<f64> {
        let n_low = expected.n_qubits;
        if n_low > self.n_qubits {
            return Err(Error::Domain(format!(
                "cannot compare {} qubits against a {n_low}-qubit register",
                self.n_qubits
            )));
        }
        let width = 1 << n_low;
        Ok(self
            .amps
            .chunks_exact(width)
            .map(|chunk| {
                chunk
                    .iter()
                    .zip(&expected.amps)
                    .map(|(a, e)| e.conj() * a)
                    .sum::<Complex64>()
                    .norm_sqr()
            })
            .sum())
    }

    /// Multiply every amplitude by `e^{iγ}`.
    pub fn apply_global_phase(&mut self, gamma: f64) {
        let phase = Complex64::from_polar(1.0, gamma);
        for a in &mut self.amps {
            *a *= phase;
        }
    }
}

/// Inverse-transform draws from a discrete distribution (need not be normalised).
pub(crate) fn sample_indices<R: Rng + ?Sized>(probs: &[f64], n: usize, rng: &mut R) -> Vec<usize> {
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in probs {
        acc += p;
        cdf.push(acc);
    }
    (0..n)
        .map(|_| {
            let u = rng.random::<f64>() * acc;
            cdf.partition_point(|&c| c <= u).min(probs.len() - 1)
        })
        .collect()
}
