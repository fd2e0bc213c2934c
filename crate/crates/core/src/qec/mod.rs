//! Stabilizer codes and the encode / logical-H / correct experiment circuit.
//!
//! Data qubits occupy the low indices `0..n`; syndrome ancillas follow.

mod code;
mod pauli;

use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

pub use code::{
    build_corrections, build_encoding, build_logical_h, build_syndrome_extraction, code_513,
    code_713, logical_plus, logical_zero, syndrome_of, CodeId, Correction, StabilizerCode,
    SyndromeExtraction, SyndromeTable,
};
pub use pauli::PauliString;

use crate::circuits::{execute, Circuit};
use crate::error::{Error, Result};
use crate::statevector::{sample_indices, StateVector};

/// How the logical error probability is read off a final state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricMode {
    /// `1 − ⟨e|ρ_data|e⟩` against the noiseless data state `e`.
    Overlap,
    /// Fraction of Z-basis data samples outside the support of `e`.
    Shots { n_shots: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeExperimentSpec {
    pub code: CodeId,
    /// Number of logical Hadamards.
    pub m: usize,
    /// Run one round of syndrome extraction and correction.
    pub ec: bool,
    pub metric: MetricMode,
}

/// A built experiment circuit with its reference state.
#[derive(Clone, Debug)]
pub struct CodeCircuit {
    pub spec: CodeExperimentSpec,
    pub n_data: usize,
    /// Encoding, `m` logical Hadamards, then (if `ec`) extraction and corrections.
    pub circuit: Circuit,
    /// Ops `0..encoding_len` are the encoding.
    pub encoding_len: usize,
    /// Ops `0..core_len` are encoding plus logical Hadamards; the rest is EC.
    pub core_len: usize,
    /// Noiseless data state at the end of the circuit.
    pub expected: StateVector,
    support: Vec<bool>,
}

impl CodeCircuit {
    pub fn build(spec: CodeExperimentSpec) -> Result<Self> {
        let code = spec.code.code();
        let r = code.generators.len();
        let (nq, nc) = if spec.ec { (code.n + r, r) } else { (code.n, 0) };
        let mut circuit = Circuit::new(nq, nc).with_label(format!(
            "{} m={} ec={}",
            code.name,
            spec.m,
            u8::from(spec.ec)
        ));
        circuit.extend_from(&build_encoding(&code))?;
        let encoding_len = circuit.len();
        let h = build_logical_h(&code)?;
        for _ in 0..spec.m {
            circuit.extend_from(&h)?;
        }
        let core_len = circuit.len();
        if spec.ec {
            circuit.extend_from(&build_syndrome_extraction(&code)?.circuit)?;
            circuit.extend_from(&build_corrections(&code, nq)?)?;
        }

        // the noiseless run measures all-zero syndromes, leaving ancillas in |0⟩
        let mut rng = rand_chacha::ChaCha8Rng::from_seed([0; 32]);
        let (full, _) = execute(&circuit, &mut rng)?;
        let expected = StateVector::from_amplitudes(full.slice_low(code.n, 0)?)?;
        let support = expected.amplitudes().iter().map(|a| a.norm_sqr() > 1e-12).collect();
        Ok(CodeCircuit {
            spec,
            n_data: code.n,
            circuit,
            encoding_len,
            core_len,
            expected,
            support,
        })
    }

    /// Encoding plus logical Hadamards on the full register.
    pub fn core(&self) -> Circuit {
        self.slice(0..self.core_len)
    }

    /// The EC block (empty when `ec = 0`).
    pub fn tail(&self) -> Circuit {
        self.slice(self.core_len..self.circuit.len())
    }

    fn slice(&self, range: std::ops::Range<usize>) -> Circuit {
        Circuit {
            n_qubits: self.circuit.n_qubits,
            n_clbits: self.circuit.n_clbits,
            ops: self.circuit.ops[range].to_vec(),
            label: self.circuit.label.clone(),
        }
    }

    /// Logical error probability of a final state of this circuit.
    pub fn p_err<R: Rng + ?Sized>(&self, state: &StateVector, rng: &mut R) -> Result<f64> {
        if state.n_qubits() != self.circuit.n_qubits {
            return Err(Error::Domain(format!(
                "{}-qubit state for a {}-qubit code circuit",
                state.n_qubits(),
                self.circuit.n_qubits
            )));
        }
        match self.spec.metric {
            MetricMode::Overlap => Ok((1.0 - state.reduced_fidelity(&self.expected)?).clamp(0.0, 1.0)),
            MetricMode::Shots { n_shots } => {
                if n_shots == 0 {
                    return Err(Error::Domain("shots metric needs at least one shot".into()));
                }
                let data: Vec<usize> = (0..self.n_data).collect();
                let probs = state.marginal(&data)?;
                let bad = sample_indices(&probs, n_shots, rng)
                    .into_iter()
                    .filter(|&i| !self.support[i])
                    .count();
                Ok(bad as f64 / n_shots as f64)
            }
        }
    }
}

/// Assemble the experiment circuit for `spec`.
pub fn build_code_circuit(spec: CodeExperimentSpec) -> Result<Circuit> {
    Ok(CodeCircuit::build(spec)?.circuit)
}

/// Logical error probability of `state`, a final state of `code_circuit`.
pub fn p_err<R: Rng + ?Sized>(
    state: &StateVector,
    code_circuit: &CodeCircuit,
    rng: &mut R,
) -> Result<f64> {
    code_circuit.p_err(state, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::{execute_on, inject_noise, GateOp, PauliAxis};
    use crate::noise::NoiseSpec;
    use rand_chacha::ChaCha8Rng;

    fn spec(code: CodeId, m: usize, ec: bool) -> CodeExperimentSpec {
        CodeExperimentSpec { code, m, ec, metric: MetricMode::Overlap }
    }

    #[test]
    fn noiseless_circuits_have_no_error() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for code in [CodeId::Five, CodeId::Steane] {
            for m in [0, 1, 2, 10] {
                for ec in [false, true] {
                    for metric in [MetricMode::Overlap, MetricMode::Shots { n_shots: 100 }] {
                        let cc = CodeCircuit::build(CodeExperimentSpec { code, m, ec, metric }).unwrap();
                        let (s, _) = execute(&cc.circuit, &mut rng).unwrap();
                        assert!(cc.p_err(&s, &mut rng).unwrap() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn m_zero_ec_zero_is_logical_zero() {
        for code in [CodeId::Five, CodeId::Steane] {
            let cc = CodeCircuit::build(spec(code, 0, false)).unwrap();
            let zero = logical_zero(&code.code()).unwrap();
            assert!(cc.expected.infidelity(&zero).unwrap().abs() < 1e-12);
            let cc = CodeCircuit::build(spec(code, 1, false)).unwrap();
            let plus = logical_plus(&code.code()).unwrap();
            assert!(cc.expected.infidelity(&plus).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn logical_flip_is_total_error() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for code in [CodeId::Five, CodeId::Steane] {
            let cc = CodeCircuit::build(spec(code, 2, false)).unwrap();
            let (mut s, _) = execute(&cc.circuit, &mut rng).unwrap();
            code.code().logical_x.apply(&mut s).unwrap();
            assert!((cc.p_err(&s, &mut rng).unwrap() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn every_single_qubit_error_is_corrected() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for code in [CodeId::Five, CodeId::Steane] {
            for m in [0, 3] {
                let cc = CodeCircuit::build(spec(code, m, true)).unwrap();
                for at in [cc.encoding_len, cc.core_len] {
                    for q in 0..cc.n_data {
                        for axis in PauliAxis::ALL {
                            let mut c = cc.circuit.clone();
                            c.ops.insert(at, GateOp::Pauli { qubit: q, axis });
                            let (s, _) = execute(&c, &mut rng).unwrap();
                            let e = cc.p_err(&s, &mut rng).unwrap();
                            assert!(e < 1e-10, "{code} m={m} {axis}{q} at {at}: {e}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn uncorrected_single_errors_are_detected_as_failures() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let cc = CodeCircuit::build(spec(CodeId::Five, 0, false)).unwrap();
        let mut c = cc.circuit.clone();
        c.push(GateOp::Pauli { qubit: 2, axis: PauliAxis::X }).unwrap();
        let (s, _) = execute(&c, &mut rng).unwrap();
        assert!((cc.p_err(&s, &mut rng).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn shots_match_overlap_for_a_bit_flip_rotation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n_shots = 2000;
        for code in [CodeId::Five, CodeId::Steane] {
            let overlap = CodeCircuit::build(spec(code, 2, false)).unwrap();
            let shots = CodeCircuit::build(CodeExperimentSpec {
                metric: MetricMode::Shots { n_shots },
                ..overlap.spec
            })
            .unwrap();
            // cos θ I + i sin θ X on one data qubit leaves the codeword's parity class
            let mut c = overlap.circuit.clone();
            c.push(GateOp::ErrorRotation { qubit: 1, theta: 0.5, alpha: 0.0, beta: 0.0 }).unwrap();
            let (s, _) = execute(&c, &mut rng).unwrap();
            let p = overlap.p_err(&s, &mut rng).unwrap();
            assert!((p - 0.5f64.sin().powi(2)).abs() < 1e-12);
            let est = shots.p_err(&s, &mut rng).unwrap();
            let se = (p * (1.0 - p) / n_shots as f64).sqrt();
            assert!((est - p).abs() < 3.0 * se, "{code}: {est} vs {p}");
        }
    }

    #[test]
    fn core_and_tail_split_the_circuit() {
        let cc = CodeCircuit::build(spec(CodeId::Steane, 4, true)).unwrap();
        let mut joined = cc.core();
        joined.extend_from(&cc.tail()).unwrap();
        assert_eq!(joined.ops, cc.circuit.ops);
        assert_eq!(cc.core().len(), 12 + 4 * 7);
        assert!(CodeCircuit::build(spec(CodeId::Steane, 4, false)).unwrap().tail().is_empty());
    }

    #[test]
    fn shots_agree_with_overlap_on_noisy_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n_shots = 4000;
        let overlap = CodeCircuit::build(spec(CodeId::Five, 3, false)).unwrap();
        let shots = CodeCircuit::build(CodeExperimentSpec {
            metric: MetricMode::Shots { n_shots },
            ..overlap.spec
        })
        .unwrap();
        let noise = NoiseSpec::Gaussian { sigma: 0.3 };
        let mut checked = 0;
        while checked < 5 {
            let noisy = inject_noise(&overlap.circuit, &noise, &mut rng).unwrap();
            let mut s = StateVector::zero(noisy.n_qubits).unwrap();
            execute_on(&mut s, &noisy, &mut rng).unwrap();
            let p = overlap.p_err(&s, &mut rng).unwrap();
            // the support rule cannot see phase errors, so compare against
            // the probability mass outside the support instead
            let data: Vec<usize> = (0..5).collect();
            let outside: f64 = s
                .marginal(&data)
                .unwrap()
                .iter()
                .zip(&overlap.support)
                .filter(|(_, &inside)| !inside)
                .map(|(p, _)| p)
                .sum();
            assert!(outside <= p + 1e-12);
            let est = shots.p_err(&s, &mut rng).unwrap();
            let se = (outside * (1.0 - outside) / n_shots as f64).sqrt().max(1e-3);
            assert!((est - outside).abs() < 4.0 * se, "{est} vs {outside}");
            checked += 1;
        }
    }
}
