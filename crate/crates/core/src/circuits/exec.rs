use rand::Rng;

use super::{Circuit, GateOp};
use crate::error::{Error, Result};
use crate::noise::Matrix2;
use crate::statevector::{ControlledKind, MeasurementRecord, StateVector};

/// Run `circuit` from `|0…0⟩`.
pub fn execute<R: Rng + ?Sized>(
    circuit: &Circuit,
    rng: &mut R,
) -> Result<(StateVector, MeasurementRecord)> {
    let mut state = StateVector::zero(circuit.n_qubits)?;
    let record = execute_on(&mut state, circuit, rng)?;
    Ok((state, record))
}

/// Run `circuit` on an existing state. Classical bits start at 0.
///
/// Runs of unconditional single-qubit ops on the same qubit are multiplied
/// into one matrix before touching the state.
pub fn execute_on<R: Rng + ?Sized>(
    state: &mut StateVector,
    circuit: &Circuit,
    rng: &mut R,
) -> Result<MeasurementRecord> {
    if state.n_qubits() != circuit.n_qubits {
        return Err(Error::InvalidCircuit(format!(
            "{}-qubit circuit on a {}-qubit state",
            circuit.n_qubits,
            state.n_qubits()
        )));
    }
    let mut bits = vec![0u8; circuit.n_clbits];
    let mut probabilities = Vec::new();
    let ops = &circuit.ops;
    let mut i = 0;
    while i < ops.len() {
        let start = i;
        let wrap = |e: Error| Error::Execution {
            index: start,
            op: ops[start].to_string(),
            source: Box::new(e),
        };
        if let Some(m) = ops[i].matrix() {
            let q = ops[i].qubits()[0];
            let mut fused = m.map_err(wrap)?;
            while let Some(next) = ops.get(i + 1) {
                match next.matrix() {
                    Some(m) if next.qubits()[0] == q => {
                        fused = m.map_err(wrap)? * fused;
                        i += 1;
                    }
                    _ => break,
                }
            }
            state.apply_1q(&fused, q).map_err(wrap)?;
            i += 1;
            continue;
        }
        match &ops[i] {
            GateOp::Cnot { control, target } => {
                state.apply_controlled(ControlledKind::Cnot, &[*control, *target])
            }
            GateOp::Cz(a, b) => state.apply_controlled(ControlledKind::Cz, &[*a, *b]),
            GateOp::Swap(a, b) => state.apply_controlled(ControlledKind::Swap, &[*a, *b]),
            GateOp::Mcz(qs) => state.apply_controlled(ControlledKind::Mcz, qs),
            GateOp::Measure { qubit, clbit } => {
                state.measure(*qubit, rng).map(|(bit, p)| {
                    bits[*clbit] = bit;
                    probabilities.push(p);
                })
            }
            GateOp::CondPauli { qubit, axis, condition } => {
                if condition.clbits.iter().any(|&c| c >= bits.len()) {
                    Err(Error::InvalidCircuit("condition on a missing classical bit".into()))
                } else if condition.is_satisfied(&bits) {
                    state.apply_1q(&axis.matrix(), *qubit)
                } else {
                    Ok(())
                }
            }
            op => unreachable!("{op:?} has a matrix"),
        }
        .map_err(wrap)?;
        i += 1;
    }
    Ok(MeasurementRecord { bits, probabilities: Some(probabilities) })
}

/// The matrix product of a run of single-qubit ops, for tests.
#[allow(dead_code)]
pub(crate) fn product(ops: &[GateOp]) -> Result<Matrix2> {
    ops.iter().try_fold(Matrix2::IDENTITY, |acc, op| {
        let m = op.matrix().ok_or_else(|| Error::InvalidCircuit(format!("{op} is not 1q")))??;
        Ok(m * acc)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::{Condition, PauliAxis};
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(11)
    }

    #[test]
    fn empty_circuit_leaves_zero_state() {
        let (s, rec) = execute(&Circuit::new(2, 0), &mut rng()).unwrap();
        assert_eq!(s, StateVector::zero(2).unwrap());
        assert!(rec.bits.is_empty());
    }

    #[test]
    fn bell_state() {
        let mut c = Circuit::new(2, 0);
        c.h(0).unwrap().cnot(0, 1).unwrap();
        let (s, _) = execute(&c, &mut rng()).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let expected = [r, 0.0, 0.0, r];
        for (a, e) in s.amplitudes().iter().zip(expected) {
            assert!((a - Complex64::new(e, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn conditional_pauli_follows_measurement() {
        // ancilla (qubit 1) in |1⟩ is measured; the correction flips qubit 0
        let mut c = Circuit::new(2, 1);
        c.x(1).unwrap().measure(1, 0).unwrap();
        c.push(GateOp::CondPauli {
            qubit: 0,
            axis: PauliAxis::X,
            condition: Condition { clbits: vec![0], value: 1 },
        })
        .unwrap();
        let (s, rec) = execute(&c, &mut rng()).unwrap();
        assert_eq!(rec.bits, vec![1]);
        assert_eq!(s, StateVector::init_basis(2, "11").unwrap());

        let mut c = Circuit::new(2, 1);
        c.measure(1, 0).unwrap();
        c.push(GateOp::CondPauli {
            qubit: 0,
            axis: PauliAxis::X,
            condition: Condition { clbits: vec![0], value: 1 },
        })
        .unwrap();
        let (s, _) = execute(&c, &mut rng()).unwrap();
        assert_eq!(s, StateVector::zero(2).unwrap());
    }

    #[test]
    fn fusion_matches_gate_by_gate() {
        let ops = vec![
            GateOp::H(0),
            GateOp::ErrorRotation { qubit: 0, theta: 0.1, alpha: 0.2, beta: 0.2 },
            GateOp::S(0),
            GateOp::Pauli { qubit: 0, axis: PauliAxis::Y },
        ];
        let mut c = Circuit::new(1, 0);
        c.ops = ops.clone();
        let (fused, _) = execute(&c, &mut rng()).unwrap();

        let mut s = StateVector::zero(1).unwrap();
        for op in &ops {
            s.apply_1q(&op.matrix().unwrap().unwrap(), 0).unwrap();
        }
        assert!(fused.infidelity(&s).unwrap().abs() < 1e-14);
        let m = product(&ops).unwrap();
        let mut t = StateVector::zero(1).unwrap();
        t.apply_1q(&m, 0).unwrap();
        assert!(t.infidelity(&s).unwrap().abs() < 1e-14);
    }

    #[test]
    fn errors_carry_op_index() {
        let mut c = Circuit::new(1, 0);
        c.h(0).unwrap();
        c.ops.push(GateOp::ErrorRotation { qubit: 0, theta: f64::NAN, alpha: 0.0, beta: 0.0 });
        c.ops.insert(0, GateOp::X(0));
        c.ops.insert(0, GateOp::Cz(0, 0));
        let err = execute(&c, &mut rng()).unwrap_err();
        assert!(matches!(err, Error::Execution { index: 0, .. }), "{err}");
        c.ops.remove(0);
        let err = execute(&c, &mut rng()).unwrap_err();
        assert!(matches!(err, Error::Execution { index: 0, .. }), "{err}");
    }

    #[test]
    fn execution_is_deterministic_per_seed() {
        let mut c = Circuit::new(3, 3);
        for q in 0..3 {
            c.h(q).unwrap();
        }
        for q in 0..3 {
            c.measure(q, q).unwrap();
        }
        let a = execute(&c, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let b = execute(&c, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(a, b);
    }
}
