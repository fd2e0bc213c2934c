use rand::Rng;

use super::{Circuit, GateOp};
use crate::error::Result;
use crate::noise::{sample_pauli, NoiseSpec};

/// Copy `circuit`, inserting one noise op after every H, X, Y, Z and S.
///
/// Continuous specs insert an `ErrorRotation` with `α = β = φ`; the Pauli
/// spec inserts a `Pauli` op with probability `p` and nothing otherwise.
/// Multi-qubit gates, measurements and conditional corrections are noiseless.
pub fn inject_noise<R: Rng + ?Sized>(
    circuit: &Circuit,
    spec: &NoiseSpec,
    rng: &mut R,
) -> Result<Circuit> {
    spec.validate()?;
    let mut out = Circuit {
        n_qubits: circuit.n_qubits,
        n_clbits: circuit.n_clbits,
        ops: Vec::with_capacity(circuit.ops.len() * 2),
        label: circuit.label.clone(),
    };
    for op in &circuit.ops {
        out.ops.push(op.clone());
        if !op.is_single_qubit_gate() {
            continue;
        }
        let qubit = op.qubits()[0];
        match spec {
            NoiseSpec::Pauli { p } => {
                if let Some(axis) = sample_pauli(*p, rng)? {
                    out.ops.push(GateOp::Pauli { qubit, axis });
                }
            }
            _ => {
                let a = spec.sample_angles(rng)?;
                out.ops.push(GateOp::ErrorRotation {
                    qubit,
                    theta: a.theta,
                    alpha: a.phi,
                    beta: a.phi,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::{execute, PauliAxis};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn mixed() -> Circuit {
        let mut c = Circuit::new(3, 1);
        c.h(0).unwrap().cnot(0, 1).unwrap().s(2).unwrap().cz(1, 2).unwrap();
        c.x(1).unwrap().z(0).unwrap().measure(2, 0).unwrap();
        c.push(GateOp::Y(2)).unwrap();
        c
    }

    #[test]
    fn zero_sigma_is_functionally_identical() {
        let c = mixed();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let noisy = inject_noise(&c, &NoiseSpec::Gaussian { sigma: 0.0 }, &mut rng).unwrap();
        let (a, ra) = execute(&c, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        let (b, rb) = execute(&noisy, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        assert!(a.infidelity(&b).unwrap().abs() < 1e-14);
        assert_eq!(ra.bits, rb.bits);
    }

    #[test]
    fn one_rotation_per_single_qubit_gate() {
        let mut c = Circuit::new(2, 0);
        for _ in 0..7 {
            c.h(0).unwrap();
        }
        c.cnot(0, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for spec in [NoiseSpec::Gaussian { sigma: 0.1 }, NoiseSpec::Vmf { kappa: 50.0 }] {
            let noisy = inject_noise(&c, &spec, &mut rng).unwrap();
            let n = noisy.ops.iter().filter(|o| matches!(o, GateOp::ErrorRotation { .. })).count();
            assert_eq!(n, 7);
            for op in &noisy.ops {
                if let GateOp::ErrorRotation { alpha, beta, .. } = op {
                    assert_eq!(alpha, beta);
                }
            }
        }
    }

    #[test]
    fn original_ops_keep_their_order() {
        let c = mixed();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for spec in [NoiseSpec::Gaussian { sigma: 0.2 }, NoiseSpec::Pauli { p: 0.5 }] {
            let noisy = inject_noise(&c, &spec, &mut rng).unwrap();
            let kept: Vec<_> = noisy
                .ops
                .iter()
                .filter(|o| !matches!(o, GateOp::ErrorRotation { .. } | GateOp::Pauli { .. }))
                .cloned()
                .collect();
            assert_eq!(kept, c.ops);
            // every insertion sits right after a single-qubit gate on the same qubit
            for w in noisy.ops.windows(2) {
                if matches!(w[1], GateOp::ErrorRotation { .. } | GateOp::Pauli { .. }) {
                    assert!(w[0].is_single_qubit_gate());
                    assert_eq!(w[0].qubits(), w[1].qubits());
                }
            }
        }
    }

    #[test]
    fn certain_pauli_faults_are_balanced() {
        let mut c = Circuit::new(1, 0);
        for _ in 0..30 {
            c.h(0).unwrap();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut counts = [0usize; 3];
        for _ in 0..1000 {
            let noisy = inject_noise(&c, &NoiseSpec::Pauli { p: 1.0 }, &mut rng).unwrap();
            let faults: Vec<_> = noisy
                .ops
                .iter()
                .filter_map(|o| match o {
                    GateOp::Pauli { axis, .. } => Some(*axis),
                    _ => None,
                })
                .collect();
            assert_eq!(faults.len(), 30);
            for a in faults {
                counts[PauliAxis::ALL.iter().position(|&b| b == a).unwrap()] += 1;
            }
        }
        let n: f64 = 30_000.0;
        let se = (n * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
        for c in counts {
            assert!((c as f64 - n / 3.0).abs() < 3.0 * se, "{counts:?}");
        }
    }

    #[test]
    fn invalid_spec_is_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        assert!(inject_noise(&mixed(), &NoiseSpec::Pauli { p: 1.5 }, &mut rng).is_err());
        assert!(inject_noise(&mixed(), &NoiseSpec::Vmf { kappa: 0.0 }, &mut rng).is_err());
    }
}
