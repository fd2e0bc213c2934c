use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Circuit, GateOp};
use crate::error::{domain, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomCliffordSpec {
    pub n_qubits: usize,
    pub n_hadamard: usize,
    pub n_cnot: usize,
    pub seed: u64,
}

/// A random H/CNOT circuit: uniform targets, uniform ordered CNOT pairs, and
/// a uniform shuffle of the combined gate list. Fully determined by the seed.
pub fn build_random_clifford(spec: &RandomCliffordSpec) -> Result<Circuit> {
    let n = spec.n_qubits;
    if n == 0 {
        return Err(domain("random Clifford circuit needs at least one qubit"));
    }
    if spec.n_cnot > 0 && n < 2 {
        return Err(domain("CNOT gates need at least two qubits"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut ops = Vec::with_capacity(spec.n_hadamard + spec.n_cnot);
    for _ in 0..spec.n_hadamard {
        ops.push(GateOp::H(rng.random_range(0..n)));
    }
    for _ in 0..spec.n_cnot {
        let control = rng.random_range(0..n);
        // uniform over the n-1 other qubits
        let mut target = rng.random_range(0..n - 1);
        if target >= control {
            target += 1;
        }
        ops.push(GateOp::Cnot { control, target });
    }
    ops.shuffle(&mut rng);
    let mut c = Circuit::new(n, 0).with_label(format!(
        "random clifford n={n} h={} cnot={} seed={}",
        spec.n_hadamard, spec.n_cnot, spec.seed
    ));
    c.ops = ops;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::{ChiSquared, ContinuousCDF};

    fn spec(seed: u64) -> RandomCliffordSpec {
        RandomCliffordSpec { n_qubits: 5, n_hadamard: 10, n_cnot: 10, seed }
    }

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(build_random_clifford(&spec(9)).unwrap(), build_random_clifford(&spec(9)).unwrap());
        assert_ne!(build_random_clifford(&spec(9)).unwrap(), build_random_clifford(&spec(10)).unwrap());
    }

    #[test]
    fn gate_counts() {
        let c = build_random_clifford(&spec(1)).unwrap();
        assert_eq!(c.ops.iter().filter(|o| matches!(o, GateOp::H(_))).count(), 10);
        assert_eq!(c.ops.iter().filter(|o| matches!(o, GateOp::Cnot { .. })).count(), 10);
        c.validate().unwrap();
    }

    #[test]
    fn hadamard_targets_are_uniform() {
        let mut hist = [0f64; 5];
        for seed in 0..1000 {
            let s = RandomCliffordSpec { n_qubits: 5, n_hadamard: 100, n_cnot: 0, seed };
            for op in build_random_clifford(&s).unwrap().ops {
                if let GateOp::H(q) = op {
                    hist[q] += 1.0;
                }
            }
        }
        let expected = 100_000.0 / 5.0;
        let chi2: f64 = hist.iter().map(|o| (o - expected).powi(2) / expected).sum();
        let critical = ChiSquared::new(4.0).unwrap().inverse_cdf(0.99);
        assert!(chi2 < critical, "chi2 {chi2} >= {critical}");
    }

    #[test]
    fn cnot_pairs_are_uniform() {
        let mut hist = [[0f64; 4]; 4];
        for seed in 0..500 {
            let s = RandomCliffordSpec { n_qubits: 4, n_hadamard: 0, n_cnot: 60, seed };
            for op in build_random_clifford(&s).unwrap().ops {
                if let GateOp::Cnot { control, target } = op {
                    assert_ne!(control, target);
                    hist[control][target] += 1.0;
                }
            }
        }
        let expected = 30_000.0 / 12.0;
        let chi2: f64 = (0..4)
            .flat_map(|c| (0..4).filter(move |&t| t != c).map(move |t| (c, t)))
            .map(|(c, t)| (hist[c][t] - expected).powi(2) / expected)
            .sum();
        let critical = ChiSquared::new(11.0).unwrap().inverse_cdf(0.99);
        assert!(chi2 < critical, "chi2 {chi2} >= {critical}");
    }

    #[test]
    fn one_qubit_cnots_rejected() {
        let s = RandomCliffordSpec { n_qubits: 1, n_hadamard: 3, n_cnot: 1, seed: 0 };
        assert!(build_random_clifford(&s).is_err());
        let s = RandomCliffordSpec { n_cnot: 0, ..s };
        assert_eq!(build_random_clifford(&s).unwrap().len(), 3);
    }
}
