//! Analytic tracking of small coherent errors through Clifford circuits.
//!
//! Each qubit carries a pair of independent zero-mean Gaussian angles
//! `(θ, φ)`. A noisy single-qubit gate adds `σ_h²` to both variances; H
//! also swaps the two axes first. CNOT and CZ pass errors through unchanged,
//! SWAP exchanges the two qubits' tracks. Correlations created by entangling
//! gates are ignored.

use std::fmt;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::circuits::{Circuit, GateOp};
use crate::error::{domain, Error, Result};
use crate::noise::AngleSample;

/// Accumulated angle variances of one qubit.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QubitErrorTrack {
    pub var_theta: f64,
    pub var_phi: f64,
}

/// Dense row-major real matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1.0;
        }
        RealMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.dim + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.dim..(row + 1) * self.dim]
    }

    pub fn apply(&self, z: &[f64]) -> Result<Vec<f64>> {
        if z.len() != self.dim {
            return Err(domain(format!("vector of length {} for a {}-dim map", z.len(), self.dim)));
        }
        Ok((0..self.dim).map(|r| self.row(r).iter().zip(z).map(|(m, x)| m * x).sum()).collect())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.dim {
                self.data.swap(a * self.dim + c, b * self.dim + c);
            }
        }
    }

    fn scale_row(&mut self, r: usize, f: f64) {
        for x in &mut self.data[r * self.dim..(r + 1) * self.dim] {
            *x *= f;
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PropagationResult {
    pub tracks: Vec<QubitErrorTrack>,
    /// Map from initial angles `(θ_1…θ_n, φ_1…φ_n)` to final ones.
    pub jacobian: Option<RealMatrix>,
}

impl PropagationResult {
    /// Qubit-by-qubit text: `qubit var_theta var_phi`.
    pub fn tracks_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for PropagationResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (q, t) in self.tracks.iter().enumerate() {
            writeln!(f, "{q} {:e} {:e}", t.var_theta, t.var_phi)?;
        }
        Ok(())
    }
}

/// What a gate does to the angle pair of the qubits it touches.
enum Action {
    /// Noisy single-qubit gate; `swap` for H.
    Noisy { qubit: usize, swap: bool },
    Exchange(usize, usize),
    PassThrough,
}

fn action(index: usize, op: &GateOp) -> Result<Action> {
    Ok(match op {
        GateOp::H(q) => Action::Noisy { qubit: *q, swap: true },
        // Paulis and S permute or negate angle signs, which a zero-mean
        // Gaussian absorbs
        GateOp::X(q) | GateOp::Y(q) | GateOp::Z(q) | GateOp::S(q) => {
            Action::Noisy { qubit: *q, swap: false }
        }
        GateOp::Swap(a, b) => Action::Exchange(*a, *b),
        GateOp::Cnot { .. } | GateOp::Cz(..) | GateOp::Measure { .. } | GateOp::CondPauli { .. } => {
            Action::PassThrough
        }
        GateOp::Mcz(_) | GateOp::ErrorRotation { .. } | GateOp::Pauli { .. } => {
            return Err(Error::Execution {
                index,
                op: op.to_string(),
                source: Box::new(domain(format!(
                    "{} cannot be propagated; only Clifford gates are supported",
                    op.name()
                ))),
            })
        }
    })
}

/// Track variances through `circuit` with per-gate width `sigma_h`.
pub fn propagate_variances(circuit: &Circuit, sigma_h: f64) -> Result<PropagationResult> {
    if sigma_h.is_nan() || sigma_h < 0.0 {
        return Err(domain(format!("sigma_h must be >= 0, got {sigma_h}")));
    }
    let s2 = sigma_h * sigma_h;
    let mut tracks = vec![QubitErrorTrack::default(); circuit.n_qubits];
    for (i, op) in circuit.ops.iter().enumerate() {
        match action(i, op)? {
            Action::Noisy { qubit, swap } => {
                let t = &mut tracks[qubit];
                if swap {
                    std::mem::swap(&mut t.var_theta, &mut t.var_phi);
                }
                t.var_theta += s2;
                t.var_phi += s2;
            }
            Action::Exchange(a, b) => tracks.swap(a, b),
            Action::PassThrough => {}
        }
    }
    Ok(PropagationResult { tracks, jacobian: None })
}

/// The linear map `z̃ = M z` of the angle-rescaling picture.
///
/// Angles are measured against a fixed reference Gaussian of one gate's
/// width. A noisy gate on a qubit that has already seen `k ≥ 1` noisy gates
/// rescales its angles by `√((k+1)/k)`; the first noisy gate has no prior
/// width to rescale and contributes a factor 1, so its noise is the
/// reference prior itself. H swaps the pair before rescaling; SWAP exchanges
/// qubits; CNOT and CZ contribute the identity. Qubits never touched by a
/// noisy gate keep the identity block.
///
/// With `z ~ N(0, σ_h² I)`, every qubit touched at least once ends with the
/// variances of [`propagate_variances`].
pub fn jacobian(circuit: &Circuit) -> Result<RealMatrix> {
    let n = circuit.n_qubits;
    let mut m = RealMatrix::identity(2 * n);
    let mut seen = vec![0u64; n];
    for (i, op) in circuit.ops.iter().enumerate() {
        match action(i, op)? {
            Action::Noisy { qubit, swap } => {
                if swap {
                    m.swap_rows(qubit, n + qubit);
                }
                let k = seen[qubit];
                if k > 0 {
                    let f = ((k + 1) as f64 / k as f64).sqrt();
                    m.scale_row(qubit, f);
                    m.scale_row(n + qubit, f);
                }
                seen[qubit] += 1;
            }
            Action::Exchange(a, b) => {
                m.swap_rows(a, b);
                m.swap_rows(n + a, n + b);
                seen.swap(a, b);
            }
            Action::PassThrough => {}
        }
    }
    Ok(m)
}

/// Variances and Jacobian together.
pub fn propagate(circuit: &Circuit, sigma_h: f64) -> Result<PropagationResult> {
    let mut r = propagate_variances(circuit, sigma_h)?;
    r.jacobian = Some(jacobian(circuit)?);
    Ok(r)
}

/// One independent `(θ, φ)` draw per qubit from the tracked variances.
pub fn sample_terminal_errors<R: Rng + ?Sized>(
    result: &PropagationResult,
    rng: &mut R,
) -> Result<Vec<AngleSample>> {
    result
        .tracks
        .iter()
        .map(|t| {
            if !(t.var_theta >= 0.0 && t.var_phi >= 0.0) {
                return Err(domain(format!("negative or NaN variance in {t:?}")));
            }
            let a: f64 = rng.sample(StandardNormal);
            let b: f64 = rng.sample(StandardNormal);
            Ok(AngleSample { theta: a * t.var_theta.sqrt(), phi: b * t.var_phi.sqrt() })
        })
        .collect()
}

/// `core` run noiselessly, one sampled terminal error per qubit, then `tail`.
pub fn build_approx_circuit<R: Rng + ?Sized>(
    core: &Circuit,
    tail: &Circuit,
    result: &PropagationResult,
    rng: &mut R,
) -> Result<Circuit> {
    if core.n_qubits != tail.n_qubits {
        return Err(Error::InvalidCircuit(format!(
            "core has {} qubits but tail has {}",
            core.n_qubits, tail.n_qubits
        )));
    }
    if result.tracks.len() != core.n_qubits {
        return Err(Error::InvalidCircuit(format!(
            "{} tracks for a {}-qubit circuit",
            result.tracks.len(),
            core.n_qubits
        )));
    }
    let mut out = Circuit::new(core.n_qubits, core.n_clbits.max(tail.n_clbits))
        .with_label(format!("approx {}", core.label));
    out.ops.reserve(core.len() + core.n_qubits + tail.len());
    out.ops.extend(core.ops.iter().cloned());
    for (qubit, a) in sample_terminal_errors(result, rng)?.into_iter().enumerate() {
        out.ops.push(GateOp::ErrorRotation { qubit, theta: a.theta, alpha: a.phi, beta: a.phi });
    }
    out.ops.extend(tail.ops.iter().cloned());
    out.validate()?;
    Ok(out)
}
