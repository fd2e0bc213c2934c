//! Coherent-noise simulation of small quantum circuits.
//!
//! The crate is organised bottom-up:
//!
//! - [`noise`]: the rotation-error model (von Mises–Fisher and its Gaussian
//!   limit), the symmetric Pauli channel and entropy matching between the two.
//! - [`statevector`]: a dense state-vector engine.
//! - [`circuits`]: the gate IR, execution, noise injection and the Grover and
//!   random-Clifford builders.
//! - [`qec`]: the `[[5,1,3]]` and `[[7,1,3]]` codes and code-experiment circuits.
//! - [`propagation`]: analytic variance tracking through H/CNOT circuits.
//! - [`harness`]: seeded sweeps, CSV output and experiment configuration.
//!
//! Bit order is fixed crate-wide: qubit 0 is the least-significant bit of a
//! basis-state index. Bitstrings are written qubit 0 first, so `"10"` on two
//! qubits names the basis state with qubit 0 set (index 1).

pub mod circuits;
pub mod error;
pub mod harness;
pub mod noise;
pub mod propagation;
pub mod qec;
pub mod statevector;

pub use circuits::{Circuit, Condition, GateOp, GroverSpec, PauliAxis, RandomCliffordSpec};
pub use error::{Error, Result};
pub use harness::{ExperimentConfig, ExperimentKind, RunOutput};
pub use noise::{AngleSample, ChannelMatch, Matrix2, NoiseSpec};
pub use propagation::{PropagationResult, QubitErrorTrack};
pub use qec::{CodeExperimentSpec, CodeId, MetricMode, PauliString, StabilizerCode};
pub use statevector::{MeasurementRecord, StateVector};
