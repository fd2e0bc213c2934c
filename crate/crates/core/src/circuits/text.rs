//! Line-oriented circuit text.
//!
//! ```text
//! circuit <n_qubits> <n_clbits>
//! label <free text>            (optional)
//! H 0                          also X, Y, Z, S
//! CNOT <control> <target>
//! CZ <a> <b>
//! SWAP <a> <b>
//! MCZ <q>...
//! ERR <q> <theta> <alpha> <beta>
//! PAULI <q> <X|Y|Z>
//! MEASURE <q> <clbit>
//! COND_PAULI <q> <X|Y|Z> <value> <clbit>...
//! ```
//!
//! `#` starts a comment; blank lines are ignored. Angles are written in
//! shortest round-trip exponent form, so parsing a written circuit is exact.

use std::fmt;
use std::str::FromStr;

use super::{Circuit, Condition, GateOp};
use crate::error::{Error, Result};
use crate::noise::PauliAxis;

pub(crate) fn write_op(f: &mut fmt::Formatter<'_>, op: &GateOp) -> fmt::Result {
    let name = op.name();
    match op {
        GateOp::H(q) | GateOp::X(q) | GateOp::Y(q) | GateOp::Z(q) | GateOp::S(q) => {
            write!(f, "{name} {q}")
        }
        GateOp::Cnot { control, target } => write!(f, "{name} {control} {target}"),
        GateOp::Cz(a, b) | GateOp::Swap(a, b) => write!(f, "{name} {a} {b}"),
        GateOp::Mcz(qs) => {
            write!(f, "{name}")?;
            qs.iter().try_for_each(|q| write!(f, " {q}"))
        }
        GateOp::ErrorRotation { qubit, theta, alpha, beta } => {
            write!(f, "{name} {qubit} {theta:e} {alpha:e} {beta:e}")
        }
        GateOp::Pauli { qubit, axis } => write!(f, "{name} {qubit} {axis}"),
        GateOp::Measure { qubit, clbit } => write!(f, "{name} {qubit} {clbit}"),
        GateOp::CondPauli { qubit, axis, condition } => {
            write!(f, "{name} {qubit} {axis} {}", condition.value)?;
            condition.clbits.iter().try_for_each(|c| write!(f, " {c}"))
        }
    }
}

pub(crate) fn write_circuit(f: &mut fmt::Formatter<'_>, c: &Circuit) -> fmt::Result {
    writeln!(f, "circuit {} {}", c.n_qubits, c.n_clbits)?;
    if !c.label.is_empty() {
        writeln!(f, "label {}", c.label.replace(['\n', '\r'], " "))?;
    }
    for op in &c.ops {
        writeln!(f, "{op}")?;
    }
    Ok(())
}

/// Parse the text written by `Circuit`'s `Display`.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |message: String| Error::Parse { line: line_no, message };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some(c) = circuit.as_mut() else {
            let mut words = line.split_whitespace();
            if words.next() != Some("circuit") {
                return Err(err("expected `circuit <n_qubits> <n_clbits>` header".into()));
            }
            let nq = number(words.next(), "qubit count").map_err(err)?;
            let nc = number(words.next(), "clbit count").map_err(err)?;
            if let Some(extra) = words.next() {
                return Err(err(format!("unexpected `{extra}` after header")));
            }
            circuit = Some(Circuit::new(nq, nc));
            continue;
        };
        if let Some(rest) = line.strip_prefix("label") {
            if rest.is_empty() || rest.starts_with(char::is_whitespace) {
                c.label = rest.trim().to_string();
                continue;
            }
        }
        let op = parse_op(line).map_err(err)?;
        c.push(op).map_err(|e| err(e.to_string()))?;
    }
    circuit.ok_or(Error::Parse { line: 0, message: "no circuit header".into() })
}

fn parse_op(line: &str) -> std::result::Result<GateOp, String> {
    let mut words = line.split_whitespace();
    let kind = words.next().unwrap_or_default();
    let mut next_q = |what: &str| number::<usize>(words.next(), what);
    let op = match kind {
        "H" => GateOp::H(next_q("qubit")?),
        "X" => GateOp::X(next_q("qubit")?),
        "Y" => GateOp::Y(next_q("qubit")?),
        "Z" => GateOp::Z(next_q("qubit")?),
        "S" => GateOp::S(next_q("qubit")?),
        "CNOT" => GateOp::Cnot { control: next_q("control")?, target: next_q("target")? },
        "CZ" => GateOp::Cz(next_q("qubit")?, next_q("qubit")?),
        "SWAP" => GateOp::Swap(next_q("qubit")?, next_q("qubit")?),
        "MCZ" => {
            let qs = words.by_ref().map(|w| number(Some(w), "qubit")).collect::<Result<_, _>>()?;
            GateOp::Mcz(qs)
        }
        "ERR" => GateOp::ErrorRotation {
            qubit: next_q("qubit")?,
            theta: number(words.next(), "theta")?,
            alpha: number(words.next(), "alpha")?,
            beta: number(words.next(), "beta")?,
        },
        "PAULI" => GateOp::Pauli { qubit: next_q("qubit")?, axis: axis(words.next())? },
        "MEASURE" => GateOp::Measure { qubit: next_q("qubit")?, clbit: next_q("clbit")? },
        "COND_PAULI" => {
            let qubit = next_q("qubit")?;
            let axis = axis(words.next())?;
            let value = number(words.next(), "condition value")?;
            let clbits =
                words.by_ref().map(|w| number(Some(w), "clbit")).collect::<Result<Vec<_>, _>>()?;
            if clbits.is_empty() {
                return Err("COND_PAULI needs at least one clbit".into());
            }
            GateOp::CondPauli { qubit, axis, condition: Condition { clbits, value } }
        }
        other => return Err(format!("unknown op `{other}`")),
    };
    if let Some(extra) = words.next() {
        return Err(format!("unexpected `{extra}` after {kind}"));
    }
    Ok(op)
}

fn number<T: FromStr>(word: Option<&str>, what: &str) -> std::result::Result<T, String> {
    let w = word.ok_or_else(|| format!("missing {what}"))?;
    w.parse().map_err(|_| format!("bad {what} `{w}`"))
}

fn axis(word: Option<&str>) -> std::result::Result<PauliAxis, String> {
    let w = word.ok_or("missing Pauli axis")?;
    let mut chars = w.chars();
    match (chars.next().and_then(PauliAxis::from_letter), chars.next()) {
        (Some(a), None) => Ok(a),
        _ => Err(format!("bad Pauli axis `{w}`")),
    }
}
