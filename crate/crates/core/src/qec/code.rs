use std::collections::BTreeMap;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::PauliString;
use crate::circuits::{execute, Circuit, Condition, GateOp};
use crate::error::{Error, Result};
use crate::noise::PauliAxis;
use crate::statevector::StateVector;

/// The two supported codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CodeId {
    #[serde(rename = "513")]
    Five,
    #[serde(rename = "713")]
    Steane,
}

impl CodeId {
    pub fn code(self) -> StabilizerCode {
        match self {
            CodeId::Five => code_513(),
            CodeId::Steane => code_713(),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim_start_matches("[[").trim_end_matches("]]").replace(',', "").as_str() {
            "513" | "5" => Ok(CodeId::Five),
            "713" | "7" | "steane" => Ok(CodeId::Steane),
            _ => Err(Error::Config(format!("unknown code {s:?}; expected 513 or 713"))),
        }
    }
}

impl fmt::Display for CodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CodeId::Five => "513",
            CodeId::Steane => "713",
        })
    }
}

/// A single-qubit correction, `None` meaning identity.
pub type Correction = Option<(usize, PauliAxis)>;

/// Hard-decision decoder. Bit `j` of a syndrome is the outcome of generator `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyndromeTable {
    n_generators: usize,
    entries: BTreeMap<u64, Correction>,
}

impl SyndromeTable {
    /// Tabulate every single-qubit Pauli by its anticommutation pattern.
    /// Syndromes no weight-1 error reaches decode to identity.
    pub fn build(generators: &[PauliString]) -> Result<Self> {
        let r = generators.len();
        let n = generators.first().map_or(0, PauliString::n);
        let mut entries: BTreeMap<u64, Correction> = (0..1u64 << r).map(|s| (s, None)).collect();
        for q in 0..n {
            for axis in PauliAxis::ALL {
                let e = PauliString::single(n, q, axis)?;
                let s = syndrome_of(&e, generators);
                match entries.get(&s) {
                    Some(Some(prev)) => {
                        return Err(Error::Domain(format!(
                            "{axis}{q} and {}{} share syndrome {s:#b}",
                            prev.1, prev.0
                        )))
                    }
                    _ if s == 0 => {
                        return Err(Error::Domain(format!("{axis}{q} has a trivial syndrome")))
                    }
                    _ => entries.insert(s, Some((q, axis))),
                };
            }
        }
        Ok(SyndromeTable { n_generators: r, entries })
    }

    pub fn n_generators(&self) -> usize {
        self.n_generators
    }

    pub fn lookup(&self, syndrome: u64) -> Correction {
        self.entries.get(&syndrome).copied().flatten()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, Correction)> + '_ {
        self.entries.iter().map(|(s, c)| (*s, *c))
    }
}

/// One line per syndrome: bits (generator 0 first), then the correction
/// written as axis and qubit (`X3`) or `I`.
impl fmt::Display for SyndromeTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, c) in self.iter() {
            let bits: String =
                (0..self.n_generators).map(|j| if (s >> j) & 1 == 1 { '1' } else { '0' }).collect();
            match c {
                Some((q, a)) => writeln!(f, "{bits} {a}{q}")?,
                None => writeln!(f, "{bits} I")?,
            }
        }
        Ok(())
    }
}

/// Bit `j` set when `error` anticommutes with generator `j`.
pub fn syndrome_of(error: &PauliString, generators: &[PauliString]) -> u64 {
    generators
        .iter()
        .enumerate()
        .filter(|(_, g)| !error.commutes_with(g))
        .fold(0, |s, (j, _)| s | (1 << j))
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilizerCode {
    pub id: CodeId,
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub generators: Vec<PauliString>,
    pub logical_x: PauliString,
    pub logical_z: PauliString,
    pub syndrome_table: SyndromeTable,
}

impl StabilizerCode {
    fn new(id: CodeId, name: &str, d: usize, generators: &[&str], lx: &str, lz: &str) -> Self {
        let parse = |s: &str| s.parse::<PauliString>().expect("static Pauli string");
        let generators: Vec<_> = generators.iter().map(|g| parse(g)).collect();
        let syndrome_table = SyndromeTable::build(&generators).expect("distance-3 code");
        StabilizerCode {
            id,
            name: name.to_string(),
            n: generators[0].n(),
            k: 1,
            d,
            generators,
            logical_x: parse(lx),
            logical_z: parse(lz),
            syndrome_table,
        }
    }

    /// Check the group relations: generators commute pairwise, logicals
    /// commute with every generator and anticommute with each other.
    pub fn audit(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Domain(format!("{}: {m}", self.name)));
        for (i, a) in self.generators.iter().enumerate() {
            for b in &self.generators[i + 1..] {
                if !a.commutes_with(b) {
                    return fail(format!("generators {a} and {b} anticommute"));
                }
            }
            for l in [&self.logical_x, &self.logical_z] {
                if !a.commutes_with(l) {
                    return fail(format!("logical {l} anticommutes with generator {a}"));
                }
            }
        }
        if self.logical_x.commutes_with(&self.logical_z) {
            return fail("logical X and Z commute".into());
        }
        Ok(())
    }
}

/// The perfect five-qubit code: cyclic shifts of XZZXI.
pub fn code_513() -> StabilizerCode {
    StabilizerCode::new(
        CodeId::Five,
        "[[5,1,3]]",
        3,
        &["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"],
        "XXXXX",
        "ZZZZZ",
    )
}

/// Steane's code: X- and Z-type checks on the Hamming supports.
pub fn code_713() -> StabilizerCode {
    StabilizerCode::new(
        CodeId::Steane,
        "[[7,1,3]]",
        3,
        &["IIIXXXX", "IXXIIXX", "XIXIXIX", "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ"],
        "XXXXXXX",
        "ZZZZZZZ",
    )
}

/// `|0…0⟩ → |0_L⟩` on the code's `n` data qubits (non-fault-tolerant).
pub fn build_encoding(code: &StabilizerCode) -> Circuit {
    let mut c = Circuit::new(code.n, 0).with_label(format!("{} encoding", code.name));
    let ops = match code.id {
        CodeId::Five => {
            use GateOp::*;
            let cx = |control, target| Cnot { control, target };
            vec![
                H(0), S(0), Cz(0, 1), Cz(0, 3), Z(4), S(4), cx(0, 4), S(4),
                H(1), Cz(1, 2), Cz(1, 3), cx(1, 4),
                H(2), Cz(2, 0), Cz(2, 1), cx(2, 4),
                H(3), S(3), Cz(3, 0), Cz(3, 2), Z(4), S(4), cx(3, 4), S(4),
            ]
        }
        CodeId::Steane => {
            let mut ops = vec![GateOp::H(0), GateOp::H(1), GateOp::H(3)];
            for (pivot, targets) in [(3, [4, 5, 6]), (1, [2, 5, 6]), (0, [2, 4, 6])] {
                ops.extend(targets.map(|target| GateOp::Cnot { control: pivot, target }));
            }
            ops
        }
    };
    c.ops = ops;
    c
}

/// Swaps moving the content of qubit `q` to `perm[q]`.
pub(crate) fn permutation_swaps(perm: &[usize]) -> Vec<(usize, usize)> {
    let mut seen = vec![false; perm.len()];
    let mut swaps = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut next = perm[start];
        while next != start {
            swaps.push((start, next));
            seen[next] = true;
            next = perm[next];
        }
    }
    swaps
}

/// Logical Hadamard. Steane: transversal H. Five-qubit code: transversal H
/// then the qubit permutation `q → 2q mod 5` as SWAPs.
///
/// The construction is checked against `H_L|0_L⟩ = |+_L⟩` and
/// `H_L|+_L⟩ = |0_L⟩` before it is returned.
pub fn build_logical_h(code: &StabilizerCode) -> Result<Circuit> {
    let mut c = Circuit::new(code.n, 0).with_label(format!("{} logical H", code.name));
    for q in 0..code.n {
        c.h(q)?;
    }
    if code.id == CodeId::Five {
        let perm: Vec<usize> = (0..code.n).map(|q| 2 * q % code.n).collect();
        for (a, b) in permutation_swaps(&perm) {
            c.swap(a, b)?;
        }
    }
    check_logical_h(code, &c)?;
    Ok(c)
}

fn check_logical_h(code: &StabilizerCode, h: &Circuit) -> Result<()> {
    let zero = logical_zero(code)?;
    let plus = logical_plus(code)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for (from, to, what) in [(&zero, &plus, "|0_L> to |+_L>"), (&plus, &zero, "|+_L> to |0_L>")] {
        let mut s = from.clone();
        crate::circuits::execute_on(&mut s, h, &mut rng)?;
        let f = s.overlap(to)?.norm_sqr();
        if (f - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidCircuit(format!(
                "{} logical H does not map {what} (fidelity {f})",
                code.name
            )));
        }
    }
    Ok(())
}

/// The encoded `|0_L⟩` on the data qubits.
pub fn logical_zero(code: &StabilizerCode) -> Result<StateVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    Ok(execute(&build_encoding(code), &mut rng)?.0)
}

/// `(|0_L⟩ + X_L|0_L⟩)/√2`.
pub fn logical_plus(code: &StabilizerCode) -> Result<StateVector> {
    let zero = logical_zero(code)?;
    let mut one = zero.clone();
    code.logical_x.apply(&mut one)?;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let amps = zero.amplitudes().iter().zip(one.amplitudes()).map(|(a, b)| (a + b) * r).collect();
    StateVector::from_amplitudes(amps)
}

/// One ancilla per generator, placed after the data qubits.
pub struct SyndromeExtraction {
    /// Acts on `n + r` qubits with `r` classical bits.
    pub circuit: Circuit,
    /// `ancillas[j]` is the qubit measuring generator `j` into classical bit `j`.
    pub ancillas: Vec<usize>,
}

/// Each ancilla: H, controlled-Pauli onto the data qubits (CNOT for X, CZ
/// for Z, both for Y), H, measure. A controlled X then Z realises
/// controlled `ZX = iY`, so generators with Y letters get one `S†` per Y
/// on the ancilla to cancel the phase.
pub fn build_syndrome_extraction(code: &StabilizerCode) -> Result<SyndromeExtraction> {
    let r = code.generators.len();
    let mut c = Circuit::new(code.n + r, r).with_label(format!("{} syndrome extraction", code.name));
    let mut ancillas = Vec::with_capacity(r);
    for (j, g) in code.generators.iter().enumerate() {
        let a = code.n + j;
        ancillas.push(a);
        c.h(a)?;
        let mut n_y = 0;
        for (q, letter) in g.support() {
            match letter {
                PauliAxis::X => c.cnot(a, q)?,
                PauliAxis::Z => c.cz(a, q)?,
                PauliAxis::Y => {
                    n_y += 1;
                    c.cnot(a, q)?.cz(a, q)?
                }
            };
        }
        // (S†)^n_y = S^(3 n_y)
        for _ in 0..(3 * n_y) % 4 {
            c.s(a)?;
        }
        c.h(a)?;
        c.measure(a, j)?;
    }
    Ok(SyndromeExtraction { circuit: c, ancillas })
}

/// Conditional Paulis applying the table's correction for each nonzero syndrome.
pub fn build_corrections(code: &StabilizerCode, n_qubits: usize) -> Result<Circuit> {
    let r = code.generators.len();
    let mut c = Circuit::new(n_qubits, r).with_label(format!("{} corrections", code.name));
    for (s, correction) in code.syndrome_table.iter() {
        if let Some((qubit, axis)) = correction {
            c.push(GateOp::CondPauli {
                qubit,
                axis,
                condition: Condition { clbits: (0..r).collect(), value: s },
            })?;
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn codes() -> [StabilizerCode; 2] {
        [code_513(), code_713()]
    }

    #[test]
    fn group_audit() {
        for code in codes() {
            code.audit().unwrap();
        }
        assert_eq!(code_513().generators.len(), 4);
        assert_eq!(code_713().generators.len(), 6);
    }

    #[test]
    fn five_qubit_table_is_perfect() {
        let t = code_513().syndrome_table;
        assert_eq!(t.len(), 16);
        assert_eq!(t.lookup(0), None);
        let corrections: std::collections::HashSet<_> = t.iter().filter_map(|(_, c)| c).collect();
        assert_eq!(corrections.len(), 15);
        assert!((1..16).all(|s| t.lookup(s).is_some()));
    }

    #[test]
    fn steane_table() {
        let t = code_713().syndrome_table;
        assert_eq!(t.len(), 64);
        assert_eq!(t.iter().filter(|(_, c)| c.is_some()).count(), 21);
        // X errors are seen only by the Z-type checks (generators 3..6)
        for q in 0..7 {
            let s = syndrome_of(&PauliString::single(7, q, PauliAxis::X).unwrap(), &code_713().generators);
            assert_eq!(s & 0b000111, 0);
            assert_ne!(s, 0);
            let s = syndrome_of(&PauliString::single(7, q, PauliAxis::Z).unwrap(), &code_713().generators);
            assert_eq!(s & 0b111000, 0);
        }
    }

    #[test]
    fn table_dump_is_stable() {
        let dump = code_513().syndrome_table.to_string();
        assert_eq!(dump.lines().count(), 16);
        assert_eq!(dump.lines().next(), Some("0000 I"));
        // X on qubit 0 anticommutes with the single Z-at-0 generator ZXIXZ
        assert!(dump.lines().any(|l| l == "0001 X0"), "{dump}");
    }

    #[test]
    fn encoding_prepares_logical_zero() {
        for code in codes() {
            let s = logical_zero(&code).unwrap();
            for g in &code.generators {
                let e = g.expectation(&s).unwrap();
                assert!((e.re - 1.0).abs() < 1e-10 && e.im.abs() < 1e-10, "{g}: {e}");
            }
            let z = code.logical_z.expectation(&s).unwrap();
            assert!((z.re - 1.0).abs() < 1e-10, "{}: Z_L = {z}", code.name);
            let mut flipped = s.clone();
            code.logical_x.apply(&mut flipped).unwrap();
            let z = code.logical_z.expectation(&flipped).unwrap();
            assert!((z.re + 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn steane_logical_h_is_transversal() {
        let h = build_logical_h(&code_713()).unwrap();
        assert_eq!(h.len(), 7);
        assert!(h.ops.iter().all(|op| matches!(op, GateOp::H(_))));
    }

    #[test]
    fn logical_h_is_an_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for code in codes() {
            let h = build_logical_h(&code).unwrap();
            let zero = logical_zero(&code).unwrap();
            let mut s = zero.clone();
            crate::circuits::execute_on(&mut s, &h, &mut rng).unwrap();
            let plus = logical_plus(&code).unwrap();
            assert!((s.overlap(&plus).unwrap().norm_sqr() - 1.0).abs() < 1e-10);
            crate::circuits::execute_on(&mut s, &h, &mut rng).unwrap();
            assert!((s.overlap(&zero).unwrap().norm_sqr() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn permutation_swaps_move_content() {
        let perm = [0, 2, 4, 1, 3];
        let mut c = Circuit::new(5, 0);
        for (a, b) in permutation_swaps(&perm) {
            c.swap(a, b).unwrap();
        }
        for q in 0..5 {
            let mut bits = vec!['0'; 5];
            bits[q] = '1';
            let input: String = bits.iter().collect();
            let mut s = StateVector::init_basis(5, &input).unwrap();
            crate::circuits::execute_on(&mut s, &c, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
            let mut out = vec!['0'; 5];
            out[perm[q]] = '1';
            let want = StateVector::init_basis(5, &out.iter().collect::<String>()).unwrap();
            assert_eq!(s, want);
        }
    }

    fn extract_after(code: &StabilizerCode, error: Option<(usize, PauliAxis)>) -> Vec<u8> {
        let ext = build_syndrome_extraction(code).unwrap();
        let r = code.generators.len();
        let mut c = Circuit::new(code.n + r, r);
        c.extend_from(&build_encoding(code)).unwrap();
        if let Some((qubit, axis)) = error {
            c.push(GateOp::Pauli { qubit, axis }).unwrap();
        }
        c.extend_from(&ext.circuit).unwrap();
        execute(&c, &mut ChaCha8Rng::seed_from_u64(1)).unwrap().1.bits
    }

    fn bits_to_syndrome(bits: &[u8]) -> u64 {
        bits.iter().enumerate().fold(0, |s, (j, &b)| s | (u64::from(b) << j))
    }

    #[test]
    fn clean_codeword_has_zero_syndrome() {
        for code in codes() {
            assert!(extract_after(&code, None).iter().all(|&b| b == 0));
        }
    }

    #[test]
    fn measured_syndromes_match_table() {
        for code in codes() {
            for q in 0..code.n {
                for axis in PauliAxis::ALL {
                    let s = bits_to_syndrome(&extract_after(&code, Some((q, axis))));
                    assert_eq!(code.syndrome_table.lookup(s), Some((q, axis)), "{} {axis}{q}", code.name);
                }
            }
        }
    }

    #[test]
    fn y_letters_extract_correctly() {
        // a toy code with Y letters: the two-qubit stabilizer state of YY and ZZ
        let g: Vec<PauliString> = ["YY", "ZZ"].iter().map(|s| s.parse().unwrap()).collect();
        let code = StabilizerCode {
            id: CodeId::Five,
            name: "toy".into(),
            n: 2,
            k: 0,
            d: 1,
            generators: g.clone(),
            logical_x: g[0],
            logical_z: g[1],
            syndrome_table: SyndromeTable { n_generators: 2, entries: BTreeMap::new() },
        };
        // (|00⟩ − |11⟩)/√2 is +1 for YY and ZZ
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let amps = [r, 0.0, 0.0, -r].map(|x| num_complex::Complex64::new(x, 0.0)).to_vec();
        let ext = build_syndrome_extraction(&code).unwrap();
        let mut big = vec![num_complex::Complex64::new(0.0, 0.0); 16];
        big[..4].copy_from_slice(&amps);
        let mut s = StateVector::from_amplitudes(big).unwrap();
        let rec = crate::circuits::execute_on(&mut s, &ext.circuit, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        assert_eq!(rec.bits, vec![0, 0]);
        // X on qubit 0 anticommutes with YY and ZZ
        let mut big = vec![num_complex::Complex64::new(0.0, 0.0); 16];
        big[1] = amps[0];
        big[2] = amps[3];
        let mut s = StateVector::from_amplitudes(big).unwrap();
        let rec = crate::circuits::execute_on(&mut s, &ext.circuit, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        assert_eq!(rec.bits, vec![1, 1]);
    }
}
