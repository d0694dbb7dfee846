//! Syndrome decoding and the two correction protocols.
//!
//! The naive protocol corrects on the first syndrome. The conditional protocol
//! stops when the first syndrome is trivial and otherwise extracts a second
//! syndrome with fresh registers and corrects on that one.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::code5::DATA_QUBITS;
use crate::error::{Error, Result};
use crate::faults::FaultSpec;
use crate::network::{run_extraction, Schedule};
use crate::pauli::{PauliKind, QubitError};
use crate::statevector::StateVector;

/// Four parity bits `a0 a1 a2 a3`, printed in that order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Syndrome(u8);

impl Syndrome {
    pub const ZERO: Syndrome = Syndrome(0);

    pub fn from_bits(bits: [u8; 4]) -> Self {
        Syndrome(bits.iter().fold(0, |acc, &b| acc << 1 | (b & 1)))
    }

    /// `value` read with `a0` as the most significant bit.
    pub fn from_value(value: u8) -> Result<Self> {
        if value > 0xF {
            return Err(Error::Parse(format!("syndrome value {value} exceeds four bits")));
        }
        Ok(Syndrome(value))
    }

    pub fn bits(self) -> [u8; 4] {
        std::array::from_fn(|i| self.0 >> (3 - i) & 1)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04b}", self.0)
    }
}

impl FromStr for Syndrome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.len() != 4 || !s.chars().all(|c| c == '0' || c == '1') {
            return Err(Error::Parse(format!("bad syndrome {s:?}")));
        }
        Ok(Syndrome(u8::from_str_radix(s, 2).expect("checked binary")))
    }
}

impl Serialize for Syndrome {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Syndrome {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// The syndrome table: every single-qubit error with its syndrome.
pub const TABLE1: [(usize, PauliKind, &str); 15] = [
    (0, PauliKind::X, "0101"),
    (1, PauliKind::X, "0010"),
    (2, PauliKind::X, "1001"),
    (3, PauliKind::X, "0100"),
    (4, PauliKind::X, "1010"),
    (0, PauliKind::Y, "1000"),
    (1, PauliKind::Y, "1100"),
    (2, PauliKind::Y, "0110"),
    (3, PauliKind::Y, "0011"),
    (4, PauliKind::Y, "0001"),
    (0, PauliKind::Z, "1101"),
    (1, PauliKind::Z, "1110"),
    (2, PauliKind::Z, "1111"),
    (3, PauliKind::Z, "0111"),
    (4, PauliKind::Z, "1011"),
];

pub fn table1() -> Vec<(QubitError, Syndrome)> {
    TABLE1
        .iter()
        .map(|&(q, k, s)| (QubitError::new(q, k), s.parse().expect("table syndromes are 4 bits")))
        .collect()
}

/// Syndrome listed for `error`, if it is one of the 15 table entries.
pub fn expected_syndrome(error: QubitError) -> Option<Syndrome> {
    table1().into_iter().find(|(e, _)| *e == error).map(|(_, s)| s)
}

/// Optional single-qubit Pauli applied to the data after decoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Correction(pub Option<QubitError>);

impl Correction {
    pub const NONE: Correction = Correction(None);

    pub fn is_none(&self) -> bool {
        self.0.is_none()
    }
}

impl fmt::Display for Correction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(e) => write!(f, "{e}"),
            None => f.write_str("none"),
        }
    }
}

impl FromStr for Correction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Correction::NONE),
            _ => Ok(Correction(Some(s.parse()?))),
        }
    }
}

impl Serialize for Correction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Correction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Table lookup; `0000` means no correction.
pub fn decode(s: Syndrome) -> Correction {
    if s.is_zero() {
        return Correction::NONE;
    }
    let hit = TABLE1
        .iter()
        .find(|(_, _, bits)| bits.parse::<Syndrome>().ok() == Some(s))
        .expect("the table covers every nonzero syndrome");
    Correction(Some(QubitError::new(hit.0, hit.1)))
}

pub fn apply_correction(state: &StateVector, c: Correction) -> Result<StateVector> {
    if state.qubit_count() != DATA_QUBITS {
        return Err(Error::DimensionMismatch { left: DATA_QUBITS, right: state.qubit_count() });
    }
    let mut out = state.clone();
    if let Some(e) = c.0 {
        out.apply_pauli(e.qubit, e.kind)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    Naive,
    Conditional,
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Protocol::Naive => "naive",
            Protocol::Conditional => "conditional",
        })
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Protocol::Naive),
            "conditional" => Ok(Protocol::Conditional),
            _ => Err(Error::Parse(format!("unknown protocol {s:?}"))),
        }
    }
}

impl Protocol {
    /// Runs the protocol with the fault bound to the first round.
    pub fn run<R: Rng + ?Sized>(
        self,
        data: &StateVector,
        schedule: &Schedule,
        fault: Option<&FaultSpec>,
        rng: &mut R,
    ) -> Result<ProtocolResult> {
        match self {
            Protocol::Naive => naive_correct(data, schedule, fault, rng),
            Protocol::Conditional => conditional_correct(data, schedule, fault, rng),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolResult {
    pub syndrome_1: Syndrome,
    pub syndrome_2: Option<Syndrome>,
    pub correction: Correction,
    pub output: StateVector,
    pub rounds_used: u8,
}

/// One round, then correct on whatever it reported.
pub fn naive_correct<R: Rng + ?Sized>(
    data: &StateVector,
    schedule: &Schedule,
    fault: Option<&FaultSpec>,
    rng: &mut R,
) -> Result<ProtocolResult> {
    let round = run_extraction(data, schedule, fault, rng)?;
    let correction = decode(round.syndrome);
    Ok(ProtocolResult {
        syndrome_1: round.syndrome,
        syndrome_2: None,
        correction,
        output: apply_correction(&round.post_data, correction)?,
        rounds_used: 1,
    })
}

/// Conditional repetition with a noiseless second round.
pub fn conditional_correct<R: Rng + ?Sized>(
    data: &StateVector,
    schedule: &Schedule,
    fault: Option<&FaultSpec>,
    rng: &mut R,
) -> Result<ProtocolResult> {
    conditional_correct_with(data, schedule, fault, None, rng)
}

/// Conditional repetition with independent faults for each round. The second
/// round only runs (and `round_2` only matters) when the first syndrome is nonzero.
pub fn conditional_correct_with<R: Rng + ?Sized>(
    data: &StateVector,
    schedule: &Schedule,
    round_1: Option<&FaultSpec>,
    round_2: Option<&FaultSpec>,
    rng: &mut R,
) -> Result<ProtocolResult> {
    let first = run_extraction(data, schedule, round_1, rng)?;
    if first.syndrome.is_zero() {
        return Ok(ProtocolResult {
            syndrome_1: first.syndrome,
            syndrome_2: None,
            correction: Correction::NONE,
            output: first.post_data,
            rounds_used: 1,
        });
    }
    let second = run_extraction(&first.post_data, schedule, round_2, rng)?;
    let correction = decode(second.syndrome);
    Ok(ProtocolResult {
        syndrome_1: first.syndrome,
        syndrome_2: Some(second.syndrome),
        correction,
        output: apply_correction(&second.post_data, correction)?,
        rounds_used: 2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code5::{encode, logical_zero, LogicalAmplitudes};
    use crate::network::{build_schedule, Placement};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(2024)
    }

    fn with_error(mut s: StateVector, q: usize, k: PauliKind) -> StateVector {
        s.apply_pauli(q, k).unwrap();
        s
    }

    fn demo_fault() -> FaultSpec {
        FaultSpec::pauli("blk1.c0.cnot.d0.a3", Placement::Before, &[PauliKind::X, PauliKind::X]).unwrap()
    }

    #[test]
    fn syndrome_bits_and_text() {
        let s: Syndrome = "0101".parse().unwrap();
        assert_eq!(s.bits(), [0, 1, 0, 1]);
        assert_eq!(Syndrome::from_bits([0, 1, 0, 1]), s);
        assert_eq!(s.to_string(), "0101");
        assert!("01012".parse::<Syndrome>().is_err());
        assert!(Syndrome::from_value(16).is_err());
    }

    #[test]
    fn decoding() {
        assert_eq!(decode("0101".parse().unwrap()).to_string(), "X_0");
        assert_eq!(decode("1111".parse().unwrap()).to_string(), "Z_2");
        assert_eq!(decode(Syndrome::ZERO), Correction::NONE);
    }

    #[test]
    fn decode_is_a_bijection_on_nonzero_syndromes() {
        let mut seen = std::collections::HashSet::new();
        for v in 1..16u8 {
            let c = decode(Syndrome::from_value(v).unwrap());
            let e = c.0.unwrap();
            assert_eq!(expected_syndrome(e).unwrap().value(), v);
            assert!(seen.insert(e));
        }
        assert_eq!(seen.len(), 15);
    }

    #[test]
    fn corrections() {
        let s = StateVector::basis_state(5, "00000").unwrap();
        assert_eq!(apply_correction(&s, Correction::NONE).unwrap(), s);
        let flipped = apply_correction(&s, Correction(Some(QubitError::new(3, PauliKind::X)))).unwrap();
        assert_eq!(flipped, StateVector::basis_state(5, "00010").unwrap());

        let psi = encode(&LogicalAmplitudes::real(0.3, 0.8).unwrap()).unwrap();
        let corrupted = with_error(psi.clone(), 0, PauliKind::X);
        let fixed = apply_correction(&corrupted, decode("0101".parse().unwrap())).unwrap();
        assert!((fixed.fidelity(&psi).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn naive_failure_example() {
        let s = build_schedule();
        let r = naive_correct(&logical_zero(), &s, Some(&demo_fault()), &mut rng()).unwrap();
        assert_eq!(r.syndrome_1.to_string(), "0100");
        assert_eq!(r.correction.to_string(), "X_3");
        assert_eq!(r.rounds_used, 1);
        let both = with_error(with_error(logical_zero(), 0, PauliKind::X), 3, PauliKind::X);
        assert!((r.output.fidelity(&both).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn naive_corrects_input_errors() {
        let s = build_schedule();
        let input = with_error(logical_zero(), 4, PauliKind::Y);
        let r = naive_correct(&input, &s, None, &mut rng()).unwrap();
        assert_eq!(r.syndrome_1.to_string(), "0001");
        assert_eq!(r.correction.to_string(), "Y_4");
        assert!((r.output.fidelity(&logical_zero()).unwrap() - 1.0).abs() < 1e-9);

        let r = naive_correct(&logical_zero(), &s, None, &mut rng()).unwrap();
        assert!(r.syndrome_1.is_zero() && r.correction.is_none());
        assert!((r.output.fidelity(&logical_zero()).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn conditional_repairs_the_failure_example() {
        let s = build_schedule();
        let r = conditional_correct(&logical_zero(), &s, Some(&demo_fault()), &mut rng()).unwrap();
        assert_eq!(r.syndrome_1.to_string(), "0100");
        assert_eq!(r.syndrome_2.unwrap().to_string(), "0101");
        assert_eq!(r.correction.to_string(), "X_0");
        assert_eq!(r.rounds_used, 2);
        assert!((r.output.fidelity(&logical_zero()).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn conditional_rounds() {
        let s = build_schedule();
        let input = with_error(logical_zero(), 2, PauliKind::Z);
        let r = conditional_correct(&input, &s, None, &mut rng()).unwrap();
        assert_eq!((r.syndrome_1.to_string(), r.syndrome_2.unwrap().to_string()), ("1111".into(), "1111".into()));
        assert!((r.output.fidelity(&logical_zero()).unwrap() - 1.0).abs() < 1e-9);

        let r = conditional_correct(&logical_zero(), &s, None, &mut rng()).unwrap();
        assert_eq!((r.rounds_used, r.syndrome_2), (1, None));
    }

    #[test]
    fn second_round_fault_is_accepted() {
        let s = build_schedule();
        let input = with_error(logical_zero(), 1, PauliKind::X);
        let fault = FaultSpec::pauli("blk3.c12.cnot.d4.a0", Placement::After, &[PauliKind::Y, PauliKind::I]).unwrap();
        let r = conditional_correct_with(&input, &s, None, Some(&fault), &mut rng()).unwrap();
        assert_eq!(r.rounds_used, 2);
        // the second-round fault lands after the last gate, so S2 still names X_1
        assert_eq!(r.correction.to_string(), "X_1");
    }
}
