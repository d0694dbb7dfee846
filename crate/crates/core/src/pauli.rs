//! Single-qubit error operators in the labelling used by the syndrome table.
//!
//! `X` is the amplitude (bit) flip and `Y` the phase flip `diag(1, -1)`.
//! `Z` is the literal product `X·Y`, which is the real matrix `[[0, -1], [1, 0]]`
//! (proportional to the textbook Pauli-Y). All three are self-inverse up to a
//! global phase, so the same operator serves as error and correction.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PauliKind {
    I,
    X,
    Y,
    Z,
}

impl PauliKind {
    pub const ALL: [PauliKind; 4] = [PauliKind::I, PauliKind::X, PauliKind::Y, PauliKind::Z];
    /// The three non-trivial errors, in syndrome-table order.
    pub const ERRORS: [PauliKind; 3] = [PauliKind::X, PauliKind::Y, PauliKind::Z];

    pub fn matrix(self) -> [[C64; 2]; 2] {
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        match self {
            PauliKind::I => [[l, o], [o, l]],
            PauliKind::X => [[o, l], [l, o]],
            PauliKind::Y => [[l, o], [o, -l]],
            PauliKind::Z => [[o, -l], [l, o]],
        }
    }

    pub fn is_identity(self) -> bool {
        self == PauliKind::I
    }

    pub fn symbol(self) -> char {
        match self {
            PauliKind::I => 'I',
            PauliKind::X => 'X',
            PauliKind::Y => 'Y',
            PauliKind::Z => 'Z',
        }
    }

    pub fn from_symbol(c: char) -> Result<Self> {
        match c {
            'I' => Ok(PauliKind::I),
            'X' => Ok(PauliKind::X),
            'Y' => Ok(PauliKind::Y),
            'Z' => Ok(PauliKind::Z),
            other => Err(Error::Parse(format!("unknown Pauli symbol {other:?}"))),
        }
    }
}

impl fmt::Display for PauliKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl FromStr for PauliKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => PauliKind::from_symbol(c),
            _ => Err(Error::Parse(format!("expected one Pauli symbol, got {s:?}"))),
        }
    }
}

/// A single-qubit error on a given qubit, printed as `X_3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QubitError {
    pub qubit: usize,
    pub kind: PauliKind,
}

impl QubitError {
    pub fn new(qubit: usize, kind: PauliKind) -> Self {
        Self { qubit, kind }
    }

    /// The 15 single-qubit errors on the five data qubits, ordered X_0..X_4, Y_0..Y_4, Z_0..Z_4.
    pub fn all_data_errors() -> Vec<QubitError> {
        PauliKind::ERRORS
            .iter()
            .flat_map(|&kind| (0..5).map(move |qubit| QubitError { qubit, kind }))
            .collect()
    }
}

impl fmt::Display for QubitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.kind, self.qubit)
    }
}

impl FromStr for QubitError {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, qubit) = s
            .split_once('_')
            .or_else(|| (s.len() >= 2).then(|| s.split_at(1)))
            .ok_or_else(|| Error::Parse(format!("bad error label {s:?}")))?;
        let kind: PauliKind = kind.parse()?;
        let qubit = qubit
            .parse()
            .map_err(|_| Error::Parse(format!("bad qubit in error label {s:?}")))?;
        Ok(QubitError { qubit, kind })
    }
}

impl Serialize for QubitError {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QubitError {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
