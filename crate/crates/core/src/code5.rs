//! The five-qubit code: `|C0>`, `|C1>` and the logical states built from them.
//!
//! `|~0> ∝ |C0> + |C1>` and `|~1> ∝ |C0> - |C1>`, where `|C1>` flips every bit of
//! each `|C0>` term and keeps its sign. Every term carries amplitude ±1/4 in
//! `|C0>`, so the logical states pick up a further 1/√2.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevector::StateVector;

pub const DATA_QUBITS: usize = 5;

/// The sixteen signed terms of `|C0>`, in printed order.
pub const C0_TERMS: [(&str, i8); 16] = [
    ("00000", 1),
    ("11000", 1),
    ("01100", 1),
    ("00110", 1),
    ("00011", 1),
    ("10001", 1),
    ("10100", -1),
    ("01010", -1),
    ("00101", -1),
    ("10010", -1),
    ("01001", -1),
    ("11110", -1),
    ("01111", -1),
    ("10111", -1),
    ("11011", -1),
    ("11101", -1),
];

fn complement(bits: &str) -> String {
    bits.chars().map(|c| if c == '0' { '1' } else { '0' }).collect()
}

fn from_terms<'a>(terms: impl Iterator<Item = (String, i8)> + 'a) -> StateVector {
    let mut amps = vec![C64::new(0.0, 0.0); 1 << DATA_QUBITS];
    for (bits, sign) in terms {
        let index = usize::from_str_radix(&bits, 2).expect("table bitstrings are binary");
        amps[index] = C64::new(0.25 * f64::from(sign), 0.0);
    }
    StateVector::from_amplitudes(DATA_QUBITS, amps).expect("16 terms of weight 1/4 are normalised")
}

pub fn build_c0() -> StateVector {
    from_terms(C0_TERMS.iter().map(|&(b, s)| (b.to_string(), s)))
}

pub fn build_c1() -> StateVector {
    from_terms(C0_TERMS.iter().map(|&(b, s)| (complement(b), s)))
}

/// Coefficients of `alpha |~0> + beta |~1>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogicalAmplitudes {
    pub alpha: C64,
    pub beta: C64,
}

impl LogicalAmplitudes {
    /// Rescales to unit norm; rejects the zero vector.
    pub fn new(alpha: C64, beta: C64) -> Result<Self> {
        let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroNorm);
        }
        Ok(Self { alpha: alpha / norm, beta: beta / norm })
    }

    pub fn real(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(C64::new(alpha, 0.0), C64::new(beta, 0.0))
    }

    pub fn zero() -> Self {
        Self { alpha: C64::new(1.0, 0.0), beta: C64::new(0.0, 0.0) }
    }

    pub fn one() -> Self {
        Self { alpha: C64::new(0.0, 0.0), beta: C64::new(1.0, 0.0) }
    }

    /// Equal superposition `(|~0> + |~1>)/√2`, proportional to `|C0>`.
    pub fn plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self { alpha: C64::new(h, 0.0), beta: C64::new(h, 0.0) }
    }

    /// Short label used in reports: `zero`, `one`, `plus`, or `a,b`.
    pub fn label(&self) -> String {
        let is = |v: C64, t: f64| (v - C64::new(t, 0.0)).norm() < 1e-12;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        if is(self.alpha, 1.0) && is(self.beta, 0.0) {
            "zero".into()
        } else if is(self.alpha, 0.0) && is(self.beta, 1.0) {
            "one".into()
        } else if is(self.alpha, h) && is(self.beta, h) {
            "plus".into()
        } else {
            format!("{},{}", self.alpha, self.beta)
        }
    }
}

impl std::str::FromStr for LogicalAmplitudes {
    type Err = Error;

    /// Accepts `zero`, `one`, `plus`, or two real coefficients `a,b`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" | "0" => Ok(Self::zero()),
            "one" | "1" => Ok(Self::one()),
            "plus" | "+" => Ok(Self::plus()),
            _ => {
                let (a, b) = s
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("bad logical state {s:?}")))?;
                let parse = |v: &str| {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad coefficient {v:?}")))
                };
                Self::real(parse(a)?, parse(b)?)
            }
        }
    }
}

/// `alpha |~0> + beta |~1>` as a normalised five-qubit state.
pub fn encode(l: &LogicalAmplitudes) -> Result<StateVector> {
    let (c0, c1) = (build_c0(), build_c1());
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let amps = c0
        .amplitudes()
        .iter()
        .zip(c1.amplitudes())
        .map(|(&p, &q)| l.alpha * (p + q) * h + l.beta * (p - q) * h)
        .collect();
    StateVector::from_amplitudes(DATA_QUBITS, amps)
}

pub fn logical_zero() -> StateVector {
    encode(&LogicalAmplitudes::zero()).expect("unit amplitudes")
}

pub fn logical_one() -> StateVector {
    encode(&LogicalAmplitudes::one()).expect("unit amplitudes")
}

/// `|<ideal|state>|^2`.
pub fn logical_fidelity(state: &StateVector, ideal: &StateVector) -> Result<f64> {
    ideal.fidelity(state)
}
