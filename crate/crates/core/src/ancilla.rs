//! Syndrome registers: four physical qubits per syndrome line, prepared in the
//! equal superposition of all even-parity four-bit strings.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::statevector::StateVector;

pub const REGISTER_QUBITS: usize = 4;
pub const REGISTERS: usize = 4;

/// One syndrome line `a_k` of the network, backed by four physical qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AncillaRegister {
    pub register_index: usize,
    pub qubit_ids: [usize; REGISTER_QUBITS],
}

impl AncillaRegister {
    /// Register `k` on physical qubits `first + 4k .. first + 4k + 3`.
    pub fn contiguous(register_index: usize, first: usize) -> Self {
        let base = first + REGISTER_QUBITS * register_index;
        Self {
            register_index,
            qubit_ids: [base, base + 1, base + 2, base + 3],
        }
    }
}

/// How the syndrome registers are initialised before extraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AncillaPreparation {
    /// Even-parity superposition; carries no information beyond parity.
    #[default]
    EvenParity,
    /// Plain `|0000>`; leaks codeword information into the readout.
    AllZeros,
}

impl AncillaPreparation {
    pub fn register_state(self) -> StateVector {
        match self {
            AncillaPreparation::EvenParity => even_parity_state(),
            AncillaPreparation::AllZeros => {
                StateVector::zero(REGISTER_QUBITS).expect("four qubits")
            }
        }
    }
}

/// Amplitude `1/√8` on each of the eight even-parity strings of four bits.
pub fn even_parity_state() -> StateVector {
    let amp = C64::new(1.0 / 8f64.sqrt(), 0.0);
    let amps = (0u32..16)
        .map(|n| if n.count_ones() % 2 == 0 { amp } else { C64::new(0.0, 0.0) })
        .collect();
    StateVector::from_amplitudes(REGISTER_QUBITS, amps).expect("eight nonzero amplitudes")
}

/// Parity of one register's four measured bits.
pub fn syndrome_bit(outcomes: &[u8; REGISTER_QUBITS]) -> u8 {
    outcomes.iter().fold(0, |acc, &b| acc ^ (b & 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn even_parity_amplitudes() {
        let s = even_parity_state();
        let eighth = 1.0 / 8f64.sqrt();
        // oracle: enumerate strings and count ones by hand
        for n in 0..16usize {
            let bits = format!("{n:04b}");
            let ones = bits.chars().filter(|&c| c == '1').count();
            let want = if ones % 2 == 0 { eighth } else { 0.0 };
            assert!((s.amplitude(&bits).unwrap().re - want).abs() < 1e-15, "{bits}");
        }
        assert!(s.is_normalized());
        assert_eq!(s.amplitudes().iter().filter(|a| a.norm() > 0.0).count(), 8);
    }

    #[test]
    fn parity_bits() {
        assert_eq!(syndrome_bit(&[0, 0, 0, 0]), 0);
        assert_eq!(syndrome_bit(&[1, 0, 1, 0]), 0);
        assert_eq!(syndrome_bit(&[1, 0, 0, 0]), 1);
    }

    #[test]
    fn untouched_register_reads_even() {
        for seed in 0..32 {
            let mut s = even_parity_state();
            let (bits, _) = s.measure_qubits(&[0, 1, 2, 3], &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            assert_eq!(syndrome_bit(&[bits[0], bits[1], bits[2], bits[3]]), 0);
        }
    }

    #[test]
    fn fanned_out_cnots_record_data_parity() {
        // k classical data bits, each copied by CNOT onto its own register qubit.
        for k in 0..=4usize {
            for input in 0..1usize << k {
                let bits: String = (0..k).map(|j| if input >> j & 1 == 1 { '1' } else { '0' }).collect();
                let expect = (input.count_ones() % 2) as u8;
                let data = if k == 0 {
                    None
                } else {
                    Some(StateVector::basis_state(k, &bits).unwrap())
                };
                let mut s = match &data {
                    Some(d) => d.tensor(&even_parity_state()).unwrap(),
                    None => even_parity_state(),
                };
                for j in 0..k {
                    s.apply_cnot(j, k + j).unwrap();
                }
                let reg: Vec<usize> = (k..k + 4).collect();
                for seed in 0..4 {
                    let mut t = s.clone();
                    let (b, _) = t.measure_qubits(&reg, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
                    assert_eq!(syndrome_bit(&[b[0], b[1], b[2], b[3]]), expect);
                }
            }
        }
    }
}
