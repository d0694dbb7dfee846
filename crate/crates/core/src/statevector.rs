//! Dense state-vector simulation.
//!
//! Amplitudes are indexed by basis bitstring with qubit 0 as the most
//! significant bit, so the printed ket `|q0 q1 ... q(n-1)>` reads the index in
//! binary from left to right. `|10>` on two qubits is index 2.
//!
//! Memory is `16 * 2^n` bytes; the 21-qubit ceiling keeps a state at 32 MiB.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::PauliKind;
use crate::unitary::{self, Matrix4};

pub const MAX_QUBITS: usize = 21;

/// Tolerance on |norm - 1| and on unitarity of user-supplied matrices.
pub const NORM_TOL: f64 = 1e-12;
/// Outcome probabilities below this are treated as impossible when sampling.
pub const BRANCH_CUTOFF: f64 = 1e-12;
/// A dropped qubit must be this close to a basis state.
pub const DEFINITE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub qubit: usize,
    pub outcome: u8,
    /// Squared norm of the projected state before renormalization.
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    qubit_count: usize,
    amps: Vec<C64>,
}

#[inline]
fn insert_zero(x: usize, bit: u32) -> usize {
    let low = x & ((1usize << bit) - 1);
    ((x >> bit) << (bit + 1)) | low
}

impl StateVector {
    fn check_count(qubit_count: usize) -> Result<()> {
        if qubit_count == 0 || qubit_count > MAX_QUBITS {
            return Err(Error::QubitCount(qubit_count));
        }
        Ok(())
    }

    /// Computational basis state from a bitstring such as `"10110"`.
    pub fn basis_state(qubit_count: usize, bits: &str) -> Result<Self> {
        Self::check_count(qubit_count)?;
        let index = parse_bits(bits, qubit_count)?;
        let mut amps = vec![C64::new(0.0, 0.0); 1 << qubit_count];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { qubit_count, amps })
    }

    /// All-zeros state on `qubit_count` qubits.
    pub fn zero(qubit_count: usize) -> Result<Self> {
        Self::check_count(qubit_count)?;
        let mut amps = vec![C64::new(0.0, 0.0); 1 << qubit_count];
        amps[0] = C64::new(1.0, 0.0);
        Ok(Self { qubit_count, amps })
    }

    /// Builds a state from raw amplitudes and rescales it to unit norm.
    pub fn from_amplitudes(qubit_count: usize, amps: Vec<C64>) -> Result<Self> {
        Self::check_count(qubit_count)?;
        if amps.len() != 1 << qubit_count {
            return Err(Error::DimensionMismatch {
                left: qubit_count,
                right: amps.len().trailing_zeros() as usize,
            });
        }
        let mut state = Self { qubit_count, amps };
        state.normalize()?;
        Ok(state)
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    /// Amplitude of the basis state named by `bits`.
    pub fn amplitude(&self, bits: &str) -> Result<C64> {
        Ok(self.amps[parse_bits(bits, self.qubit_count)?])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() < NORM_TOL
    }

    pub fn normalize(&mut self) -> Result<()> {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroNorm);
        }
        let inv = 1.0 / norm;
        self.amps.iter_mut().for_each(|a| *a *= inv);
        Ok(())
    }

    #[inline]
    fn bit_of(&self, qubit: usize) -> u32 {
        (self.qubit_count - 1 - qubit) as u32
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.qubit_count {
            return Err(Error::QubitIndex { qubit, count: self.qubit_count });
        }
        Ok(())
    }

    fn check_pair(&self, a: usize, b: usize) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(Error::SameQubit(a));
        }
        Ok(())
    }

    /// Applies an arbitrary 2x2 matrix to `qubit`. No unitarity check.
    pub fn apply_single(&mut self, qubit: usize, m: &[[C64; 2]; 2]) -> Result<()> {
        self.check_qubit(qubit)?;
        let bit = self.bit_of(qubit);
        for_pairs(&mut self.amps, bit, |a0, a1| {
            let (x, y) = (*a0, *a1);
            *a0 = m[0][0] * x + m[0][1] * y;
            *a1 = m[1][0] * x + m[1][1] * y;
        });
        Ok(())
    }

    /// The R rotation: `|0> -> (|0> + |1>)/sqrt2`, `|1> -> (|0> - |1>)/sqrt2`.
    pub fn apply_r(&mut self, qubit: usize) -> Result<()> {
        self.check_qubit(qubit)?;
        let bit = self.bit_of(qubit);
        for_pairs(&mut self.amps, bit, |a0, a1| {
            let (x, y) = (*a0, *a1);
            *a0 = (x + y) * FRAC_1_SQRT_2;
            *a1 = (x - y) * FRAC_1_SQRT_2;
        });
        Ok(())
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_pair(control, target)?;
        let (cb, tb) = (self.bit_of(control), self.bit_of(target));
        let (c, t) = (1usize << cb, 1usize << tb);
        if cb > tb {
            for chunk in self.amps.chunks_exact_mut(2 * c) {
                for sub in chunk[c..].chunks_exact_mut(2 * t) {
                    let (lo, hi) = sub.split_at_mut(t);
                    lo.swap_with_slice(hi);
                }
            }
        } else {
            for chunk in self.amps.chunks_exact_mut(2 * t) {
                let (lo, hi) = chunk.split_at_mut(t);
                for (x, y) in lo.chunks_exact_mut(2 * c).zip(hi.chunks_exact_mut(2 * c)) {
                    x[c..].swap_with_slice(&mut y[c..]);
                }
            }
        }
        Ok(())
    }

    pub fn apply_pauli(&mut self, qubit: usize, kind: PauliKind) -> Result<()> {
        self.check_qubit(qubit)?;
        let bit = self.bit_of(qubit);
        match kind {
            PauliKind::I => {}
            PauliKind::X => for_pairs(&mut self.amps, bit, std::mem::swap),
            PauliKind::Y => for_pairs(&mut self.amps, bit, |_, a1| *a1 = -*a1),
            PauliKind::Z => for_pairs(&mut self.amps, bit, |a0, a1| {
                let x = *a0;
                *a0 = -*a1;
                *a1 = x;
            }),
        }
        Ok(())
    }

    /// Applies a 4x4 unitary on `(q1, q2)`. The local basis index is
    /// `2 * bit(q1) + bit(q2)`, i.e. `q1` is the more significant operand.
    pub fn apply_two_qubit_unitary(&mut self, q1: usize, q2: usize, u: &Matrix4) -> Result<()> {
        self.check_pair(q1, q2)?;
        let dev = unitary::unitarity_deviation(u);
        if dev > unitary::UNITARY_TOL {
            return Err(Error::NotUnitary(dev));
        }
        self.apply_two_qubit_matrix(q1, q2, u);
        Ok(())
    }

    fn apply_two_qubit_matrix(&mut self, q1: usize, q2: usize, u: &Matrix4) {
        let (b1, b2) = (self.bit_of(q1), self.bit_of(q2));
        let (lo, hi) = if b1 < b2 { (b1, b2) } else { (b2, b1) };
        let (m1, m2) = (1usize << b1, 1usize << b2);
        for k in 0..self.amps.len() / 4 {
            let base = insert_zero(insert_zero(k, lo), hi);
            let idx = [base, base | m2, base | m1, base | m1 | m2];
            let v = idx.map(|i| self.amps[i]);
            for (row, &i) in idx.iter().enumerate() {
                self.amps[i] = (0..4).map(|c| u[row][c] * v[c]).sum();
            }
        }
    }

    /// Probability that `qubit` reads 1.
    pub fn probability_one(&self, qubit: usize) -> Result<f64> {
        self.check_qubit(qubit)?;
        let mask = 1usize << self.bit_of(qubit);
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Projective Z-basis measurement of one qubit. The state collapses in place.
    pub fn measure_qubit<R: Rng + ?Sized>(
        &mut self,
        qubit: usize,
        rng: &mut R,
    ) -> Result<MeasurementRecord> {
        let p1 = self.probability_one(qubit)?.clamp(0.0, 1.0);
        let outcome = if p1 < BRANCH_CUTOFF {
            0
        } else if p1 > 1.0 - BRANCH_CUTOFF {
            1
        } else {
            u8::from(rng.random::<f64>() < p1)
        };
        let mask = 1usize << self.bit_of(qubit);
        let keep_set = outcome == 1;
        let mut probability = 0.0;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if (i & mask != 0) == keep_set {
                probability += a.norm_sqr();
            } else {
                *a = C64::new(0.0, 0.0);
            }
        }
        let inv = 1.0 / probability.sqrt();
        self.amps.iter_mut().for_each(|a| *a *= inv);
        Ok(MeasurementRecord { qubit, outcome, probability })
    }

    /// Joint measurement of several qubits, equivalent in distribution to
    /// measuring them one after another. Returns the outcome bits (in the
    /// order given) and the probability of that joint outcome.
    pub fn measure_qubits<R: Rng + ?Sized>(
        &mut self,
        qubits: &[usize],
        rng: &mut R,
    ) -> Result<(Vec<u8>, f64)> {
        let probs = self.marginal_probabilities(qubits)?;
        let kept: f64 = probs.iter().filter(|&&p| p >= BRANCH_CUTOFF).sum();
        let draw = rng.random::<f64>() * kept;
        let mut acc = 0.0;
        let mut chosen = None;
        let mut last_possible = 0;
        for (outcome, &p) in probs.iter().enumerate() {
            if p < BRANCH_CUTOFF {
                continue;
            }
            last_possible = outcome;
            acc += p;
            if draw < acc {
                chosen = Some(outcome);
                break;
            }
        }
        let outcome = chosen.unwrap_or(last_possible);
        let probability = probs[outcome];

        let k = qubits.len();
        let masks: Vec<usize> = qubits.iter().map(|&q| 1usize << self.bit_of(q)).collect();
        let mut select = 0usize;
        let mut pattern = 0usize;
        for (j, &m) in masks.iter().enumerate() {
            select |= m;
            if outcome >> (k - 1 - j) & 1 == 1 {
                pattern |= m;
            }
        }
        let inv = 1.0 / probability.sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & select == pattern {
                *a *= inv;
            } else {
                *a = C64::new(0.0, 0.0);
            }
        }
        let bits = (0..k).map(|j| (outcome >> (k - 1 - j) & 1) as u8).collect();
        Ok((bits, probability))
    }

    /// Marginal distribution over `qubits`, densely indexed with `qubits[0]`
    /// as the most significant outcome bit.
    pub fn marginal_probabilities(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        for (j, &q) in qubits.iter().enumerate() {
            self.check_qubit(q)?;
            if qubits[..j].contains(&q) {
                return Err(Error::SameQubit(q));
            }
        }
        let k = qubits.len();
        let mut probs = vec![0.0; 1 << k];
        let n = self.qubit_count;
        let trailing = qubits.iter().enumerate().all(|(j, &q)| q == n - k + j);
        if trailing {
            let mask = (1usize << k) - 1;
            for (i, a) in self.amps.iter().enumerate() {
                probs[i & mask] += a.norm_sqr();
            }
        } else {
            let bits: Vec<u32> = qubits.iter().map(|&q| self.bit_of(q)).collect();
            for (i, a) in self.amps.iter().enumerate() {
                let w = a.norm_sqr();
                if w == 0.0 {
                    continue;
                }
                let outcome = bits.iter().fold(0usize, |acc, &b| (acc << 1) | (i >> b & 1));
                probs[outcome] += w;
            }
        }
        Ok(probs)
    }

    /// Exact marginal distribution keyed by outcome bitstring; every outcome is listed.
    pub fn outcome_distribution(&self, qubits: &[usize]) -> Result<BTreeMap<String, f64>> {
        let k = qubits.len();
        let probs = self.marginal_probabilities(qubits)?;
        Ok(probs
            .into_iter()
            .enumerate()
            .map(|(o, p)| (format!("{o:0k$b}"), p))
            .collect())
    }

    /// Inner product `<self|other>`.
    pub fn overlap(&self, other: &StateVector) -> Result<C64> {
        if self.qubit_count != other.qubit_count {
            return Err(Error::DimensionMismatch {
                left: self.qubit_count,
                right: other.qubit_count,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.overlap(other)?.norm_sqr())
    }

    /// `self ⊗ other`; the qubits of `self` come first.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let qubit_count = self.qubit_count + other.qubit_count;
        Self::check_count(qubit_count)?;
        let mut amps = Vec::with_capacity(1 << qubit_count);
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        Ok(StateVector { qubit_count, amps })
    }

    /// Reduced state on `keep` (new qubit `j` is old qubit `keep[j]`). Every
    /// dropped qubit must already sit in a definite basis state.
    pub fn restrict(&self, keep: &[usize]) -> Result<StateVector> {
        for (j, &q) in keep.iter().enumerate() {
            self.check_qubit(q)?;
            if keep[..j].contains(&q) {
                return Err(Error::SameQubit(q));
            }
        }
        let dropped: Vec<usize> = (0..self.qubit_count).filter(|q| !keep.contains(q)).collect();
        let mut p1 = vec![0.0; dropped.len()];
        let drop_bits: Vec<u32> = dropped.iter().map(|&q| self.bit_of(q)).collect();
        for (i, a) in self.amps.iter().enumerate() {
            let w = a.norm_sqr();
            if w == 0.0 {
                continue;
            }
            for (p, &b) in p1.iter_mut().zip(&drop_bits) {
                if i >> b & 1 == 1 {
                    *p += w;
                }
            }
        }
        let total = self.norm_sqr();
        let mut fixed = 0usize;
        for ((&q, &b), &p) in dropped.iter().zip(&drop_bits).zip(&p1) {
            let frac = p / total;
            if frac > 1.0 - DEFINITE_TOL {
                fixed |= 1 << b;
            } else if frac >= DEFINITE_TOL {
                return Err(Error::Entangled(q));
            }
        }
        let keep_bits: Vec<u32> = keep.iter().map(|&q| self.bit_of(q)).collect();
        let m = keep.len();
        let amps = (0..1usize << m)
            .map(|j| {
                let full = keep_bits
                    .iter()
                    .enumerate()
                    .fold(fixed, |acc, (pos, &b)| acc | ((j >> (m - 1 - pos) & 1) << b));
                self.amps[full]
            })
            .collect();
        StateVector::from_amplitudes(m, amps)
    }
}

/// Calls `f` on every amplitude pair that differs only in `bit`, low index first.
#[inline]
fn for_pairs(amps: &mut [C64], bit: u32, mut f: impl FnMut(&mut C64, &mut C64)) {
    let m = 1usize << bit;
    for chunk in amps.chunks_exact_mut(2 * m) {
        let (lo, hi) = chunk.split_at_mut(m);
        lo.iter_mut().zip(hi).for_each(|(a, b)| f(a, b));
    }
}

fn parse_bits(bits: &str, count: usize) -> Result<usize> {
    let bad = || Error::Bitstring { bits: bits.to_string(), count };
    if bits.len() != count {
        return Err(bad());
    }
    bits.chars().try_fold(0usize, |acc, c| match c {
        '0' => Ok(acc << 1),
        '1' => Ok(acc << 1 | 1),
        _ => Err(bad()),
    })
}
