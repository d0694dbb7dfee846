//! 4x4 complex matrices for two-qubit gates and in-gate faults.

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::pauli::PauliKind;

pub type Matrix4 = [[C64; 4]; 4];

pub const UNITARY_TOL: f64 = 1e-10;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

pub fn identity() -> Matrix4 {
    let mut m = [[ZERO; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = ONE;
    }
    m
}

/// CNOT with the first operand as control.
pub fn cnot() -> Matrix4 {
    let mut m = [[ZERO; 4]; 4];
    m[0][0] = ONE;
    m[1][1] = ONE;
    m[2][3] = ONE;
    m[3][2] = ONE;
    m
}

/// `first ⊗ second`, with `first` acting on the more significant operand.
pub fn pauli_product(first: PauliKind, second: PauliKind) -> Matrix4 {
    let (a, b) = (first.matrix(), second.matrix());
    let mut m = [[ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = a[i >> 1][j >> 1] * b[i & 1][j & 1];
        }
    }
    m
}

pub fn mul(a: &Matrix4, b: &Matrix4) -> Matrix4 {
    let mut m = [[ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    m
}

pub fn adjoint(a: &Matrix4) -> Matrix4 {
    let mut m = [[ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = a[j][i].conj();
        }
    }
    m
}

/// Largest entry of `|U†U - I|`.
pub fn unitarity_deviation(u: &Matrix4) -> f64 {
    let p = mul(&adjoint(u), u);
    let id = identity();
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max((p[i][j] - id[i][j]).norm());
        }
    }
    worst
}

pub fn is_unitary(u: &Matrix4) -> bool {
    unitarity_deviation(u) <= UNITARY_TOL
}

/// `1 - |tr U| / 4`: zero exactly when `U` is the identity up to a global phase.
pub fn distance_from_identity(u: &Matrix4) -> f64 {
    let tr: C64 = (0..4).map(|i| u[i][i]).sum();
    1.0 - tr.norm() / 4.0
}

/// `exp(-i θ P)` for a two-qubit Pauli product `P` that squares to the identity.
pub fn pauli_rotation(first: PauliKind, second: PauliKind, angle: f64) -> Matrix4 {
    let p = pauli_product(first, second);
    let sq = mul(&p, &p);
    // P² = ±I in this labelling; normalise to a Hermitian involution.
    let herm = if sq[0][0].re < 0.0 { C64::new(0.0, 1.0) } else { ONE };
    let (c, s) = (angle.cos(), angle.sin());
    let mut m = [[ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let id = if i == j { ONE } else { ZERO };
            m[i][j] = id * c - C64::new(0.0, s) * herm * p[i][j];
        }
    }
    m
}

/// Haar-distributed unitary from a seed: Gram-Schmidt on a complex Gaussian matrix.
pub fn haar_unitary(seed: u64) -> Matrix4 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols = [[ZERO; 4]; 4];
    for col in cols.iter_mut() {
        for z in col.iter_mut() {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            *z = C64::new(re, im);
        }
    }
    for k in 0..4 {
        for j in 0..k {
            let proj: C64 = (0..4).map(|i| cols[j][i].conj() * cols[k][i]).sum();
            let prev = cols[j];
            for (z, v) in cols[k].iter_mut().zip(prev) {
                *z -= proj * v;
            }
        }
        let norm = cols[k].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols[k].iter_mut().for_each(|z| *z /= norm);
    }
    let mut m = [[ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = cols[j][i];
        }
    }
    m
}
