//! Single-fault injection.
//!
//! A fault sits before or after one gate of the round (or on a data qubit at
//! the input) and acts on that gate's operands. Pauli faults assign one
//! operator per operand; non-Pauli faults apply a two-qubit unitary to a CNOT's
//! operands.
//!
//! Case ids are stable and reproduce the case on their own:
//!
//! ```text
//! clean                                   no fault
//! input.d<q>:<P>                          input error, e.g. input.d0:X
//! <location>@<before|after>:<PP..>        Pauli fault, e.g. blk1.c0.cnot.d0.a3@before:XX
//! <location>@<before|after>:U<seed>       Haar-random two-qubit unitary
//! <location>@<before|after>:exp(<PP>,<θ>) exp(-iθ·PP) on a CNOT's operands
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::network::{input_location_id, Placement, Schedule, INPUT_PREFIX};
use crate::pauli::{PauliKind, QubitError};
use crate::statevector::StateVector;
use crate::unitary::{self, Matrix4};

/// Rotations closer than this to the identity (up to phase) are not faults.
pub const IDENTITY_TOL: f64 = 1e-12;

/// One Pauli per operand, not all identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PauliAssignment(Vec<PauliKind>);

impl PauliAssignment {
    pub fn new(paulis: Vec<PauliKind>) -> Result<Self> {
        if paulis.is_empty() || paulis.iter().all(|p| p.is_identity()) {
            return Err(Error::InvalidFault("identity assignment is not a fault".into()));
        }
        Ok(Self(paulis))
    }

    pub fn paulis(&self) -> &[PauliKind] {
        &self.0
    }

    /// All non-identity assignments on `arity` operands, lexicographic in I<X<Y<Z.
    pub fn all(arity: usize) -> Vec<PauliAssignment> {
        let mut out = vec![Vec::new()];
        for _ in 0..arity {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<PauliKind>| {
                    PauliKind::ALL.into_iter().map(move |p| {
                        let mut v = prefix.clone();
                        v.push(p);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().filter_map(|v| PauliAssignment::new(v).ok()).collect()
    }
}

impl fmt::Display for PauliAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|p| write!(f, "{p}"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FaultKind {
    Pauli(PauliAssignment),
    /// Haar-random unitary drawn from the seed.
    RandomUnitary { seed: u64 },
    /// `exp(-i angle P⊗Q)` with `axis = [P, Q]`.
    Rotation { axis: [PauliKind; 2], angle: f64 },
}

impl FaultKind {
    fn unitary(&self) -> Option<Matrix4> {
        match self {
            FaultKind::Pauli(_) => None,
            FaultKind::RandomUnitary { seed } => Some(unitary::haar_unitary(*seed)),
            FaultKind::Rotation { axis, angle } => {
                Some(unitary::pauli_rotation(axis[0], axis[1], *angle))
            }
        }
    }
}

impl fmt::Display for FaultKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FaultKind::Pauli(p) => write!(f, "{p}"),
            FaultKind::RandomUnitary { seed } => write!(f, "U{seed}"),
            FaultKind::Rotation { axis, angle } => write!(f, "exp({}{},{angle})", axis[0], axis[1]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaultSpec {
    pub location_id: String,
    pub placement: Placement,
    pub kind: FaultKind,
}

impl FaultSpec {
    pub fn pauli(location_id: &str, placement: Placement, paulis: &[PauliKind]) -> Result<Self> {
        Ok(Self {
            location_id: location_id.to_string(),
            placement,
            kind: FaultKind::Pauli(PauliAssignment::new(paulis.to_vec())?),
        })
    }

    /// `exp(-i angle P⊗Q)` on a CNOT location; rejected when it is the identity up to phase.
    pub fn rotation(
        location_id: &str,
        placement: Placement,
        axis: [PauliKind; 2],
        angle: f64,
    ) -> Result<Self> {
        let kind = FaultKind::Rotation { axis, angle };
        let m = kind.unitary().expect("rotation is a unitary fault");
        if unitary::distance_from_identity(&m) < IDENTITY_TOL {
            return Err(Error::InvalidFault("rotation is the identity".into()));
        }
        Ok(Self { location_id: location_id.to_string(), placement, kind })
    }

    /// Fails unless the fault fits a location with `arity` operands.
    pub fn check_arity(&self, arity: usize) -> Result<()> {
        let ok = match &self.kind {
            FaultKind::Pauli(p) => p.paulis().len() == arity,
            FaultKind::RandomUnitary { .. } | FaultKind::Rotation { .. } => arity == 2,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidFault(format!(
                "{} does not fit a {arity}-qubit location",
                self.kind
            )))
        }
    }

    pub fn check(&self, schedule: &Schedule) -> Result<()> {
        let loc = schedule.location(&self.location_id, self.placement)?;
        self.check_arity(loc.arity)
    }

    /// Applies the fault to `qubits` (the operands of its gate, in order).
    pub fn apply(&self, state: &mut StateVector, qubits: &[usize]) -> Result<()> {
        self.check_arity(qubits.len())?;
        match &self.kind {
            FaultKind::Pauli(p) => {
                for (&q, &k) in qubits.iter().zip(p.paulis()) {
                    state.apply_pauli(q, k)?;
                }
                Ok(())
            }
            kind => {
                let m = kind.unitary().expect("non-Pauli fault");
                state.apply_two_qubit_unitary(qubits[0], qubits[1], &m)
            }
        }
    }

    pub fn id(&self) -> String {
        format!("{}@{}:{}", self.location_id, self.placement, self.kind)
    }
}

/// A Haar-random fault on a two-qubit location.
pub fn random_unitary_fault(
    schedule: &Schedule,
    location_id: &str,
    placement: Placement,
    seed: u64,
) -> Result<FaultSpec> {
    let loc = schedule.location(location_id, placement)?;
    if loc.arity != 2 {
        return Err(Error::InvalidFault(format!("{location_id} is a single-qubit location")));
    }
    Ok(FaultSpec {
        location_id: location_id.to_string(),
        placement,
        kind: FaultKind::RandomUnitary { seed },
    })
}

/// One run of the harness: at most one fault in total.
#[derive(Debug, Clone, PartialEq)]
pub struct FaultCase {
    pub case_id: String,
    pub spec: Option<FaultSpec>,
    pub input_error: Option<QubitError>,
}

impl FaultCase {
    pub fn clean() -> Self {
        Self { case_id: "clean".into(), spec: None, input_error: None }
    }

    pub fn input(error: QubitError) -> Self {
        Self {
            case_id: format!("{}:{}", input_location_id(error.qubit), error.kind),
            spec: None,
            input_error: Some(error),
        }
    }

    pub fn fault(spec: FaultSpec) -> Self {
        Self { case_id: spec.id(), spec: Some(spec), input_error: None }
    }

    /// Rebuilds a case from its id, validating it against `schedule`.
    pub fn parse(case_id: &str, schedule: &Schedule) -> Result<Self> {
        let bad = || Error::Parse(format!("bad case id {case_id:?}"));
        if case_id == "clean" {
            return Ok(Self::clean());
        }
        if let Some((loc, kind)) = case_id.split_once(':').filter(|(l, _)| !l.contains('@')) {
            let qubit = loc
                .strip_prefix(INPUT_PREFIX)
                .and_then(|r| r.strip_prefix(".d"))
                .and_then(|q| q.parse::<usize>().ok())
                .ok_or_else(bad)?;
            schedule.location(loc, Placement::Before)?;
            let kind: PauliKind = kind.parse()?;
            if kind.is_identity() {
                return Err(bad());
            }
            return Ok(Self::input(QubitError::new(qubit, kind)));
        }
        let (loc, rest) = case_id.split_once('@').ok_or_else(bad)?;
        let (placement, kind) = rest.split_once(':').ok_or_else(bad)?;
        let placement: Placement = placement.parse()?;
        let spec = if let Some(seed) = kind.strip_prefix('U') {
            let seed = seed.parse().map_err(|_| bad())?;
            random_unitary_fault(schedule, loc, placement, seed)?
        } else if let Some(body) = kind.strip_prefix("exp(").and_then(|k| k.strip_suffix(')')) {
            let (axis, angle) = body.split_once(',').ok_or_else(bad)?;
            let axis: Vec<PauliKind> =
                axis.chars().map(PauliKind::from_symbol).collect::<Result<_>>()?;
            let axis: [PauliKind; 2] = axis.try_into().map_err(|_| bad())?;
            let angle: f64 = angle.parse().map_err(|_| bad())?;
            FaultSpec::rotation(loc, placement, axis, angle)?
        } else {
            let paulis: Vec<PauliKind> =
                kind.chars().map(PauliKind::from_symbol).collect::<Result<_>>()?;
            FaultSpec::pauli(loc, placement, &paulis)?
        };
        spec.check(schedule)?;
        let case = Self::fault(spec);
        debug_assert_eq!(case.case_id, case_id);
        Ok(case)
    }
}

/// The exhaustive single-Pauli fault list: 15 input errors, then every gate
/// location in serial order with each admissible assignment.
pub fn all_pauli_fault_cases(schedule: &Schedule) -> Vec<FaultCase> {
    let mut cases: Vec<FaultCase> =
        QubitError::all_data_errors().into_iter().map(FaultCase::input).collect();
    for loc in schedule.fault_locations().into_iter().filter(|l| l.serial.is_some()) {
        for assignment in PauliAssignment::all(loc.arity) {
            cases.push(FaultCase::fault(FaultSpec {
                location_id: loc.location_id.clone(),
                placement: loc.placement,
                kind: FaultKind::Pauli(assignment),
            }));
        }
    }
    cases
}

/// Per-case seed: the first eight bytes of `SHA-256(base_seed || case_id)`.
pub fn case_seed(base_seed: u64, case_id: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(base_seed.to_le_bytes());
    h.update(case_id.as_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("32-byte digest"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::build_schedule;

    #[test]
    fn assignment_counts() {
        assert_eq!(PauliAssignment::all(1).len(), 3);
        assert_eq!(PauliAssignment::all(2).len(), 15);
        assert!(PauliAssignment::new(vec![PauliKind::I, PauliKind::I]).is_err());
        assert_eq!(PauliAssignment::all(2)[0].to_string(), "IX");
    }

    #[test]
    fn exhaustive_case_list() {
        let s = build_schedule();
        let cases = all_pauli_fault_cases(&s);
        assert_eq!(cases.len(), 16 * 2 * 15 + 10 * 2 * 3 + 15);
        assert_eq!(cases.len(), 555);
        assert_eq!(cases[0].case_id, "input.d0:X");
        assert_eq!(cases[0].input_error, Some(QubitError::new(0, PauliKind::X)));
        assert!(cases.iter().all(|c| c.spec.is_some() != c.input_error.is_some()));
        let mut ids: Vec<&str> = cases.iter().map(|c| c.case_id.as_str()).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), 555);
    }

    #[test]
    fn case_ids_reproduce_cases() {
        let s = build_schedule();
        for case in all_pauli_fault_cases(&s) {
            assert_eq!(FaultCase::parse(&case.case_id, &s).unwrap(), case);
        }
        let u = FaultCase::fault(random_unitary_fault(&s, "blk2.c4.cnot.d0.a0", Placement::After, 42).unwrap());
        assert_eq!(u.case_id, "blk2.c4.cnot.d0.a0@after:U42");
        assert_eq!(FaultCase::parse(&u.case_id, &s).unwrap(), u);
        let r = FaultCase::fault(
            FaultSpec::rotation("blk1.c0.cnot.d0.a3", Placement::Before, [PauliKind::X, PauliKind::X], 1e-3).unwrap(),
        );
        assert_eq!(FaultCase::parse(&r.case_id, &s).unwrap(), r);
        assert_eq!(FaultCase::parse("clean", &s).unwrap(), FaultCase::clean());
        assert!(FaultCase::parse("input.d9:X", &s).is_err());
        assert!(FaultCase::parse("input.d0:I", &s).is_err());
        assert!(FaultCase::parse("rot1.c3.r.d0@before:XX", &s).is_err());
        assert!(FaultCase::parse("nowhere@before:X", &s).is_err());
    }

    #[test]
    fn random_unitary_faults() {
        let s = build_schedule();
        let a = random_unitary_fault(&s, "blk1.c0.cnot.d0.a3", Placement::Before, 7).unwrap();
        let b = random_unitary_fault(&s, "blk1.c0.cnot.d0.a3", Placement::Before, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.kind.unitary(), b.kind.unitary());
        assert!(unitary::unitarity_deviation(&a.kind.unitary().unwrap()) < 1e-10);
        assert!(random_unitary_fault(&s, "rot1.c3.r.d0", Placement::Before, 7).is_err());
        assert!(random_unitary_fault(&s, "input.d0", Placement::Before, 7).is_err());
        let zero = FaultSpec::rotation("blk1.c0.cnot.d0.a3", Placement::Before, [PauliKind::X, PauliKind::X], 0.0);
        assert!(zero.is_err());
    }

    #[test]
    fn seeds_depend_on_case() {
        assert_eq!(case_seed(1, "clean"), case_seed(1, "clean"));
        assert_ne!(case_seed(1, "clean"), case_seed(2, "clean"));
        assert_ne!(case_seed(1, "input.d0:X"), case_seed(1, "input.d0:Y"));
    }
}
