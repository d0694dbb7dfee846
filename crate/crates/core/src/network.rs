//! The syndrome-extraction network.
//!
//! Sixteen CNOTs copy parities of the five data qubits onto the four syndrome
//! lines, two Z-type and two X-type per line. The X-type CNOTs sit between two
//! layers of R rotations on every data qubit; the Z-type CNOTs sit outside
//! them (see [`Layout`] for which side). Each syndrome line is a four-qubit
//! register; the k-th CNOT that reaches a register lands on its k-th qubit, so
//! no register qubit touches more than one data qubit.
//!
//! Physical layout: data qubits 0..=4, register `a_r` on qubits `5 + 4r ..= 8 + 4r`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::ancilla::{self, AncillaPreparation, AncillaRegister, REGISTERS, REGISTER_QUBITS};
use crate::code5::DATA_QUBITS;
use crate::error::{Error, Result};
use crate::faults::FaultSpec;
use crate::protocol::Syndrome;
use crate::statevector::StateVector;

pub const ANCILLA_QUBITS: usize = REGISTERS * REGISTER_QUBITS;
pub const TOTAL_QUBITS: usize = DATA_QUBITS + ANCILLA_QUBITS;
pub const INPUT_PREFIX: &str = "input";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Placement {
    Before,
    After,
}

impl fmt::Display for Placement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Placement::Before => "before",
            Placement::After => "after",
        })
    }
}

impl FromStr for Placement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "before" => Ok(Placement::Before),
            "after" => Ok(Placement::After),
            _ => Err(Error::Parse(format!("bad placement {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GateKind {
    R,
    Cnot,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::R => 1,
            GateKind::Cnot => 2,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GateKind::R => "R",
            GateKind::Cnot => "CNOT",
        })
    }
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" => Ok(GateKind::R),
            "CNOT" => Ok(GateKind::Cnot),
            _ => Err(Error::Parse(format!("bad gate kind {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateOp {
    pub kind: GateKind,
    /// Physical qubits; for a CNOT the control comes first.
    pub operands: Vec<usize>,
    pub column: usize,
    pub serial: usize,
    pub location_id: String,
}

/// Which data qubits feed each syndrome line, per CNOT block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WiringTable {
    /// `checks[block][register]` lists the two controlling data qubits.
    pub checks: [[[usize; 2]; REGISTERS]; 2],
}

impl Default for WiringTable {
    fn default() -> Self {
        Self {
            checks: [
                [[2, 4], [0, 3], [1, 4], [0, 2]],
                [[0, 1], [1, 2], [2, 3], [3, 4]],
            ],
        }
    }
}

impl WiringTable {
    pub fn validate(&self) -> Result<()> {
        for (b, block) in self.checks.iter().enumerate() {
            for (r, pair) in block.iter().enumerate() {
                if pair.iter().any(|&d| d >= DATA_QUBITS) || pair[0] == pair[1] {
                    return Err(Error::InvalidWiring(format!(
                        "block {} register a{r}: {pair:?}",
                        b + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// Z-type CNOTs `(register, data)` to run after the final R layer so that
    /// every check is measured exactly, or `None` if no placement works.
    ///
    /// Exhaustive over all subsets of the eight Z-type CNOTs. A Z-type part of
    /// one register and an X-type part of another on the same data qubit swap
    /// relative order when the Z part is deferred (or not); each register pair
    /// needs an even number of swaps. Among valid subsets the smallest wins,
    /// then the one that keeps the chronologically earliest gates in place.
    pub fn commuting_deferral(&self, order: ColumnOrder) -> Option<Vec<(usize, usize)>> {
        let (z, x) = (&self.checks[0], &self.checks[1]);
        let mut gates = Vec::new();
        for d in 0..DATA_QUBITS {
            let mut regs: Vec<usize> = (0..REGISTERS).filter(|&r| z[r].contains(&d)).collect();
            if order == ColumnOrder::Descending {
                regs.reverse();
            }
            gates.extend(regs.into_iter().map(|r| (r, d)));
        }
        let n = gates.len();
        let valid = |mask: u32| {
            let deferred = |r: usize, d: usize| {
                gates.iter().position(|&g| g == (r, d)).is_some_and(|i| mask >> i & 1 == 1)
            };
            (0..REGISTERS).all(|r| {
                (r + 1..REGISTERS).all(|s| {
                    let swaps = (0..DATA_QUBITS)
                        .filter(|&d| {
                            (z[r].contains(&d) && x[s].contains(&d) && deferred(r, d))
                                || (x[r].contains(&d) && z[s].contains(&d) && !deferred(s, d))
                        })
                        .count();
                    swaps % 2 == 0
                })
            })
        };
        let weight = |mask: u32| (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| 1u64 << (n - 1 - i)).sum::<u64>();
        (0..1u32 << n)
            .filter(|&m| valid(m))
            .min_by_key(|&m| (m.count_ones(), weight(m)))
            .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).map(|i| gates[i]).collect())
    }

    /// Replaces one register's controls in one block (`block` is 1 or 2).
    pub fn with_override(mut self, block: usize, register: usize, controls: [usize; 2]) -> Result<Self> {
        if !(1..=2).contains(&block) || register >= REGISTERS {
            return Err(Error::InvalidWiring(format!("no block {block} register a{register}")));
        }
        self.checks[block - 1][register] = controls;
        self.validate()?;
        Ok(self)
    }
}

impl FromStr for WiringTable {
    type Err = Error;

    /// Override syntax `BLOCK:REGISTER=D,D`, e.g. `1:0=1,4`; several may be
    /// joined with `;`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad wiring override {s:?}"));
        let mut table = WiringTable::default();
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (lhs, rhs) = part.split_once('=').ok_or_else(bad)?;
            let (block, reg) = lhs.split_once(':').ok_or_else(bad)?;
            let block: usize = block.trim().parse().map_err(|_| bad())?;
            let reg: usize = reg.trim().trim_start_matches('a').parse().map_err(|_| bad())?;
            let (d0, d1) = rhs.split_once(',').ok_or_else(bad)?;
            let d0: usize = d0.trim().trim_start_matches('d').parse().map_err(|_| bad())?;
            let d1: usize = d1.trim().trim_start_matches('d').parse().map_err(|_| bad())?;
            table = table.with_override(block, reg, [d0, d1])?;
        }
        Ok(table)
    }
}

/// Serialization of CNOTs that share a column (one data qubit fanning out).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnOrder {
    /// Highest register index first; the default.
    #[default]
    Descending,
    Ascending,
}

impl FromStr for ColumnOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "descending" => Ok(ColumnOrder::Descending),
            "ascending" => Ok(ColumnOrder::Ascending),
            _ => Err(Error::Parse(format!("bad column order {s:?}"))),
        }
    }
}

/// Where the Z-type CNOTs sit relative to the two R layers.
///
/// `TwoBlock` keeps every Z-type CNOT in the first block. With
/// shared registers that order does not measure the checks: controlled-Z and
/// controlled-X parts of different checks on one data qubit fail to commute and
/// the register parities come out random. `Commuting` moves the fewest Z-type
/// CNOTs behind the final R layer (into a third block) so that every pair of
/// registers picks up an even number of such exchanges, which cancel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Layout {
    #[default]
    Commuting,
    TwoBlock,
}

impl FromStr for Layout {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "commuting" => Ok(Layout::Commuting),
            "two-block" => Ok(Layout::TwoBlock),
            _ => Err(Error::Parse(format!("bad layout {s:?}"))),
        }
    }
}

/// A totally ordered extraction round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub gates: Vec<GateOp>,
    pub registers: [AncillaRegister; REGISTERS],
    pub data: [usize; DATA_QUBITS],
}

/// A point adjacent to a gate (or the circuit input) where one fault may act.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaultLocation {
    pub location_id: String,
    pub placement: Placement,
    pub arity: usize,
    pub qubits: Vec<usize>,
    /// Serial index of the adjacent gate; `None` for input locations.
    pub serial: Option<usize>,
}

pub fn input_location_id(qubit: usize) -> String {
    format!("{INPUT_PREFIX}.d{qubit}")
}

fn default_registers() -> [AncillaRegister; REGISTERS] {
    std::array::from_fn(|r| AncillaRegister::contiguous(r, DATA_QUBITS))
}

/// The default network: default wiring, descending intra-column order, commuting layout.
pub fn build_schedule() -> Schedule {
    Schedule::build(&WiringTable::default(), ColumnOrder::Descending)
        .expect("default wiring is valid")
}

impl Schedule {
    pub fn build(wiring: &WiringTable, order: ColumnOrder) -> Result<Self> {
        Self::build_with(wiring, order, Layout::default())
    }

    pub fn build_with(wiring: &WiringTable, order: ColumnOrder, layout: Layout) -> Result<Self> {
        wiring.validate()?;
        let deferred = match layout {
            Layout::TwoBlock => Vec::new(),
            Layout::Commuting => wiring.commuting_deferral(order).unwrap_or_default(),
        };
        // (block label, per-register controls) in time order; R layers in between
        let z_now: Vec<Vec<usize>> = (0..REGISTERS)
            .map(|r| wiring.checks[0][r].iter().copied().filter(|&d| !deferred.contains(&(r, d))).collect())
            .collect();
        let z_later: Vec<Vec<usize>> = (0..REGISTERS)
            .map(|r| wiring.checks[0][r].iter().copied().filter(|&d| deferred.contains(&(r, d))).collect())
            .collect();
        let x_checks: Vec<Vec<usize>> = wiring.checks[1].iter().map(|p| p.to_vec()).collect();

        let registers = default_registers();
        let mut next_slot = [0usize; REGISTERS];
        let mut gates: Vec<GateOp> = Vec::new();
        let mut column = 0;
        let push = |gates: &mut Vec<GateOp>, kind, operands: Vec<usize>, column, location_id| {
            let serial = gates.len();
            gates.push(GateOp { kind, operands, column, serial, location_id });
        };
        let blocks = [(1, &z_now, Some(1)), (2, &x_checks, Some(2)), (3, &z_later, None)];
        for (label, controls, rotation) in blocks {
            for d in 0..DATA_QUBITS {
                let mut targets: Vec<usize> =
                    (0..REGISTERS).filter(|&r| controls[r].contains(&d)).collect();
                if targets.is_empty() {
                    continue;
                }
                if order == ColumnOrder::Descending {
                    targets.reverse();
                }
                for r in targets {
                    let slot = next_slot[r];
                    if slot >= REGISTER_QUBITS {
                        return Err(Error::InvalidWiring(format!("register a{r} overfull")));
                    }
                    next_slot[r] += 1;
                    let target = registers[r].qubit_ids[slot];
                    let id = format!("blk{label}.c{column}.cnot.d{d}.a{r}");
                    push(&mut gates, GateKind::Cnot, vec![d, target], column, id);
                }
                column += 1;
            }
            if let Some(k) = rotation {
                for d in 0..DATA_QUBITS {
                    let id = format!("rot{k}.c{column}.r.d{d}");
                    push(&mut gates, GateKind::R, vec![d], column, id);
                }
                column += 1;
            }
        }
        let schedule = Schedule { gates, registers, data: [0, 1, 2, 3, 4] };
        schedule.validate()?;
        Ok(schedule)
    }

    pub fn cnot_count(&self) -> usize {
        self.gates.iter().filter(|g| g.kind == GateKind::Cnot).count()
    }

    pub fn r_count(&self) -> usize {
        self.gates.iter().filter(|g| g.kind == GateKind::R).count()
    }

    pub fn gate(&self, location_id: &str) -> Option<&GateOp> {
        self.gates.iter().find(|g| g.location_id == location_id)
    }

    pub fn ancilla_qubits(&self) -> Vec<usize> {
        self.registers.iter().flat_map(|r| r.qubit_ids).collect()
    }

    /// Checks the structural invariants of an extraction round.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidWiring(msg));
        let mut seen = vec![false; self.gates.len()];
        for g in &self.gates {
            if g.serial >= seen.len() || std::mem::replace(&mut seen[g.serial], true) {
                return bad(format!("serial {} repeated or out of range", g.serial));
            }
            if g.operands.len() != g.kind.arity() {
                return bad(format!("{} has {} operands", g.location_id, g.operands.len()));
            }
        }
        let ancillas = self.ancilla_qubits();
        let mut targeted = [0usize; TOTAL_QUBITS];
        let mut per_register = [0usize; REGISTERS];
        for g in self.gates.iter().filter(|g| g.kind == GateKind::Cnot) {
            let (c, t) = (g.operands[0], g.operands[1]);
            if !self.data.contains(&c) || !ancillas.contains(&t) {
                return bad(format!("{}: control must be data, target ancilla", g.location_id));
            }
            targeted[t] += 1;
            if targeted[t] > 1 {
                return bad(format!("register qubit {t} targeted twice"));
            }
            let r = self.registers.iter().position(|r| r.qubit_ids.contains(&t)).unwrap();
            per_register[r] += 1;
        }
        for g in self.gates.iter().filter(|g| g.kind == GateKind::R) {
            if !self.data.contains(&g.operands[0]) {
                return bad(format!("{}: R acts on data only", g.location_id));
            }
        }
        if self.cnot_count() != 16 || self.r_count() != 10 {
            return bad(format!("{} CNOTs and {} R gates", self.cnot_count(), self.r_count()));
        }
        if per_register.iter().any(|&n| n != REGISTER_QUBITS) {
            return bad(format!("CNOTs per register {per_register:?}"));
        }
        let mut ids: Vec<&str> = self.gates.iter().map(|g| g.location_id.as_str()).collect();
        ids.sort_unstable();
        ids.dedup();
        if ids.len() != self.gates.len() {
            return bad("duplicate location ids".into());
        }
        Ok(())
    }

    /// Gates in serial order.
    pub fn ordered(&self) -> Vec<&GateOp> {
        let mut gates: Vec<&GateOp> = self.gates.iter().collect();
        gates.sort_by_key(|g| g.serial);
        gates
    }

    /// One record per gate: `serial,kind,operands,column,location_id`.
    pub fn export(&self) -> String {
        let mut out = csv::Writer::from_writer(Vec::new());
        out.write_record(["serial", "kind", "operands", "column", "location_id"])
            .expect("in-memory write");
        for g in self.ordered() {
            let operands = g.operands.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(" ");
            out.write_record([
                g.serial.to_string(),
                g.kind.to_string(),
                operands,
                g.column.to_string(),
                g.location_id.clone(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(out.into_inner().expect("flush")).expect("ascii")
    }

    pub fn import(text: &str) -> Result<Self> {
        let parse_err = |e: &dyn fmt::Display| Error::Parse(e.to_string());
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let mut gates = Vec::new();
        for rec in reader.records() {
            let rec = rec.map_err(|e| parse_err(&e))?;
            if rec.len() != 5 {
                return Err(Error::Parse(format!("expected 5 fields, got {}", rec.len())));
            }
            let num = |s: &str| s.trim().parse::<usize>().map_err(|e| parse_err(&e));
            let operands = rec[2].split_whitespace().map(num).collect::<Result<Vec<_>>>()?;
            gates.push(GateOp {
                serial: num(&rec[0])?,
                kind: rec[1].parse()?,
                operands,
                column: num(&rec[3])?,
                location_id: rec[4].to_string(),
            });
        }
        let schedule = Schedule { gates, registers: default_registers(), data: [0, 1, 2, 3, 4] };
        schedule.validate()?;
        Ok(schedule)
    }

    /// Every fault location: before and after each gate, then one input
    /// location per data qubit.
    pub fn fault_locations(&self) -> Vec<FaultLocation> {
        let mut out = Vec::with_capacity(2 * self.gates.len() + DATA_QUBITS);
        for g in self.ordered() {
            for placement in [Placement::Before, Placement::After] {
                out.push(FaultLocation {
                    location_id: g.location_id.clone(),
                    placement,
                    arity: g.kind.arity(),
                    qubits: g.operands.clone(),
                    serial: Some(g.serial),
                });
            }
        }
        for &d in &self.data {
            out.push(FaultLocation {
                location_id: input_location_id(d),
                placement: Placement::Before,
                arity: 1,
                qubits: vec![d],
                serial: None,
            });
        }
        out
    }

    /// Resolves a location id and placement.
    pub fn location(&self, location_id: &str, placement: Placement) -> Result<FaultLocation> {
        if let Some(g) = self.gate(location_id) {
            return Ok(FaultLocation {
                location_id: g.location_id.clone(),
                placement,
                arity: g.kind.arity(),
                qubits: g.operands.clone(),
                serial: Some(g.serial),
            });
        }
        self.data
            .iter()
            .find(|&&d| input_location_id(d) == location_id)
            .filter(|_| placement == Placement::Before)
            .map(|&d| FaultLocation {
                location_id: location_id.to_string(),
                placement,
                arity: 1,
                qubits: vec![d],
                serial: None,
            })
            .ok_or_else(|| Error::UnknownLocation(format!("{location_id}@{placement}")))
    }
}

pub fn enumerate_fault_locations(schedule: &Schedule) -> Vec<FaultLocation> {
    schedule.fault_locations()
}

/// Outcome of one extraction round.
#[derive(Debug, Clone, PartialEq)]
pub struct Extraction {
    pub syndrome: Syndrome,
    pub post_data: StateVector,
    /// Measured bits of the 16 register qubits, register-major.
    pub raw_outcomes: [u8; ANCILLA_QUBITS],
}

/// Runs the round up to (not including) the register measurement and returns
/// the full 21-qubit state.
pub fn extraction_state(
    data: &StateVector,
    schedule: &Schedule,
    fault: Option<&FaultSpec>,
    preparation: AncillaPreparation,
) -> Result<StateVector> {
    if data.qubit_count() != DATA_QUBITS {
        return Err(Error::DimensionMismatch { left: DATA_QUBITS, right: data.qubit_count() });
    }
    let resolved = match fault {
        Some(f) => {
            let loc = schedule.location(&f.location_id, f.placement)?;
            f.check_arity(loc.arity)?;
            Some((f, loc))
        }
        None => None,
    };

    let mut data = data.clone();
    if let Some((f, loc)) = &resolved {
        if loc.serial.is_none() {
            f.apply(&mut data, &loc.qubits)?;
        }
    }
    let register = preparation.register_state();
    let mut ancillas = register.clone();
    for _ in 1..REGISTERS {
        ancillas = ancillas.tensor(&register)?;
    }
    let mut state = data.tensor(&ancillas)?;

    for g in schedule.ordered() {
        let here = resolved
            .as_ref()
            .filter(|(_, loc)| loc.serial == Some(g.serial));
        if let Some((f, loc)) = here {
            if loc.placement == Placement::Before {
                f.apply(&mut state, &loc.qubits)?;
            }
        }
        match g.kind {
            GateKind::R => state.apply_r(g.operands[0])?,
            GateKind::Cnot => state.apply_cnot(g.operands[0], g.operands[1])?,
        }
        if let Some((f, loc)) = here {
            if loc.placement == Placement::After {
                f.apply(&mut state, &loc.qubits)?;
            }
        }
    }
    Ok(state)
}

/// One extraction round with fresh registers in the given preparation.
pub fn run_extraction_with<R: Rng + ?Sized>(
    data: &StateVector,
    schedule: &Schedule,
    fault: Option<&FaultSpec>,
    preparation: AncillaPreparation,
    rng: &mut R,
) -> Result<Extraction> {
    let mut state = extraction_state(data, schedule, fault, preparation)?;
    let ancilla_qubits = schedule.ancilla_qubits();
    let (bits, _) = state.measure_qubits(&ancilla_qubits, rng)?;

    let mut syndrome_bits = [0u8; REGISTERS];
    for (r, reg) in schedule.registers.iter().enumerate() {
        let outcomes = reg.qubit_ids.map(|q| {
            let pos = ancilla_qubits.iter().position(|&a| a == q).expect("register qubit");
            bits[pos]
        });
        syndrome_bits[r] = ancilla::syndrome_bit(&outcomes);
    }
    let mut raw_outcomes = [0u8; ANCILLA_QUBITS];
    raw_outcomes.copy_from_slice(&bits);
    let post_data = state.restrict(&schedule.data)?;
    Ok(Extraction { syndrome: Syndrome::from_bits(syndrome_bits), post_data, raw_outcomes })
}

/// One extraction round with even-parity registers.
pub fn run_extraction<R: Rng + ?Sized>(
    data: &StateVector,
    schedule: &Schedule,
    fault: Option<&FaultSpec>,
    rng: &mut R,
) -> Result<Extraction> {
    run_extraction_with(data, schedule, fault, AncillaPreparation::EvenParity, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code5::{logical_one, logical_zero};

    #[test]
    fn schedule_shape() {
        let s = build_schedule();
        assert_eq!(s.gates.len(), 26);
        assert_eq!((s.cnot_count(), s.r_count()), (16, 10));
        assert_eq!(s.gates[0].location_id, "blk1.c0.cnot.d0.a3");
        assert_eq!(s.gates[1].location_id, "blk1.c0.cnot.d0.a1");
        assert_eq!(s.gates[0].operands, vec![0, 17]);
        // block 1 then R layer then block 2 then R layer
        let kinds: String = s.gates.iter().map(|g| if g.kind == GateKind::R { 'R' } else { 'C' }).collect();
        assert_eq!(kinds, "CCCCRRRRRCCCCCCCCRRRRRCCCC");
        assert_eq!(s.gates.last().unwrap().column, 12);
    }

    #[test]
    fn deferral_search() {
        let moved = WiringTable::default().commuting_deferral(ColumnOrder::Descending).unwrap();
        assert_eq!(moved, vec![(0, 2), (1, 3), (2, 4), (0, 4)]);
        let two_block = Schedule::build_with(&WiringTable::default(), ColumnOrder::Descending, Layout::TwoBlock).unwrap();
        let kinds: String = two_block.gates.iter().map(|g| if g.kind == GateKind::R { 'R' } else { 'C' }).collect();
        assert_eq!(kinds, "CCCCCCCCRRRRRCCCCCCCCRRRRR");
        assert_eq!(two_block.gates[1].location_id, "blk1.c0.cnot.d0.a1");
    }

    #[test]
    fn two_block_layout_randomises_clean_syndromes() {
        use rand::SeedableRng;
        let two_block = Schedule::build_with(&WiringTable::default(), ColumnOrder::Descending, Layout::TwoBlock).unwrap();
        let state = extraction_state(&logical_zero(), &two_block, None, AncillaPreparation::EvenParity).unwrap();
        let a0 = state.marginal_probabilities(&two_block.registers[0].qubit_ids).unwrap();
        let odd: f64 = (0..16u32).filter(|n| n.count_ones() % 2 == 1).map(|n| a0[n as usize]).sum();
        assert!((odd - 0.5).abs() < 1e-9);
        let syndromes: std::collections::HashSet<String> = (0..16)
            .map(|seed| {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                run_extraction(&logical_zero(), &two_block, None, &mut rng).unwrap().syndrome.to_string()
            })
            .collect();
        assert!(syndromes.len() > 1);
    }

    #[test]
    fn each_register_qubit_targeted_once() {
        let s = build_schedule();
        let mut targets: Vec<usize> = s
            .gates
            .iter()
            .filter(|g| g.kind == GateKind::Cnot)
            .map(|g| g.operands[1])
            .collect();
        targets.sort_unstable();
        assert_eq!(targets, (5..21).collect::<Vec<_>>());
    }

    #[test]
    fn ascending_order_flips_columns() {
        let s = Schedule::build(&WiringTable::default(), ColumnOrder::Ascending).unwrap();
        assert_eq!(s.gates[0].location_id, "blk1.c0.cnot.d0.a1");
        assert!(s.validate().is_ok());
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let ex = run_extraction(&logical_zero(), &s, None, &mut rng).unwrap();
        assert_eq!(ex.syndrome.to_string(), "0000");
    }

    #[test]
    fn wiring_overrides() {
        let w: WiringTable = "1:0=1,4".parse().unwrap();
        assert_eq!(w.checks[0][0], [1, 4]);
        assert!("1:0=4,4".parse::<WiringTable>().is_err());
        assert!("3:0=1,2".parse::<WiringTable>().is_err());
        assert!("junk".parse::<WiringTable>().is_err());
    }

    #[test]
    fn fault_locations() {
        let s = build_schedule();
        let locs = enumerate_fault_locations(&s);
        assert_eq!(locs.len(), 57);
        assert_eq!(locs.iter().filter(|l| l.arity == 2).count(), 32);
        assert_eq!(locs.iter().filter(|l| l.serial.is_none()).count(), 5);
        assert!(s.location("input.d3", Placement::Before).is_ok());
        assert!(s.location("input.d3", Placement::After).is_err());
        assert!(matches!(s.location("nowhere", Placement::Before), Err(Error::UnknownLocation(_))));
    }

    #[test]
    fn export_import_round_trip() {
        let s = build_schedule();
        let text = s.export();
        assert_eq!(text.lines().count(), 27);
        assert_eq!(Schedule::import(&text).unwrap(), s);
        let broken = text.replacen("CNOT,0 17", "CNOT,0 18", 1);
        assert!(Schedule::import(&broken).is_err());
    }

    #[test]
    fn clean_extraction_is_silent() {
        use rand::SeedableRng;
        let s = build_schedule();
        for psi in [logical_zero(), logical_one()] {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
            let ex = run_extraction(&psi, &s, None, &mut rng).unwrap();
            assert_eq!(ex.syndrome.to_string(), "0000");
            assert!((ex.post_data.fidelity(&psi).unwrap() - 1.0).abs() < 1e-9);
        }
    }
}
