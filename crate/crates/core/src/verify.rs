//! Residual-weight oracle, exhaustive sweeps, the syndrome table check, the
//! two-protocol demo and the ancilla leak contrast.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ancilla::{AncillaPreparation, REGISTERS, REGISTER_QUBITS};
use crate::code5::{encode, LogicalAmplitudes, DATA_QUBITS};
use crate::error::{Error, Result};
use crate::faults::{all_pauli_fault_cases, case_seed, random_unitary_fault, FaultCase};
use crate::network::{extraction_state, run_extraction, GateKind, Placement, Schedule};
use crate::pauli::QubitError;
use crate::protocol::{table1, Correction, Protocol, ProtocolResult, Syndrome};
use crate::statevector::{StateVector, BRANCH_CUTOFF};

/// Default fidelity tolerance for weight classification.
pub const FIDELITY_TOL: f64 = 1e-9;
/// Default element-wise tolerance when comparing outcome distributions.
pub const DISTRIBUTION_TOL: f64 = 1e-9;
/// Fidelities closer than this count as equal when picking the best correction.
const TIE_TOL: f64 = 1e-12;
/// Data fidelity below which zero-prepared registers count as disturbing.
pub const LEAK_THRESHOLD: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub fidelity: f64,
    pub distribution: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { fidelity: FIDELITY_TOL, distribution: DISTRIBUTION_TOL }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weight {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
    Many,
}

impl Weight {
    pub fn at_most_one(self) -> bool {
        self != Weight::Many
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Weight::Zero => "0",
            Weight::One => "1",
            Weight::Many => "many",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightVerdict {
    pub weight: Weight,
    pub best_correction: Option<QubitError>,
    pub best_fidelity: f64,
}

fn corrections() -> impl Iterator<Item = Option<QubitError>> {
    std::iter::once(None).chain(QubitError::all_data_errors().into_iter().map(Some))
}

fn corrected(state: &StateVector, c: Option<QubitError>) -> Result<StateVector> {
    let mut s = state.clone();
    if let Some(e) = c {
        s.apply_pauli(e.qubit, e.kind)?;
    }
    Ok(s)
}

/// Smallest number of single-qubit Paulis (0, 1, or more) that brings `state`
/// back to `ideal`.
pub fn min_error_weight(state: &StateVector, ideal: &StateVector) -> Result<WeightVerdict> {
    min_error_weight_with(state, ideal, FIDELITY_TOL)
}

pub fn min_error_weight_with(state: &StateVector, ideal: &StateVector, tol: f64) -> Result<WeightVerdict> {
    check_data(state)?;
    check_data(ideal)?;
    let mut best: Option<(Option<QubitError>, f64)> = None;
    for c in corrections() {
        let f = ideal.fidelity(&corrected(state, c)?)?;
        if c.is_none() && f >= 1.0 - tol {
            return Ok(WeightVerdict { weight: Weight::Zero, best_correction: None, best_fidelity: f });
        }
        // near-ties keep the earliest candidate
        if best.is_none_or(|(_, b)| f > b + TIE_TOL) {
            best = Some((c, f));
        }
    }
    let (c, f) = best.expect("sixteen candidates");
    let weight = if f >= 1.0 - tol { Weight::One } else { Weight::Many };
    Ok(WeightVerdict { weight, best_correction: c, best_fidelity: f })
}

/// Squared norm of the projection of `state` onto the span of `P|ideal>` for
/// the identity and the fifteen single-qubit Paulis. Those sixteen vectors are
/// orthonormal for a codeword, so a value of 1 means the state is a coherent
/// mixture of correctable errors.
pub fn correctable_fraction(state: &StateVector, ideal: &StateVector) -> Result<f64> {
    check_data(state)?;
    check_data(ideal)?;
    let mut total = 0.0;
    for c in corrections() {
        total += corrected(ideal, c)?.overlap(state)?.norm_sqr();
    }
    Ok(total)
}

/// Every pair of single-qubit Paulis on distinct qubits that restores `ideal`.
pub fn restoring_pairs(state: &StateVector, ideal: &StateVector, tol: f64) -> Result<Vec<(QubitError, QubitError)>> {
    let errors = QubitError::all_data_errors();
    let mut out = Vec::new();
    for (i, &a) in errors.iter().enumerate() {
        for &b in &errors[i + 1..] {
            if a.qubit == b.qubit {
                continue;
            }
            let mut s = state.clone();
            s.apply_pauli(a.qubit, a.kind)?;
            s.apply_pauli(b.qubit, b.kind)?;
            if ideal.fidelity(&s)? >= 1.0 - tol {
                out.push((a, b));
            }
        }
    }
    Ok(out)
}

fn check_data(s: &StateVector) -> Result<()> {
    if s.qubit_count() != DATA_QUBITS {
        return Err(Error::DimensionMismatch { left: DATA_QUBITS, right: s.qubit_count() });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// syndrome table

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub error: QubitError,
    pub expected: Syndrome,
    pub simulated: Syndrome,
    #[serde(rename = "match")]
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Report {
    pub rows: Vec<Table1Row>,
    pub matched: usize,
    pub reproduced: bool,
}

/// Simulates every tabulated input error on `|~0>` and compares syndromes.
pub fn reproduce_table1(schedule: &Schedule, seed: u64) -> Result<Table1Report> {
    let rows = table1()
        .into_iter()
        .map(|(error, expected)| {
            let mut data = encode(&LogicalAmplitudes::zero())?;
            data.apply_pauli(error.qubit, error.kind)?;
            let id = FaultCase::input(error).case_id;
            let mut rng = ChaCha8Rng::seed_from_u64(case_seed(seed, &id));
            let simulated = run_extraction(&data, schedule, None, &mut rng)?.syndrome;
            Ok(Table1Row { error, expected, simulated, matches: simulated == expected })
        })
        .collect::<Result<Vec<_>>>()?;
    let matched = rows.iter().filter(|r| r.matches).count();
    Ok(Table1Report { reproduced: matched == rows.len(), matched, rows })
}

// ---------------------------------------------------------------------------
// demo

/// The fault used by the demo: `X⊗X` just before the CNOT from `d0` into `a3`.
pub const DEMO_CASE: &str = "blk1.c0.cnot.d0.a3@before:XX";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemoLeg {
    pub protocol: Protocol,
    pub syndrome_1: Syndrome,
    pub syndrome_2: Option<Syndrome>,
    pub correction: Correction,
    pub verdict: WeightVerdict,
    /// Pairs of single-qubit Paulis that would restore the ideal output.
    pub restoring_pairs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemoReport {
    pub case_id: String,
    pub logical: String,
    pub naive: DemoLeg,
    pub conditional: DemoLeg,
    pub reproduced: bool,
}

fn demo_leg(protocol: Protocol, r: &ProtocolResult, ideal: &StateVector, tol: f64) -> Result<DemoLeg> {
    let verdict = min_error_weight_with(&r.output, ideal, tol)?;
    let restoring_pairs = if verdict.weight == Weight::Many {
        restoring_pairs(&r.output, ideal, tol)?
            .into_iter()
            .map(|(a, b)| format!("{a} {b}"))
            .collect()
    } else {
        Vec::new()
    };
    Ok(DemoLeg {
        protocol,
        syndrome_1: r.syndrome_1,
        syndrome_2: r.syndrome_2,
        correction: r.correction,
        verdict,
        restoring_pairs,
    })
}

/// Runs the demo fault on `|~0>` under both protocols. It reproduces when
/// the naive run reads `0100`, applies `X_3` and is left with the two errors
/// `X_0 X_3`, while the conditional run ends exactly on the codeword.
pub fn demo_naive_failure(schedule: &Schedule, seed: u64, tol: f64) -> Result<DemoReport> {
    let case = FaultCase::parse(DEMO_CASE, schedule)?;
    let ideal = encode(&LogicalAmplitudes::zero())?;
    let mut rng = ChaCha8Rng::seed_from_u64(case_seed(seed, DEMO_CASE));
    let naive = Protocol::Naive.run(&ideal, schedule, case.spec.as_ref(), &mut rng)?;
    let conditional = Protocol::Conditional.run(&ideal, schedule, case.spec.as_ref(), &mut rng)?;
    let naive = demo_leg(Protocol::Naive, &naive, &ideal, tol)?;
    let conditional = demo_leg(Protocol::Conditional, &conditional, &ideal, tol)?;
    let reproduced = naive.syndrome_1.to_string() == "0100"
        && naive.correction.to_string() == "X_3"
        && naive.verdict.weight == Weight::Many
        && naive.restoring_pairs.iter().any(|p| p == "X_0 X_3")
        && conditional.verdict.weight == Weight::Zero;
    Ok(DemoReport { case_id: DEMO_CASE.into(), logical: "zero".into(), naive, conditional, reproduced })
}

// ---------------------------------------------------------------------------
// sweeps

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepInput {
    /// Clean encoded input, one fault at each Pauli fault case in turn.
    #[default]
    Clean,
    /// Each single-qubit input error in turn, no fault in the network.
    SingleErrors,
    /// Clean input, one random unitary fault per trial.
    RandomUnitary,
}

impl fmt::Display for SweepInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepInput::Clean => "clean",
            SweepInput::SingleErrors => "single-errors",
            SweepInput::RandomUnitary => "random-unitary",
        })
    }
}

impl FromStr for SweepInput {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "clean" => Ok(SweepInput::Clean),
            "single-errors" => Ok(SweepInput::SingleErrors),
            "random-unitary" => Ok(SweepInput::RandomUnitary),
            _ => Err(Error::Parse(format!("unknown sweep input {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub protocol: Protocol,
    pub input: SweepInput,
    pub logical: LogicalAmplitudes,
    pub seed: u64,
    pub tolerances: Tolerances,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            protocol: Protocol::Conditional,
            input: SweepInput::Clean,
            logical: LogicalAmplitudes::zero(),
            seed: 0,
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub case_id: String,
    pub syndrome_1: Syndrome,
    pub syndrome_2: Option<Syndrome>,
    pub correction: Correction,
    pub rounds_used: u8,
    pub weight: Weight,
    pub best_correction: Option<QubitError>,
    pub best_fidelity: f64,
    pub correctable_fraction: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    pub weight_0: usize,
    pub weight_1: usize,
    pub weight_many: usize,
    pub worst_best_fidelity: f64,
    pub failing_cases: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub protocol: Protocol,
    pub input: SweepInput,
    pub logical: String,
    pub seed: u64,
    pub records: Vec<CaseRecord>,
    pub summary: SweepSummary,
}

impl SweepReport {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn record(&self, case_id: &str) -> Option<&CaseRecord> {
        self.records.iter().find(|r| r.case_id == case_id)
    }

    fn assemble(config: &SweepConfig, records: Vec<CaseRecord>) -> Self {
        let count = |w| records.iter().filter(|r| r.weight == w).count();
        let passed = records.iter().filter(|r| r.pass).count();
        let summary = SweepSummary {
            cases: records.len(),
            passed,
            failed: records.len() - passed,
            weight_0: count(Weight::Zero),
            weight_1: count(Weight::One),
            weight_many: count(Weight::Many),
            worst_best_fidelity: records.iter().map(|r| r.best_fidelity).fold(1.0, f64::min),
            failing_cases: records.iter().filter(|r| !r.pass).map(|r| r.case_id.clone()).collect(),
        };
        Self {
            protocol: config.protocol,
            input: config.input,
            logical: config.logical.label(),
            seed: config.seed,
            records,
            summary,
        }
    }
}

fn run_case(
    case: &FaultCase,
    schedule: &Schedule,
    ideal: &StateVector,
    config: &SweepConfig,
    rng_seed: u64,
) -> Result<CaseRecord> {
    let mut data = ideal.clone();
    if let Some(e) = case.input_error {
        data.apply_pauli(e.qubit, e.kind)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let r = config.protocol.run(&data, schedule, case.spec.as_ref(), &mut rng)?;
    let tol = config.tolerances.fidelity;
    let verdict = min_error_weight_with(&r.output, ideal, tol)?;
    let correctable_fraction = correctable_fraction(&r.output, ideal)?;
    let pass = match config.input {
        SweepInput::Clean => verdict.weight.at_most_one(),
        SweepInput::SingleErrors => verdict.weight == Weight::Zero,
        SweepInput::RandomUnitary => correctable_fraction >= 1.0 - tol,
    };
    Ok(CaseRecord {
        case_id: case.case_id.clone(),
        syndrome_1: r.syndrome_1,
        syndrome_2: r.syndrome_2,
        correction: r.correction,
        rounds_used: r.rounds_used,
        weight: verdict.weight,
        best_correction: verdict.best_correction,
        best_fidelity: verdict.best_fidelity,
        correctable_fraction,
        pass,
    })
}

/// The fault cases a Pauli sweep visits, in report order.
pub fn sweep_cases(schedule: &Schedule, input: SweepInput) -> Vec<FaultCase> {
    match input {
        SweepInput::Clean => all_pauli_fault_cases(schedule),
        SweepInput::SingleErrors => {
            QubitError::all_data_errors().into_iter().map(FaultCase::input).collect()
        }
        SweepInput::RandomUnitary => Vec::new(),
    }
}

/// Runs every case of `cases` in parallel; records keep the order of `cases`.
pub fn run_cases(schedule: &Schedule, cases: &[FaultCase], config: &SweepConfig) -> Result<SweepReport> {
    let ideal = encode(&config.logical)?;
    let records = cases
        .par_iter()
        .map(|c| run_case(c, schedule, &ideal, config, case_seed(config.seed, &c.case_id)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport::assemble(config, records))
}

/// Exhaustive Pauli sweep. Pass criterion: residual weight at most one for
/// clean input, weight zero for single-error input.
pub fn sweep(schedule: &Schedule, config: &SweepConfig) -> Result<SweepReport> {
    if config.input == SweepInput::RandomUnitary {
        return Err(Error::Parse("random-unitary input needs a trial count".into()));
    }
    run_cases(schedule, &sweep_cases(schedule, config.input), config)
}

/// Draws `trials` random two-qubit unitary faults on CNOT locations and runs
/// the configured protocol on each. A trial passes when the measured branch
/// lies entirely in the span of correctable errors.
pub fn monte_carlo_unitary_sweep(schedule: &Schedule, trials: usize, config: &SweepConfig) -> Result<SweepReport> {
    if trials == 0 {
        return Err(Error::Parse("trials must be at least 1".into()));
    }
    let locations: Vec<(String, Placement)> = schedule
        .fault_locations()
        .into_iter()
        .filter(|l| l.serial.is_some() && l.arity == GateKind::Cnot.arity())
        .map(|l| (l.location_id, l.placement))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let cases = (0..trials)
        .map(|t| {
            let (loc, placement) = &locations[rng.random_range(0..locations.len())];
            let unitary_seed: u32 = rng.random();
            let spec = random_unitary_fault(schedule, loc, *placement, u64::from(unitary_seed))?;
            let mut case = FaultCase::fault(spec);
            case.case_id = format!("t{t}.{}", case.case_id);
            Ok(case)
        })
        .collect::<Result<Vec<_>>>()?;
    let config = SweepConfig { input: SweepInput::RandomUnitary, ..*config };
    run_cases(schedule, &cases, &config)
}

/// Fault cases that pass under `a` but not under `b`.
pub fn dominance_violations(a: &SweepReport, b: &SweepReport) -> Vec<String> {
    let b_pass: BTreeMap<&str, bool> = b.records.iter().map(|r| (r.case_id.as_str(), r.pass)).collect();
    a.records
        .iter()
        .filter(|r| r.pass && !b_pass.get(r.case_id.as_str()).copied().unwrap_or(false))
        .map(|r| r.case_id.clone())
        .collect()
}

/// Case ids whose best fidelity is not within `tol` of 0 or 1.
pub fn intermediate_fidelities(report: &SweepReport, tol: f64) -> Vec<String> {
    report
        .records
        .iter()
        .filter(|r| r.best_fidelity > tol && r.best_fidelity < 1.0 - tol)
        .map(|r| r.case_id.clone())
        .collect()
}

// ---------------------------------------------------------------------------
// ancilla leak

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeakEntry {
    pub logical: String,
    /// Outcome-averaged fidelity of the post-measurement data with the input.
    pub data_fidelity: f64,
    /// Probability that every register reads even parity.
    pub silent_probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeakLeg {
    pub preparation: AncillaPreparation,
    pub entries: Vec<LeakEntry>,
    /// Largest element-wise gap between the 16-qubit outcome distributions.
    pub max_distribution_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeakReport {
    pub even_parity: LeakLeg,
    pub all_zeros: LeakLeg,
    pub reproduced: bool,
}

struct ExactRound {
    distribution: Vec<f64>,
    data_fidelity: f64,
    silent_probability: f64,
}

/// Exact outcome statistics of one fault-free round, without sampling.
fn exact_round(data: &StateVector, schedule: &Schedule, prep: AncillaPreparation) -> Result<ExactRound> {
    let ancillas = schedule.ancilla_qubits();
    let n_anc = ancillas.len();
    let trailing = schedule.data.iter().copied().eq(0..DATA_QUBITS)
        && ancillas.iter().copied().eq(DATA_QUBITS..DATA_QUBITS + n_anc);
    if !trailing {
        return Err(Error::InvalidWiring("exact statistics need data first, registers after".into()));
    }
    let state = extraction_state(data, schedule, None, prep)?;
    let amps = state.amplitudes();
    let outcomes = 1usize << n_anc;
    let mut distribution = vec![0.0; outcomes];
    let mut data_fidelity = 0.0;
    for (o, p_out) in distribution.iter_mut().enumerate() {
        let mut overlap = num_complex::Complex64::new(0.0, 0.0);
        let mut p = 0.0;
        for (d, want) in data.amplitudes().iter().enumerate() {
            let a = amps[d * outcomes + o];
            p += a.norm_sqr();
            overlap += want.conj() * a;
        }
        *p_out = p;
        // p(o) * F(o) with F(o) = |<ψ|φ_o>|^2 / p(o)
        data_fidelity += overlap.norm_sqr();
    }
    let silent_probability = distribution
        .iter()
        .enumerate()
        .filter(|(o, p)| {
            **p > BRANCH_CUTOFF
                && (0..REGISTERS).all(|r| {
                    let shift = REGISTER_QUBITS * (REGISTERS - 1 - r);
                    ((o >> shift) & 0xF).count_ones().is_multiple_of(2)
                })
        })
        .map(|(_, p)| p)
        .sum();
    Ok(ExactRound { distribution, data_fidelity, silent_probability })
}

fn leak_leg(schedule: &Schedule, prep: AncillaPreparation) -> Result<LeakLeg> {
    let inputs = [LogicalAmplitudes::zero(), LogicalAmplitudes::one(), LogicalAmplitudes::plus()];
    let mut entries = Vec::new();
    let mut distributions = Vec::new();
    for l in inputs {
        let r = exact_round(&encode(&l)?, schedule, prep)?;
        entries.push(LeakEntry {
            logical: l.label(),
            data_fidelity: r.data_fidelity,
            silent_probability: r.silent_probability,
        });
        distributions.push(r.distribution);
    }
    let mut gap: f64 = 0.0;
    for other in &distributions[1..] {
        for (a, b) in distributions[0].iter().zip(other) {
            gap = gap.max((a - b).abs());
        }
    }
    Ok(LeakLeg { preparation: prep, entries, max_distribution_gap: gap })
}

/// Compares even-parity registers against plain `|0000>` registers on clean
/// `|~0>`, `|~1>` and their equal superposition.
pub fn ancilla_leak_test(schedule: &Schedule, tolerances: &Tolerances) -> Result<LeakReport> {
    let even_parity = leak_leg(schedule, AncillaPreparation::EvenParity)?;
    let all_zeros = leak_leg(schedule, AncillaPreparation::AllZeros)?;
    let tol = tolerances.fidelity;
    let reproduced = even_parity.max_distribution_gap <= tolerances.distribution
        && even_parity.entries.iter().all(|e| e.data_fidelity >= 1.0 - tol && e.silent_probability >= 1.0 - tol)
        && all_zeros.entries.iter().any(|e| e.data_fidelity < LEAK_THRESHOLD);
    Ok(LeakReport { even_parity, all_zeros, reproduced })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code5::logical_zero;
    use crate::network::build_schedule;
    use crate::pauli::PauliKind;

    fn with(errors: &[(usize, PauliKind)]) -> StateVector {
        let mut s = logical_zero();
        for &(q, k) in errors {
            s.apply_pauli(q, k).unwrap();
        }
        s
    }

    #[test]
    fn weight_examples() {
        let z = logical_zero();
        assert_eq!(min_error_weight(&z, &z).unwrap().weight, Weight::Zero);
        let v = min_error_weight(&with(&[(2, PauliKind::X)]), &z).unwrap();
        assert_eq!((v.weight, v.best_correction), (Weight::One, Some(QubitError::new(2, PauliKind::X))));
        let v = min_error_weight(&with(&[(0, PauliKind::X), (3, PauliKind::X)]), &z).unwrap();
        assert_eq!(v.weight, Weight::Many);
        assert!(v.best_fidelity < 1e-9);
    }

    #[test]
    fn weight_display() {
        assert_eq!(Weight::Many.to_string(), "many");
        assert_eq!(serde_json::to_string(&Weight::One).unwrap(), "\"1\"");
    }

    #[test]
    fn correctable_fraction_of_mixtures() {
        let z = logical_zero();
        let x1 = with(&[(1, PauliKind::X)]);
        let amps = z
            .amplitudes()
            .iter()
            .zip(x1.amplitudes())
            .map(|(a, b)| a * 0.6 + b * 0.8)
            .collect();
        let mix = StateVector::from_amplitudes(5, amps).unwrap();
        assert!((correctable_fraction(&mix, &z).unwrap() - 1.0).abs() < 1e-12);
        let v = min_error_weight(&mix, &z).unwrap();
        assert_eq!(v.weight, Weight::Many);
        assert!((v.best_fidelity - 0.64).abs() < 1e-12);
        let two = with(&[(0, PauliKind::X), (3, PauliKind::X)]);
        assert!(correctable_fraction(&two, &z).unwrap() < 1e-9);
    }

    #[test]
    fn table_is_reproduced() {
        let r = reproduce_table1(&build_schedule(), 0).unwrap();
        assert!(r.reproduced, "{r:?}");
        assert_eq!(r.matched, 15);
    }

    #[test]
    fn demo_reproduces() {
        let r = demo_naive_failure(&build_schedule(), 0, FIDELITY_TOL).unwrap();
        assert!(r.reproduced, "{r:?}");
        assert_eq!(r.conditional.correction.to_string(), "X_0");
    }

    #[test]
    fn single_error_sweep() {
        let s = build_schedule();
        for protocol in [Protocol::Naive, Protocol::Conditional] {
            let config = SweepConfig { protocol, input: SweepInput::SingleErrors, ..Default::default() };
            let r = sweep(&s, &config).unwrap();
            assert_eq!((r.summary.cases, r.summary.weight_0), (15, 15));
        }
    }

    #[test]
    fn xx_as_a_unitary_matches_the_pauli_case() {
        use crate::faults::FaultSpec;
        let s = build_schedule();
        let z = logical_zero();
        let pauli = FaultCase::parse(DEMO_CASE, &s).unwrap().spec.unwrap();
        let axis = [PauliKind::X, PauliKind::X];
        let unitary = FaultSpec::rotation(&pauli.location_id, pauli.placement, axis, std::f64::consts::FRAC_PI_2).unwrap();
        for protocol in [Protocol::Naive, Protocol::Conditional] {
            let a = protocol.run(&z, &s, Some(&pauli), &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
            let b = protocol.run(&z, &s, Some(&unitary), &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
            assert_eq!((a.syndrome_1, a.syndrome_2, a.correction), (b.syndrome_1, b.syndrome_2, b.correction));
            let va = min_error_weight(&a.output, &z).unwrap();
            let vb = min_error_weight(&b.output, &z).unwrap();
            assert_eq!(va.weight, vb.weight);
        }
    }

    #[test]
    fn tiny_rotation_mostly_does_nothing() {
        use crate::faults::FaultSpec;
        let s = build_schedule();
        let z = logical_zero();
        let axis = [PauliKind::X, PauliKind::Z];
        let f = FaultSpec::rotation("blk2.c6.cnot.d2.a1", Placement::After, axis, 1e-3).unwrap();
        let zero = (0..8)
            .filter(|&seed| {
                let r = Protocol::Conditional.run(&z, &s, Some(&f), &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
                min_error_weight(&r.output, &z).unwrap().weight == Weight::Zero
            })
            .count();
        assert!(zero >= 7, "{zero}");
    }

    #[test]
    fn unitary_sample_is_reproducible() {
        let s = build_schedule();
        let config = SweepConfig { seed: 7, ..Default::default() };
        let a = monte_carlo_unitary_sweep(&s, 6, &config).unwrap();
        let b = monte_carlo_unitary_sweep(&s, 6, &config).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.input, SweepInput::RandomUnitary);
        assert!(a.all_passed(), "{:?}", a.summary);
        assert!(monte_carlo_unitary_sweep(&s, 0, &config).is_err());
    }
}
