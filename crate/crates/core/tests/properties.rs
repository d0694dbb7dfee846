use ftqec::code5::{encode, LogicalAmplitudes};
use ftqec::network::build_schedule;
use ftqec::protocol::{Correction, Syndrome};
use ftqec::report::{reformat_json, to_json};
use ftqec::unitary::haar_unitary;
use ftqec::verify::{correctable_fraction, min_error_weight, CaseRecord, Weight};
use ftqec::{PauliKind, QubitError, StateVector};
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const N: usize = 4;

#[derive(Debug, Clone)]
enum Gate {
    R(usize),
    Cnot(usize, usize),
    Pauli(usize, PauliKind),
    Haar(usize, usize, u64),
}

fn gate() -> impl Strategy<Value = Gate> {
    let pair = (0..N, 0..N).prop_filter("distinct", |(a, b)| a != b);
    prop_oneof![
        (0..N).prop_map(Gate::R),
        pair.clone().prop_map(|(a, b)| Gate::Cnot(a, b)),
        (0..N, 0..4usize).prop_map(|(q, k)| Gate::Pauli(q, PauliKind::ALL[k])),
        (pair, any::<u64>()).prop_map(|((a, b), s)| Gate::Haar(a, b, s)),
    ]
}

fn state() -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << N)
        .prop_filter_map("nonzero", |v| {
            StateVector::from_amplitudes(N, v.into_iter().map(|(re, im)| C64::new(re, im)).collect()).ok()
        })
}

fn apply(s: &mut StateVector, g: &Gate) {
    match *g {
        Gate::R(q) => s.apply_r(q).unwrap(),
        Gate::Cnot(c, t) => s.apply_cnot(c, t).unwrap(),
        Gate::Pauli(q, k) => s.apply_pauli(q, k).unwrap(),
        Gate::Haar(a, b, seed) => s.apply_two_qubit_unitary(a, b, &haar_unitary(seed)).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gates_preserve_norm(mut s in state(), gates in prop::collection::vec(gate(), 0..20)) {
        for g in &gates {
            apply(&mut s, g);
        }
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn self_inverse_gates(s in state(), g in gate()) {
        prop_assume!(!matches!(g, Gate::Haar(..)));
        let mut t = s.clone();
        apply(&mut t, &g);
        apply(&mut t, &g);
        // Z = X·Y squares to -1, which leaves the fidelity at 1
        prop_assert!((t.fidelity(&s).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn measurement_distribution_is_complete(s in state(), q in 0..N, seed in any::<u64>()) {
        let total: f64 = s.marginal_probabilities(&[q]).unwrap().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        let p1 = s.probability_one(q).unwrap();
        let mut t = s.clone();
        let rec = t.measure_qubit(q, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let expected = if rec.outcome == 1 { p1 } else { 1.0 - p1 };
        prop_assert!((rec.probability - expected).abs() < 1e-12);
        prop_assert!(t.is_normalized());
        let after = t.probability_one(q).unwrap();
        prop_assert!((after - f64::from(rec.outcome)).abs() < 1e-12);
    }

    #[test]
    fn joint_outcomes_cover_all_strings(s in state()) {
        let dist = s.outcome_distribution(&[0, 2]).unwrap();
        prop_assert_eq!(dist.len(), 4);
        prop_assert!((dist.values().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_errors_have_weight_one(re in -1.0f64..1.0, im in -1.0f64..1.0, b in -1.0f64..1.0, e in 0..15usize) {
        let l = LogicalAmplitudes::new(C64::new(re, im), C64::new(b, 0.0));
        prop_assume!(l.is_ok());
        let ideal = encode(&l.unwrap()).unwrap();
        let error = QubitError::all_data_errors()[e];
        let mut s = ideal.clone();
        s.apply_pauli(error.qubit, error.kind).unwrap();
        let v = min_error_weight(&s, &ideal).unwrap();
        prop_assert_eq!(v.weight, Weight::One);
        prop_assert_eq!(v.best_correction, Some(error));
        prop_assert!((correctable_fraction(&s, &ideal).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn case_records_round_trip(
        s1 in 0u8..16,
        s2 in proptest::option::of(0u8..16),
        f in 0.0f64..1.0,
        c in proptest::option::of(0..15usize),
        pass in any::<bool>(),
    ) {
        let record = CaseRecord {
            case_id: "blk2.c4.cnot.d0.a0@after:XY".into(),
            syndrome_1: Syndrome::from_value(s1).unwrap(),
            syndrome_2: s2.map(|v| Syndrome::from_value(v).unwrap()),
            correction: Correction(c.map(|i| QubitError::all_data_errors()[i])),
            rounds_used: if s2.is_some() { 2 } else { 1 },
            weight: Weight::Many,
            best_correction: None,
            best_fidelity: f,
            correctable_fraction: 1.0 - f,
            pass,
        };
        let text = to_json(&record).unwrap();
        prop_assert_eq!(reformat_json(&text).unwrap(), text.clone());
        let back: CaseRecord = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(to_json(&back).unwrap(), text);
        prop_assert_eq!(back.syndrome_2, record.syndrome_2);
    }
}

#[test]
fn schedule_round_trips_through_text() {
    let s = build_schedule();
    let again = ftqec::network::Schedule::import(&s.export()).unwrap();
    assert_eq!(again, s);
}
