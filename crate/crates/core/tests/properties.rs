mod common;

use common::*;
use proptest::prelude::*;
use taufact_core::engine::multiplicative_partitions;
use taufact_core::signatures::{signature_is_atom, validate_witness};
use taufact_core::verify::instantiate_signature;
use taufact_core::*;

fn modulus() -> impl Strategy<Value = u64> {
    2u64..=13
}

fn odd_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7, 11, 13])
}

fn nonunit() -> impl Strategy<Value = i64> {
    prop_oneof![-3000i64..=-2, 2i64..=3000]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn oracle_matches_naive(x in nonunit(), n in modulus()) {
        let m = Modulus::new(n).unwrap();
        prop_assert_eq!(is_tau_atom_oracle(x, m).unwrap(), naive_is_atom(x, n));
    }

    #[test]
    fn witnesses_check_out(x in nonunit(), n in modulus()) {
        if let Some(w) = find_proper_tau_factorization(x, Modulus::new(n).unwrap()).unwrap() {
            prop_assert!(valid_tau_factorization(x, w.unit, &w.parts, n), "{}", w);
        }
    }

    #[test]
    fn enumeration_is_exactly_the_naive_set(x in nonunit(), n in modulus()) {
        let cfg = EnumConfig::default();
        let got: Vec<Vec<i64>> = enumerate_proper_tau_factorizations(x, Modulus::new(n).unwrap(), &cfg)
            .unwrap()
            .into_iter()
            .map(|f| f.parts)
            .collect();
        let mut want: Vec<Vec<i64>> = naive_signed_factorizations(x)
            .into_iter()
            .filter(|f| f.iter().all(|&a| congruent(a, f[0], n)))
            .map(|mut f| { f.sort_unstable(); f })
            .collect();
        want.sort();
        want.dedup();
        let mut got_sorted = got.clone();
        got_sorted.sort();
        prop_assert_eq!(got_sorted, want);
    }

    #[test]
    fn partition_count_matches_naive(x in 2u64..5000) {
        let got = multiplicative_partitions(x, &EnumConfig::default()).unwrap();
        prop_assert_eq!(got, naive_partitions(x));
    }

    #[test]
    fn signature_decides_like_the_oracle(x in 2i64..20_000, n in odd_prime()) {
        let table = ClassTable::cached(n).unwrap();
        let s = signature_of(x, &table).unwrap();
        prop_assert_eq!(signature_is_atom(&s).is_atom(), is_tau_atom_oracle(x, table.modulus()).unwrap());
    }

    #[test]
    fn instantiation_round_trips(x in 2i64..1_000_000, n in odd_prime()) {
        let table = ClassTable::cached(n).unwrap();
        let s = signature_of(x, &table).unwrap();
        let y = instantiate_signature(&s, &table).unwrap();
        prop_assert!(y <= x);
        prop_assert_eq!(signature_of(y, &table).unwrap(), s);
    }

    #[test]
    fn reducible_signatures_carry_valid_witnesses(
        q in 1u32..=6,
        zero in 0u32..=2,
        counts in prop::collection::vec(0u32..=3, 6),
    ) {
        let s = Signature::new(q, zero, counts[..q as usize].to_vec()).unwrap();
        match signature_is_atom(&s) {
            Verdict::Reducible(blocks) => prop_assert!(validate_witness(&s, &blocks)),
            Verdict::Unit => prop_assert_eq!(s.total(), 0),
            Verdict::Atom => prop_assert!(s.total() >= 1),
        }
    }

    #[test]
    fn certified_primes_are_atoms(x in 2u64..3000, n in modulus()) {
        if classify_tau_prime(x, Modulus::new(n).unwrap()) {
            prop_assert!(naive_is_atom(x as i64, n));
        }
    }

    #[test]
    fn factor_matches_trial_division(x in 2u64..10_000_000) {
        let f = factor(x as i64).unwrap();
        let flat: Vec<u64> = f.primes_with_multiplicity().collect();
        prop_assert_eq!(flat, trial_factor(x));
    }
}

#[test]
fn count_of_28_against_naive() {
    let (distinct, all) = count_signed(28);
    assert_eq!((distinct, all), (14, 16));
    let canonical = enumerate_signed_factorizations(28, None, &EnumConfig::default()).unwrap();
    assert_eq!(canonical.iter().filter(|f| f.is_proper()).count(), distinct);
    let cfg = EnumConfig {
        sign_convention: SignConvention::AllSignPatterns,
        ..EnumConfig::default()
    };
    let every = enumerate_signed_factorizations(28, None, &cfg).unwrap();
    assert_eq!(every.iter().filter(|f| f.is_proper()).count(), all);
}
