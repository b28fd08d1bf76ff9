//! Factorization in the integers under congruence relations.
//!
//! For a modulus `n`, `x tau_n y` holds when `x ≡ y (mod n)`. A
//! `tau_n`-factorization of `x` writes `x = λ a_1 ... a_k` with `λ = ±1` and
//! every `a_i` pairwise related; atoms are the integers with no proper one.
//! This crate decides atomicity by brute force, by closed-form
//! classification for small moduli, and by search on `mu_n` class
//! signatures, and cross-checks the three.

pub mod arith;
pub mod classifier;
pub mod engine;
pub mod error;
pub mod relations;
pub mod signatures;
pub mod verify;

pub use arith::{factor, is_prime, mod_pow, multiplicity, PrimeFactorization};
pub use classifier::{
    check_generalization_conditions, classify_atom, classify_signature, classify_tau_prime,
    predict_atom_via_generalization, AtomRule, AtomVerdict, ConditionInterpretation,
    ConditionReport, GeneralizationInstance, GeneralizationPrediction, SUPPORTED_MODULI,
};
pub use engine::{
    enumerate_proper_tau_factorizations, enumerate_signed_factorizations,
    find_proper_tau_factorization, is_tau_atom_oracle, is_tau_factorization, is_tau_prime_check,
    multiplicative_partitions, EnumConfig, PrimeCheckVerdict, SignConvention, SignedFactorization,
};
pub use error::{Error, Result};
pub use relations::{mu_related, tau_related, ClassTable, Modulus, MuClassIndex};
pub use signatures::{
    generate_atom_table, signature_is_atom, signature_of, AtomTable, Block, Signature,
    SignatureSolver, TableEntry, TableSpec, TableStream, Verdict,
};
pub use verify::{
    instantiate_signature, run_theorem_check, score_interpretations, sweep_compare, CheckParams,
    DiscrepancyReport, Path, TheoremCheck, TheoremId,
};
