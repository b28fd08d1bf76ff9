//! Cross-checks between the oracle, the closed-form classifier and the
//! signature solver, plus one named check per theorem.
//!
//! Everything here is deterministic: sweeps are sharded across threads but
//! merged in input order, and reports carry no timing data.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::arith::{is_prime_u64, multiplicity};
use crate::classifier::{
    classify_atom, classify_tau_prime, predict_atom_via_generalization,
    AtomRule, ConditionInterpretation, SUPPORTED_MODULI,
};
use crate::engine::{
    enumerate_signed_factorizations, is_tau_atom_oracle, is_tau_prime_check,
    scan_prime_counterexample, EnumConfig, PrimeCheckVerdict, SignConvention,
};
use crate::error::{Error, Result};
use crate::relations::{find_mu_generator, verify_mureps_claim, ClassTable, Modulus};
use crate::signatures::{signature_of, Signature, SignatureSolver, Verdict};

/// Upper end of the default sweep range.
pub const DEFAULT_SWEEP_CAP: i64 = 100_000;
/// Largest prime tried when instantiating a signature.
pub const PRIME_SEARCH_CAP: u64 = 1_000_000;

const SHARD: i64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Path {
    Oracle,
    Theorem,
    Signature,
}

impl Path {
    pub const ALL: [Path; 3] = [Path::Oracle, Path::Theorem, Path::Signature];

    pub fn id(self) -> &'static str {
        match self {
            Path::Oracle => "oracle",
            Path::Theorem => "theorem",
            Path::Signature => "signature",
        }
    }
}

impl FromStr for Path {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Path::ALL
            .into_iter()
            .find(|p| p.id() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown path `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub x: i64,
    /// Atom verdict per path.
    pub verdicts: BTreeMap<Path, bool>,
    /// Deciding rule of the theorem path, when it ran.
    pub rule: Option<AtomRule>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscrepancyReport {
    pub n: u64,
    pub lo: i64,
    pub hi: i64,
    pub paths: Vec<Path>,
    pub checked: u64,
    /// Number of atoms found by each path.
    pub atoms: BTreeMap<Path, u64>,
    pub mismatches: Vec<Mismatch>,
    #[serde(skip)]
    verdicts: Vec<u8>,
}

impl DiscrepancyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    /// Atom verdict of `path` at `x`, if `x` is in range and the path ran.
    pub fn verdict(&self, x: i64, path: Path) -> Option<bool> {
        if x < self.lo || x > self.hi || !self.paths.contains(&path) {
            return None;
        }
        Some(self.verdicts[(x - self.lo) as usize] & path_bit(path) != 0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn write_text<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        let paths: Vec<&str> = self.paths.iter().map(|p| p.id()).collect();
        writeln!(
            out,
            "sweep n={} x in [{}, {}] paths={}",
            self.n,
            self.lo,
            self.hi,
            paths.join(",")
        )?;
        for (p, c) in &self.atoms {
            writeln!(out, "  {} atoms: {c}", p.id())?;
        }
        writeln!(out, "  mismatches: {}", self.mismatches.len())?;
        for m in &self.mismatches {
            let v: Vec<String> = m
                .verdicts
                .iter()
                .map(|(p, a)| format!("{}={}", p.id(), if *a { "atom" } else { "reducible" }))
                .collect();
            let rule = m.rule.map(|r| format!(" rule={r}")).unwrap_or_default();
            writeln!(out, "    x={} {}{rule}", m.x, v.join(" "))?;
        }
        Ok(())
    }
}

fn path_bit(p: Path) -> u8 {
    match p {
        Path::Oracle => 1,
        Path::Theorem => 2,
        Path::Signature => 4,
    }
}

struct Row {
    bits: u8,
    rule: Option<AtomRule>,
}

/// Decides every `x` in `[lo, hi]` on each requested path and lists disagreements.
pub fn sweep_compare(n: Modulus, lo: i64, hi: i64, paths: &[Path]) -> Result<DiscrepancyReport> {
    if lo < 2 || lo > hi {
        return Err(Error::InvalidArgument(format!("need 2 <= lo <= hi, got [{lo}, {hi}]")));
    }
    let paths: Vec<Path> = paths.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    if paths.is_empty() {
        return Err(Error::InvalidArgument("no paths requested".into()));
    }
    if paths.contains(&Path::Theorem) && !SUPPORTED_MODULI.contains(&n.get()) {
        return Err(Error::UnsupportedModulus(n.get()));
    }
    let table = if paths.contains(&Path::Signature) {
        if !n.is_odd_prime() {
            return Err(Error::UnsupportedModulus(n.get()));
        }
        Some(ClassTable::cached(n.get())?)
    } else {
        None
    };

    let shards: Vec<(i64, i64)> = (0..)
        .map(|s| lo + s * SHARD)
        .take_while(|&start| start <= hi)
        .map(|start| (start, (start + SHARD - 1).min(hi)))
        .collect();
    let rows: Vec<Vec<Row>> = shards
        .par_iter()
        .map(|&(a, b)| {
            let mut solver = table.as_ref().map(|t| SignatureSolver::new(t.q()));
            (a..=b)
                .map(|x| {
                    let mut row = Row { bits: 0, rule: None };
                    for &p in &paths {
                        let atom = match p {
                            Path::Oracle => is_tau_atom_oracle(x, n)?,
                            Path::Theorem => {
                                let v = classify_atom(x, n)?;
                                row.rule = Some(v.rule);
                                v.is_atom
                            }
                            Path::Signature => {
                                let t = table.as_ref().expect("table built");
                                let s = signature_of(x, t)?;
                                solver.as_mut().expect("solver built").decide(&s).is_atom()
                            }
                        };
                        if atom {
                            row.bits |= path_bit(p);
                        }
                    }
                    Ok(row)
                })
                .collect::<Result<Vec<Row>>>()
        })
        .collect::<Result<_>>()?;

    let all_bits = paths.iter().fold(0, |acc, &p| acc | path_bit(p));
    let mut atoms: BTreeMap<Path, u64> = paths.iter().map(|&p| (p, 0)).collect();
    let mut mismatches = Vec::new();
    let mut verdicts = Vec::with_capacity((hi - lo + 1) as usize);
    for (x, row) in (lo..=hi).zip(rows.into_iter().flatten()) {
        for &p in &paths {
            if row.bits & path_bit(p) != 0 {
                *atoms.get_mut(&p).expect("path counted") += 1;
            }
        }
        if row.bits != 0 && row.bits != all_bits {
            mismatches.push(Mismatch {
                x,
                verdicts: paths
                    .iter()
                    .map(|&p| (p, row.bits & path_bit(p) != 0))
                    .collect(),
                rule: row.rule,
            });
        }
        verdicts.push(row.bits);
    }
    Ok(DiscrepancyReport {
        n: n.get(),
        lo,
        hi,
        paths,
        checked: (hi - lo + 1) as u64,
        atoms,
        mismatches,
        verdicts,
    })
}

/// Smallest prime in each class: index `q` holds the zero class (the prime `n`).
fn class_primes(table: &ClassTable, needed: &[bool], cap: u64) -> Result<Vec<u64>> {
    let q = table.q() as usize;
    let mut found = vec![0u64; q + 1];
    found[q] = table.n();
    let mut missing = (0..q).filter(|&i| needed[i]).count();
    let mut p = 2u64;
    while missing > 0 && p <= cap {
        if p != table.n() && is_prime_u64(p) {
            if let crate::relations::MuClassIndex::Unit(i) = table.index_of_u64(p) {
                let i = i as usize;
                if needed[i] && found[i] == 0 {
                    found[i] = p;
                    missing -= 1;
                }
            }
        }
        p += 1;
    }
    if let Some(i) = (0..q).find(|&i| needed[i] && found[i] == 0) {
        return Err(Error::PrimeSearchExhausted {
            class: format!("x{i}"),
            cap,
        });
    }
    Ok(found)
}

/// Smallest positive integer with signature `s`: the smallest prime of each
/// required class, repeated for multiplicity.
pub fn instantiate_signature(s: &Signature, table: &ClassTable) -> Result<i64> {
    instantiate_signature_capped(s, table, PRIME_SEARCH_CAP)
}

pub fn instantiate_signature_capped(s: &Signature, table: &ClassTable, cap: u64) -> Result<i64> {
    if s.q() != table.q() {
        return Err(Error::InvalidArgument(format!(
            "signature has q = {}, table has q = {}",
            s.q(),
            table.q()
        )));
    }
    if s.total() == 0 {
        return Err(Error::UnitInput(1));
    }
    let needed: Vec<bool> = s.unit_counts().iter().map(|&c| c > 0).collect();
    let primes = class_primes(table, &needed, cap)?;
    let q = table.q() as usize;
    let mut x: i64 = 1;
    let factors = std::iter::once((primes[q], s.zero_count()))
        .chain(s.unit_counts().iter().enumerate().map(|(i, &c)| (primes[i], c)));
    for (p, c) in factors {
        for _ in 0..c {
            x = x.checked_mul(p as i64).ok_or(Error::Overflow)?;
        }
    }
    Ok(x)
}

/// Tally for one interpretation and one modulus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InterpretationScore {
    pub interpretation: ConditionInterpretation,
    pub n: u64,
    pub shape_matching: u64,
    pub conditions_hold: u64,
    /// Conditions hold, yet the signature is reducible.
    pub soundness_violations: Vec<String>,
    /// Conditions fail on an atom; allowed, the criterion is one-directional.
    pub permitted_misses: u64,
    /// Shapes with no `x_i` factor whose conditions fail only because every
    /// `z` divides zero.
    pub m_zero_unsatisfiable: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InterpretationScores {
    pub moduli: Vec<u64>,
    pub count_cap: u32,
    pub rows: Vec<InterpretationScore>,
    /// Reading with no soundness violations and the widest coverage.
    pub adjudicated: Option<ConditionInterpretation>,
}

impl InterpretationScores {
    pub fn violations(&self, interp: ConditionInterpretation) -> usize {
        self.rows
            .iter()
            .filter(|r| r.interpretation == interp)
            .map(|r| r.soundness_violations.len())
            .sum()
    }

    pub fn coverage(&self, interp: ConditionInterpretation) -> u64 {
        self.rows
            .iter()
            .filter(|r| r.interpretation == interp)
            .map(|r| r.conditions_hold)
            .sum()
    }
}

/// Every signature of the form `x0^k * x_i^m * x_j` with `k, m <= cap`, in order.
pub fn shape_signatures(n: u64, count_cap: u32) -> Result<Vec<Signature>> {
    let q = Modulus::new(n)?
        .unit_index_modulus()
        .filter(|_| is_prime_u64(n))
        .ok_or(Error::BadModulus(n))? as u32;
    let mut out = BTreeSet::new();
    for k in 0..=count_cap {
        for j in 1..q {
            for i in 1..q {
                for m in 0..=count_cap {
                    if i == j && m > 0 {
                        continue;
                    }
                    out.insert(Signature::from_counts(q, 0, &[(0, k), (i, m), (j, 1)])?);
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Checks each reading of the conditions against the signature solver.
pub fn score_interpretations(moduli: &[u64], count_cap: u32) -> Result<InterpretationScores> {
    let mut rows = Vec::new();
    for interp in ConditionInterpretation::ALL {
        for &n in moduli {
            let shapes = shape_signatures(n, count_cap)?;
            let mut solver = SignatureSolver::new(((n - 1) / 2) as u32);
            let mut row = InterpretationScore {
                interpretation: interp,
                n,
                shape_matching: 0,
                conditions_hold: 0,
                soundness_violations: Vec::new(),
                permitted_misses: 0,
                m_zero_unsatisfiable: 0,
            };
            for s in &shapes {
                let p = predict_atom_via_generalization(s, n, interp);
                if !p.applicable {
                    continue;
                }
                row.shape_matching += 1;
                let atom = solver.decide(s).is_atom();
                if p.predicted_atom {
                    row.conditions_hold += 1;
                    if !atom {
                        row.soundness_violations.push(s.to_string());
                    }
                } else {
                    if atom {
                        row.permitted_misses += 1;
                    }
                    if p.m_zero_shape && interp == ConditionInterpretation::Default {
                        row.m_zero_unsatisfiable += 1;
                    }
                }
            }
            rows.push(row);
        }
    }
    let mut scores = InterpretationScores {
        moduli: moduli.to_vec(),
        count_cap,
        rows,
        adjudicated: None,
    };
    let mut best: Option<(ConditionInterpretation, u64)> = None;
    for interp in ConditionInterpretation::ALL {
        if scores.violations(interp) == 0 {
            let cov = scores.coverage(interp);
            if best.is_none_or(|(_, b)| cov > b) {
                best = Some((interp, cov));
            }
        }
    }
    scores.adjudicated = best.map(|(i, _)| i);
    Ok(scores)
}

/// Names of the per-theorem checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    PrimeIsAtom,
    PrimeCharacterization,
    Tau3Atoms,
    MultiplicityOfN,
    DivisibilityPropagation,
    Tau4EqualsTau2,
    Tau6IsUnion,
    ClassRepresentatives,
    Tau5Atoms,
    Tau7Atoms,
    Tau11Atoms,
    GeneralConditions,
}

impl TheoremId {
    pub const ALL: [TheoremId; 12] = [
        TheoremId::PrimeIsAtom,
        TheoremId::PrimeCharacterization,
        TheoremId::Tau3Atoms,
        TheoremId::MultiplicityOfN,
        TheoremId::DivisibilityPropagation,
        TheoremId::Tau4EqualsTau2,
        TheoremId::Tau6IsUnion,
        TheoremId::ClassRepresentatives,
        TheoremId::Tau5Atoms,
        TheoremId::Tau7Atoms,
        TheoremId::Tau11Atoms,
        TheoremId::GeneralConditions,
    ];

    pub fn id(self) -> &'static str {
        match self {
            TheoremId::PrimeIsAtom => "Thm2.6",
            TheoremId::PrimeCharacterization => "Thm2.7",
            TheoremId::Tau3Atoms => "Thm3.1",
            TheoremId::MultiplicityOfN => "Thm3.3",
            TheoremId::DivisibilityPropagation => "Thm3.4",
            TheoremId::Tau4EqualsTau2 => "Thm3.5",
            TheoremId::Tau6IsUnion => "Thm3.6",
            TheoremId::ClassRepresentatives => "Thm4.2",
            TheoremId::Tau5Atoms => "Thm5.1",
            TheoremId::Tau7Atoms => "Thm6.1",
            TheoremId::Tau11Atoms => "Thm7.1",
            TheoremId::GeneralConditions => "Thm8.1",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            TheoremId::PrimeIsAtom => "every tau_n-prime is a tau_n-atom",
            TheoremId::PrimeCharacterization => {
                "tau_n-primes are squarefree divisors of n times at most one other prime"
            }
            TheoremId::Tau3Atoms => "tau_3-atoms are the primes and 3 times a product of primes other than 3",
            TheoremId::MultiplicityOfN => {
                "for prime n: n || x gives an atom, n^2 | x gives a non-atom"
            }
            TheoremId::DivisibilityPropagation => "n | m: every tau_n-atom is a tau_m-atom",
            TheoremId::Tau4EqualsTau2 => "tau_4-atoms are exactly the tau_2-atoms",
            TheoremId::Tau6IsUnion => "tau_6-atoms are the tau_2-atoms together with the tau_3-atoms",
            TheoremId::ClassRepresentatives => {
                "powers of a base label every mu_n class (claimed for any 1 < a < n)"
            }
            TheoremId::Tau5Atoms => "tau_5-atoms among units are x0^k * x1",
            TheoremId::Tau7Atoms => "tau_7-atoms among units are x0^k * x_i and x1 * x2",
            TheoremId::Tau11Atoms => "tau_11-atoms among units are the six listed families",
            TheoremId::GeneralConditions => "x0^k * x_i^m * x_j is an atom when three conditions hold",
        }
    }

    /// Default size parameter of the check.
    pub fn default_limit(self) -> u64 {
        match self {
            TheoremId::PrimeIsAtom => 2_000,
            TheoremId::PrimeCharacterization => 500,
            TheoremId::DivisibilityPropagation => 5_000,
            TheoremId::ClassRepresentatives => 50,
            TheoremId::GeneralConditions => 4,
            _ => 10_000,
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.id().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownTheorem(s.to_string()))
    }
}

impl Serialize for TheoremId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct CheckParams {
    /// Range bound, modulus bound or count cap depending on the check;
    /// `None` takes [`TheoremId::default_limit`].
    pub limit: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremCheck {
    pub id: TheoremId,
    pub statement: &'static str,
    pub limit: u64,
    pub passed: bool,
    pub cases: u64,
    /// Inputs that contradict the statement.
    pub witnesses: Vec<String>,
    /// Expected discrepancies between the stated text and computation.
    pub errata: Vec<String>,
    pub notes: Vec<String>,
}

impl TheoremCheck {
    fn new(id: TheoremId, limit: u64) -> Self {
        TheoremCheck {
            id,
            statement: id.statement(),
            limit,
            passed: true,
            cases: 0,
            witnesses: Vec::new(),
            errata: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn fail(&mut self, witness: String) {
        self.passed = false;
        self.witnesses.push(witness);
    }

    fn finish(mut self) -> Self {
        self.passed &= self.witnesses.is_empty();
        self
    }
}

fn modulus(n: u64) -> Modulus {
    Modulus::new(n).expect("fixed modulus")
}

fn oracle_atoms(n: u64, hi: i64) -> Result<Vec<bool>> {
    let n = modulus(n);
    (2..=hi)
        .into_par_iter()
        .map(|x| is_tau_atom_oracle(x, n))
        .collect()
}

pub fn run_theorem_check(id: TheoremId, params: CheckParams) -> Result<TheoremCheck> {
    let limit = params.limit.unwrap_or_else(|| id.default_limit());
    let mut check = TheoremCheck::new(id, limit);
    let hi = i64::try_from(limit).map_err(|_| Error::Overflow)?;
    match id {
        TheoremId::PrimeIsAtom => {
            for n in 2..=11 {
                let atoms = oracle_atoms(n, hi)?;
                for x in 2..=hi {
                    let v = is_tau_prime_check(x as u64, modulus(n), x as u64)?;
                    if v == PrimeCheckVerdict::ConfirmedPrime {
                        check.cases += 1;
                        if !atoms[(x - 2) as usize] {
                            check.fail(format!("x={x} n={n}: prime but not an atom"));
                        }
                    }
                }
            }
        }
        TheoremId::PrimeCharacterization => {
            for n in 2..=11u64 {
                let found: Vec<(i64, PrimeCheckVerdict)> = (2..=hi)
                    .into_par_iter()
                    .map(|x| {
                        let x = x as u64;
                        scan_prime_counterexample(x, modulus(n), 100 * x)
                            .map(|v| (x as i64, v))
                    })
                    .collect::<Result<_>>()?;
                for (x, v) in found {
                    check.cases += 1;
                    let certified = classify_tau_prime(x as u64, modulus(n));
                    match (certified, &v) {
                        (true, PrimeCheckVerdict::CounterexampleFound { multiple, factorization }) => {
                            check.fail(format!(
                                "x={x} n={n}: certified prime, but {multiple} = {factorization}"
                            ));
                        }
                        (false, PrimeCheckVerdict::NoCounterexampleUpTo { bound }) => {
                            check.fail(format!(
                                "x={x} n={n}: not certified, no counterexample up to {bound}"
                            ));
                        }
                        _ => {}
                    }
                }
            }
            if let PrimeCheckVerdict::CounterexampleFound { multiple, factorization } =
                is_tau_prime_check(98, modulus(2), 500)?
            {
                check
                    .notes
                    .push(format!("98 under tau_2: {multiple} = {factorization}"));
            }
        }
        TheoremId::Tau3Atoms => {
            let atoms = oracle_atoms(3, hi)?;
            for x in 2..=hi {
                check.cases += 1;
                let expected = is_prime_u64(x as u64) || multiplicity(x, 3)? == 1;
                if atoms[(x - 2) as usize] != expected {
                    check.fail(format!("x={x}: oracle says atom={}", !expected));
                }
            }
            let proper = |c| {
                let cfg = EnumConfig {
                    sign_convention: c,
                    ..EnumConfig::default()
                };
                enumerate_signed_factorizations(28, None, &cfg)
                    .map(|v| v.into_iter().filter(|f| f.is_proper()).count())
            };
            let canonical = proper(SignConvention::CanonicalSigns)?;
            let patterns = proper(SignConvention::AllSignPatterns)?;
            check.errata.push(format!(
                "proper signed factorizations of 28: computed {canonical} distinct, \
                 {patterns} counting every sign pattern; stated 13"
            ));
        }
        TheoremId::MultiplicityOfN => {
            for n in [3u64, 5, 7, 11, 13] {
                let atoms = oracle_atoms(n, hi)?;
                for x in 2..=hi {
                    let e = multiplicity(x, n as i64)?;
                    if e == 0 {
                        continue;
                    }
                    check.cases += 1;
                    let atom = atoms[(x - 2) as usize];
                    if (e == 1) != atom {
                        check.fail(format!("x={x} n={n}: multiplicity {e}, atom={atom}"));
                    }
                }
            }
        }
        TheoremId::DivisibilityPropagation => {
            for (n, m) in [(2u64, 4u64), (2, 6), (3, 6), (3, 9), (5, 10)] {
                let small = oracle_atoms(n, hi)?;
                let large = oracle_atoms(m, hi)?;
                for x in 2..=hi {
                    let i = (x - 2) as usize;
                    if small[i] {
                        check.cases += 1;
                        if !large[i] {
                            check.fail(format!("x={x}: tau_{n}-atom but not a tau_{m}-atom"));
                        }
                    }
                }
            }
        }
        TheoremId::Tau4EqualsTau2 => {
            let a2 = oracle_atoms(2, hi)?;
            let a4 = oracle_atoms(4, hi)?;
            for x in 2..=hi {
                check.cases += 1;
                let i = (x - 2) as usize;
                if a2[i] != a4[i] {
                    check.fail(format!("x={x}: tau_2 atom={} tau_4 atom={}", a2[i], a4[i]));
                }
            }
        }
        TheoremId::Tau6IsUnion => {
            let a2 = oracle_atoms(2, hi)?;
            let a3 = oracle_atoms(3, hi)?;
            let a6 = oracle_atoms(6, hi)?;
            for x in 2..=hi {
                check.cases += 1;
                let i = (x - 2) as usize;
                if a6[i] != (a2[i] || a3[i]) {
                    check.fail(format!(
                        "x={x}: tau_6 atom={} tau_2 atom={} tau_3 atom={}",
                        a6[i], a2[i], a3[i]
                    ));
                }
            }
        }
        TheoremId::ClassRepresentatives => {
            let mut refuted = Vec::new();
            for n in (3..=limit).filter(|&n| is_prime_u64(n)) {
                let base = find_mu_generator(n)?;
                check.cases += 1;
                if !verify_mureps_claim(n, base) {
                    check.fail(format!("n={n}: chosen base {base} does not label every class"));
                }
                refuted.extend((2..n).filter(|&a| !verify_mureps_claim(n, a)).map(|a| (n, a)));
            }
            if refuted.is_empty() {
                check.fail(format!("expected some (n, a) with n <= {limit} to refute the any-a claim"));
            } else {
                let shown: Vec<String> = refuted
                    .iter()
                    .take(12)
                    .map(|(n, a)| format!("({n},{a})"))
                    .collect();
                check.errata.push(format!(
                    "any-a claim fails for {} pairs (n, a) with n <= {limit}, e.g. {}",
                    refuted.len(),
                    shown.join(" ")
                ));
            }
        }
        TheoremId::Tau5Atoms | TheoremId::Tau7Atoms | TheoremId::Tau11Atoms => {
            let n = match id {
                TheoremId::Tau5Atoms => 5,
                TheoremId::Tau7Atoms => 7,
                _ => 11,
            };
            let report = sweep_compare(
                modulus(n),
                2,
                hi,
                &[Path::Oracle, Path::Theorem, Path::Signature],
            )?;
            check.cases = report.checked;
            for m in &report.mismatches {
                let rule = m.rule.map(|r| r.to_string()).unwrap_or_default();
                check.fail(format!("x={} {:?} rule={rule}", m.x, m.verdicts));
            }
            if n == 11 {
                let table = crate::signatures::generate_atom_table(11, 4, &[0])?;
                check
                    .notes
                    .push(format!("unit-class table at 4 per class has {} entries", table.len()));
            }
        }
        TheoremId::GeneralConditions => {
            let cap = u32::try_from(limit).map_err(|_| Error::Overflow)?;
            let scores = score_interpretations(&[5, 7, 11], cap)?;
            check.cases = scores.rows.iter().map(|r| r.shape_matching).sum();
            match scores.adjudicated {
                Some(interp) => check.notes.push(format!(
                    "adjudicated reading: {} ({} condition-passing shapes)",
                    interp.id(),
                    scores.coverage(interp)
                )),
                None => check.fail("every reading has soundness violations".into()),
            }
            for interp in ConditionInterpretation::ALL {
                for r in scores.rows.iter().filter(|r| r.interpretation == interp) {
                    for s in &r.soundness_violations {
                        check.notes.push(format!("{} reading, n={}: {s} is reducible", interp.id(), r.n));
                    }
                }
            }
            let unsat: u64 = scores.rows.iter().map(|r| r.m_zero_unsatisfiable).sum();
            if unsat > 0 {
                check.notes.push(format!(
                    "default reading: {unsat} shapes with no x_i factor fail the divisor condition for every i"
                ));
            }
        }
    }
    Ok(check.finish())
}

/// Runs every check with default parameters.
pub fn run_all_checks() -> Result<Vec<TheoremCheck>> {
    TheoremId::ALL
        .into_iter()
        .map(|id| run_theorem_check(id, CheckParams::default()))
        .collect()
}

pub fn write_checks_text<W: Write>(out: &mut W, checks: &[TheoremCheck]) -> std::io::Result<()> {
    for c in checks {
        writeln!(
            out,
            "{} {:<6} limit={} cases={}  {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.id.id(),
            c.limit,
            c.cases,
            c.statement
        )?;
        for w in &c.witnesses {
            writeln!(out, "    witness: {w}")?;
        }
        for e in &c.errata {
            writeln!(out, "    erratum: {e}")?;
        }
        for n in &c.notes {
            writeln!(out, "    note: {n}")?;
        }
    }
    Ok(())
}

/// Outcome of a signature decision checked against the oracle on an instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceCheck {
    pub signature: String,
    pub x: i64,
    pub signature_atom: bool,
    pub oracle_atom: bool,
}

/// Instantiates `s` and decides it both ways.
pub fn check_instance(s: &Signature, table: &ClassTable) -> Result<InstanceCheck> {
    let x = instantiate_signature(s, table)?;
    let verdict = SignatureSolver::new(s.q()).decide(s);
    Ok(InstanceCheck {
        signature: s.to_string(),
        x,
        signature_atom: matches!(verdict, Verdict::Atom),
        oracle_atom: is_tau_atom_oracle(x, table.modulus())?,
    })
}
