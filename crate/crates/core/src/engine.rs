//! Brute-force ground truth for factorizations under `tau_n`.
//!
//! A `tau_n`-factorization of `x` is `x = λ a_1 ... a_k` with `λ = ±1`, every
//! `|a_i| >= 2`, and all `a_i` pairwise congruent mod `n`. Because `λ` soaks up
//! any global sign, signs of the parts can be chosen freely; a partition of
//! `|x|` can be signed into a factorization exactly when all of its parts lie
//! in one `mu_n` class. The atom oracle searches partitions under that test.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::arith::factor;
use crate::classifier::classify_tau_prime;
use crate::error::{Error, Result};
use crate::relations::Modulus;

pub const DEFAULT_PARTITION_CAP: usize = 10_000_000;
pub const MAX_PRIME_BOUND: u64 = 10_000_000;

/// `λ * parts`, parts sorted ascending, each of magnitude at least 2.
///
/// Ordered by parts first, then unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SignedFactorization {
    pub unit: i8,
    pub parts: Vec<i64>,
}

impl SignedFactorization {
    pub fn new(unit: i8, mut parts: Vec<i64>) -> Self {
        debug_assert!(unit == 1 || unit == -1);
        debug_assert!(parts.iter().all(|p| p.unsigned_abs() >= 2));
        parts.sort_unstable();
        SignedFactorization { unit, parts }
    }

    pub fn product(&self) -> i128 {
        self.parts
            .iter()
            .fold(self.unit as i128, |acc, &p| acc * p as i128)
    }

    pub fn is_proper(&self) -> bool {
        self.parts.len() >= 2
    }
}

impl Ord for SignedFactorization {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.parts, self.unit).cmp(&(&other.parts, other.unit))
    }
}

impl PartialOrd for SignedFactorization {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SignedFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.unit < 0 {
            f.write_str("-1 · ")?;
        }
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(" · ")?;
            }
            if *p < 0 {
                write!(f, "({p})")?;
            } else {
                write!(f, "{p}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignConvention {
    /// One entry per distinct unordered multiset of signed parts.
    #[default]
    CanonicalSigns,
    /// One entry per sign vector over the sorted parts; equal multisets repeat.
    AllSignPatterns,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumConfig {
    pub max_parts: Option<usize>,
    pub sign_convention: SignConvention,
    pub partition_cap: usize,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig {
            max_parts: None,
            sign_convention: SignConvention::CanonicalSigns,
            partition_cap: DEFAULT_PARTITION_CAP,
        }
    }
}

impl EnumConfig {
    fn validate(&self) -> Result<()> {
        match self.max_parts {
            Some(k) if k < 2 => Err(Error::InvalidArgument(format!(
                "max_parts must be at least 2, got {k}"
            ))),
            _ => Ok(()),
        }
    }
}

/// Every multiset of integers `>= 2` with product `m`, including `{m}`.
///
/// Parts are listed ascending and the partitions in lexicographic order, so
/// `28` gives `[2, 2, 7], [2, 14], [4, 7], [28]`.
pub fn multiplicative_partitions(m: u64, cfg: &EnumConfig) -> Result<Vec<Vec<u64>>> {
    cfg.validate()?;
    if m < 2 {
        return Err(Error::UnitInput(m as i64));
    }
    let divisors = factor(m as i64)?.divisors();
    let mut out = Vec::new();
    let mut current = Vec::new();
    let max_parts = cfg.max_parts.unwrap_or(usize::MAX);
    partitions_rec(
        m,
        2,
        &divisors,
        max_parts,
        cfg.partition_cap,
        &mut current,
        &mut out,
    )?;
    Ok(out)
}

fn partitions_rec(
    rest: u64,
    min: u64,
    divisors: &[u64],
    max_parts: usize,
    cap: usize,
    current: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
) -> Result<()> {
    if current.len() + 1 < max_parts {
        for &d in divisors.iter().filter(|&&d| d >= min) {
            if d.saturating_mul(d) > rest {
                break;
            }
            if rest.is_multiple_of(d) {
                current.push(d);
                partitions_rec(rest / d, d, divisors, max_parts, cap, current, out)?;
                current.pop();
            }
        }
    }
    if rest >= min && current.len() < max_parts {
        if out.len() >= cap {
            return Err(Error::TooManyPartitions { cap });
        }
        let mut p = current.clone();
        p.push(rest);
        out.push(p);
    }
    Ok(())
}

/// True iff all parts are pairwise congruent mod `n`.
pub fn is_tau_factorization(f: &SignedFactorization, n: Modulus) -> bool {
    match f.parts.split_first() {
        None => true,
        Some((first, rest)) => {
            let r = n.residue(*first);
            rest.iter().all(|&p| n.residue(p) == r)
        }
    }
}

/// Memoized search for partitions of a number into parts of one `mu_n` class.
///
/// `best(rest, min, c)` is the fewest parts `>= min`, all of class `c`, whose
/// product is `rest`.
struct AlignedSearch {
    n: Modulus,
    divisors: Vec<u64>,
    memo: HashMap<(u64, u64, u64), Option<u32>>,
}

impl AlignedSearch {
    fn new(m: u64, n: Modulus) -> Result<Self> {
        Ok(AlignedSearch {
            n,
            divisors: factor(m as i64)?.divisors(),
            memo: HashMap::new(),
        })
    }

    fn best(&mut self, rest: u64, min: u64, c: u64) -> Option<u32> {
        if let Some(&v) = self.memo.get(&(rest, min, c)) {
            return v;
        }
        let mut result = None;
        if rest >= min && self.n.mu_residue_u64(rest) == c {
            result = Some(1);
        }
        let start = self.divisors.partition_point(|&d| d < min);
        for idx in start..self.divisors.len() {
            let d = self.divisors[idx];
            if d.saturating_mul(d) > rest {
                break;
            }
            if !rest.is_multiple_of(d) || self.n.mu_residue_u64(d) != c {
                continue;
            }
            if let Some(k) = self.best(rest / d, d, c) {
                if result.is_none_or(|r| k + 1 < r) {
                    result = Some(k + 1);
                }
            }
        }
        self.memo.insert((rest, min, c), result);
        result
    }

    // Lexicographically first partition among those with `target` parts.
    fn reconstruct(&mut self, rest: u64, min: u64, c: u64, target: u32, out: &mut Vec<u64>) {
        if target == 1 {
            out.push(rest);
            return;
        }
        let start = self.divisors.partition_point(|&d| d < min);
        for idx in start..self.divisors.len() {
            let d = self.divisors[idx];
            if d.saturating_mul(d) > rest {
                break;
            }
            if !rest.is_multiple_of(d) || self.n.mu_residue_u64(d) != c {
                continue;
            }
            if self.best(rest / d, d, c) == Some(target - 1) {
                out.push(d);
                self.reconstruct(rest / d, d, c, target - 1, out);
                return;
            }
        }
        unreachable!("memo promised a partition of {rest} into {target} parts");
    }

    /// Fewest-parts proper partition of `m` into one class, lexicographically first.
    fn proper_witness(&mut self, m: u64) -> Option<Vec<u64>> {
        let mut best: Option<(u32, u64)> = None;
        for idx in 0..self.divisors.len() {
            let d = self.divisors[idx];
            if d < 2 {
                continue;
            }
            if d.saturating_mul(d) > m {
                break;
            }
            let c = self.n.mu_residue_u64(d);
            if let Some(k) = self.best(m / d, d, c) {
                if best.is_none_or(|(b, _)| k + 1 < b) {
                    best = Some((k + 1, d));
                }
            }
        }
        let (parts, d) = best?;
        let mut out = vec![d];
        let c = self.n.mu_residue_u64(d);
        self.reconstruct(m / d, d, c, parts - 1, &mut out);
        Some(out)
    }
}

/// Signs `parts` (all in one `mu_n` class) into a `tau_n`-factorization of `x`.
///
/// The largest part stays positive; parts congruent to its negative are negated
/// and `λ` restores the sign of the product.
pub fn align_signs(x: i64, parts: &[u64], n: Modulus) -> SignedFactorization {
    let reference = n.residue(*parts.last().expect("nonempty partition") as i64);
    let mut negated = 0;
    let signed: Vec<i64> = parts
        .iter()
        .map(|&p| {
            let p = p as i64;
            if n.residue(p) == reference {
                p
            } else {
                negated += 1;
                -p
            }
        })
        .collect();
    let sign = if x < 0 { -1 } else { 1 };
    let unit = if negated % 2 == 0 { sign } else { -sign };
    let f = SignedFactorization::new(unit, signed);
    debug_assert!(is_tau_factorization(&f, n));
    f
}

fn check_nonunit(x: i64) -> Result<u64> {
    if x == i64::MIN {
        return Err(Error::Overflow);
    }
    let m = x.unsigned_abs();
    if m < 2 {
        return Err(Error::UnitInput(x));
    }
    Ok(m)
}

/// A proper `tau_n`-factorization of `x` with as few parts as possible, if any.
pub fn find_proper_tau_factorization(x: i64, n: Modulus) -> Result<Option<SignedFactorization>> {
    let m = check_nonunit(x)?;
    let mut search = AlignedSearch::new(m, n)?;
    Ok(search.proper_witness(m).map(|parts| align_signs(x, &parts, n)))
}

pub fn exists_proper_tau_factorization(x: i64, n: Modulus) -> Result<bool> {
    Ok(find_proper_tau_factorization(x, n)?.is_some())
}

/// `x` is a `tau_n`-atom iff it has no proper `tau_n`-factorization.
pub fn is_tau_atom_oracle(x: i64, n: Modulus) -> Result<bool> {
    Ok(!exists_proper_tau_factorization(x, n)?)
}

/// All proper signed factorizations of `x`, keeping only `tau_n`-factorizations
/// when `filter` is set. Sorted, deterministic.
pub fn enumerate_signed_factorizations(
    x: i64,
    filter: Option<Modulus>,
    cfg: &EnumConfig,
) -> Result<Vec<SignedFactorization>> {
    let m = check_nonunit(x)?;
    let sign: i8 = if x < 0 { -1 } else { 1 };
    let mut out = Vec::new();
    for parts in multiplicative_partitions(m, cfg)? {
        if parts.len() < 2 {
            continue;
        }
        for signs in sign_patterns(&parts, cfg.sign_convention) {
            let signed: Vec<i64> = parts
                .iter()
                .zip(&signs)
                .map(|(&p, &neg)| if neg { -(p as i64) } else { p as i64 })
                .collect();
            let negs = signs.iter().filter(|&&s| s).count();
            let unit = if negs % 2 == 0 { sign } else { -sign };
            let f = SignedFactorization::new(unit, signed);
            if filter.is_none_or(|n| is_tau_factorization(&f, n)) {
                if out.len() >= cfg.partition_cap {
                    return Err(Error::TooManyPartitions {
                        cap: cfg.partition_cap,
                    });
                }
                out.push(f);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Every proper `tau_n`-factorization of `x` under the chosen sign convention.
pub fn enumerate_proper_tau_factorizations(
    x: i64,
    n: Modulus,
    cfg: &EnumConfig,
) -> Result<Vec<SignedFactorization>> {
    enumerate_signed_factorizations(x, Some(n), cfg)
}

// Negation flags for sorted `parts`.
fn sign_patterns(parts: &[u64], convention: SignConvention) -> Vec<Vec<bool>> {
    match convention {
        SignConvention::AllSignPatterns => (0u64..1 << parts.len())
            .map(|mask| (0..parts.len()).map(|i| mask >> i & 1 == 1).collect())
            .collect(),
        SignConvention::CanonicalSigns => {
            // For a run of e equal parts only the number negated matters.
            let mut runs: Vec<usize> = Vec::new();
            for (i, p) in parts.iter().enumerate() {
                if i > 0 && parts[i - 1] == *p {
                    *runs.last_mut().unwrap() += 1;
                } else {
                    runs.push(1);
                }
            }
            let mut patterns = vec![Vec::with_capacity(parts.len())];
            for len in runs {
                patterns = patterns
                    .into_iter()
                    .flat_map(|prefix| {
                        (0..=len).map(move |negs| {
                            let mut p = prefix.clone();
                            p.extend((0..len).map(|i| i < negs));
                            p
                        })
                    })
                    .collect();
            }
            patterns
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PrimeCheckVerdict {
    /// Certified by the prime characterization; no scan performed.
    ConfirmedPrime,
    /// `x | multiple = λ a_1 ... a_k` as a proper `tau_n`-factorization, yet `x ∤ a_i`.
    CounterexampleFound {
        multiple: u64,
        factorization: SignedFactorization,
    },
    NoCounterexampleUpTo { bound: u64 },
}

/// `100 x`, capped at `10^7`.
pub fn default_prime_bound(x: u64) -> u64 {
    x.saturating_mul(100).min(MAX_PRIME_BOUND)
}

/// Bounded falsifier for `tau_n`-primality.
///
/// Returns `ConfirmedPrime` straight away when the characterization certifies
/// `x`; otherwise scans multiples `x, 2x, ... <= bound`.
pub fn is_tau_prime_check(x: u64, n: Modulus, bound: u64) -> Result<PrimeCheckVerdict> {
    if x < 2 {
        return Err(Error::UnitInput(x as i64));
    }
    if classify_tau_prime(x, n) {
        return Ok(PrimeCheckVerdict::ConfirmedPrime);
    }
    scan_prime_counterexample(x, n, bound)
}

/// The scan of [`is_tau_prime_check`] without the certification shortcut.
///
/// Multiples are visited in increasing order and, for each, partitions in
/// lexicographic order, so the reported witness is deterministic.
pub fn scan_prime_counterexample(x: u64, n: Modulus, bound: u64) -> Result<PrimeCheckVerdict> {
    if x < 2 {
        return Err(Error::UnitInput(x as i64));
    }
    if bound < x {
        return Err(Error::InvalidArgument(format!(
            "bound {bound} is below x = {x}"
        )));
    }
    if bound > i64::MAX as u64 {
        return Err(Error::Overflow);
    }
    let mut multiple = x;
    while multiple <= bound {
        let mut search = CounterexampleSearch {
            n,
            x,
            divisors: factor(multiple as i64)?.divisors(),
            dead: HashMap::new(),
        };
        if let Some(parts) = search.first(multiple) {
            return Ok(PrimeCheckVerdict::CounterexampleFound {
                multiple,
                factorization: align_signs(multiple as i64, &parts, n),
            });
        }
        multiple = match multiple.checked_add(x) {
            Some(m) => m,
            None => break,
        };
    }
    Ok(PrimeCheckVerdict::NoCounterexampleUpTo { bound })
}

// Lexicographically first proper one-class partition with no part divisible by x.
struct CounterexampleSearch {
    n: Modulus,
    x: u64,
    divisors: Vec<u64>,
    dead: HashMap<(u64, u64, u64), ()>,
}

impl CounterexampleSearch {
    fn usable(&self, d: u64, c: u64) -> bool {
        !d.is_multiple_of(self.x) && self.n.mu_residue_u64(d) == c
    }

    fn rest(&mut self, rest: u64, min: u64, c: u64, out: &mut Vec<u64>) -> bool {
        if self.dead.contains_key(&(rest, min, c)) {
            return false;
        }
        let start = self.divisors.partition_point(|&d| d < min);
        for idx in start..self.divisors.len() {
            let d = self.divisors[idx];
            if d.saturating_mul(d) > rest {
                break;
            }
            if !rest.is_multiple_of(d) || !self.usable(d, c) {
                continue;
            }
            out.push(d);
            if self.rest(rest / d, d, c, out) {
                return true;
            }
            out.pop();
        }
        if rest >= min && self.usable(rest, c) {
            out.push(rest);
            return true;
        }
        self.dead.insert((rest, min, c), ());
        false
    }

    fn first(&mut self, m: u64) -> Option<Vec<u64>> {
        for idx in 0..self.divisors.len() {
            let d = self.divisors[idx];
            if d < 2 {
                continue;
            }
            if d.saturating_mul(d) > m {
                break;
            }
            let c = self.n.mu_residue_u64(d);
            if !self.usable(d, c) {
                continue;
            }
            let mut out = vec![d];
            if self.rest(m / d, d, c, &mut out) {
                return Some(out);
            }
        }
        None
    }
}
