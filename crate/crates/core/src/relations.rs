//! Congruence relations and the `±`-classes they induce.
//!
//! `tau_n` is congruence modulo `n`. `mu_n` identifies `x` with `±x`, so each
//! residue pair `{r, n - r}` becomes one class. For an odd prime `n` the
//! nonzero classes form a cyclic group of order `q = (n - 1) / 2`; a
//! [`ClassTable`] fixes a generator `a` and labels the class of `a^i` by `i`,
//! so that multiplying representatives adds labels modulo `q`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::arith::{is_prime_u64, mul_mod};
use crate::error::{Error, Result};

/// A modulus `n >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadModulus(n));
        }
        Ok(Modulus(n))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn is_odd_prime(self) -> bool {
        self.0 > 2 && is_prime_u64(self.0)
    }

    /// Number of `mu_n` classes, `floor(n / 2) + 1` (which is `(n + 1) / 2` for odd `n`).
    pub fn class_count(self) -> u64 {
        self.0 / 2 + 1
    }

    /// `(n - 1) / 2` for odd prime `n`.
    pub fn unit_index_modulus(self) -> Option<u64> {
        self.is_odd_prime().then_some((self.0 - 1) / 2)
    }

    /// Least nonnegative residue of `x`.
    pub fn residue(self, x: i64) -> u64 {
        (x as i128).rem_euclid(self.0 as i128) as u64
    }

    /// Canonical `mu_n` representative of `x`: `min(r, n - r)` for `r = x mod n`.
    pub fn mu_residue(self, x: i64) -> u64 {
        let r = self.residue(x);
        r.min(self.0 - r)
    }

    pub(crate) fn mu_residue_u64(self, x: u64) -> u64 {
        let r = x % self.0;
        r.min(self.0 - r)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `x tau_n y` iff `n | x - y`.
pub fn tau_related(x: i64, y: i64, n: Modulus) -> bool {
    (x as i128 - y as i128).rem_euclid(n.0 as i128) == 0
}

/// `x mu_n y` iff `x ≡ y` or `x ≡ -y (mod n)`.
pub fn mu_related(x: i64, y: i64, n: Modulus) -> bool {
    n.mu_residue(x) == n.mu_residue(y)
}

/// Label of a `mu_n` class for odd prime `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum MuClassIndex {
    /// The class `[0]`: multiples of `n`.
    Zero,
    /// The class of `a^i`, `0 <= i < q`.
    Unit(u32),
}

impl fmt::Display for MuClassIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MuClassIndex::Zero => f.write_str("z"),
            MuClassIndex::Unit(i) => write!(f, "x{i}"),
        }
    }
}

/// Product of classes: `Zero` absorbs, unit labels add modulo `q`.
pub fn index_add_q(i: MuClassIndex, j: MuClassIndex, q: u32) -> MuClassIndex {
    match (i, j) {
        (MuClassIndex::Unit(a), MuClassIndex::Unit(b)) => MuClassIndex::Unit((a + b) % q),
        _ => MuClassIndex::Zero,
    }
}

/// Powers of `a` up to `a^q` and whether they cover `q` distinct nonzero classes.
fn power_classes(n: u64, a: u64) -> (bool, u64) {
    let q = (n - 1) / 2;
    let mut seen = vec![false; q as usize + 1];
    let mut distinct = true;
    let mut pw = 1u64;
    for _ in 0..q {
        pw = mul_mod(pw, a, n);
        let c = pw.min(n - pw) as usize;
        if c == 0 || seen[c] {
            distinct = false;
        } else {
            seen[c] = true;
        }
    }
    (distinct, pw)
}

/// Does `{[a], [a^2], ..., [a^q]}` hit `q` distinct nonzero classes with `a^q mu_n 1`?
///
/// Fails for `a ≡ ±1` and for any `a` whose image in `Z_n^* / {±1}` is not a
/// generator, e.g. `(7, 6)` and `(13, 3)`.
pub fn verify_mureps_claim(n: u64, a: u64) -> bool {
    if n < 3 || !is_prime_u64(n) || a <= 1 || a >= n {
        return false;
    }
    let (distinct, last) = power_classes(n, a);
    distinct && (last == 1 || last == n - 1)
}

/// Smallest `a` in `(1, n)` whose powers label every nonzero `mu_n` class.
pub fn find_mu_generator(n: u64) -> Result<u64> {
    if n < 3 || !is_prime_u64(n) {
        return Err(Error::BadModulus(n));
    }
    (2..n)
        .find(|&a| verify_mureps_claim(n, a))
        .ok_or(Error::NoGenerator(n))
}

/// The `mu_n` class structure for an odd prime `n`, indexed by powers of a base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassTable {
    n: u64,
    base: u64,
    q: u32,
    // residue -> unit index; slot 0 unused
    index_of_residue: Vec<u32>,
}

const MAX_TABLE_MODULUS: u64 = 1_000_000;

impl ClassTable {
    /// Builds the table with the base from [`find_mu_generator`].
    pub fn build(n: u64) -> Result<Self> {
        if !(3..=MAX_TABLE_MODULUS).contains(&n) || !is_prime_u64(n) {
            return Err(Error::BadModulus(n));
        }
        let base = find_mu_generator(n)?;
        let q = ((n - 1) / 2) as u32;
        let mut index_of_residue = vec![u32::MAX; n as usize];
        let mut pw = 1u64;
        for i in 0..q {
            let (r, s) = (pw as usize, (n - pw) as usize);
            debug_assert_eq!(index_of_residue[r], u32::MAX);
            index_of_residue[r] = i;
            index_of_residue[s] = i;
            pw = mul_mod(pw, base, n);
        }
        debug_assert!(index_of_residue[1..].iter().all(|&i| i < q));
        Ok(ClassTable {
            n,
            base,
            q,
            index_of_residue,
        })
    }

    /// Shared table for `n`, built on first use.
    pub fn cached(n: u64) -> Result<Arc<ClassTable>> {
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<ClassTable>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(t) = cache.lock().expect("class table cache poisoned").get(&n) {
            return Ok(Arc::clone(t));
        }
        let table = Arc::new(ClassTable::build(n)?);
        let mut guard = cache.lock().expect("class table cache poisoned");
        Ok(Arc::clone(guard.entry(n).or_insert(table)))
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn modulus(&self) -> Modulus {
        Modulus(self.n)
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    /// Unit-index modulus `(n - 1) / 2`.
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Class of `x`; `Zero` for multiples of `n`.
    pub fn class_index(&self, x: i64) -> Result<MuClassIndex> {
        if x == 0 {
            return Err(Error::ZeroInput);
        }
        Ok(self.index_of_u64(x.unsigned_abs()))
    }

    pub(crate) fn index_of_u64(&self, x: u64) -> MuClassIndex {
        match (x % self.n) as usize {
            0 => MuClassIndex::Zero,
            r => MuClassIndex::Unit(self.index_of_residue[r]),
        }
    }

    pub fn index_add(&self, i: MuClassIndex, j: MuClassIndex) -> MuClassIndex {
        index_add_q(i, j, self.q)
    }

    /// Residues of each class, `[0]` first and then unit indices `0..q`.
    pub fn classes(&self) -> Vec<Vec<u64>> {
        let mut out = vec![vec![0u64]];
        out.extend((0..self.q).map(|_| Vec::new()));
        for r in 1..self.n {
            out[1 + self.index_of_residue[r as usize] as usize].push(r);
        }
        out
    }

    /// Smallest residue in unit class `i`, i.e. the `mu_n` representative of `a^i`.
    pub fn representative(&self, i: u32) -> u64 {
        (1..self.n)
            .find(|&r| self.index_of_residue[r as usize] == i)
            .expect("every unit index has residues")
    }
}

#[derive(Serialize)]
struct ClassTableJson {
    n: u64,
    base: u64,
    q: u32,
    classes: Vec<Vec<u64>>,
}

impl ClassTable {
    /// `{n, base, q, classes}` with `classes[0] = [0]` and `classes[1 + i]` the
    /// residues of unit index `i`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&ClassTableJson {
            n: self.n,
            base: self.base,
            q: self.q,
            classes: self.classes(),
        })
        .expect("class table serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    #[test]
    fn modulus_bounds() {
        assert_eq!(Modulus::new(1), Err(Error::BadModulus(1)));
        assert_eq!(m(11).class_count(), 6);
        assert_eq!(m(11).unit_index_modulus(), Some(5));
        assert_eq!(m(4).class_count(), 3);
        assert_eq!(m(9).unit_index_modulus(), None);
        for n in (3u64..200).filter(|&n| is_prime_u64(n)) {
            assert_eq!(m(n).unit_index_modulus().unwrap(), m(n).class_count() - 1);
        }
    }

    #[test]
    fn class_count_matches_direct_partition() {
        for n in 2u64..60 {
            let mut reps: Vec<u64> = (0..n as i64).map(|r| m(n).mu_residue(r)).collect();
            reps.sort_unstable();
            reps.dedup();
            assert_eq!(reps.len() as u64, m(n).class_count(), "n = {n}");
        }
    }

    #[test]
    fn tau_examples() {
        assert!(tau_related(-7, -14, m(7)));
        assert!(tau_related(5, 5, m(9)));
        assert!(!tau_related(2, 49, m(2)));
        assert!(tau_related(i64::MAX, i64::MIN + 1, m(2)));
    }

    #[test]
    fn mu_examples() {
        assert!(mu_related(-2, 3, m(5)));
        assert!(!mu_related(2, 3, m(7)));
        for n in 2u64..30 {
            for k in -40i64..40 {
                assert!(mu_related(k, n as i64 - k, m(n)));
            }
        }
    }

    #[test]
    fn generators() {
        assert_eq!(find_mu_generator(5), Ok(2));
        assert_eq!(find_mu_generator(11), Ok(2));
        assert_eq!(find_mu_generator(13), Ok(2));
        assert_eq!(find_mu_generator(7), Ok(2));
        assert_eq!(find_mu_generator(3), Ok(2));
        assert_eq!(find_mu_generator(9), Err(Error::BadModulus(9)));
        assert_eq!(find_mu_generator(2), Err(Error::BadModulus(2)));
    }

    #[test]
    fn mureps_claim_audit() {
        assert!(verify_mureps_claim(11, 2));
        assert!(!verify_mureps_claim(7, 6));
        assert!(!verify_mureps_claim(13, 3));
        // 3^3 = 27 ≡ 1 (mod 13): only three classes appear.
        let powers: Vec<u64> = (1..=6).map(|e| m(13).mu_residue(3i64.pow(e))).collect();
        assert_eq!(powers, vec![3, 4, 1, 3, 4, 1]);
    }

    #[test]
    fn table_for_5() {
        let t = ClassTable::build(5).unwrap();
        assert_eq!(t.base(), 2);
        assert_eq!(t.q(), 2);
        assert_eq!(t.classes(), vec![vec![0], vec![1, 4], vec![2, 3]]);
    }

    #[test]
    fn table_for_7() {
        let t = ClassTable::build(7).unwrap();
        assert_eq!(t.classes(), vec![vec![0], vec![1, 6], vec![2, 5], vec![3, 4]]);
        assert_eq!(t.class_index(3), Ok(MuClassIndex::Unit(2)));
        assert_eq!(t.class_index(4), Ok(MuClassIndex::Unit(2)));
    }

    #[test]
    fn table_for_11() {
        let t = ClassTable::build(11).unwrap();
        assert_eq!(t.q(), 5);
        assert_eq!(t.class_index(5), Ok(MuClassIndex::Unit(4)));
        assert_eq!(t.class_index(37), Ok(MuClassIndex::Unit(2)));
        assert_eq!(t.class_index(11), Ok(MuClassIndex::Zero));
        assert_eq!(t.class_index(2), Ok(MuClassIndex::Unit(1)));
        assert_eq!(t.class_index(-2), Ok(MuClassIndex::Unit(1)));
        assert_eq!(t.class_index(0), Err(Error::ZeroInput));
        let json = t.to_json();
        assert_eq!(
            json,
            r#"{"n":11,"base":2,"q":5,"classes":[[0],[1,10],[2,9],[4,7],[3,8],[5,6]]}"#
        );
    }

    #[test]
    fn table_rejects_bad_moduli() {
        for n in [0, 1, 2, 4, 9, 15, 1_000_003] {
            assert_eq!(ClassTable::build(n), Err(Error::BadModulus(n)));
        }
    }

    #[test]
    fn index_addition() {
        let t = ClassTable::build(7).unwrap();
        use MuClassIndex::*;
        assert_eq!(t.index_add(Unit(1), Unit(2)), Unit(0));
        assert_eq!(t.index_add(Unit(2), Unit(2)), Unit(1));
        assert_eq!(t.index_add(Zero, Unit(2)), Zero);
        assert_eq!(t.index_add(Unit(1), Zero), Zero);
    }

    #[test]
    fn tables_for_small_primes() {
        for n in (3u64..200).filter(|&n| is_prime_u64(n)) {
            let t = ClassTable::build(n).unwrap();
            let classes = t.classes();
            assert_eq!(classes.len() as u64, n.div_ceil(2));
            // Each unit class is exactly a pair {r, n - r}.
            for (i, class) in classes.iter().enumerate().skip(1) {
                assert_eq!(class.len(), 2, "n = {n}, index {}", i - 1);
                assert_eq!(class[0] + class[1], n);
            }
            let last = crate::arith::mod_pow(t.base() as i64, t.q() as u64, n).unwrap();
            assert!(last == 1 || last == n - 1, "n = {n}");
            for r in 1..n as i64 {
                assert_eq!(t.class_index(r), t.class_index(n as i64 - r));
            }
        }
    }

    #[test]
    fn mu_relation_matches_class_index() {
        for n in (3u64..50).filter(|&n| is_prime_u64(n)) {
            let t = ClassTable::build(n).unwrap();
            for x in 1i64..200 {
                for y in 1i64..200 {
                    assert_eq!(
                        mu_related(x, y, m(n)),
                        t.class_index(x).unwrap() == t.class_index(y).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn cached_tables_are_shared() {
        let a = ClassTable::cached(13).unwrap();
        let b = ClassTable::cached(13).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert!(ClassTable::cached(12).is_err());
    }

    proptest! {
        #[test]
        fn relations_are_equivalences(x in -10_000i64..10_000, y in -10_000i64..10_000,
                                      z in -10_000i64..10_000, n in 2u64..60) {
            let n = m(n);
            for rel in [tau_related as fn(i64, i64, Modulus) -> bool, mu_related] {
                prop_assert!(rel(x, x, n));
                prop_assert_eq!(rel(x, y, n), rel(y, x, n));
                if rel(x, y, n) && rel(y, z, n) {
                    prop_assert!(rel(x, z, n));
                }
            }
        }

        #[test]
        fn class_index_is_multiplicative(x in 1i64..1_000_000, y in 1i64..1_000_000,
                                         ni in 0usize..8) {
            let n = [3u64, 5, 7, 11, 13, 17, 19, 23][ni];
            let t = ClassTable::cached(n).unwrap();
            let lhs = t.class_index(x * y).unwrap();
            let rhs = t.index_add(t.class_index(x).unwrap(), t.class_index(y).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
