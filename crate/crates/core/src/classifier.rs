//! Closed-form classification of `tau_n`-primes and `tau_n`-atoms.
//!
//! Atoms are classified for `n ∈ {2, 3, 4, 5, 6, 7, 11}` by matching the prime
//! signature against the known family lists; every verdict names the family
//! (or the reducibility argument) that decided it. The three-condition
//! criterion for general odd prime `n` is exposed separately, as a checker and
//! a one-directional predictor.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::arith::{factor, PrimeFactorization};
use crate::error::{Error, Result};
use crate::relations::{ClassTable, Modulus};
use crate::signatures::{signature_of, Signature};

/// Moduli with a complete closed-form atom classification.
pub const SUPPORTED_MODULI: [u64; 7] = [2, 3, 4, 5, 6, 7, 11];

/// `x` is a `tau_n`-prime iff it is a squarefree product of primes dividing `n`
/// times at most one prime (to the first power) not dividing `n`.
pub fn classify_tau_prime(x: u64, n: Modulus) -> bool {
    if x < 2 || x > i64::MAX as u64 {
        return false;
    }
    let f = factor(x as i64).expect("nonzero");
    let mut outside = 0;
    for &(p, e) in f.factors() {
        if n.get().is_multiple_of(p) {
            if e > 1 {
                return false;
            }
        } else {
            outside += e;
        }
    }
    outside <= 1
}

/// The argument that decided an atom verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtomRule {
    UsualPrime,
    /// `n = 2`: exactly one factor of 2.
    Tau2Form,
    /// `n = 2`: 4 divides `x`.
    Tau2EvenPower,
    /// `n = 2`: odd composite.
    Tau2OddComposite,
    /// Prime `n` divides `x` exactly once.
    MultiplicityOne,
    /// `n^2` divides `x`.
    MultiplicityAtLeastTwo,
    /// `n = 3`: composite coprime to 3, all factors in one class.
    Tau3Coprime,
    Tau4AsTau2Atom,
    Tau4AsTau2Reducible,
    Tau6AsTau2Atom,
    Tau6AsTau3Atom,
    Tau6Reducible,
    Tau5X0kX1,
    Tau5Reducible,
    Tau7X0kXi,
    Tau7X1X2,
    Tau7Reducible,
    Tau11X0kXi,
    Tau11XiXj,
    Tau11X0kXiXj,
    Tau11XiXiXj,
    Tau11X0kXiXiXj,
    Tau11XiCubedX2i,
    Tau11Reducible,
}

impl AtomRule {
    pub const ALL: [AtomRule; 24] = [
        AtomRule::UsualPrime,
        AtomRule::Tau2Form,
        AtomRule::Tau2EvenPower,
        AtomRule::Tau2OddComposite,
        AtomRule::MultiplicityOne,
        AtomRule::MultiplicityAtLeastTwo,
        AtomRule::Tau3Coprime,
        AtomRule::Tau4AsTau2Atom,
        AtomRule::Tau4AsTau2Reducible,
        AtomRule::Tau6AsTau2Atom,
        AtomRule::Tau6AsTau3Atom,
        AtomRule::Tau6Reducible,
        AtomRule::Tau5X0kX1,
        AtomRule::Tau5Reducible,
        AtomRule::Tau7X0kXi,
        AtomRule::Tau7X1X2,
        AtomRule::Tau7Reducible,
        AtomRule::Tau11X0kXi,
        AtomRule::Tau11XiXj,
        AtomRule::Tau11X0kXiXj,
        AtomRule::Tau11XiXiXj,
        AtomRule::Tau11X0kXiXiXj,
        AtomRule::Tau11XiCubedX2i,
        AtomRule::Tau11Reducible,
    ];

    pub fn id(self) -> &'static str {
        match self {
            AtomRule::UsualPrime => "usual-prime",
            AtomRule::Tau2Form => "tau2-form",
            AtomRule::Tau2EvenPower => "tau2-mult-ge2",
            AtomRule::Tau2OddComposite => "tau2-odd-composite",
            AtomRule::MultiplicityOne => "Thm3.3-mult1",
            AtomRule::MultiplicityAtLeastTwo => "Thm3.3-mult-ge2",
            AtomRule::Tau3Coprime => "Thm3.1-coprime",
            AtomRule::Tau4AsTau2Atom => "Thm3.5-tau2-atom",
            AtomRule::Tau4AsTau2Reducible => "Thm3.5-tau2-reducible",
            AtomRule::Tau6AsTau2Atom => "Thm3.6-tau2-atom",
            AtomRule::Tau6AsTau3Atom => "Thm3.6-tau3-atom",
            AtomRule::Tau6Reducible => "Thm3.6-reducible",
            AtomRule::Tau5X0kX1 => "Thm5.1-x0k-x1",
            AtomRule::Tau5Reducible => "Thm5.1-reducible",
            AtomRule::Tau7X0kXi => "Thm6.1-x0k-xi",
            AtomRule::Tau7X1X2 => "Thm6.1-x1-x2",
            AtomRule::Tau7Reducible => "Thm6.1-reducible",
            AtomRule::Tau11X0kXi => "Thm7.1-x0k-xi",
            AtomRule::Tau11XiXj => "Thm7.1-xi-xj",
            AtomRule::Tau11X0kXiXj => "Thm7.1-x0k-xi-xj",
            AtomRule::Tau11XiXiXj => "Thm7.1-xi2-xj",
            AtomRule::Tau11X0kXiXiXj => "Thm7.1-x0k-xi2-xj",
            AtomRule::Tau11XiCubedX2i => "Thm7.1-xi3-x2i",
            AtomRule::Tau11Reducible => "Thm7.1-reducible",
        }
    }
}

impl fmt::Display for AtomRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl Serialize for AtomRule {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AtomVerdict {
    pub is_atom: bool,
    pub rule: AtomRule,
}

impl AtomVerdict {
    fn atom(rule: AtomRule) -> Self {
        AtomVerdict { is_atom: true, rule }
    }

    fn reducible(rule: AtomRule) -> Self {
        AtomVerdict {
            is_atom: false,
            rule,
        }
    }
}

/// Atom verdict from the closed-form classification; `n` must be in [`SUPPORTED_MODULI`].
pub fn classify_atom(x: i64, n: Modulus) -> Result<AtomVerdict> {
    if !SUPPORTED_MODULI.contains(&n.get()) {
        return Err(Error::UnsupportedModulus(n.get()));
    }
    let f = factor(x)?;
    if f.magnitude() < 2 {
        return Err(Error::UnitInput(x));
    }
    Ok(classify_factored(&f, n.get()))
}

fn classify_factored(f: &PrimeFactorization, n: u64) -> AtomVerdict {
    if f.omega_total() == 1 {
        return AtomVerdict::atom(AtomRule::UsualPrime);
    }
    match n {
        2 => match f.exponent_of(2) {
            1 => AtomVerdict::atom(AtomRule::Tau2Form),
            0 => AtomVerdict::reducible(AtomRule::Tau2OddComposite),
            _ => AtomVerdict::reducible(AtomRule::Tau2EvenPower),
        },
        3 => match f.exponent_of(3) {
            1 => AtomVerdict::atom(AtomRule::MultiplicityOne),
            0 => AtomVerdict::reducible(AtomRule::Tau3Coprime),
            _ => AtomVerdict::reducible(AtomRule::MultiplicityAtLeastTwo),
        },
        4 => {
            if classify_factored(f, 2).is_atom {
                AtomVerdict::atom(AtomRule::Tau4AsTau2Atom)
            } else {
                AtomVerdict::reducible(AtomRule::Tau4AsTau2Reducible)
            }
        }
        6 => {
            if classify_factored(f, 2).is_atom {
                AtomVerdict::atom(AtomRule::Tau6AsTau2Atom)
            } else if classify_factored(f, 3).is_atom {
                AtomVerdict::atom(AtomRule::Tau6AsTau3Atom)
            } else {
                AtomVerdict::reducible(AtomRule::Tau6Reducible)
            }
        }
        5 | 7 | 11 => match f.exponent_of(n) {
            0 => {
                let table = ClassTable::cached(n).expect("odd prime");
                let s = signature_of(f.value(), &table).expect("nonunit");
                classify_unit_signature(&s, n)
            }
            1 => AtomVerdict::atom(AtomRule::MultiplicityOne),
            _ => AtomVerdict::reducible(AtomRule::MultiplicityAtLeastTwo),
        },
        _ => unreachable!("modulus support checked by caller"),
    }
}

/// Atom verdict for a signature under `n ∈ {5, 7, 11}`, by family match.
pub fn classify_signature(s: &Signature, n: u64) -> Result<AtomVerdict> {
    if !matches!(n, 5 | 7 | 11) {
        return Err(Error::UnsupportedModulus(n));
    }
    if s.q() as u64 != (n - 1) / 2 {
        return Err(Error::InvalidArgument(format!(
            "signature has q = {}, modulus {n} needs {}",
            s.q(),
            (n - 1) / 2
        )));
    }
    match (s.zero_count(), s.total()) {
        (_, 0) => Err(Error::UnitInput(1)),
        (_, 1) => Ok(AtomVerdict::atom(AtomRule::UsualPrime)),
        (0, _) => Ok(classify_unit_signature(s, n)),
        (1, _) => Ok(AtomVerdict::atom(AtomRule::MultiplicityOne)),
        _ => Ok(AtomVerdict::reducible(AtomRule::MultiplicityAtLeastTwo)),
    }
}

/// Family match for a signature with no zero-class factor, `n ∈ {5, 7, 11}`.
fn classify_unit_signature(s: &Signature, n: u64) -> AtomVerdict {
    debug_assert_eq!(s.zero_count(), 0);
    let x0 = s.count(0);
    // (index, count) for the nonzero indices present
    let classes: Vec<(u32, u32)> = (1..s.q())
        .map(|i| (i, s.count(i)))
        .filter(|&(_, c)| c > 0)
        .collect();
    let singles: u32 = classes.iter().map(|&(_, c)| c).sum();
    match n {
        5 => {
            if singles == 1 {
                AtomVerdict::atom(AtomRule::Tau5X0kX1)
            } else {
                AtomVerdict::reducible(AtomRule::Tau5Reducible)
            }
        }
        7 => {
            if singles == 1 {
                AtomVerdict::atom(AtomRule::Tau7X0kXi)
            } else if x0 == 0 && s.count(1) == 1 && s.count(2) == 1 {
                AtomVerdict::atom(AtomRule::Tau7X1X2)
            } else {
                AtomVerdict::reducible(AtomRule::Tau7Reducible)
            }
        }
        11 => classify_tau11(x0, &classes),
        _ => unreachable!(),
    }
}

fn classify_tau11(x0: u32, classes: &[(u32, u32)]) -> AtomVerdict {
    const Q: u32 = 5;
    let total: u32 = classes.iter().map(|&(_, c)| c).sum();
    if total == 1 {
        return AtomVerdict::atom(AtomRule::Tau11X0kXi);
    }
    if let [(a, ca), (b, cb)] = *classes {
        match (ca, cb) {
            (1, 1) if x0 == 0 => return AtomVerdict::atom(AtomRule::Tau11XiXj),
            (1, 1) if (a + b) % Q != 0 => return AtomVerdict::atom(AtomRule::Tau11X0kXiXj),
            (2, 1) | (1, 2) | (3, 1) | (1, 3) => {
                let (i, ci, j) = if cb == 1 { (a, ca, b) } else { (b, cb, a) };
                let two_i = 2 * i % Q;
                if ci == 2 {
                    if x0 == 0 && two_i != j {
                        return AtomVerdict::atom(AtomRule::Tau11XiXiXj);
                    }
                    if x0 > 0 && two_i != j && !(two_i + j).is_multiple_of(Q) {
                        return AtomVerdict::atom(AtomRule::Tau11X0kXiXiXj);
                    }
                } else if x0 == 0 && j == two_i {
                    return AtomVerdict::atom(AtomRule::Tau11XiCubedX2i);
                }
            }
            _ => {}
        }
    }
    AtomVerdict::reducible(AtomRule::Tau11Reducible)
}

/// Quantifier ranges for the three conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionInterpretation {
    /// (1) over every `z >= 1` dividing `m` (all `z` when `m = 0`);
    /// (3) over `1 <= c < m - 1`.
    Default,
    /// (1) over divisors `1 <= z <= m` (vacuous when `m = 0`);
    /// (3) over `0 <= c < m - 1`.
    Alternative,
}

impl ConditionInterpretation {
    pub const ALL: [ConditionInterpretation; 2] = [
        ConditionInterpretation::Default,
        ConditionInterpretation::Alternative,
    ];

    pub fn id(self) -> &'static str {
        match self {
            ConditionInterpretation::Default => "default",
            ConditionInterpretation::Alternative => "alternative",
        }
    }
}

/// `y = x0^k * x_i^m * x_j` for odd prime `n`, `0 < i, j < q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GeneralizationInstance {
    pub n: u64,
    pub q: u32,
    pub i: u32,
    pub j: u32,
    pub m: u32,
    pub k: u32,
}

impl GeneralizationInstance {
    pub fn new(n: u64, i: u32, j: u32, m: u32, k: u32) -> Result<Self> {
        let modulus = Modulus::new(n)?;
        let q = modulus.unit_index_modulus().ok_or(Error::BadModulus(n))? as u32;
        if i == 0 || j == 0 || i >= q || j >= q {
            return Err(Error::InvalidArgument(format!(
                "need 0 < i, j < {q}; got i = {i}, j = {j}"
            )));
        }
        Ok(GeneralizationInstance { n, q, i, j, m, k })
    }

    pub fn signature(&self) -> Signature {
        Signature::from_counts(self.q, 0, &[(0, self.k), (self.i, self.m), (self.j, 1)])
            .expect("indices in range")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub holds: bool,
    pub divisor_condition: bool,
    pub zero_sum_condition: bool,
    pub partial_sum_condition: bool,
}

pub fn check_generalization_conditions(
    g: &GeneralizationInstance,
    interpretation: ConditionInterpretation,
) -> ConditionReport {
    let q = g.q as u64;
    let (i, j, m) = (g.i as u64, g.j as u64, g.m as u64);
    let divisor_condition = if m == 0 {
        match interpretation {
            // every z divides 0; z * i mod q repeats with period q
            ConditionInterpretation::Default => (1..=q).all(|z| z * i % q != j),
            ConditionInterpretation::Alternative => true,
        }
    } else {
        (1..=m).filter(|z| m % z == 0).all(|z| z * i % q != j)
    };
    let zero_sum_condition = (m * i + j) % q != 0 || g.k == 0;
    let c_start = match interpretation {
        ConditionInterpretation::Default => 1,
        ConditionInterpretation::Alternative => 0,
    };
    let partial_sum_condition = (c_start..m.saturating_sub(1)).all(|c| (c * i + j) % q != 0);
    ConditionReport {
        holds: divisor_condition && zero_sum_condition && partial_sum_condition,
        divisor_condition,
        zero_sum_condition,
        partial_sum_condition,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneralizationPrediction {
    pub applicable: bool,
    /// `false` means "no prediction", not "reducible".
    pub predicted_atom: bool,
    /// The signature has no `x_i` factors (`m = 0`), so `i` is unconstrained.
    pub m_zero_shape: bool,
    /// Instances tried, in order.
    pub instances: Vec<GeneralizationInstance>,
}

/// Ways to read `s` as `x0^k * x_i^m * x_j`.
pub fn generalization_instances(s: &Signature, n: u64) -> Vec<GeneralizationInstance> {
    let q = s.q();
    if s.zero_count() != 0 || q < 2 {
        return Vec::new();
    }
    let k = s.count(0);
    let classes: Vec<(u32, u32)> = (1..q)
        .map(|i| (i, s.count(i)))
        .filter(|&(_, c)| c > 0)
        .collect();
    let build = |i, j, m| GeneralizationInstance::new(n, i, j, m, k).ok();
    match *classes.as_slice() {
        [(j, 1)] => (1..q).filter_map(|i| build(i, j, 0)).collect(),
        [(a, ca), (b, cb)] => {
            let mut out = Vec::new();
            if cb == 1 {
                out.extend(build(a, b, ca));
            }
            if ca == 1 {
                out.extend(build(b, a, cb));
            }
            out
        }
        _ => Vec::new(),
    }
}

/// One-directional prediction: conditions holding for some reading of `s`
/// means the theorem asserts an atom.
pub fn predict_atom_via_generalization(
    s: &Signature,
    n: u64,
    interpretation: ConditionInterpretation,
) -> GeneralizationPrediction {
    let instances = generalization_instances(s, n);
    let m_zero_shape = instances.first().is_some_and(|g| g.m == 0);
    let predicted_atom = instances
        .iter()
        .any(|g| check_generalization_conditions(g, interpretation).holds);
    GeneralizationPrediction {
        applicable: !instances.is_empty(),
        predicted_atom,
        m_zero_shape,
        instances,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::is_tau_atom_oracle;

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    #[test]
    fn prime_characterization() {
        assert!(classify_tau_prime(14, m(2)));
        assert!(!classify_tau_prime(98, m(2)));
        assert!(classify_tau_prime(6, m(6)));
        assert!(classify_tau_prime(7, m(5)));
        assert!(classify_tau_prime(30, m(6)));
        assert!(!classify_tau_prime(35, m(6)));
        assert!(!classify_tau_prime(4, m(2)));
        assert!(!classify_tau_prime(1, m(2)));
    }

    #[test]
    fn atom_examples() {
        let v = classify_atom(98, m(2)).unwrap();
        assert_eq!(v, AtomVerdict::atom(AtomRule::Tau2Form));
        let v = classify_atom(45, m(3)).unwrap();
        assert_eq!(v, AtomVerdict::reducible(AtomRule::MultiplicityAtLeastTwo));
        assert_eq!(v.rule.id(), "Thm3.3-mult-ge2");
        let v = classify_atom(50, m(11)).unwrap();
        assert!(v.is_atom);
        assert_eq!(v.rule, AtomRule::Tau11XiXiXj);
        let v = classify_atom(296, m(11)).unwrap();
        assert_eq!(v, AtomVerdict::atom(AtomRule::Tau11XiCubedX2i));
        assert_eq!(v.rule.id(), "Thm7.1-xi3-x2i");
        assert!(classify_atom(6, m(7)).unwrap().is_atom);
        assert!(!classify_atom(6, m(5)).unwrap().is_atom);
        assert_eq!(classify_atom(-6, m(5)), classify_atom(6, m(5)));
    }

    #[test]
    fn atom_errors() {
        assert_eq!(classify_atom(16, m(8)), Err(Error::UnsupportedModulus(8)));
        assert_eq!(classify_atom(16, m(13)), Err(Error::UnsupportedModulus(13)));
        assert_eq!(classify_atom(1, m(5)), Err(Error::UnitInput(1)));
        assert_eq!(classify_atom(0, m(5)), Err(Error::ZeroInput));
    }

    #[test]
    fn tau4_equals_tau2() {
        for x in 2..10_000 {
            assert_eq!(
                classify_atom(x, m(4)).unwrap().is_atom,
                classify_atom(x, m(2)).unwrap().is_atom
            );
        }
    }

    #[test]
    fn agrees_with_oracle_on_small_range() {
        for n in SUPPORTED_MODULI {
            for x in 2..3_000 {
                assert_eq!(
                    classify_atom(x, m(n)).unwrap().is_atom,
                    is_tau_atom_oracle(x, m(n)).unwrap(),
                    "x = {x}, n = {n}"
                );
            }
        }
    }

    #[test]
    fn rule_ids_are_distinct() {
        let mut ids: Vec<&str> = AtomRule::ALL.iter().map(|r| r.id()).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), AtomRule::ALL.len());
    }

    #[test]
    fn condition_examples() {
        let g = GeneralizationInstance::new(11, 1, 2, 3, 0).unwrap();
        let r = check_generalization_conditions(&g, ConditionInterpretation::Default);
        assert!(r.holds);
        let g = GeneralizationInstance::new(7, 1, 2, 1, 0).unwrap();
        assert!(check_generalization_conditions(&g, ConditionInterpretation::Default).holds);
        let g = GeneralizationInstance::new(7, 1, 2, 1, 1).unwrap();
        let r = check_generalization_conditions(&g, ConditionInterpretation::Default);
        assert!(!r.holds);
        assert!(!r.zero_sum_condition);
        assert!(r.divisor_condition && r.partial_sum_condition);
        assert!(GeneralizationInstance::new(7, 0, 2, 1, 1).is_err());
        assert!(GeneralizationInstance::new(7, 1, 3, 1, 1).is_err());
        assert!(GeneralizationInstance::new(9, 1, 2, 1, 1).is_err());
    }

    #[test]
    fn m_zero_readings_differ() {
        // x0^k * x_j: every z divides 0, and for prime q some z * i hits j.
        let g = GeneralizationInstance::new(11, 1, 3, 0, 2).unwrap();
        let d = check_generalization_conditions(&g, ConditionInterpretation::Default);
        assert!(!d.divisor_condition);
        let a = check_generalization_conditions(&g, ConditionInterpretation::Alternative);
        assert!(a.holds);
    }

    #[test]
    fn predictions() {
        let s = Signature::from_counts(5, 0, &[(1, 3), (2, 1)]).unwrap();
        let p = predict_atom_via_generalization(&s, 11, ConditionInterpretation::Default);
        assert!(p.applicable && p.predicted_atom && !p.m_zero_shape);

        let s = Signature::from_counts(2, 0, &[(0, 3), (1, 1)]).unwrap();
        let p = predict_atom_via_generalization(&s, 5, ConditionInterpretation::Default);
        assert!(p.applicable && p.m_zero_shape && !p.predicted_atom);
        let p = predict_atom_via_generalization(&s, 5, ConditionInterpretation::Alternative);
        assert!(p.predicted_atom);

        let s = Signature::from_counts(5, 0, &[(1, 1), (2, 1), (3, 1)]).unwrap();
        assert!(!predict_atom_via_generalization(&s, 11, ConditionInterpretation::Default).applicable);

        let s = Signature::from_counts(5, 1, &[(1, 1), (2, 1)]).unwrap();
        assert!(!predict_atom_via_generalization(&s, 11, ConditionInterpretation::Default).applicable);
    }
}
