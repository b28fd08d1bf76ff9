//! Slow, obviously-correct reference implementations used only by tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

pub fn trial_factor(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        while m.is_multiple_of(p) {
            out.push(p);
            m /= p;
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

pub fn naive_is_prime(m: u64) -> bool {
    m >= 2 && trial_factor(m).len() == 1
}

/// Multisets of integers `>= 2` with product `m`, parts nondecreasing.
pub fn naive_partitions(m: u64) -> Vec<Vec<u64>> {
    fn go(m: u64, min: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if m == 1 {
            if !acc.is_empty() {
                out.push(acc.clone());
            }
            return;
        }
        for d in min..=m {
            if m.is_multiple_of(d) {
                acc.push(d);
                go(m / d, d, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(m, 2, &mut Vec::new(), &mut out);
    out
}

/// Every signed vector over every partition of `|x|` with at least two parts.
pub fn naive_signed_factorizations(x: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for parts in naive_partitions(x.unsigned_abs()) {
        if parts.len() < 2 {
            continue;
        }
        for mask in 0u32..(1 << parts.len()) {
            let signed: Vec<i64> = parts
                .iter()
                .enumerate()
                .map(|(i, &p)| if mask >> i & 1 == 1 { -(p as i64) } else { p as i64 })
                .collect();
            out.push(signed);
        }
    }
    out
}

pub fn congruent(a: i64, b: i64, n: u64) -> bool {
    (a - b).rem_euclid(n as i64) == 0
}

/// Atom test by trying every signed proper factorization; the unit in front
/// absorbs the overall sign.
pub fn naive_is_atom(x: i64, n: u64) -> bool {
    !naive_signed_factorizations(x)
        .iter()
        .any(|f| f.iter().all(|&a| congruent(a, f[0], n)))
}

/// Checks a claimed factorization `unit * parts` of `x` from scratch.
pub fn valid_tau_factorization(x: i64, unit: i8, parts: &[i64], n: u64) -> bool {
    parts.len() >= 2
        && parts.iter().all(|a| a.unsigned_abs() >= 2)
        && (unit == 1 || unit == -1)
        && parts.iter().map(|&a| a as i128).product::<i128>() * unit as i128 == x as i128
        && parts.iter().all(|&a| congruent(a, parts[0], n))
}

/// `{r, n - r}` as a canonical pair.
pub fn mu_class(x: i64, n: u64) -> u64 {
    let r = x.rem_euclid(n as i64) as u64;
    r.min(n - r)
}

/// Distinct proper signed factorizations of `x` as multisets, and the count
/// of all sign vectors.
pub fn count_signed(x: i64) -> (usize, usize) {
    let all = naive_signed_factorizations(x);
    let distinct: BTreeSet<Vec<i64>> = all
        .iter()
        .map(|f| {
            let mut f = f.clone();
            f.sort_unstable();
            f
        })
        .collect();
    (distinct.len(), all.len())
}

/// The unit-class signatures listed as atoms for modulus 11, one
/// `[x0, x1, x2, x3, x4]` count vector per entry, for x0 levels 0 and 1 and
/// at most `max` factors per nonzero class.
pub fn tau11_family_set(max: u32) -> BTreeSet<Vec<u32>> {
    let q = 5u32;
    let mut out = BTreeSet::new();
    let mut add = |k: u32, terms: &[(u32, u32)]| {
        let mut v = vec![0u32; q as usize];
        v[0] = k;
        for &(i, c) in terms {
            v[i as usize] += c;
        }
        if v[1..].iter().all(|&c| c <= max) {
            out.insert(v);
        }
    };
    for k in 0..=1 {
        // single prime: x0 alone or one x_i
        if k == 1 {
            add(1, &[]);
        }
        for i in 1..q {
            add(k, &[(i, 1)]);
        }
        for i in 1..q {
            for j in 1..q {
                if i == j {
                    continue;
                }
                if k == 0 || (i + j) % q != 0 {
                    add(k, &[(i, 1), (j, 1)]);
                }
                let two_i = 2 * i % q;
                if two_i != j && (k == 0 || !(two_i + j).is_multiple_of(q)) {
                    add(k, &[(i, 2), (j, 1)]);
                }
            }
            if k == 0 {
                add(0, &[(i, 3), (2 * i % q, 1)]);
            }
        }
    }
    out
}
