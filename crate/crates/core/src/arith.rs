//! Exact 64-bit integer arithmetic: primality, factorization, modular powers.
//!
//! Factoring uses trial division by the primes below 10^6 and finishes any
//! remaining cofactor with Brent's variant of Pollard rho. Primality is a
//! deterministic Miller-Rabin test, exact for every 64-bit input.

use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};

const TRIAL_LIMIT: u64 = 1_000_000;

/// First twelve primes; as Miller-Rabin bases they are exact below 3.3 * 10^24.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = TRIAL_LIMIT as usize;
        let mut composite = vec![false; limit + 1];
        let mut primes = Vec::new();
        for i in 2..=limit {
            if !composite[i] {
                primes.push(i as u64);
                let mut j = i * i;
                while j <= limit {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, n: u64) -> u64 {
    let mut acc = 1 % n;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, n);
        }
        base = mul_mod(base, base, n);
        exp >>= 1;
    }
    acc
}

/// `base^exp mod n`, for any sign of `base`.
pub fn mod_pow(base: i64, exp: u64, n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::BadModulus(n));
    }
    let b = (base as i128).rem_euclid(n as i128) as u64;
    Ok(pow_mod_u64(b, exp, n))
}

fn miller_rabin(n: u64) -> bool {
    let mut d = n - 1;
    let s = d.trailing_zeros();
    d >>= s;
    'bases: for &a in MR_BASES.iter() {
        if a % n == 0 {
            continue;
        }
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    miller_rabin(n)
}

/// True iff `|x|` is a usual (rational) prime.
pub fn is_prime(x: i64) -> bool {
    is_prime_u64(x.unsigned_abs())
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

// Brent's cycle detection with batched gcds. `n` must be odd and composite.
fn pollard_brent(n: u64, c: u64) -> Option<u64> {
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
    let mut x = y;
    let mut ys = y;
    let mut g = 1;
    const BATCH: u64 = 128;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd(q, n);
            k += BATCH;
        }
        r *= 2;
        if r > 1 << 26 {
            return None;
        }
    }
    if g == n {
        // Batched product overshot; step back one at a time.
        loop {
            ys = f(ys);
            g = gcd(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let root = (n as f64).sqrt() as u64;
    for r in root.saturating_sub(1)..=root + 1 {
        if r * r == n {
            split_large(r, out);
            split_large(r, out);
            return;
        }
    }
    for c in 1.. {
        if let Some(d) = pollard_brent(n, c) {
            split_large(d, out);
            split_large(n / d, out);
            return;
        }
    }
}

/// A nonzero integer written as `sign * prod p^e` with ascending primes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeFactorization {
    value: i64,
    sign: i8,
    factors: Vec<(u64, u32)>,
}

impl PrimeFactorization {
    pub fn value(&self) -> i64 {
        self.value
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn magnitude(&self) -> u64 {
        self.value.unsigned_abs()
    }

    /// `(prime, exponent)` pairs, primes strictly ascending.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    /// Number of prime factors counted with multiplicity.
    pub fn omega_total(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    /// Exponent of `p`, zero when absent.
    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .binary_search_by_key(&p, |&(q, _)| q)
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    /// Prime factors with multiplicity, ascending.
    pub fn primes_with_multiplicity(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors
            .iter()
            .flat_map(|&(p, e)| std::iter::repeat_n(p, e as usize))
    }

    /// All positive divisors of `|value|`, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    pub fn negate(&self) -> PrimeFactorization {
        PrimeFactorization {
            value: -self.value,
            sign: -self.sign,
            factors: self.factors.clone(),
        }
    }
}

impl fmt::Display for PrimeFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            f.write_str("-")?;
        }
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, &(p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" · ")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Unique prime factorization of a nonzero `x` with `|x| <= 2^63 - 1`.
pub fn factor(x: i64) -> Result<PrimeFactorization> {
    if x == 0 {
        return Err(Error::ZeroInput);
    }
    if x == i64::MIN {
        return Err(Error::Overflow);
    }
    let sign = if x < 0 { -1 } else { 1 };
    let mut rest = x.unsigned_abs();
    let mut factors = Vec::new();
    for &p in small_primes() {
        if p * p > rest {
            break;
        }
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if rest > 1 {
        let mut large = Vec::new();
        split_large(rest, &mut large);
        large.sort_unstable();
        for p in large {
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
    }
    Ok(PrimeFactorization {
        value: x,
        sign,
        factors,
    })
}

/// Largest `e` with `p^e | x`.
pub fn multiplicity(x: i64, p: i64) -> Result<u32> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if x == 0 {
        return Err(Error::ZeroInput);
    }
    let p = p.unsigned_abs();
    let mut rest = x.unsigned_abs();
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    Ok(e)
}
