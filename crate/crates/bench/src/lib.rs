//! Shared inputs for the benchmarks.

/// Deterministic mix of smooth and rough integers in `[2, 2 + len)`, strided
/// so consecutive inputs do not share small factors.
pub fn mixed_inputs(len: usize) -> Vec<i64> {
    (0..len as i64).map(|k| 2 + (k * 7919) % len as i64).collect()
}

/// Products of the first few primes, the worst case for partition search.
pub fn smooth_inputs() -> Vec<i64> {
    vec![720, 5040, 30_030, 46_080, 510_510, 9_699_690]
}
