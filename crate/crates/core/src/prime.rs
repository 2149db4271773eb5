//! Deterministic trial-division primality, used for table capacities.

/// Primality by trial division up to the square root.
pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3usize;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest prime ≥ `n`. Requires `n ≥ 2`.
pub fn next_prime(n: usize) -> usize {
    assert!(n >= 2, "next_prime requires n >= 2");
    let mut p = n;
    while !is_prime(p) {
        p += 1;
    }
    p
}
