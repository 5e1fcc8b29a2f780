//! Exact integer helpers used by the reversibility conditions.

use crate::error::{Error, Result};

/// Greatest common divisor by Euclid's algorithm. `gcd(0, 0)` is 0.
pub const fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Prime factorization by trial division up to `sqrt(n)`, as `(prime, exponent)`
/// pairs in increasing prime order. Returns an empty list for `n < 2`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut factors = Vec::new();
    if n < 2 {
        return factors;
    }
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        factors.push((n, 1));
    }
    factors
}

/// Product of the distinct primes dividing `d`.
pub fn radical(d: u64) -> Result<u64> {
    if d < 2 {
        return Err(Error::InvalidStateCount { d, cap: u64::MAX });
    }
    Ok(factorize(d).iter().map(|&(p, _)| p).product())
}

/// Euler's totient, the number of units of `Z_d`.
pub fn totient(d: u64) -> u64 {
    if d == 0 {
        return 0;
    }
    factorize(d)
        .iter()
        .fold(d, |acc, &(p, _)| acc / p * (p - 1))
}
