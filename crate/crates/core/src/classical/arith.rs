//! Small-integer number theory for the toy trapdoor permutation.

use std::sync::OnceLock;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Number of bits in the binary expansion of `x` (0 for 0).
pub fn bit_length(x: u64) -> usize {
    (u64::BITS - x.leading_zeros()) as usize
}

const SIEVE_LIMIT: usize = 1 << 18;

fn sieve() -> &'static Vec<bool> {
    static SIEVE: OnceLock<Vec<bool>> = OnceLock::new();
    SIEVE.get_or_init(|| {
        let mut is_prime = vec![true; SIEVE_LIMIT + 1];
        is_prime[0] = false;
        is_prime[1] = false;
        let mut i = 2;
        while i * i <= SIEVE_LIMIT {
            if is_prime[i] {
                for j in (i * i..=SIEVE_LIMIT).step_by(i) {
                    is_prime[j] = false;
                }
            }
            i += 1;
        }
        is_prime
    })
}

pub fn is_prime(x: u64) -> bool {
    let s = sieve();
    if (x as usize) < s.len() {
        return s[x as usize];
    }
    x >= 2 && (2..).take_while(|d| d * d <= x).all(|d| !x.is_multiple_of(d))
}

/// Safe primes `p = 2q + 1` (with `q` prime) up to the sieve limit, ascending.
pub fn safe_primes() -> &'static [u64] {
    static SAFE: OnceLock<Vec<u64>> = OnceLock::new();
    SAFE.get_or_init(|| {
        (5..=SIEVE_LIMIT as u64).filter(|&p| is_prime(p) && is_prime((p - 1) / 2)).collect()
    })
}
