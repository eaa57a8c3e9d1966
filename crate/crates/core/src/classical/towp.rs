//! Toy RSA trapdoor permutation over `Z_N^*` with an inner-product hard-core
//! bit.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::arith::{bit_length, gcd, mod_inverse, mod_pow, safe_primes};
use crate::bits::BitString;
use crate::coins::CoinSource;
use crate::error::{Error, Result};

/// Smallest supported modulus width in bits.
pub const MIN_MODULUS_BITS: usize = 6;

/// Largest supported modulus width in bits.
pub const MAX_MODULUS_BITS: usize = 20;

/// Public index `i = (N, e, mask)`: the permutation `x -> x^e mod N` on
/// `Z_N^*` and the Goldreich-Levin mask of its hard-core bit. Domain elements
/// are encoded as fixed-width binary strings of `width` bits.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TowpIndex {
    modulus: u64,
    exponent: u64,
    mask: u64,
    width: usize,
}

/// Trapdoor `t = (N, d)` with `e d = 1 mod phi(N)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Trapdoor {
    modulus: u64,
    inverse_exponent: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowpKeyPair {
    pub index: TowpIndex,
    pub trapdoor: Trapdoor,
}

/// The family of toy RSA permutations whose modulus has exactly `bits` bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToyRsaFamily {
    bits: usize,
    pairs: Vec<(u64, u64)>,
}

impl ToyRsaFamily {
    pub fn new(bits: usize) -> Result<Self> {
        if !(MIN_MODULUS_BITS..=MAX_MODULUS_BITS).contains(&bits) {
            return Err(Error::OutOfRange(format!(
                "modulus width {bits} outside {MIN_MODULUS_BITS}..={MAX_MODULUS_BITS}"
            )));
        }
        let (lo, hi) = (1u64 << (bits - 1), 1u64 << bits);
        let primes = safe_primes();
        let mut pairs = Vec::new();
        for (a, &p) in primes.iter().enumerate() {
            if p * p >= hi {
                break;
            }
            for &q in &primes[a + 1..] {
                let n = p * q;
                if n >= hi {
                    break;
                }
                if n >= lo {
                    pairs.push((p, q));
                }
            }
        }
        if pairs.is_empty() {
            return Err(Error::OutOfRange(format!("no safe-prime modulus of {bits} bits")));
        }
        Ok(ToyRsaFamily { bits, pairs })
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    /// Every admissible prime pair, ascending.
    pub fn prime_pairs(&self) -> &[(u64, u64)] {
        &self.pairs
    }

    /// `G`: picks a prime pair and a nonzero hard-core mask uniformly.
    pub fn generate(&self, coins: &mut dyn CoinSource) -> TowpKeyPair {
        let (p, q) = self.pairs[coins.below(self.pairs.len() as u64) as usize];
        let mask = 1 + coins.below((1u64 << self.bits) - 1);
        self.keypair_from_primes(p, q, mask).expect("enumerated pairs are valid")
    }

    /// Builds the key pair for explicit primes and mask.
    pub fn keypair_from_primes(&self, p: u64, q: u64, mask: u64) -> Result<TowpKeyPair> {
        if !self.pairs.contains(&(p.min(q), p.max(q))) {
            return Err(Error::OutOfRange(format!("({p}, {q}) is not a {}-bit safe-prime pair", self.bits)));
        }
        let phi = (p - 1) * (q - 1);
        let exponent = (3..).step_by(2).find(|&e| gcd(e, phi) == 1).expect("phi has an odd unit");
        let inverse_exponent = mod_inverse(exponent, phi).expect("exponent is a unit mod phi");
        let index = TowpIndex::from_parts(p * q, exponent, mask)?;
        Ok(TowpKeyPair { index, trapdoor: Trapdoor { modulus: p * q, inverse_exponent } })
    }
}

/// `toy_towp_new`: a key pair from the family of `bits`-bit moduli.
pub fn toy_towp_new(bits: usize, coins: &mut dyn CoinSource) -> Result<TowpKeyPair> {
    Ok(ToyRsaFamily::new(bits)?.generate(coins))
}

impl TowpIndex {
    /// An index from explicit parameters. The exponent is not checked against
    /// `phi(N)`, since the index alone does not reveal the factorization.
    pub fn from_parts(modulus: u64, exponent: u64, mask: u64) -> Result<Self> {
        let width = bit_length(modulus);
        if !(MIN_MODULUS_BITS..=MAX_MODULUS_BITS).contains(&width) {
            return Err(Error::OutOfRange(format!("modulus {modulus} has unsupported width {width}")));
        }
        if mask == 0 || bit_length(mask) > width {
            return Err(Error::OutOfRange(format!("mask {mask} must be nonzero and fit in {width} bits")));
        }
        Ok(TowpIndex { modulus, exponent, mask, width })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    /// Width in bits of encoded domain elements.
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn contains(&self, x: u64) -> bool {
        x > 0 && x < self.modulus && gcd(x, self.modulus) == 1
    }

    fn check(&self, x: u64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::OutsideDomain(x))
        }
    }

    /// `S(i)`: a uniform element of `D_i`.
    pub fn sample(&self, coins: &mut dyn CoinSource) -> u64 {
        let n = self.modulus;
        coins.below_where(n, &|x| x > 0 && gcd(x, n) == 1)
    }

    /// `f_i(x) = x^e mod N`.
    pub fn evaluate(&self, x: u64) -> Result<u64> {
        self.check(x)?;
        Ok(mod_pow(x, self.exponent, self.modulus))
    }

    /// `f_i^k(x)`.
    pub fn iterate(&self, x: u64, k: usize) -> Result<u64> {
        self.check(x)?;
        Ok((0..k).fold(x, |y, _| mod_pow(y, self.exponent, self.modulus)))
    }

    /// `D_i` in ascending order.
    pub fn domain(&self) -> Vec<u64> {
        (1..self.modulus).filter(|&x| gcd(x, self.modulus) == 1).collect()
    }

    /// Inner-product hard-core bit `<x, mask> mod 2`.
    pub fn hardcore(&self, x: u64) -> Result<bool> {
        self.check(x)?;
        Ok((x & self.mask).count_ones() % 2 == 1)
    }

    pub fn encode(&self, x: u64) -> Result<BitString> {
        self.check(x)?;
        Ok(BitString::from_u64(x, self.width))
    }

    pub fn decode(&self, bits: &BitString) -> Result<u64> {
        if bits.len() != self.width {
            return Err(Error::LengthMismatch { expected: self.width, actual: bits.len() });
        }
        let x = bits.to_u64();
        self.check(x)?;
        Ok(x)
    }

    /// `D_i` in ascending order, shared across calls.
    pub(crate) fn cached_domain(&self) -> std::sync::Arc<Vec<u64>> {
        use std::collections::HashMap;
        use std::sync::{Arc, Mutex};
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<u64>>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let mut map = cache.lock().expect("domain cache poisoned");
        map.entry(self.modulus).or_insert_with(|| Arc::new(self.domain())).clone()
    }
}

impl Trapdoor {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn inverse_exponent(&self) -> u64 {
        self.inverse_exponent
    }

    /// `I(y, t) = y^d mod N`.
    pub fn invert(&self, y: u64) -> Result<u64> {
        if y == 0 || y >= self.modulus || gcd(y, self.modulus) != 1 {
            return Err(Error::OutsideDomain(y));
        }
        Ok(mod_pow(y, self.inverse_exponent, self.modulus))
    }
}

/// Hard-core predicate `b(x)` of the index.
pub fn hardcore_eval(index: &TowpIndex, x: u64) -> Result<bool> {
    index.hardcore(x)
}
