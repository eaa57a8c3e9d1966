//! GGM pseudorandom functions and the PRF distinguishing experiment.

use super::prg::{OrdinalPrg, Prg};
use super::random_function::{FunctionOracle, RandomFunctionOracle};
use super::towp::{ToyRsaFamily, MAX_MODULUS_BITS};
use crate::bits::BitString;
use crate::coins::{CoinSource, DetRng};
use crate::error::{Error, Result};
use crate::estimate::{estimate_advantage, AdvantageEstimate, GameConfig};

/// Seed from which the public permutation behind [`GgmPrf::toy`] is drawn.
pub const PRF_SETUP_SEED: u64 = 0x6767_6d5f_7365_7475;

/// A keyed function family `f : {0,1}^key_len x {0,1}^in_len -> {0,1}^out_len`.
pub trait Prf: Send + Sync {
    fn key_len(&self) -> usize;

    fn in_len(&self) -> usize;

    fn out_len(&self) -> usize;

    fn eval(&self, key: &BitString, x: &BitString) -> Result<BitString>;

    fn check_lengths(&self, key: &BitString, x: &BitString) -> Result<()> {
        if key.len() != self.key_len() {
            return Err(Error::LengthMismatch { expected: self.key_len(), actual: key.len() });
        }
        if x.len() != self.in_len() {
            return Err(Error::LengthMismatch { expected: self.in_len(), actual: x.len() });
        }
        Ok(())
    }
}

/// Walks the GGM tree of a length-doubling generator: from `state = key`,
/// each input bit keeps the left (0) or right (1) half of `expand(state)`.
/// The leaf is truncated to `out_len`, or expanded once more and truncated
/// when `out_len` exceeds the seed length.
pub fn ggm_prf(prg: &dyn Prg, key: &BitString, x: &BitString, out_len: usize) -> Result<BitString> {
    let n = prg.seed_len();
    if prg.out_len() != 2 * n {
        return Err(Error::OutOfRange(format!("GGM needs a length-doubling PRG, got {n} -> {}", prg.out_len())));
    }
    if key.len() != n {
        return Err(Error::LengthMismatch { expected: n, actual: key.len() });
    }
    if out_len > 2 * n {
        return Err(Error::OutOfRange(format!("GGM output of {out_len} bits from {n}-bit leaves")));
    }
    let mut state = key.clone();
    for &bit in x.bits() {
        let both = prg.expand(&state)?;
        state = if bit { both.slice(n, 2 * n) } else { both.slice(0, n) };
    }
    if out_len <= n {
        Ok(state.slice(0, out_len))
    } else {
        Ok(prg.expand(&state)?.slice(0, out_len))
    }
}

/// GGM PRF over an [`OrdinalPrg`] built on a public toy permutation.
#[derive(Clone, Debug)]
pub struct GgmPrf {
    prg: OrdinalPrg,
    in_len: usize,
    out_len: usize,
}

impl GgmPrf {
    pub fn new(prg: OrdinalPrg, in_len: usize, out_len: usize) -> Result<Self> {
        let n = prg.seed_len();
        if n == 0 || prg.out_len() != 2 * n {
            return Err(Error::OutOfRange("GGM needs a length-doubling PRG on nonempty seeds".into()));
        }
        if out_len > 2 * n {
            return Err(Error::OutOfRange(format!("GGM output of {out_len} bits from {n}-bit leaves")));
        }
        Ok(GgmPrf { prg, in_len, out_len })
    }

    /// A PRF whose permutation index is drawn from `setup_seed`, with a
    /// modulus wide enough that `D_i` holds every `key_len`-bit seed.
    pub fn toy(key_len: usize, in_len: usize, out_len: usize, setup_seed: u64) -> Result<Self> {
        let bits = (key_len + 2).max(8);
        if bits > MAX_MODULUS_BITS {
            return Err(Error::OutOfRange(format!("{key_len}-bit PRF keys exceed the toy modulus range")));
        }
        let index = ToyRsaFamily::new(bits)?.generate(&mut DetRng::new(setup_seed)).index;
        GgmPrf::new(OrdinalPrg::new(index, key_len, 2 * key_len)?, in_len, out_len)
    }

    /// The PRF `{0,1}^n x {0,1}^{2n} -> {0,1}^{2n}` used by the symmetric scheme.
    pub fn for_scheme(n: usize) -> Result<Self> {
        GgmPrf::toy(n, 2 * n, 2 * n, PRF_SETUP_SEED)
    }

    pub fn prg(&self) -> &OrdinalPrg {
        &self.prg
    }
}

impl Prf for GgmPrf {
    fn key_len(&self) -> usize {
        self.prg.seed_len()
    }

    fn in_len(&self) -> usize {
        self.in_len
    }

    fn out_len(&self) -> usize {
        self.out_len
    }

    fn eval(&self, key: &BitString, x: &BitString) -> Result<BitString> {
        self.check_lengths(key, x)?;
        ggm_prf(&self.prg, key, x, self.out_len)
    }
}

/// Insecure family whose every member is the all-zero function.
#[derive(Clone, Debug)]
pub struct ConstantZeroPrf {
    pub key_len: usize,
    pub in_len: usize,
    pub out_len: usize,
}

impl ConstantZeroPrf {
    pub fn for_scheme(n: usize) -> Self {
        ConstantZeroPrf { key_len: n, in_len: 2 * n, out_len: 2 * n }
    }
}

impl Prf for ConstantZeroPrf {
    fn key_len(&self) -> usize {
        self.key_len
    }

    fn in_len(&self) -> usize {
        self.in_len
    }

    fn out_len(&self) -> usize {
        self.out_len
    }

    fn eval(&self, key: &BitString, x: &BitString) -> Result<BitString> {
        self.check_lengths(key, x)?;
        Ok(BitString::zeros(self.out_len))
    }
}

/// Oracle for `f_k` with the key fixed.
pub struct KeyedFunction<'a> {
    pub prf: &'a dyn Prf,
    pub key: BitString,
}

impl FunctionOracle for KeyedFunction<'_> {
    fn in_len(&self) -> usize {
        self.prf.in_len()
    }

    fn out_len(&self) -> usize {
        self.prf.out_len()
    }

    fn query(&mut self, x: &BitString, _coins: &mut dyn CoinSource) -> Result<BitString> {
        self.prf.eval(&self.key, x)
    }
}

/// An oracle machine trying to tell a PRF from a random function.
pub trait PrfDistinguisher: Send + Sync {
    fn run(&self, oracle: &mut dyn FunctionOracle, coins: &mut dyn CoinSource) -> Result<bool>;
}

/// Ignores its oracle and always answers the same bit.
pub struct ConstantDistinguisher(pub bool);

impl PrfDistinguisher for ConstantDistinguisher {
    fn run(&self, _oracle: &mut dyn FunctionOracle, _coins: &mut dyn CoinSource) -> Result<bool> {
        Ok(self.0)
    }
}

/// Queries `0...00` and `0...01` and accepts iff the answers collide.
pub struct CollisionDistinguisher;

impl PrfDistinguisher for CollisionDistinguisher {
    fn run(&self, oracle: &mut dyn FunctionOracle, coins: &mut dyn CoinSource) -> Result<bool> {
        let m = oracle.in_len();
        if m == 0 {
            return Err(Error::OutOfRange("collision test needs at least one input bit".into()));
        }
        let a = oracle.query(&BitString::zeros(m), coins)?;
        let b = oracle.query(&BitString::from_u64(1, m), coins)?;
        Ok(a == b)
    }
}

/// `|Pr[D^{f_k} = 1] - Pr[D^g = 1]|` over uniform keys `k` and random
/// functions `g`.
pub fn prf_distinguisher_advantage(
    distinguisher: &dyn PrfDistinguisher,
    prf: &dyn Prf,
    config: &GameConfig,
) -> Result<AdvantageEstimate> {
    estimate_advantage(
        config,
        |coins| {
            let key = coins.bits(prf.key_len());
            distinguisher.run(&mut KeyedFunction { prf, key }, coins)
        },
        |coins| distinguisher.run(&mut RandomFunctionOracle::new(prf.in_len(), prf.out_len()), coins),
    )
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use super::*;
    use crate::classical::towp::TowpIndex;

    /// Recursive reference: the value at node `path` is derived from its
    /// parent's expansion, memoized by path.
    fn reference_node(
        prg: &dyn Prg,
        key: &BitString,
        path: &[bool],
        memo: &mut HashMap<Vec<bool>, BitString>,
    ) -> BitString {
        if let Some(v) = memo.get(path) {
            return v.clone();
        }
        let value = match path.split_last() {
            None => key.clone(),
            Some((&last, parent)) => {
                let p = reference_node(prg, key, parent, memo);
                let expanded = prg.expand(&p).unwrap();
                let n = key.len();
                let half: Vec<bool> = expanded.bits()[if last { n..2 * n } else { 0..n }].to_vec();
                BitString::new(half)
            }
        };
        memo.insert(path.to_vec(), value.clone());
        value
    }

    fn toy_prg() -> OrdinalPrg {
        OrdinalPrg::new(TowpIndex::from_parts(35, 5, 0b011011).unwrap(), 3, 6).unwrap()
    }

    #[test]
    fn empty_input_returns_key() {
        let prg = toy_prg();
        let k = BitString::from_u64(5, 3);
        assert_eq!(ggm_prf(&prg, &k, &BitString::zeros(0), 3).unwrap(), k);
    }

    #[test]
    fn one_bit_takes_a_half() {
        let prg = toy_prg();
        let k = BitString::from_u64(6, 3);
        let full = prg.expand(&k).unwrap();
        assert_eq!(ggm_prf(&prg, &k, &"0".parse().unwrap(), 3).unwrap(), full.slice(0, 3));
        assert_eq!(ggm_prf(&prg, &k, &"1".parse().unwrap(), 3).unwrap(), full.slice(3, 6));
    }

    #[test]
    fn matches_recursive_reference_on_every_input() {
        let prf = GgmPrf::toy(4, 6, 4, 11).unwrap();
        for k in 0..16 {
            let key = BitString::from_u64(k, 4);
            let mut memo = HashMap::new();
            for in_len in 0..=6 {
                for x in 0..(1u64 << in_len) {
                    let x = BitString::from_u64(x, in_len);
                    let leaf = reference_node(prf.prg(), &key, x.bits(), &mut memo);
                    assert_eq!(ggm_prf(prf.prg(), &key, &x, 4).unwrap(), leaf);
                }
            }
        }
    }

    #[test]
    fn long_outputs_expand_the_leaf() {
        let prf = GgmPrf::for_scheme(2).unwrap();
        let key = BitString::from_u64(1, 2);
        let x = BitString::from_u64(9, 4);
        let leaf = ggm_prf(prf.prg(), &key, &x, 2).unwrap();
        assert_eq!(prf.eval(&key, &x).unwrap(), prf.prg().expand(&leaf).unwrap());
        assert!(ggm_prf(prf.prg(), &key, &x, 5).is_err());
    }

    #[test]
    fn scheme_prfs_exist_for_small_n() {
        for n in 1..=3 {
            let prf = GgmPrf::for_scheme(n).unwrap();
            assert_eq!((prf.key_len(), prf.in_len(), prf.out_len()), (n, 2 * n, 2 * n));
            let a = prf.eval(&BitString::zeros(n), &BitString::zeros(2 * n)).unwrap();
            assert_eq!(a, prf.eval(&BitString::zeros(n), &BitString::zeros(2 * n)).unwrap());
        }
    }

    #[test]
    fn length_errors() {
        let prf = GgmPrf::for_scheme(2).unwrap();
        assert!(prf.eval(&BitString::zeros(3), &BitString::zeros(4)).is_err());
        assert!(prf.eval(&BitString::zeros(2), &BitString::zeros(3)).is_err());
    }

    #[test]
    fn constant_distinguisher_has_no_advantage() {
        let prf = GgmPrf::for_scheme(1).unwrap();
        for d in [ConstantDistinguisher(true), ConstantDistinguisher(false)] {
            assert_eq!(prf_distinguisher_advantage(&d, &prf, &GameConfig::exact()).unwrap().advantage, 0.0);
        }
    }

    #[test]
    fn collisions_expose_the_constant_family() {
        // Pr[collision] is 1 for the constant family and 2^-4 for a random function
        let prf = ConstantZeroPrf { key_len: 4, in_len: 4, out_len: 4 };
        let exact = prf_distinguisher_advantage(&CollisionDistinguisher, &prf, &GameConfig::exact()).unwrap();
        assert_eq!(exact.advantage, 1.0 - 1.0 / 16.0);
        let sampled = prf_distinguisher_advantage(&CollisionDistinguisher, &prf, &GameConfig::sample(1000, 3)).unwrap();
        assert!(sampled.advantage >= 0.9);
    }
}
