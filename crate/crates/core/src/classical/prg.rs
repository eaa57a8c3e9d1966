//! Pseudorandom generators built by iterating the toy permutation and
//! emitting hard-core bits.

use std::sync::Arc;

use super::towp::TowpIndex;
use crate::bits::BitString;
use crate::coins::CoinSource;
use crate::error::{Error, Result};

/// `G(s) = b(f^{t-1}(s)) b(f^{t-2}(s)) ... b(s)`: bit `j` (1-indexed) is
/// `b(f^{t-j}(seed))`.
pub fn prg_iterated(index: &TowpIndex, seed: u64, t: usize) -> Result<BitString> {
    if t == 0 {
        return Err(Error::OutOfRange("PRG output length must be at least 1".into()));
    }
    let mut bits = vec![false; t];
    let mut x = seed;
    for j in (0..t).rev() {
        bits[j] = index.hardcore(x)?;
        x = index.evaluate(x)?;
    }
    Ok(BitString::new(bits))
}

/// A deterministic length-expanding map on bit strings.
pub trait Prg: Send + Sync {
    fn seed_len(&self) -> usize;

    fn out_len(&self) -> usize;

    fn expand(&self, seed: &BitString) -> Result<BitString>;

    /// A seed drawn from the generator's seed distribution.
    fn sample_seed(&self, coins: &mut dyn CoinSource) -> Result<BitString> {
        Ok(coins.bits(self.seed_len()))
    }
}

/// Generator on `n`-bit seeds: seed `s` selects the `s`-th element (in
/// ascending order) of `D_i` without the fixed points of `f_i`, which is then
/// expanded by [`prg_iterated`]. A fixed point such as `1` would expand to a
/// constant string.
#[derive(Clone, Debug)]
pub struct OrdinalPrg {
    index: TowpIndex,
    seeds: Arc<Vec<u64>>,
    seed_len: usize,
    out_len: usize,
}

impl OrdinalPrg {
    pub fn new(index: TowpIndex, seed_len: usize, out_len: usize) -> Result<Self> {
        if out_len == 0 {
            return Err(Error::OutOfRange("PRG output length must be at least 1".into()));
        }
        let seeds: Vec<u64> =
            index.cached_domain().iter().copied().filter(|&x| index.evaluate(x) != Ok(x)).collect();
        if seed_len >= 64 || (seeds.len() as u64) < (1u64 << seed_len) {
            return Err(Error::OutOfRange(format!(
                "{} non-fixed domain elements cannot embed {seed_len}-bit seeds",
                seeds.len()
            )));
        }
        Ok(OrdinalPrg { index, seeds: Arc::new(seeds), seed_len, out_len })
    }

    pub fn index(&self) -> &TowpIndex {
        &self.index
    }

    /// Domain element that seed `s` is mapped to.
    pub fn embed(&self, seed: &BitString) -> Result<u64> {
        if seed.len() != self.seed_len {
            return Err(Error::LengthMismatch { expected: self.seed_len, actual: seed.len() });
        }
        Ok(self.seeds[seed.to_u64() as usize])
    }
}

impl Prg for OrdinalPrg {
    fn seed_len(&self) -> usize {
        self.seed_len
    }

    fn out_len(&self) -> usize {
        self.out_len
    }

    fn expand(&self, seed: &BitString) -> Result<BitString> {
        prg_iterated(&self.index, self.embed(seed)?, self.out_len)
    }
}

/// Generator seeded directly by an encoded domain element `d`, as in the
/// public-key scheme's `r := G(d)`. Seeds are sampled with `S(i)`.
#[derive(Clone, Debug)]
pub struct DomainPrg {
    index: TowpIndex,
    out_len: usize,
}

impl DomainPrg {
    pub fn new(index: TowpIndex, out_len: usize) -> Self {
        DomainPrg { index, out_len }
    }
}

impl Prg for DomainPrg {
    fn seed_len(&self) -> usize {
        self.index.width()
    }

    fn out_len(&self) -> usize {
        self.out_len
    }

    fn expand(&self, seed: &BitString) -> Result<BitString> {
        prg_iterated(&self.index, self.index.decode(seed)?, self.out_len)
    }

    fn sample_seed(&self, coins: &mut dyn CoinSource) -> Result<BitString> {
        self.index.encode(self.index.sample(coins))
    }
}

/// Insecure generator whose output is all zeros.
#[derive(Clone, Debug)]
pub struct ConstantPrg {
    pub seed_len: usize,
    pub out_len: usize,
}

impl Prg for ConstantPrg {
    fn seed_len(&self) -> usize {
        self.seed_len
    }

    fn out_len(&self) -> usize {
        self.out_len
    }

    fn expand(&self, seed: &BitString) -> Result<BitString> {
        if seed.len() != self.seed_len {
            return Err(Error::LengthMismatch { expected: self.seed_len, actual: seed.len() });
        }
        Ok(BitString::zeros(self.out_len))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::towp::ToyRsaFamily;

    fn index35() -> TowpIndex {
        TowpIndex::from_parts(35, 5, 0b101101).unwrap()
    }

    #[test]
    fn short_outputs_follow_the_formula() {
        let idx = index35();
        let d = 2;
        assert_eq!(prg_iterated(&idx, d, 1).unwrap().bits(), &[idx.hardcore(d).unwrap()]);
        let fd = idx.evaluate(d).unwrap();
        assert_eq!(prg_iterated(&idx, d, 2).unwrap().bits(), &[idx.hardcore(fd).unwrap(), idx.hardcore(d).unwrap()]);
    }

    #[test]
    fn matches_iterate_then_map_on_every_seed() {
        let fam = ToyRsaFamily::new(6).unwrap();
        for &(p, q) in fam.prime_pairs() {
            for mask in [1, 0b101010, 0b111111] {
                let idx = fam.keypair_from_primes(p, q, mask).unwrap().index;
                for d in idx.domain() {
                    // forward orbit first, then hard-core bits read from the far end
                    let orbit: Vec<u64> = (0..12).map(|k| idx.iterate(d, k).unwrap()).collect();
                    let expect: Vec<bool> = orbit.iter().rev().map(|&x| (x & mask).count_ones() % 2 == 1).collect();
                    assert_eq!(prg_iterated(&idx, d, 12).unwrap().bits(), expect.as_slice());
                }
            }
        }
    }

    #[test]
    fn errors() {
        let idx = index35();
        assert_eq!(prg_iterated(&idx, 7, 4), Err(Error::OutsideDomain(7)));
        assert!(prg_iterated(&idx, 1, 0).is_err());
        assert!(OrdinalPrg::new(idx.clone(), 5, 10).is_err(), "24 elements cannot hold 32 seeds");
        let prg = OrdinalPrg::new(idx, 4, 8).unwrap();
        assert!(prg.expand(&BitString::zeros(3)).is_err());
    }

    #[test]
    fn ordinal_embedding_is_injective() {
        let prg = OrdinalPrg::new(index35(), 4, 8).unwrap();
        let images: std::collections::BTreeSet<u64> =
            (0..16).map(|s| prg.embed(&BitString::from_u64(s, 4)).unwrap()).collect();
        assert_eq!(images.len(), 16);
        for &x in &images {
            assert_ne!(prg.index().evaluate(x).unwrap(), x);
        }
        assert_eq!(prg.embed(&BitString::from_u64(0, 4)).unwrap(), 2);
        assert_eq!(prg.embed(&BitString::from_u64(3, 4)).unwrap(), 9);
    }

    #[test]
    fn domain_prg_round_trips_seed_encoding() {
        let idx = index35();
        let prg = DomainPrg::new(idx.clone(), 6);
        for d in idx.domain() {
            assert_eq!(prg.expand(&idx.encode(d).unwrap()).unwrap(), prg_iterated(&idx, d, 6).unwrap());
        }
        assert!(prg.expand(&BitString::from_u64(5, 6)).is_err());
    }
}
