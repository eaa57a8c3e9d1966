//! Randomness for every stochastic step in the library.
//!
//! All randomized code draws from a [`CoinSource`]. Two implementations exist:
//! [`DetRng`] samples from a seeded ChaCha20 stream, and the enumerator behind
//! [`for_each_branch`] replays a computation once per possible coin sequence,
//! weighting each replay by its exact probability. Code written against the
//! trait therefore supports both Monte-Carlo and exact evaluation unchanged,
//! provided it is deterministic given its coins.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::bits::BitString;
use crate::error::{Error, Result};

/// Largest uniform choice a single bitstring draw may request.
const MAX_BITS_PER_DRAW: usize = 32;

/// Probabilities at or below this are treated as impossible branches.
pub const ZERO_WEIGHT: f64 = 1e-14;

pub trait CoinSource {
    /// Uniform integer in `[0, n)`. `n` must be positive.
    fn below(&mut self, n: u64) -> u64;

    /// Index drawn with probability proportional to `weights[i]`.
    fn weighted(&mut self, weights: &[f64]) -> usize;

    /// Uniform element of `{x < n : accept(x)}`; the set must be non-empty.
    fn below_where(&mut self, n: u64, accept: &dyn Fn(u64) -> bool) -> u64;

    fn bit(&mut self) -> bool {
        self.below(2) == 1
    }

    fn bits(&mut self, len: usize) -> BitString {
        let mut out = BitString::default();
        let mut remaining = len;
        while remaining > 0 {
            let take = remaining.min(MAX_BITS_PER_DRAW);
            out = out.concat(&BitString::from_u64(self.below(1u64 << take), take));
            remaining -= take;
        }
        out
    }
}

/// Seeded counter-based generator (ChaCha20). The same `(seed, stream)` pair
/// yields the same coins on every platform.
#[derive(Clone, Debug)]
pub struct DetRng {
    inner: ChaCha20Rng,
}

impl DetRng {
    pub fn new(seed: u64) -> Self {
        DetRng { inner: ChaCha20Rng::seed_from_u64(seed) }
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha20Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        DetRng { inner }
    }

    /// Stream for trial `trial` of game arm `arm`.
    pub fn for_trial(seed: u64, arm: u32, trial: u64) -> Self {
        Self::with_stream(seed, ((arm as u64) << 48) ^ trial)
    }
}

impl RngCore for DetRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

impl CoinSource for DetRng {
    fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0) has no outcomes");
        self.inner.random_range(0..n)
    }

    fn weighted(&mut self, weights: &[f64]) -> usize {
        let total: f64 = weights.iter().filter(|w| **w > ZERO_WEIGHT).sum();
        assert!(total > 0.0, "weighted choice needs a positive weight");
        let target = self.inner.random::<f64>() * total;
        let mut acc = 0.0;
        let mut last = 0;
        for (i, &w) in weights.iter().enumerate() {
            if w <= ZERO_WEIGHT {
                continue;
            }
            acc += w;
            last = i;
            if target < acc {
                return i;
            }
        }
        last
    }

    fn below_where(&mut self, n: u64, accept: &dyn Fn(u64) -> bool) -> u64 {
        loop {
            let x = self.below(n);
            if accept(x) {
                return x;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum ChoiceKind {
    Uniform(u64),
    Weighted(Vec<(usize, f64)>),
    Subset(Vec<u64>),
}

impl ChoiceKind {
    fn count(&self) -> u64 {
        match self {
            ChoiceKind::Uniform(n) => *n,
            ChoiceKind::Weighted(opts) => opts.len() as u64,
            ChoiceKind::Subset(vals) => vals.len() as u64,
        }
    }

    fn same_shape(&self, other: &ChoiceKind) -> bool {
        match (self, other) {
            (ChoiceKind::Uniform(a), ChoiceKind::Uniform(b)) => a == b,
            (ChoiceKind::Weighted(a), ChoiceKind::Weighted(b)) => {
                a.len() == b.len()
                    && a.iter().zip(b).all(|(x, y)| x.0 == y.0 && (x.1 - y.1).abs() <= 1e-9)
            }
            (ChoiceKind::Subset(a), ChoiceKind::Subset(b)) => a == b,
            _ => false,
        }
    }
}

#[derive(Debug)]
struct Choice {
    index: u64,
    kind: ChoiceKind,
}

/// Replays one branch of the coin tree per run.
struct Enumerator {
    path: Vec<Choice>,
    cursor: usize,
    weight: f64,
    cap: u64,
    fault: Option<Error>,
}

impl Enumerator {
    fn new(cap: u64) -> Self {
        Enumerator { path: Vec::new(), cursor: 0, weight: 1.0, cap, fault: None }
    }

    fn begin_run(&mut self) {
        self.cursor = 0;
        self.weight = 1.0;
    }

    /// Moves to the next unexplored branch; false once the tree is exhausted.
    fn advance(&mut self) -> bool {
        self.path.truncate(self.cursor);
        while let Some(last) = self.path.last_mut() {
            if last.index + 1 < last.kind.count() {
                last.index += 1;
                return true;
            }
            self.path.pop();
        }
        false
    }

    fn choose(&mut self, kind: ChoiceKind) -> u64 {
        if kind.count() > self.cap {
            self.fault.get_or_insert(Error::EnumerationCap(self.cap));
        }
        if kind.count() == 0 {
            self.fault.get_or_insert(Error::Mode("choice with no possible outcome".into()));
            return 0;
        }
        if self.cursor < self.path.len() {
            if !self.path[self.cursor].kind.same_shape(&kind) {
                self.fault.get_or_insert(Error::NonDeterministicRole(format!(
                    "coin request {} changed shape between replays",
                    self.cursor
                )));
            }
        } else {
            self.path.push(Choice { index: 0, kind });
        }
        let choice = &self.path[self.cursor];
        self.cursor += 1;
        match &choice.kind {
            ChoiceKind::Uniform(n) => {
                self.weight /= *n as f64;
                choice.index
            }
            ChoiceKind::Weighted(opts) => {
                let (i, w) = opts[choice.index as usize];
                self.weight *= w;
                i as u64
            }
            ChoiceKind::Subset(vals) => {
                self.weight /= vals.len() as f64;
                vals[choice.index as usize]
            }
        }
    }
}

impl CoinSource for Enumerator {
    fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0) has no outcomes");
        self.choose(ChoiceKind::Uniform(n))
    }

    fn weighted(&mut self, weights: &[f64]) -> usize {
        let total: f64 = weights.iter().filter(|w| **w > ZERO_WEIGHT).sum();
        let opts = weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w > ZERO_WEIGHT)
            .map(|(i, w)| (i, w / total))
            .collect();
        self.choose(ChoiceKind::Weighted(opts)) as usize
    }

    fn below_where(&mut self, n: u64, accept: &dyn Fn(u64) -> bool) -> u64 {
        if n > self.cap.saturating_mul(16) {
            self.fault.get_or_insert(Error::EnumerationCap(self.cap));
            return 0;
        }
        let vals = (0..n).filter(|&x| accept(x)).collect();
        self.choose(ChoiceKind::Subset(vals))
    }
}

/// Runs `run` once for every coin sequence it can consume and hands each
/// result to `visit` together with its probability. Returns the number of
/// branches explored. `run` must be deterministic given its coins.
pub fn for_each_branch<T>(
    cap: u64,
    mut run: impl FnMut(&mut dyn CoinSource) -> Result<T>,
    mut visit: impl FnMut(f64, T),
) -> Result<u64> {
    let mut en = Enumerator::new(cap);
    let mut branches = 0u64;
    loop {
        branches += 1;
        if branches > cap {
            return Err(Error::EnumerationCap(cap));
        }
        en.begin_run();
        let out = run(&mut en);
        if let Some(fault) = en.fault.take() {
            return Err(fault);
        }
        visit(en.weight, out?);
        if !en.advance() {
            return Ok(branches);
        }
    }
}

/// Exact probability that `event` returns true.
pub fn exact_probability(
    cap: u64,
    mut event: impl FnMut(&mut dyn CoinSource) -> Result<bool>,
) -> Result<f64> {
    let mut p = 0.0;
    for_each_branch(cap, &mut event, |w, hit| {
        if hit {
            p += w;
        }
    })?;
    Ok(p.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fair_coin_is_one_half() {
        let p = exact_probability(16, |c| Ok(c.bit())).unwrap();
        assert_eq!(p, 0.5);
    }

    #[test]
    fn single_branch_game_is_degenerate() {
        assert_eq!(exact_probability(16, |_| Ok(true)).unwrap(), 1.0);
        assert_eq!(exact_probability(16, |_| Ok(false)).unwrap(), 0.0);
    }

    #[test]
    fn nested_choices_enumerate_every_path() {
        // two dice of different sizes: 3 * 4 = 12 branches, each weight 1/12
        let mut seen = Vec::new();
        let n = for_each_branch(
            64,
            |c| Ok((c.below(3), c.below(4))),
            |w, v| {
                assert!((w - 1.0 / 12.0).abs() < 1e-15);
                seen.push(v);
            },
        )
        .unwrap();
        assert_eq!(n, 12);
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 12);
    }

    #[test]
    fn dependent_choices_and_weights() {
        // first coin decides whether a biased second choice happens
        let p = exact_probability(64, |c| {
            if c.bit() {
                Ok(c.weighted(&[0.25, 0.0, 0.75]) == 2)
            } else {
                Ok(false)
            }
        })
        .unwrap();
        assert!((p - 0.375).abs() < 1e-15);
    }

    #[test]
    fn zero_weight_options_are_never_taken() {
        let mut count = 0;
        for_each_branch(8, |c| Ok(c.weighted(&[0.0, 1.0, 0.0])), |_, i| {
            assert_eq!(i, 1);
            count += 1;
        })
        .unwrap();
        assert_eq!(count, 1);
    }

    #[test]
    fn subset_choice_is_uniform_over_accepted() {
        let mut total = 0.0;
        for_each_branch(64, |c| Ok(c.below_where(10, &|x| x % 3 == 0)), |w, x| {
            assert_eq!(x % 3, 0);
            assert!((w - 0.25).abs() < 1e-15);
            total += w;
        })
        .unwrap();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cap_is_enforced() {
        let err = exact_probability(4, |c| Ok(c.bits(3).is_zero())).unwrap_err();
        assert_eq!(err, Error::EnumerationCap(4));
    }

    #[test]
    fn detrng_reproducible_and_streams_differ() {
        let a: Vec<u64> = (0..4).map(|_| DetRng::new(7).below(1 << 40)).collect();
        let mut r1 = DetRng::new(7);
        let mut r2 = DetRng::new(7);
        assert_eq!(r1.below(1 << 40), r2.below(1 << 40));
        assert_eq!(a[0], a[1]);
        let mut s1 = DetRng::for_trial(7, 0, 1);
        let mut s2 = DetRng::for_trial(7, 0, 2);
        assert_ne!(s1.next_u64(), s2.next_u64());
    }

    #[test]
    fn long_bitstrings_are_drawn_in_chunks() {
        let mut r = DetRng::new(1);
        assert_eq!(r.bits(70).len(), 70);
    }
}
