use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use crate::bits::BitString;
use crate::coins::{CoinSource, DetRng};
use crate::error::{Error, Result};

/// Classical oracle access to a function `{0,1}^m -> {0,1}^l`. Oracles that
/// sample lazily draw fresh values from `coins`; keyed functions ignore them.
pub trait FunctionOracle {
    fn in_len(&self) -> usize;

    fn out_len(&self) -> usize;

    fn query(&mut self, x: &BitString, coins: &mut dyn CoinSource) -> Result<BitString>;
}

/// A uniformly random function, sampled lazily: each new input gets a fresh
/// uniform output, and repeated inputs get the memoized one.
#[derive(Clone, Debug, Default)]
pub struct RandomFunctionOracle {
    in_len: usize,
    out_len: usize,
    memo: BTreeMap<BitString, BitString>,
}

impl RandomFunctionOracle {
    pub fn new(in_len: usize, out_len: usize) -> Self {
        RandomFunctionOracle { in_len, out_len, memo: BTreeMap::new() }
    }

    /// Inputs queried so far.
    pub fn queried(&self) -> usize {
        self.memo.len()
    }

    /// The memoized value at `x`, if it has been sampled.
    pub fn peek(&self, x: &BitString) -> Option<&BitString> {
        self.memo.get(x)
    }

    /// Wraps the oracle for sharing between encryption and decryption keys.
    pub fn shared(self) -> SharedRandomFunction {
        Arc::new(Mutex::new(self))
    }
}

impl FunctionOracle for RandomFunctionOracle {
    fn in_len(&self) -> usize {
        self.in_len
    }

    fn out_len(&self) -> usize {
        self.out_len
    }

    fn query(&mut self, x: &BitString, coins: &mut dyn CoinSource) -> Result<BitString> {
        if x.len() != self.in_len {
            return Err(Error::LengthMismatch { expected: self.in_len, actual: x.len() });
        }
        if let Some(y) = self.memo.get(x) {
            return Ok(y.clone());
        }
        let y = coins.bits(self.out_len);
        self.memo.insert(x.clone(), y.clone());
        Ok(y)
    }
}

pub type SharedRandomFunction = Arc<Mutex<RandomFunctionOracle>>;

impl FunctionOracle for SharedRandomFunction {
    fn in_len(&self) -> usize {
        self.lock().expect("random function poisoned").in_len
    }

    fn out_len(&self) -> usize {
        self.lock().expect("random function poisoned").out_len
    }

    fn query(&mut self, x: &BitString, coins: &mut dyn CoinSource) -> Result<BitString> {
        self.lock().expect("random function poisoned").query(x, coins)
    }
}

/// A random function with its own seeded coin stream, so equal seeds give
/// equal functions.
#[derive(Clone, Debug)]
pub struct SeededRandomFunction {
    table: RandomFunctionOracle,
    rng: DetRng,
}

impl SeededRandomFunction {
    pub fn eval(&mut self, x: &BitString) -> Result<BitString> {
        self.table.query(x, &mut self.rng)
    }
}

impl FunctionOracle for SeededRandomFunction {
    fn in_len(&self) -> usize {
        self.table.in_len
    }

    fn out_len(&self) -> usize {
        self.table.out_len
    }

    fn query(&mut self, x: &BitString, _coins: &mut dyn CoinSource) -> Result<BitString> {
        self.eval(x)
    }
}

pub fn random_function_oracle(in_len: usize, out_len: usize, rng: DetRng) -> SeededRandomFunction {
    SeededRandomFunction { table: RandomFunctionOracle::new(in_len, out_len), rng }
}
