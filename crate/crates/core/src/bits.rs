//! Fixed-length bitstrings, most significant bit first.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        BitString(bits)
    }

    pub fn zeros(len: usize) -> Self {
        BitString(vec![false; len])
    }

    pub fn ones(len: usize) -> Self {
        BitString(vec![true; len])
    }

    /// The `len` low bits of `value`, most significant first.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= 64, "bitstring of {len} bits does not fit in u64");
        BitString((0..len).rev().map(|i| (value >> i) & 1 == 1).collect())
    }

    pub fn to_u64(&self) -> u64 {
        assert!(self.0.len() <= 64, "bitstring of {} bits does not fit in u64", self.0.len());
        self.0.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|b| !b)
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        BitString(v)
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    pub fn slice(&self, start: usize, end: usize) -> BitString {
        BitString(self.0[start..end].to_vec())
    }

    /// Bitwise xor; both operands must have the same length.
    pub fn xor(&self, other: &BitString) -> Result<BitString> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch { expected: self.len(), actual: other.len() });
        }
        Ok(BitString(self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect()))
    }

    pub fn parity(&self) -> bool {
        self.0.iter().fold(false, |acc, &b| acc ^ b)
    }

    /// Packs into bytes, most significant bit first, zero-padded at the end.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.0
            .chunks(8)
            .map(|chunk| {
                chunk
                    .iter()
                    .enumerate()
                    .fold(0u8, |acc, (i, &b)| acc | ((b as u8) << (7 - i)))
            })
            .collect()
    }

    pub fn from_bytes(bytes: &[u8], len: usize) -> Result<BitString> {
        if bytes.len() != len.div_ceil(8) {
            return Err(Error::LengthMismatch { expected: len.div_ceil(8) * 8, actual: bytes.len() * 8 });
        }
        Ok(BitString((0..len).map(|i| (bytes[i / 8] >> (7 - i % 8)) & 1 == 1).collect()))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::MalformedKey(format!("invalid bit character `{other}`"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString)
    }
}

impl From<Vec<bool>> for BitString {
    fn from(v: Vec<bool>) -> Self {
        BitString(v)
    }
}

impl Serialize for BitString {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn u64_roundtrip_is_msb_first() {
        let b = BitString::from_u64(0b1011, 6);
        assert_eq!(b.to_string(), "001011");
        assert_eq!(b.to_u64(), 0b1011);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("01x".parse::<BitString>().is_err());
        assert_eq!("".parse::<BitString>().unwrap().len(), 0);
    }

    #[test]
    fn xor_requires_equal_lengths() {
        let a: BitString = "0110".parse().unwrap();
        let b: BitString = "1100".parse().unwrap();
        assert_eq!(a.xor(&b).unwrap().to_string(), "1010");
        assert!(a.xor(&"1".parse().unwrap()).is_err());
    }

    proptest! {
        #[test]
        fn byte_packing_roundtrips(bits in proptest::collection::vec(any::<bool>(), 0..40)) {
            let b = BitString::new(bits);
            let back = BitString::from_bytes(&b.to_bytes(), b.len()).unwrap();
            prop_assert_eq!(back, b);
        }
    }
}
