//! Quantum encryption schemes built from pseudorandom functions and trapdoor
//! permutations, the indistinguishability and semantic-security games that
//! define their security, and the reductions between those games, all
//! executable at small parameters.
//!
//! Every randomized step draws from a [`coins::CoinSource`], so each game can
//! be evaluated either by Monte-Carlo sampling or by exact enumeration of all
//! coin sequences.

pub mod bits;
pub mod classical;
pub mod coins;
pub mod error;
pub mod estimate;
pub mod games;
pub mod quantum;
pub mod schemes;

pub use bits::BitString;
pub use coins::{CoinSource, DetRng};
pub use error::{Error, Result};
