//! Executable security games (IND, IND', IND-CPA, IND-CCA1, SEM, SEM2,
//! SEM3), the roles that play them, oracle policies and the reductions
//! between games.
//!
//! Registers are identified by name: the plaintext is [`MESSAGE`], side
//! information [`SIDE`], the semantic target [`TARGET`] and role outputs
//! [`OUTPUT`].

pub mod battery;
mod experiments;
mod oracles;
mod policy;
pub mod reductions;
mod roles;

#[cfg(test)]
mod tests;

pub use experiments::{
    classical_target, ind_prime_ind_identity_check, run_ind, run_ind_prime, run_sem, run_sem2, run_sem3,
    zero_challenge, GameKind, IndPrimeIdentity, Sanitized,
};
pub use oracles::{FunctionOracles, NoOracles, OracleAccess, SchemeOracles};
pub use policy::{Attack, Grant, OraclePolicy, Phase};
pub use roles::{
    read_output, Adversary, Distinguisher, GeneratedMessage, MessageGenerator, SemDistinguisher, Simulator,
    TranscriptFunction, Verdict,
};

pub const MESSAGE: &str = "M";
pub const SIDE: &str = "E";
pub const TARGET: &str = "F";
pub const OUTPUT: &str = "Y";
