use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schemes::Flavor;

/// Oracles a role may call.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Grant {
    None,
    Enc,
    EncDec,
}

impl Grant {
    pub fn allows_enc(self) -> bool {
        self >= Grant::Enc
    }

    pub fn allows_dec(self) -> bool {
        self == Grant::EncDec
    }
}

/// Before the challenge only the message generator runs; every other role
/// runs after it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    PreChallenge,
    PostChallenge,
}

/// The attack model of a game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Attack {
    Plain,
    Cpa,
    Cca1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OraclePolicy {
    pre_challenge: Grant,
    post_challenge: Grant,
}

impl OraclePolicy {
    /// Decryption after the challenge is never granted.
    pub fn new(pre_challenge: Grant, post_challenge: Grant) -> Result<Self> {
        if post_challenge.allows_dec() {
            return Err(Error::PolicyViolation("decryption oracle after the challenge".into()));
        }
        Ok(OraclePolicy { pre_challenge, post_challenge })
    }

    pub fn none() -> Self {
        OraclePolicy { pre_challenge: Grant::None, post_challenge: Grant::None }
    }

    pub fn cpa() -> Self {
        OraclePolicy { pre_challenge: Grant::Enc, post_challenge: Grant::Enc }
    }

    pub fn cca1() -> Self {
        OraclePolicy { pre_challenge: Grant::EncDec, post_challenge: Grant::Enc }
    }

    pub fn for_attack(attack: Attack) -> Self {
        match attack {
            Attack::Plain => OraclePolicy::none(),
            Attack::Cpa => OraclePolicy::cpa(),
            Attack::Cca1 => OraclePolicy::cca1(),
        }
    }

    /// The grant in force during `phase`. Holding the public key lets any
    /// role encrypt, so public-key schemes always grant encryption.
    pub fn grant(&self, phase: Phase, flavor: Flavor) -> Grant {
        let g = match phase {
            Phase::PreChallenge => self.pre_challenge,
            Phase::PostChallenge => self.post_challenge,
        };
        match flavor {
            Flavor::Public => g.max(Grant::Enc),
            Flavor::Symmetric => g,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn post_challenge_decryption_is_refused() {
        assert!(matches!(OraclePolicy::new(Grant::EncDec, Grant::EncDec), Err(Error::PolicyViolation(_))));
        assert!(OraclePolicy::new(Grant::EncDec, Grant::Enc).is_ok());
    }

    #[test]
    fn grants_per_phase() {
        let p = OraclePolicy::cca1();
        assert_eq!(p.grant(Phase::PreChallenge, Flavor::Symmetric), Grant::EncDec);
        assert_eq!(p.grant(Phase::PostChallenge, Flavor::Symmetric), Grant::Enc);
        assert_eq!(OraclePolicy::none().grant(Phase::PostChallenge, Flavor::Symmetric), Grant::None);
        assert_eq!(OraclePolicy::none().grant(Phase::PreChallenge, Flavor::Public), Grant::Enc);
        assert_eq!(OraclePolicy::cca1().grant(Phase::PreChallenge, Flavor::Public), Grant::EncDec);
    }
}
