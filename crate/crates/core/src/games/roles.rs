//! Role interfaces. Roles receive the joint state of every register they may
//! act on and return the post-state, so measurement back-action on registers
//! they leave alone (such as `F`) is kept. Roles must be deterministic given
//! their coins for exact enumeration to apply.

use super::oracles::OracleAccess;
use super::OUTPUT;
use crate::bits::BitString;
use crate::coins::CoinSource;
use crate::error::{Error, Result};
use crate::quantum::{measure_computational, DensityMatrix};
use crate::schemes::{Ciphertext, PublicKey};

/// A message generator's output: a state with register `M` and optionally
/// `E` and `F`, plus the classical outcomes of the measurements that
/// prepared it.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratedMessage {
    pub state: DensityMatrix,
    pub transcript: Option<BitString>,
}

impl GeneratedMessage {
    pub fn new(state: DensityMatrix) -> Self {
        GeneratedMessage { state, transcript: None }
    }

    pub fn with_transcript(state: DensityMatrix, transcript: BitString) -> Self {
        GeneratedMessage { state, transcript: Some(transcript) }
    }
}

/// A distinguisher's classical answer and the state left behind.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub bits: BitString,
    pub state: DensityMatrix,
}

impl Verdict {
    pub fn bit(b: bool, state: DensityMatrix) -> Self {
        Verdict { bits: BitString::new(vec![b]), state }
    }

    /// Whether the answer is the single bit `b`.
    pub fn says(&self, b: bool) -> bool {
        self.bits.len() == 1 && self.bits.get(0) == b
    }
}

pub trait MessageGenerator: Send + Sync {
    fn id(&self) -> &str;

    /// `pk` is [`PublicKey::None`] in the symmetric setting.
    fn generate(
        &self,
        pk: &PublicKey,
        oracles: &mut dyn OracleAccess,
        coins: &mut dyn CoinSource,
    ) -> Result<GeneratedMessage>;
}

/// The distinguisher of the indistinguishability games. It sees the tag and
/// every register of the payload.
pub trait Distinguisher: Send + Sync {
    fn id(&self) -> &str;

    fn distinguish(
        &self,
        pk: &PublicKey,
        c: &Ciphertext,
        oracles: &mut dyn OracleAccess,
        coins: &mut dyn CoinSource,
    ) -> Result<Verdict>;
}

/// The adversary of the semantic games. The payload may carry `F`, which the
/// adversary must leave alone; its post-state holds its output in register
/// [`OUTPUT`] next to `F`.
pub trait Adversary: Send + Sync {
    fn id(&self) -> &str;

    fn attack(
        &self,
        pk: &PublicKey,
        c: &Ciphertext,
        oracles: &mut dyn OracleAccess,
        coins: &mut dyn CoinSource,
    ) -> Result<DensityMatrix>;
}

/// The simulator of the semantic games: like [`Adversary`] but handed the
/// side information (`E`, and `F` to be left alone) instead of a ciphertext.
pub trait Simulator: Send + Sync {
    fn id(&self) -> &str;

    fn simulate(
        &self,
        pk: &PublicKey,
        side: &DensityMatrix,
        oracles: &mut dyn OracleAccess,
        coins: &mut dyn CoinSource,
    ) -> Result<DensityMatrix>;
}

/// The distinguisher of the SEM game, handed the adversary's or simulator's
/// post-state (register [`OUTPUT`] and `F`).
pub trait SemDistinguisher: Send + Sync {
    fn id(&self) -> &str;

    fn judge(
        &self,
        pk: &PublicKey,
        state: &DensityMatrix,
        oracles: &mut dyn OracleAccess,
        coins: &mut dyn CoinSource,
    ) -> Result<bool>;
}

/// The classical function paired with a message generator in SEM3.
pub trait TranscriptFunction: Send + Sync {
    fn id(&self) -> &str;

    /// Bits of transcript the function reads.
    fn input_len(&self, pk: &PublicKey) -> usize;

    fn eval(&self, pk: &PublicKey, transcript: &BitString) -> Result<BitString>;
}

/// Measures register [`OUTPUT`] of a role's post-state.
pub fn read_output(state: &DensityMatrix, coins: &mut dyn CoinSource) -> Result<BitString> {
    if !state.has_register(OUTPUT) {
        return Err(Error::UnknownSubsystem(format!("role output lacks register `{OUTPUT}`")));
    }
    Ok(measure_computational(state, OUTPUT, coins)?.0)
}

/// Keeps only the registers in `keep` that exist in `state`.
pub(crate) fn keep_present(state: &DensityMatrix, keep: &[&str]) -> Result<DensityMatrix> {
    let present: Vec<&str> = keep.iter().copied().filter(|r| state.has_register(r)).collect();
    if present.is_empty() {
        return Ok(DensityMatrix::scalar());
    }
    state.reduce_to(&present)
}
