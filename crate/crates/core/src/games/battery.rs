//! Concrete roles: broken-scheme witnesses, oracle probes and trivial
//! baselines.

use super::oracles::OracleAccess;
use super::roles::{
    keep_present, read_output, Adversary, Distinguisher, GeneratedMessage, MessageGenerator, SemDistinguisher,
    Simulator, TranscriptFunction, Verdict,
};
use super::{MESSAGE, OUTPUT, SIDE, TARGET};
use crate::bits::BitString;
use crate::coins::CoinSource;
use crate::error::{Error, Result};
use crate::quantum::{measure_computational, DensityMatrix};
use crate::schemes::{Ciphertext, PublicKey};

/// Runs an oracle call, treating a refused grant as "not available".
fn if_granted<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::PolicyViolation(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// `|1...1>_M`; the transcript is the message itself.
#[derive(Clone, Debug)]
pub struct OnesMessage {
    pub qubits: usize,
}

impl MessageGenerator for OnesMessage {
    fn id(&self) -> &str {
        "basis-ones"
    }

    fn generate(&self, _: &PublicKey, _: &mut dyn OracleAccess, _: &mut dyn CoinSource) -> Result<GeneratedMessage> {
        let x = BitString::ones(self.qubits);
        Ok(GeneratedMessage::with_transcript(DensityMatrix::basis(MESSAGE, &x), x))
    }
}

/// `|x>_M` for uniform `x`, prepared by measuring `|+>^n`; the transcript is
/// `x`.
#[derive(Clone, Debug)]
pub struct RandomBasisMessage {
    pub qubits: usize,
}

impl MessageGenerator for RandomBasisMessage {
    fn id(&self) -> &str {
        "random-basis"
    }

    fn generate(&self, _: &PublicKey, _: &mut dyn OracleAccess, coins: &mut dyn CoinSource) -> Result<GeneratedMessage> {
        let x = coins.bits(self.qubits);
        Ok(GeneratedMessage::with_transcript(DensityMatrix::basis(MESSAGE, &x), x))
    }
}

/// `M` maximally entangled with `E`; no measurements, empty transcript.
#[derive(Clone, Debug)]
pub struct BellMessage {
    pub qubits: usize,
}

impl MessageGenerator for BellMessage {
    fn id(&self) -> &str {
        "bell"
    }

    fn generate(&self, _: &PublicKey, _: &mut dyn OracleAccess, _: &mut dyn CoinSource) -> Result<GeneratedMessage> {
        let state = DensityMatrix::maximally_entangled(MESSAGE, SIDE, self.qubits)?;
        Ok(GeneratedMessage::with_transcript(state, BitString::default()))
    }
}

/// `|x>_M (x) |x>_E` for uniform `x`, after encrypting `|x>` through the
/// encryption oracle and decrypting the result through the decryption
/// oracle, whichever are granted. `E` holds the measured decryption, which
/// equals `x` when decryption is available.
#[derive(Clone, Debug)]
pub struct OracleProbeMessage {
    pub qubits: usize,
}

impl MessageGenerator for OracleProbeMessage {
    fn id(&self) -> &str {
        "oracle-probe"
    }

    fn generate(
        &self,
        _: &PublicKey,
        oracles: &mut dyn OracleAccess,
        coins: &mut dyn CoinSource,
    ) -> Result<GeneratedMessage> {
        let x = coins.bits(self.qubits);
        let m = DensityMatrix::basis(MESSAGE, &x);
        let mut copy = x.clone();
        if let Some(c) = if_granted(oracles.encrypt(&m, MESSAGE, coins))? {
            if let Some(plain) = if_granted(oracles.decrypt(&c, coins))? {
                copy = measure_computational(&plain, MESSAGE, coins)?.0;
            }
        }
        let state = m.tensor(&DensityMatrix::basis(SIDE, &copy))?;
        Ok(GeneratedMessage::with_transcript(state, x))
    }
}

/// Encrypts `|0...0>` through the oracle and measures the payload, learning
/// the X part `p` of that pad. Emits `|1...1>_M (x) |p>_E`.
#[derive(Clone, Debug)]
pub struct PadReuseMessage {
    pub qubits: usize,
}

impl MessageGenerator for PadReuseMessage {
    fn id(&self) -> &str {
        "pad-reuse"
    }

    fn generate(
        &self,
        _: &PublicKey,
        oracles: &mut dyn OracleAccess,
        coins: &mut dyn CoinSource,
    ) -> Result<GeneratedMessage> {
        let c = oracles.encrypt(&DensityMatrix::zero(MESSAGE, self.qubits), MESSAGE, coins)?;
        let (p, _) = measure_computational(&c.payload, MESSAGE, coins)?;
        let state = DensityMatrix::basis(MESSAGE, &BitString::ones(self.qubits)).tensor(&DensityMatrix::basis(SIDE, &p))?;
        Ok(GeneratedMessage::with_transcript(state, p))
    }
}

/// Wraps a generator, appending `F = |f(x)>` for its transcript `x`.
pub struct ClassicalTarget<'a> {
    pub mgen: &'a dyn MessageGenerator,
    pub f: &'a dyn TranscriptFunction,
}

impl MessageGenerator for ClassicalTarget<'_> {
    fn id(&self) -> &str {
        "classical-target"
    }

    fn generate(
        &self,
        pk: &PublicKey,
        oracles: &mut dyn OracleAccess,
        coins: &mut dyn CoinSource,
    ) -> Result<GeneratedMessage> {
        let msg = self.mgen.generate(pk, oracles, coins)?;
        let x = msg.transcript.clone().ok_or_else(|| Error::Mode("generator declared no transcript".into()))?;
        let expected = self.f.input_len(pk);
        if x.len() != expected {
            return Err(Error::LengthMismatch { expected, actual: x.len() });
        }
        let y = self.f.eval(pk, &x)?;
        let state = msg.state.tensor(&DensityMatrix::basis(TARGET, &y))?;
        Ok(GeneratedMessage { state, transcript: msg.transcript })
    }
}

/// Always answers `b`.
#[derive(Clone, Debug)]
pub struct ConstantGuess(pub bool);

impl Distinguisher for ConstantGuess {
    fn id(&self) -> &str {
        if self.0 {
            "const-1"
        } else {
            "const-0"
        }
    }

    fn distinguish(
        &self,
        _: &PublicKey,
        c: &Ciphertext,
        _: &mut dyn OracleAccess,
        _: &mut dyn CoinSource,
    ) -> Result<Verdict> {
        Ok(Verdict::bit(self.0, c.payload.clone()))
    }
}

/// Answers with a fair coin.
#[derive(Clone, Debug)]
pub struct CoinGuess;

impl Distinguisher for CoinGuess {
    fn id(&self) -> &str {
        "coin"
    }

    fn distinguish(
        &self,
        _: &PublicKey,
        c: &Ciphertext,
        _: &mut dyn OracleAccess,
        coins: &mut dyn CoinSource,
    ) -> Result<Verdict> {
        Ok(Verdict::bit(coins.bit(), c.payload.clone()))
    }
}

/// Measures the payload register and answers 1 iff the outcome is nonzero.
/// With `probe` it first encrypts `|0...0>` through its oracle when granted.
#[derive(Clone, Debug)]
pub struct MeasureMessage {
    pub probe: bool,
}

impl Distinguisher for MeasureMessage {
    fn id(&self) -> &str {
        if self.probe {
            "probe-measure-m"
        } else {
            "measure-m"
        }
    }

    fn distinguish(
        &self,
        _: &PublicKey,
        c: &Ciphertext,
        oracles: &mut dyn OracleAccess,
        coins: &mut dyn CoinSource,
    ) -> Result<Verdict> {
        if self.probe {
            let q = c.payload.register_qubits(&c.register)?;
            if_granted(oracles.encrypt(&DensityMatrix::zero(MESSAGE, q), MESSAGE, coins))?;
        }
        let (m, post) = measure_computational(&c.payload, &c.register, coins)?;
        Ok(Verdict::bit(!m.is_zero(), post))
    }
}

/// Measures the payload and `E` and answers 1 iff they agree. Answers 0 when
/// `E` is missing or of another size.
#[derive(Clone, Debug)]
pub struct MatchMessageSide;

impl Distinguisher for MatchMessageSide {
    fn id(&self) -> &str {
        "match-me"
    }

    fn distinguish(
        &self,
        _: &PublicKey,
        c: &Ciphertext,
        _: &mut dyn OracleAccess,
        coins: &mut dyn CoinSource,
    ) -> Result<Verdict> {
        if !c.payload.has_register(SIDE) {
            return Ok(Verdict::bit(false, c.payload.clone()));
        }
        let (m, post) = measure_computational(&c.payload, &c.register, coins)?;
        let (e, post) = measure_computational(&post, SIDE, coins)?;
        Ok(Verdict::bit(m == e, post))
    }
}

/// Companion of [`PadReuseMessage`]: answers 1 iff `m xor p = 1...1`, where
/// `m` is the measured payload and `p` the pad bits stored in `E`.
#[derive(Clone, Debug)]
pub struct PadReuseDistinguisher;

impl Distinguisher for PadReuseDistinguisher {
    fn id(&self) -> &str {
        "pad-reuse"
    }

    fn distinguish(
        &self,
        _: &PublicKey,
        c: &Ciphertext,
        _: &mut dyn OracleAccess,
        coins: &mut dyn CoinSource,
    ) -> Result<Verdict> {
        let (m, post) = measure_computational(&c.payload, &c.register, coins)?;
        let (p, post) = measure_computational(&post, SIDE, coins)?;
        let hit = m.xor(&p).map(|d| d == BitString::ones(m.len())).unwrap_or(false);
        Ok(Verdict::bit(hit, post))
    }
}

/// `|out>_Y` next to whatever `F` is left in `post`.
fn output_with_target(out: &BitString, post: &DensityMatrix) -> Result<DensityMatrix> {
    DensityMatrix::basis(OUTPUT, out).tensor(&keep_present(post, &[TARGET])?)
}

/// Measures the payload register into the output register.
#[derive(Clone, Debug)]
pub struct MeasureAdversary;

impl Adversary for MeasureAdversary {
    fn id(&self) -> &str {
        "measure"
    }

    fn attack(
        &self,
        _: &PublicKey,
        c: &Ciphertext,
        _: &mut dyn OracleAccess,
        coins: &mut dyn CoinSource,
    ) -> Result<DensityMatrix> {
        let (m, post) = measure_computational(&c.payload, &c.register, coins)?;
        output_with_target(&m, &post)
    }
}

/// Ignores its input and outputs `|0...0>` on `bits` bits.
#[derive(Clone, Debug)]
pub struct BlindRole {
    pub bits: usize,
}

impl Adversary for BlindRole {
    fn id(&self) -> &str {
        "blind"
    }

    fn attack(&self, _: &PublicKey, c: &Ciphertext, _: &mut dyn OracleAccess, _: &mut dyn CoinSource) -> Result<DensityMatrix> {
        output_with_target(&BitString::zeros(self.bits), &c.payload)
    }
}

impl Simulator for BlindRole {
    fn id(&self) -> &str {
        "blind"
    }

    fn simulate(
        &self,
        _: &PublicKey,
        side: &DensityMatrix,
        _: &mut dyn OracleAccess,
        _: &mut dyn CoinSource,
    ) -> Result<DensityMatrix> {
        output_with_target(&BitString::zeros(self.bits), side)
    }
}

/// Outputs a uniform guess on `bits` bits.
#[derive(Clone, Debug)]
pub struct UniformSimulator {
    pub bits: usize,
}

impl Simulator for UniformSimulator {
    fn id(&self) -> &str {
        "uniform"
    }

    fn simulate(
        &self,
        _: &PublicKey,
        side: &DensityMatrix,
        _: &mut dyn OracleAccess,
        coins: &mut dyn CoinSource,
    ) -> Result<DensityMatrix> {
        output_with_target(&coins.bits(self.bits), side)
    }
}

/// Measures the output register and `F`; answers 1 iff the strings are
/// equal. A missing `F` or a length mismatch answers 0.
#[derive(Clone, Debug)]
pub struct EqualityDistinguisher;

impl SemDistinguisher for EqualityDistinguisher {
    fn id(&self) -> &str {
        "equality"
    }

    fn judge(
        &self,
        _: &PublicKey,
        state: &DensityMatrix,
        _: &mut dyn OracleAccess,
        coins: &mut dyn CoinSource,
    ) -> Result<bool> {
        if !state.has_register(TARGET) {
            return Ok(false);
        }
        let (y, post) = measure_computational(state, OUTPUT, coins)?;
        let (f, _) = measure_computational(&post, TARGET, coins)?;
        Ok(y == f)
    }
}

/// Answers 1 iff the measured output is nonzero, ignoring `F`.
#[derive(Clone, Debug)]
pub struct OutputNonzero;

impl SemDistinguisher for OutputNonzero {
    fn id(&self) -> &str {
        "output-nonzero"
    }

    fn judge(
        &self,
        _: &PublicKey,
        state: &DensityMatrix,
        _: &mut dyn OracleAccess,
        coins: &mut dyn CoinSource,
    ) -> Result<bool> {
        Ok(!read_output(state, coins)?.is_zero())
    }
}

/// `f(x) = x` on `len` bits.
#[derive(Clone, Debug)]
pub struct IdentityFunction {
    pub len: usize,
}

impl TranscriptFunction for IdentityFunction {
    fn id(&self) -> &str {
        "identity"
    }

    fn input_len(&self, _: &PublicKey) -> usize {
        self.len
    }

    fn eval(&self, _: &PublicKey, x: &BitString) -> Result<BitString> {
        Ok(x.clone())
    }
}

/// `f(x) = 0^out_len`.
#[derive(Clone, Debug)]
pub struct ConstantFunction {
    pub input_len: usize,
    pub out_len: usize,
}

impl TranscriptFunction for ConstantFunction {
    fn id(&self) -> &str {
        "const-0"
    }

    fn input_len(&self, _: &PublicKey) -> usize {
        self.input_len
    }

    fn eval(&self, _: &PublicKey, _: &BitString) -> Result<BitString> {
        Ok(BitString::zeros(self.out_len))
    }
}

/// `f(xb) = b`.
#[derive(Clone, Debug)]
pub struct LastBit {
    pub input_len: usize,
}

impl TranscriptFunction for LastBit {
    fn id(&self) -> &str {
        "last-bit"
    }

    fn input_len(&self, _: &PublicKey) -> usize {
        self.input_len
    }

    fn eval(&self, _: &PublicKey, x: &BitString) -> Result<BitString> {
        if x.is_empty() {
            return Err(Error::LengthMismatch { expected: 1, actual: 0 });
        }
        Ok(x.slice(x.len() - 1, x.len()))
    }
}
