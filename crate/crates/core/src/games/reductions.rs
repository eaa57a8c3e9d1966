//! Reductions between the games, run as code: each takes the roles of one
//! game and builds roles for another.

use serde::{Deserialize, Serialize};

use super::battery::{EqualityDistinguisher, LastBit, UniformSimulator};
use super::experiments::{run_ind, run_ind_prime, run_sem, run_sem2, run_sem3, zero_challenge, Sanitized};
use super::oracles::{FunctionOracles, OracleAccess};
use super::policy::{OraclePolicy, Phase};
use super::roles::{
    keep_present, Adversary, Distinguisher, GeneratedMessage, MessageGenerator, SemDistinguisher, Simulator,
    Verdict,
};
use super::{MESSAGE, OUTPUT, TARGET};
use crate::bits::BitString;
use crate::classical::{FunctionOracle, Prf, PrfDistinguisher, Prg, prf_distinguisher_advantage};
use crate::coins::CoinSource;
use crate::error::{Error, Result};
use crate::estimate::{estimate_advantage, AdvantageEstimate, GameConfig, ProbabilityEstimate};
use crate::quantum::{apply_pauli, DensityMatrix, PauliKey};
use crate::schemes::{Ciphertext, Flavor, PrfSke, PublicKey, QuantumEncryptionScheme};

/// Register names of the pair of states compared by the padding reduction.
pub const PAD_REGISTER: &str = "A";
pub const REST_REGISTER: &str = "B";

/// How the simulator built from a SEM adversary obtains its encryption of
/// `|0><0|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimulatorMode {
    /// Encrypts under the public key.
    PublicKey,
    /// Generates a fresh key of its own.
    OwnKey,
    /// Calls its encryption oracle.
    EncOracle,
}

impl SimulatorMode {
    pub fn for_setting(flavor: Flavor, policy: &OraclePolicy) -> Self {
        match flavor {
            Flavor::Public => SimulatorMode::PublicKey,
            Flavor::Symmetric if policy.grant(Phase::PostChallenge, flavor).allows_enc() => SimulatorMode::EncOracle,
            Flavor::Symmetric => SimulatorMode::OwnKey,
        }
    }
}

/// Runs the adversary on an encryption of `|0><0|_M (x) rho_EF` and outputs
/// whatever it outputs.
pub struct IndToSemSimulator<'a, S: QuantumEncryptionScheme> {
    scheme: &'a S,
    adversary: &'a dyn Adversary,
    mode: SimulatorMode,
}

pub fn reduction_ind_to_sem<'a, S: QuantumEncryptionScheme>(
    scheme: &'a S,
    adversary: &'a dyn Adversary,
    mode: SimulatorMode,
) -> IndToSemSimulator<'a, S> {
    IndToSemSimulator { scheme, adversary, mode }
}

impl<S: QuantumEncryptionScheme> IndToSemSimulator<'_, S> {
    pub fn mode(&self) -> SimulatorMode {
        self.mode
    }
}

impl<S: QuantumEncryptionScheme> Simulator for IndToSemSimulator<'_, S> {
    fn id(&self) -> &str {
        "ind-to-sem"
    }

    fn simulate(
        &self,
        pk: &PublicKey,
        side: &DensityMatrix,
        oracles: &mut dyn OracleAccess,
        coins: &mut dyn CoinSource,
    ) -> Result<DensityMatrix> {
        let plain = DensityMatrix::zero(MESSAGE, self.scheme.plaintext_qubits()).tensor(side)?;
        let c = match self.mode {
            SimulatorMode::PublicKey => {
                let ek = self.scheme.encryption_key_from_public(pk)?;
                self.scheme.encrypt_register(&ek, &plain, MESSAGE, coins)?
            }
            SimulatorMode::OwnKey => {
                if *pk != PublicKey::None {
                    return Err(Error::Mode("own-key simulation is for the symmetric setting".into()));
                }
                let (ek, _) = self.scheme.keygen(coins)?;
                self.scheme.encrypt_register(&ek, &plain, MESSAGE, coins)?
            }
            SimulatorMode::EncOracle => oracles.encrypt(&plain, MESSAGE, coins)?,
        };
        self.adversary.attack(pk, &c, oracles, coins)
    }
}

/// The IND distinguisher "run `A`, then `D` on its output" obtained from a
/// SEM adversary and distinguisher.
pub struct SemAsInd<'a> {
    pub adversary: &'a dyn Adversary,
    pub distinguisher: &'a dyn SemDistinguisher,
}

impl Distinguisher for SemAsInd<'_> {
    fn id(&self) -> &str {
        "sem-as-ind"
    }

    fn distinguish(
        &self,
        pk: &PublicKey,
        c: &Ciphertext,
        oracles: &mut dyn OracleAccess,
        coins: &mut dyn CoinSource,
    ) -> Result<Verdict> {
        let out = self.adversary.attack(pk, c, oracles, coins)?;
        let b = self.distinguisher.judge(pk, &out, oracles, coins)?;
        Ok(Verdict::bit(b, out))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndToSemReport {
    pub mode: SimulatorMode,
    /// Advantage of the composed IND distinguisher.
    pub ind: AdvantageEstimate,
    /// SEM advantage against the constructed simulator.
    pub sem: AdvantageEstimate,
    /// `ind.advantage + ind.ci_halfwidth + sem.ci_halfwidth`.
    pub bound: f64,
    pub holds: bool,
}

/// Builds the simulator from `adv` and compares its SEM advantage with the
/// IND advantage of `(mgen, D o A)`.
pub fn ind_to_sem_pipeline<S: QuantumEncryptionScheme>(
    scheme: &S,
    mgen: &dyn MessageGenerator,
    adv: &dyn Adversary,
    dist: &dyn SemDistinguisher,
    policy: OraclePolicy,
    config: &GameConfig,
) -> Result<IndToSemReport> {
    let mode = SimulatorMode::for_setting(scheme.flavor(), &policy);
    let sim = reduction_ind_to_sem(scheme, adv, mode);
    let sem = run_sem(scheme, mgen, adv, &sim, dist, policy, config)?;
    let ind = run_ind(scheme, mgen, &SemAsInd { adversary: adv, distinguisher: dist }, policy, config)?;
    let bound = ind.advantage + ind.ci_halfwidth + sem.ci_halfwidth;
    let tol = if sem.exact && ind.exact { 1e-12 } else { 0.0 };
    Ok(IndToSemReport { mode, holds: sem.advantage <= bound + tol, ind, sem, bound })
}

/// Runs an inner generator, draws a hidden bit `b` and keeps the message when
/// `b == real_bit`, replacing `M` by `|0...0>` otherwise. The transcript is
/// the inner one followed by `b`; with `append_target` the bit is also
/// written to `F`.
pub struct HiddenBitMessage<'a> {
    pub mgen: &'a dyn MessageGenerator,
    pub real_bit: bool,
    pub append_target: bool,
}

impl MessageGenerator for HiddenBitMessage<'_> {
    fn id(&self) -> &str {
        "hidden-bit"
    }

    fn generate(
        &self,
        pk: &PublicKey,
        oracles: &mut dyn OracleAccess,
        coins: &mut dyn CoinSource,
    ) -> Result<GeneratedMessage> {
        let msg = self.mgen.generate(pk, oracles, coins)?;
        let b = coins.bit();
        let mut state = if b == self.real_bit { msg.state } else { zero_challenge(&msg.state)? };
        if self.append_target {
            state = state.tensor(&DensityMatrix::basis(TARGET, &BitString::new(vec![b])))?;
        }
        let mut x = msg.transcript.unwrap_or_default();
        x.push(b);
        Ok(GeneratedMessage::with_transcript(state, x))
    }
}

/// The SEM adversary that runs an IND distinguisher and outputs its bit
/// (flipped with `flip`).
pub struct DistinguisherAdversary<'a> {
    pub dist: &'a dyn Distinguisher,
    pub flip: bool,
}

impl Adversary for DistinguisherAdversary<'_> {
    fn id(&self) -> &str {
        if self.flip {
            "distinguisher-flipped"
        } else {
            "distinguisher"
        }
    }

    fn attack(
        &self,
        pk: &PublicKey,
        c: &Ciphertext,
        oracles: &mut dyn OracleAccess,
        coins: &mut dyn CoinSource,
    ) -> Result<DensityMatrix> {
        let v = Sanitized(self.dist).distinguish(pk, c, oracles, coins)?;
        let bit = BitString::new(vec![v.says(true) ^ self.flip]);
        DensityMatrix::basis(OUTPUT, &bit).tensor(&keep_present(&v.state, &[TARGET])?)
    }
}

/// SEM roles built from an IND pair: `M'` puts the message with `F = 0` or
/// the zero message with `F = 1`, the adversaries output `D`'s bit or its
/// negation, and the distinguisher compares that bit with `F`.
pub struct SemFromInd<'a> {
    pub mgen: HiddenBitMessage<'a>,
    pub adversary: DistinguisherAdversary<'a>,
    pub flipped: DistinguisherAdversary<'a>,
    pub distinguisher: EqualityDistinguisher,
}

pub fn reduction_sem_to_ind<'a>(mgen: &'a dyn MessageGenerator, dist: &'a dyn Distinguisher) -> SemFromInd<'a> {
    SemFromInd {
        mgen: HiddenBitMessage { mgen, real_bit: false, append_target: true },
        adversary: DistinguisherAdversary { dist, flip: false },
        flipped: DistinguisherAdversary { dist, flip: true },
        distinguisher: EqualityDistinguisher,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonIdentity {
    pub ind: AdvantageEstimate,
    /// SEM run of `A` against a uniform one-bit guess.
    pub sem: AdvantageEstimate,
    /// SEM run of `A xor 1`.
    pub sem_flipped: AdvantageEstimate,
    /// `2 max(p_A - 1/2, p_{A xor 1} - 1/2)`.
    pub twice_max_excess: f64,
    /// `|ind.advantage - twice_max_excess|`.
    pub deviation: f64,
}

/// IND advantage against twice the best SEM success of `A`, `A xor 1` over
/// the one-half any simulator achieves.
pub fn sem_to_ind_identity_check<S: QuantumEncryptionScheme>(
    scheme: &S,
    mgen: &dyn MessageGenerator,
    dist: &dyn Distinguisher,
    policy: OraclePolicy,
    config: &GameConfig,
) -> Result<EpsilonIdentity> {
    let roles = reduction_sem_to_ind(mgen, dist);
    let guess = UniformSimulator { bits: 1 };
    let ind = run_ind(scheme, mgen, &Sanitized(dist), policy, config)?;
    let sem = run_sem(scheme, &roles.mgen, &roles.adversary, &guess, &roles.distinguisher, policy, config)?;
    let sem_flipped = run_sem(scheme, &roles.mgen, &roles.flipped, &guess, &roles.distinguisher, policy, config)?;
    let twice_max_excess = 2.0 * (sem.p_real - 0.5).max(sem_flipped.p_real - 0.5);
    Ok(EpsilonIdentity { deviation: (ind.advantage - twice_max_excess).abs(), ind, sem, sem_flipped, twice_max_excess })
}

/// The SEM3 instance built from an IND' pair: the hidden-bit generator with
/// `f(xb) = b` and `A = D`.
pub struct Sem3FromIndPrime<'a> {
    pub mgen: HiddenBitMessage<'a>,
    pub f: LastBit,
    pub adversary: DistinguisherAdversary<'a>,
}

/// `transcript_len` is the length of `mgen`'s own transcript.
pub fn sem3_from_ind_prime<'a>(
    mgen: &'a dyn MessageGenerator,
    dist: &'a dyn Distinguisher,
    transcript_len: usize,
) -> Sem3FromIndPrime<'a> {
    Sem3FromIndPrime {
        mgen: HiddenBitMessage { mgen, real_bit: true, append_target: false },
        f: LastBit { input_len: transcript_len + 1 },
        adversary: DistinguisherAdversary { dist, flip: false },
    }
}

/// Success probabilities of one IND' witness carried around the cycle
/// IND' -> SEM3 -> SEM2 -> SEM, plus its IND advantage.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationChain {
    pub ind_prime: ProbabilityEstimate,
    pub ind: AdvantageEstimate,
    pub sem3: AdvantageEstimate,
    pub sem2: AdvantageEstimate,
    pub sem: AdvantageEstimate,
}

impl RelationChain {
    /// Largest gap between the IND' success and the real-arm success of the
    /// SEM3, SEM2 and SEM runs built from it.
    pub fn real_arm_spread(&self) -> f64 {
        [self.sem3.p_real, self.sem2.p_real, self.sem.p_real]
            .iter()
            .map(|p| (p - self.ind_prime.p).abs())
            .fold(0.0, f64::max)
    }
}

/// Builds the SEM3 instance from `(mgen, dist)`, its SEM2 form (the
/// function value copied into `F`) and its SEM form (with an equality
/// distinguisher), and runs all of them with the simulator constructed from
/// the adversary.
pub fn relation_chain<S: QuantumEncryptionScheme>(
    scheme: &S,
    mgen: &dyn MessageGenerator,
    dist: &dyn Distinguisher,
    transcript_len: usize,
    policy: OraclePolicy,
    config: &GameConfig,
) -> Result<RelationChain> {
    let dist = Sanitized(dist);
    let sem3 = sem3_from_ind_prime(mgen, &dist, transcript_len);
    let sim = reduction_ind_to_sem(scheme, &sem3.adversary, SimulatorMode::for_setting(scheme.flavor(), &policy));
    let classical = super::battery::ClassicalTarget { mgen: &sem3.mgen, f: &sem3.f };
    Ok(RelationChain {
        ind_prime: run_ind_prime(scheme, mgen, &dist, policy, config)?,
        ind: run_ind(scheme, mgen, &dist, policy, config)?,
        sem3: run_sem3(scheme, &sem3.mgen, &sem3.f, &sem3.adversary, &sim, policy, config)?,
        sem2: run_sem2(scheme, &classical, &sem3.adversary, &sim, policy, config)?,
        sem: run_sem(scheme, &classical, &sem3.adversary, &sim, &EqualityDistinguisher, policy, config)?,
    })
}

/// `A_0`: plays the IND-CCA1 game of the PRF scheme against `(mgen, dist)`
/// with `Enc_phi` and `Dec_phi` simulated from its function oracle, and
/// answers 1 iff the distinguisher names the hidden bit.
pub struct Cca1ToPrf<'a> {
    mgen: &'a dyn MessageGenerator,
    dist: &'a dyn Distinguisher,
    qubits: usize,
    policy: OraclePolicy,
    budget: usize,
}

pub fn reduction_cca1_to_prf<'a>(
    mgen: &'a dyn MessageGenerator,
    dist: &'a dyn Distinguisher,
    qubits: usize,
    policy: OraclePolicy,
    budget: usize,
) -> Cca1ToPrf<'a> {
    Cca1ToPrf { mgen, dist, qubits, policy, budget }
}

impl PrfDistinguisher for Cca1ToPrf<'_> {
    fn run(&self, oracle: &mut dyn FunctionOracle, coins: &mut dyn CoinSource) -> Result<bool> {
        let pre = self.policy.grant(Phase::PreChallenge, Flavor::Symmetric);
        let post = self.policy.grant(Phase::PostChallenge, Flavor::Symmetric);
        let msg = {
            let mut oracles = FunctionOracles::new(oracle, self.qubits, pre, self.budget)?;
            self.mgen.generate(&PublicKey::None, &mut oracles, coins)?
        };
        let q = msg.state.register_qubits(MESSAGE)?;
        if q != self.qubits {
            return Err(Error::DimensionMismatch(format!("message has {q} qubits, scheme takes {}", self.qubits)));
        }
        let b = coins.bit();
        let plain = if b { msg.state } else { zero_challenge(&msg.state)? };
        let mut oracles = FunctionOracles::new(oracle, self.qubits, post, self.budget)?;
        let c = oracles.encrypt_challenge(&plain, MESSAGE, coins)?;
        Ok(self.dist.distinguish(&PublicKey::None, &c, &mut oracles, coins)?.says(b))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cca1ToPrfReport {
    /// Success of `(mgen, dist)` in the hidden-bit game against the scheme.
    pub game: ProbabilityEstimate,
    /// Advantage of `A_0` against the PRF.
    pub prf: AdvantageEstimate,
}

pub fn cca1_to_prf_pipeline<P: Prf + Clone>(
    prf: &P,
    mgen: &dyn MessageGenerator,
    dist: &dyn Distinguisher,
    policy: OraclePolicy,
    config: &GameConfig,
) -> Result<Cca1ToPrfReport> {
    let scheme = PrfSke::with_prf(prf.clone(), "prf-ske")?;
    let game = run_ind_prime(&scheme, mgen, dist, policy, config)?;
    let a0 = reduction_cca1_to_prf(mgen, dist, scheme.plaintext_qubits(), policy, config.budget);
    Ok(Cca1ToPrfReport { game, prf: prf_distinguisher_advantage(&a0, prf, config)? })
}

/// Guesses which of two states it holds; `true` names the first.
pub trait StateDistinguisher: Send + Sync {
    fn id(&self) -> &str;

    fn guess(&self, state: &DensityMatrix, coins: &mut dyn CoinSource) -> Result<bool>;
}

/// Measures `A` and names the first state iff the outcome is nonzero.
#[derive(Clone, Debug)]
pub struct MeasurePadRegister;

impl StateDistinguisher for MeasurePadRegister {
    fn id(&self) -> &str {
        "measure-a"
    }

    fn guess(&self, state: &DensityMatrix, coins: &mut dyn CoinSource) -> Result<bool> {
        Ok(!crate::quantum::measure_computational(state, PAD_REGISTER, coins)?.0.is_zero())
    }
}

/// Guesses with a fair coin.
#[derive(Clone, Debug)]
pub struct CoinStateGuess;

impl StateDistinguisher for CoinStateGuess {
    fn id(&self) -> &str {
        "coin"
    }

    fn guess(&self, _: &DensityMatrix, coins: &mut dyn CoinSource) -> Result<bool> {
        Ok(coins.bit())
    }
}

/// The two states `rho_AB` and `sigma_A (x) rho_B` compared by the padding reduction.
#[derive(Clone, Debug, PartialEq)]
pub struct StatePair {
    first: DensityMatrix,
    second: DensityMatrix,
}

impl StatePair {
    pub fn new(rho_ab: DensityMatrix, sigma_a: DensityMatrix) -> Result<Self> {
        let qa = rho_ab.register_qubits(PAD_REGISTER)?;
        if sigma_a.layout().len() != 1 || sigma_a.register_qubits(PAD_REGISTER)? != qa {
            return Err(Error::DimensionMismatch(format!("sigma must be a single {qa}-qubit register `A`")));
        }
        let rest = super::experiments::without(&rho_ab, PAD_REGISTER)?;
        let order: Vec<&str> = rho_ab.layout().iter().map(|s| s.name.as_str()).collect();
        let second = sigma_a.tensor(&rest)?.reorder(&order)?;
        Ok(StatePair { first: rho_ab, second })
    }

    pub fn first(&self) -> &DensityMatrix {
        &self.first
    }

    pub fn second(&self) -> &DensityMatrix {
        &self.second
    }

    pub fn pad_qubits(&self) -> usize {
        self.first.register_qubits(PAD_REGISTER).expect("checked at construction")
    }
}

/// Distinguishes a generator's output from uniform strings.
pub trait PrgDistinguisher: Send + Sync {
    fn run(&self, y: &BitString, coins: &mut dyn CoinSource) -> Result<bool>;
}

/// `D'`: on input `y`, pads one of the pair (chosen by a fair coin) with
/// `P_y` on `A` and answers 1 iff the state distinguisher names the case.
pub struct QotpToPrg<'a> {
    dist: &'a dyn StateDistinguisher,
    pair: StatePair,
}

pub fn reduction_qotp_to_prg(dist: &dyn StateDistinguisher, pair: StatePair) -> QotpToPrg<'_> {
    QotpToPrg { dist, pair }
}

impl PrgDistinguisher for QotpToPrg<'_> {
    fn run(&self, y: &BitString, coins: &mut dyn CoinSource) -> Result<bool> {
        let expected = 2 * self.pair.pad_qubits();
        if y.len() != expected {
            return Err(Error::LengthMismatch { expected, actual: y.len() });
        }
        let first = coins.bit();
        let state = if first { self.pair.first() } else { self.pair.second() };
        let padded = apply_pauli(&PauliKey::new(y.clone())?, state, PAD_REGISTER)?;
        Ok(self.dist.guess(&padded, coins)? == first)
    }
}

/// `|Pr[D(G(s)) = 1] - Pr[D(y) = 1]|` for seeds `s` from the generator's
/// seed distribution and uniform `y`.
pub fn prg_distinguisher_advantage(
    dist: &dyn PrgDistinguisher,
    prg: &dyn Prg,
    config: &GameConfig,
) -> Result<AdvantageEstimate> {
    estimate_advantage(
        config,
        |coins| {
            let s = prg.sample_seed(coins)?;
            dist.run(&prg.expand(&s)?, coins)
        },
        |coins| dist.run(&coins.bits(prg.out_len()), coins),
    )
}
