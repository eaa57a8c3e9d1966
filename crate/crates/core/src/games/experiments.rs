use serde::{Deserialize, Serialize};

use super::oracles::SchemeOracles;
use super::policy::{OraclePolicy, Phase};
use super::roles::{
    read_output, Adversary, Distinguisher, GeneratedMessage, MessageGenerator, SemDistinguisher, Simulator,
    TranscriptFunction, Verdict,
};
use super::{MESSAGE, OUTPUT, TARGET};
use crate::bits::BitString;
use crate::coins::CoinSource;
use crate::error::{Error, Result};
use crate::estimate::{estimate_advantage, estimate_probability, AdvantageEstimate, GameConfig, ProbabilityEstimate};
use crate::quantum::{measurement_distribution, DensityMatrix};
use crate::schemes::{Ciphertext, PublicKey, QuantumEncryptionScheme};

/// Probability mass below which an `F` outcome is treated as absent.
const CLASSICAL_TOL: f64 = 1e-9;

/// The seven security games.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GameKind {
    Ind,
    IndPrime,
    IndCpa,
    IndCca1,
    Sem,
    Sem2,
    Sem3,
}

impl GameKind {
    pub const ALL: [GameKind; 7] = [
        GameKind::Ind,
        GameKind::IndPrime,
        GameKind::IndCpa,
        GameKind::IndCca1,
        GameKind::Sem,
        GameKind::Sem2,
        GameKind::Sem3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GameKind::Ind => "ind",
            GameKind::IndPrime => "ind-prime",
            GameKind::IndCpa => "ind-cpa",
            GameKind::IndCca1 => "ind-cca1",
            GameKind::Sem => "sem",
            GameKind::Sem2 => "sem2",
            GameKind::Sem3 => "sem3",
        }
    }

    pub fn parse(name: &str) -> Option<GameKind> {
        GameKind::ALL.into_iter().find(|g| g.name() == name)
    }

    /// The policy the game implies when none is chosen explicitly.
    pub fn default_policy(self) -> OraclePolicy {
        match self {
            GameKind::IndCpa => OraclePolicy::cpa(),
            GameKind::IndCca1 => OraclePolicy::cca1(),
            _ => OraclePolicy::none(),
        }
    }
}

/// One run of a game: keys, oracles and message generation.
struct Setup<'a, S: QuantumEncryptionScheme> {
    scheme: &'a S,
    policy: OraclePolicy,
    budget: usize,
}

struct Keys<S: QuantumEncryptionScheme> {
    ek: S::EncKey,
    dk: S::DecKey,
    pk: PublicKey,
}

impl<'a, S: QuantumEncryptionScheme> Setup<'a, S> {
    fn new(scheme: &'a S, policy: OraclePolicy, config: &GameConfig) -> Self {
        Setup { scheme, policy, budget: config.budget }
    }

    fn keys(&self, coins: &mut dyn CoinSource) -> Result<Keys<S>> {
        let (ek, dk) = self.scheme.keygen(coins)?;
        let pk = self.scheme.public_key(&ek);
        Ok(Keys { ek, dk, pk })
    }

    fn oracles<'k>(&'k self, keys: &'k Keys<S>, phase: Phase) -> SchemeOracles<'k, S> {
        let grant = self.policy.grant(phase, self.scheme.flavor());
        SchemeOracles::new(self.scheme, &keys.ek, &keys.dk, grant, self.budget)
    }

    fn message(
        &self,
        mgen: &dyn MessageGenerator,
        keys: &Keys<S>,
        coins: &mut dyn CoinSource,
    ) -> Result<GeneratedMessage> {
        let msg = mgen.generate(&keys.pk, &mut self.oracles(keys, Phase::PreChallenge), coins)?;
        self.scheme.check_register(&msg.state, MESSAGE)?;
        Ok(msg)
    }

    fn challenge(&self, keys: &Keys<S>, state: &DensityMatrix, coins: &mut dyn CoinSource) -> Result<Ciphertext> {
        self.scheme.encrypt_register(&keys.ek, state, MESSAGE, coins)
    }

    fn distinguish(
        &self,
        dist: &dyn Distinguisher,
        keys: &Keys<S>,
        c: &Ciphertext,
        coins: &mut dyn CoinSource,
    ) -> Result<Verdict> {
        dist.distinguish(&keys.pk, c, &mut self.oracles(keys, Phase::PostChallenge), coins)
    }
}

/// `|0...0><0...0|_M (x) rho_rest`: register `M` replaced by the all-zero
/// basis state.
pub fn zero_challenge(state: &DensityMatrix) -> Result<DensityMatrix> {
    let q = state.register_qubits(MESSAGE)?;
    state.replace_register(MESSAGE, &DensityMatrix::zero(MESSAGE, q))
}

/// `state` with register `name` traced out (the empty state if nothing is
/// left).
pub(crate) fn without(state: &DensityMatrix, name: &str) -> Result<DensityMatrix> {
    if state.layout().len() == 1 && state.has_register(name) {
        return Ok(DensityMatrix::scalar());
    }
    state.partial_trace(name)
}

fn ind_arm<S: QuantumEncryptionScheme>(
    setup: &Setup<'_, S>,
    mgen: &dyn MessageGenerator,
    dist: &dyn Distinguisher,
    zero: bool,
    coins: &mut dyn CoinSource,
) -> Result<bool> {
    let keys = setup.keys(coins)?;
    let msg = setup.message(mgen, &keys, coins)?;
    let plain = if zero { zero_challenge(&msg.state)? } else { msg.state };
    let c = setup.challenge(&keys, &plain, coins)?;
    Ok(setup.distinguish(dist, &keys, &c, coins)?.says(true))
}

/// `|Pr[D(Enc(rho_ME)) = 1] - Pr[D(Enc(|0><0|_M (x) rho_E)) = 1]|`.
pub fn run_ind<S: QuantumEncryptionScheme>(
    scheme: &S,
    mgen: &dyn MessageGenerator,
    dist: &dyn Distinguisher,
    policy: OraclePolicy,
    config: &GameConfig,
) -> Result<AdvantageEstimate> {
    let setup = Setup::new(scheme, policy, config);
    estimate_advantage(
        config,
        |c| ind_arm(&setup, mgen, dist, false, c),
        |c| ind_arm(&setup, mgen, dist, true, c),
    )
}

/// Probability that `D` names the hidden bit `b`, where `b = 1` selects the
/// generated message and `b = 0` the zero message. With `flipped` the event
/// is `D = b xor 1` instead.
fn ind_prime_probability<S: QuantumEncryptionScheme>(
    scheme: &S,
    mgen: &dyn MessageGenerator,
    dist: &dyn Distinguisher,
    policy: OraclePolicy,
    config: &GameConfig,
    flipped: bool,
) -> Result<ProbabilityEstimate> {
    let setup = Setup::new(scheme, policy, config);
    estimate_probability(config, 0, |coins| {
        let keys = setup.keys(coins)?;
        let msg = setup.message(mgen, &keys, coins)?;
        let b = coins.bit();
        let plain = if b { msg.state } else { zero_challenge(&msg.state)? };
        let c = setup.challenge(&keys, &plain, coins)?;
        Ok(setup.distinguish(dist, &keys, &c, coins)?.says(b ^ flipped))
    })
}

/// `Pr[D(Enc(rho^(b))) = b]` for a uniform hidden bit `b`.
pub fn run_ind_prime<S: QuantumEncryptionScheme>(
    scheme: &S,
    mgen: &dyn MessageGenerator,
    dist: &dyn Distinguisher,
    policy: OraclePolicy,
    config: &GameConfig,
) -> Result<ProbabilityEstimate> {
    ind_prime_probability(scheme, mgen, dist, policy, config, false)
}

/// Maps every answer other than a single bit to `0`.
pub struct Sanitized<'a>(pub &'a dyn Distinguisher);

impl Distinguisher for Sanitized<'_> {
    fn id(&self) -> &str {
        self.0.id()
    }

    fn distinguish(
        &self,
        pk: &PublicKey,
        c: &Ciphertext,
        oracles: &mut dyn super::OracleAccess,
        coins: &mut dyn CoinSource,
    ) -> Result<Verdict> {
        let v = self.0.distinguish(pk, c, oracles, coins)?;
        let b = v.says(true);
        Ok(Verdict::bit(b, v.state))
    }
}

/// Both sides of `Pr[D = b] - 1/2 = (Pr[D(real) = 1] - Pr[D(zero) = 1]) / 2`
/// and of its twin for `D = b xor 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndPrimeIdentity {
    pub p_real_one: f64,
    pub p_zero_one: f64,
    pub p_guess: f64,
    pub p_guess_flipped: f64,
    /// `p_guess - 1/2`.
    pub guess_side: f64,
    /// `(p_real_one - p_zero_one) / 2`.
    pub ind_side: f64,
    /// `p_guess_flipped - 1/2`.
    pub flipped_guess_side: f64,
    /// `(p_zero_one - p_real_one) / 2`.
    pub flipped_ind_side: f64,
    /// Largest gap between the two sides of either identity.
    pub deviation: f64,
    pub exact: bool,
}

pub fn ind_prime_ind_identity_check<S: QuantumEncryptionScheme>(
    scheme: &S,
    mgen: &dyn MessageGenerator,
    dist: &dyn Distinguisher,
    policy: OraclePolicy,
    config: &GameConfig,
) -> Result<IndPrimeIdentity> {
    let dist = Sanitized(dist);
    let ind = run_ind(scheme, mgen, &dist, policy, config)?;
    let guess = ind_prime_probability(scheme, mgen, &dist, policy, config, false)?;
    let flipped = ind_prime_probability(scheme, mgen, &dist, policy, config, true)?;
    let ind_side = (ind.p_real - ind.p_ideal) / 2.0;
    let guess_side = guess.p - 0.5;
    let flipped_guess_side = flipped.p - 0.5;
    Ok(IndPrimeIdentity {
        p_real_one: ind.p_real,
        p_zero_one: ind.p_ideal,
        p_guess: guess.p,
        p_guess_flipped: flipped.p,
        guess_side,
        ind_side,
        flipped_guess_side,
        flipped_ind_side: -ind_side,
        deviation: (guess_side - ind_side).abs().max((flipped_guess_side + ind_side).abs()),
        exact: ind.exact && guess.exact && flipped.exact,
    })
}

fn require_output(state: &DensityMatrix) -> Result<()> {
    if state.has_register(OUTPUT) {
        Ok(())
    } else {
        Err(Error::UnknownSubsystem(format!("role output lacks register `{OUTPUT}`")))
    }
}

/// `|Pr[D((A (x) 1_F)(Enc (x) 1_EF) rho_MEF) = 1] - Pr[D((S (x) 1_F) rho_EF) = 1]|`.
#[allow(clippy::too_many_arguments)]
pub fn run_sem<S: QuantumEncryptionScheme>(
    scheme: &S,
    mgen: &dyn MessageGenerator,
    adv: &dyn Adversary,
    sim: &dyn Simulator,
    dist: &dyn SemDistinguisher,
    policy: OraclePolicy,
    config: &GameConfig,
) -> Result<AdvantageEstimate> {
    let setup = Setup::new(scheme, policy, config);
    estimate_advantage(
        config,
        |coins| {
            let keys = setup.keys(coins)?;
            let msg = setup.message(mgen, &keys, coins)?;
            let c = setup.challenge(&keys, &msg.state, coins)?;
            let out = adv.attack(&keys.pk, &c, &mut setup.oracles(&keys, Phase::PostChallenge), coins)?;
            require_output(&out)?;
            dist.judge(&keys.pk, &out, &mut setup.oracles(&keys, Phase::PostChallenge), coins)
        },
        |coins| {
            let keys = setup.keys(coins)?;
            let msg = setup.message(mgen, &keys, coins)?;
            let side = without(&msg.state, MESSAGE)?;
            let out = sim.simulate(&keys.pk, &side, &mut setup.oracles(&keys, Phase::PostChallenge), coins)?;
            require_output(&out)?;
            dist.judge(&keys.pk, &out, &mut setup.oracles(&keys, Phase::PostChallenge), coins)
        },
    )
}

/// Splits a message-classical state `rho_ME (x) |y><y|_F` into `y` and
/// `rho_ME`.
pub fn classical_target(state: &DensityMatrix) -> Result<(BitString, DensityMatrix)> {
    if !state.has_register(TARGET) {
        return Err(Error::Mode(format!("message has no `{TARGET}` register")));
    }
    let dist = measurement_distribution(state, TARGET)?;
    let (y, p) = dist
        .iter()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(y, p)| (y.clone(), *p))
        .ok_or_else(|| Error::InvalidState("empty target distribution".into()))?;
    if p < 1.0 - CLASSICAL_TOL {
        return Err(Error::Mode(format!("register `{TARGET}` is not a classical basis state")));
    }
    Ok((y, without(state, TARGET)?))
}

fn guessed<S: QuantumEncryptionScheme>(
    setup: &Setup<'_, S>,
    keys: &Keys<S>,
    adv: &dyn Adversary,
    plain: &DensityMatrix,
    target: &BitString,
    coins: &mut dyn CoinSource,
) -> Result<bool> {
    let c = setup.challenge(keys, plain, coins)?;
    let out = adv.attack(&keys.pk, &c, &mut setup.oracles(keys, Phase::PostChallenge), coins)?;
    Ok(read_output(&out, coins)? == *target)
}

fn simulated<S: QuantumEncryptionScheme>(
    setup: &Setup<'_, S>,
    keys: &Keys<S>,
    sim: &dyn Simulator,
    plain: &DensityMatrix,
    target: &BitString,
    coins: &mut dyn CoinSource,
) -> Result<bool> {
    let side = without(plain, MESSAGE)?;
    let out = sim.simulate(&keys.pk, &side, &mut setup.oracles(keys, Phase::PostChallenge), coins)?;
    Ok(read_output(&out, coins)? == *target)
}

/// `|Pr[A(Enc(rho_ME)) = y] - Pr[S(rho_E) = y]|` for message-classical
/// generators. Outputs are measured; a length mismatch counts as failure.
pub fn run_sem2<S: QuantumEncryptionScheme>(
    scheme: &S,
    mgen: &dyn MessageGenerator,
    adv: &dyn Adversary,
    sim: &dyn Simulator,
    policy: OraclePolicy,
    config: &GameConfig,
) -> Result<AdvantageEstimate> {
    let setup = Setup::new(scheme, policy, config);
    estimate_advantage(
        config,
        |coins| {
            let keys = setup.keys(coins)?;
            let msg = setup.message(mgen, &keys, coins)?;
            let (y, plain) = classical_target(&msg.state)?;
            guessed(&setup, &keys, adv, &plain, &y, coins)
        },
        |coins| {
            let keys = setup.keys(coins)?;
            let msg = setup.message(mgen, &keys, coins)?;
            let (y, plain) = classical_target(&msg.state)?;
            simulated(&setup, &keys, sim, &plain, &y, coins)
        },
    )
}

fn transcript_target(
    msg: &GeneratedMessage,
    f: &dyn TranscriptFunction,
    pk: &PublicKey,
) -> Result<BitString> {
    if msg.state.has_register(TARGET) {
        return Err(Error::Mode(format!("SEM3 messages carry no `{TARGET}` register")));
    }
    let x = msg.transcript.as_ref().ok_or_else(|| Error::Mode("message generator declared no transcript".into()))?;
    let expected = f.input_len(pk);
    if x.len() != expected {
        return Err(Error::LengthMismatch { expected, actual: x.len() });
    }
    f.eval(pk, x)
}

/// `|Pr[A(Enc(rho_ME)) = f_pk(x)] - Pr[S(rho_E) = f_pk(x)]|` where `x` is
/// the generator's measurement transcript.
#[allow(clippy::too_many_arguments)]
pub fn run_sem3<S: QuantumEncryptionScheme>(
    scheme: &S,
    mgen: &dyn MessageGenerator,
    f: &dyn TranscriptFunction,
    adv: &dyn Adversary,
    sim: &dyn Simulator,
    policy: OraclePolicy,
    config: &GameConfig,
) -> Result<AdvantageEstimate> {
    let setup = Setup::new(scheme, policy, config);
    estimate_advantage(
        config,
        |coins| {
            let keys = setup.keys(coins)?;
            let msg = setup.message(mgen, &keys, coins)?;
            let target = transcript_target(&msg, f, &keys.pk)?;
            guessed(&setup, &keys, adv, &msg.state, &target, coins)
        },
        |coins| {
            let keys = setup.keys(coins)?;
            let msg = setup.message(mgen, &keys, coins)?;
            let target = transcript_target(&msg, f, &keys.pk)?;
            simulated(&setup, &keys, sim, &msg.state, &target, coins)
        },
    )
}
