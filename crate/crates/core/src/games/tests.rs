use proptest::prelude::*;

use super::battery::*;
use super::reductions::*;
use super::*;
use crate::bits::BitString;
use crate::classical::{ConstantPrg, ConstantZeroPrf, GgmPrf, ToyRsaFamily};
use crate::coins::{for_each_branch, CoinSource, DetRng};
use crate::error::Error;
use crate::estimate::GameConfig;
use crate::quantum::{trace_distance, CMatrix, DensityMatrix, Subsystem};
use crate::schemes::{
    Ciphertext, ConstantPrfSke, FixedKeyScheme, IdealizedPke, IdentityScheme, PublicKey, QprfSke,
    QuantumEncryptionScheme, RandomFunctionSke, TowpPke,
};

const EXACT_TOL: f64 = 1e-12;

fn exact() -> GameConfig {
    GameConfig::exact()
}

fn ideal_pke(qubits: usize) -> IdealizedPke {
    let kp = ToyRsaFamily::new(6).unwrap().keypair_from_primes(5, 7, 0b100101).unwrap();
    IdealizedPke::with_keypair(qubits, kp).unwrap()
}

/// A fixed two-register state on `M (x) E`, one qubit each.
#[derive(Clone, Debug)]
struct SeededMessage {
    seed: u64,
}

impl MessageGenerator for SeededMessage {
    fn id(&self) -> &str {
        "seeded"
    }

    fn generate(&self, _: &PublicKey, _: &mut dyn OracleAccess, _: &mut dyn CoinSource) -> crate::Result<GeneratedMessage> {
        let raw = DensityMatrix::random_mixed("X", 2, 2, &mut DetRng::new(self.seed));
        let state = DensityMatrix::new(raw.matrix().clone(), vec![Subsystem::new(MESSAGE, 1), Subsystem::new(SIDE, 1)])?;
        Ok(GeneratedMessage::with_transcript(state, BitString::default()))
    }
}

/// Measures the payload and `E` and answers from a lookup table, which may
/// also answer with a two-bit string.
#[derive(Clone, Debug)]
struct TableDistinguisher {
    table: Vec<u8>,
}

impl Distinguisher for TableDistinguisher {
    fn id(&self) -> &str {
        "table"
    }

    fn distinguish(
        &self,
        _: &PublicKey,
        c: &Ciphertext,
        _: &mut dyn OracleAccess,
        coins: &mut dyn CoinSource,
    ) -> crate::Result<Verdict> {
        let (m, post) = crate::quantum::measure_computational(&c.payload, &c.register, coins)?;
        let (e, post) = crate::quantum::measure_computational(&post, SIDE, coins)?;
        let bits = match self.table[(m.to_u64() * 2 + e.to_u64()) as usize] {
            0 => BitString::new(vec![false]),
            1 => BitString::new(vec![true]),
            _ => BitString::new(vec![true, true]),
        };
        Ok(Verdict { bits, state: post })
    }
}

/// Calls the decryption oracle on the challenge.
struct DecryptChallenge;

impl Distinguisher for DecryptChallenge {
    fn id(&self) -> &str {
        "decrypt-challenge"
    }

    fn distinguish(
        &self,
        _: &PublicKey,
        c: &Ciphertext,
        oracles: &mut dyn OracleAccess,
        coins: &mut dyn CoinSource,
    ) -> crate::Result<Verdict> {
        let plain = oracles.decrypt(c, coins)?;
        Ok(Verdict::bit(true, plain))
    }
}

/// Calls the encryption oracle `calls` times.
struct Greedy {
    calls: usize,
}

impl MessageGenerator for Greedy {
    fn id(&self) -> &str {
        "greedy"
    }

    fn generate(
        &self,
        _: &PublicKey,
        oracles: &mut dyn OracleAccess,
        coins: &mut dyn CoinSource,
    ) -> crate::Result<GeneratedMessage> {
        let m = DensityMatrix::zero(MESSAGE, 1);
        for _ in 0..self.calls {
            oracles.encrypt(&m, MESSAGE, coins)?;
        }
        Ok(GeneratedMessage::new(m))
    }
}

/// `|0>_M (x) |+>_F`.
struct QuantumTarget;

impl MessageGenerator for QuantumTarget {
    fn id(&self) -> &str {
        "quantum-target"
    }

    fn generate(&self, _: &PublicKey, _: &mut dyn OracleAccess, _: &mut dyn CoinSource) -> crate::Result<GeneratedMessage> {
        Ok(GeneratedMessage::new(DensityMatrix::zero(MESSAGE, 1).tensor(&DensityMatrix::plus(TARGET))?))
    }
}

#[test]
fn game_names_round_trip() {
    for g in GameKind::ALL {
        assert_eq!(GameKind::parse(g.name()), Some(g));
    }
    assert_eq!(GameKind::parse("ind-cca2"), None);
    assert_eq!(GameKind::IndCca1.default_policy(), OraclePolicy::cca1());
}

#[test]
fn ind_detects_identity_scheme() {
    let r = run_ind(&IdentityScheme::new(1), &OnesMessage { qubits: 1 }, &MeasureMessage { probe: false }, OraclePolicy::none(), &exact())
        .unwrap();
    assert_eq!((r.p_real, r.p_ideal, r.advantage, r.ci_halfwidth, r.exact), (1.0, 0.0, 1.0, 0.0, true));
}

#[test]
fn constant_distinguisher_has_no_advantage() {
    for b in [false, true] {
        let r = run_ind(&QprfSke::new(1).unwrap(), &OnesMessage { qubits: 1 }, &ConstantGuess(b), OraclePolicy::none(), &exact())
            .unwrap();
        assert_eq!(r.advantage, 0.0);
    }
}

#[test]
fn truly_random_pads_give_zero_ind_advantage() {
    let ske = RandomFunctionSke::new(1);
    for (mgen, dist) in [
        (&OnesMessage { qubits: 1 } as &dyn MessageGenerator, &MeasureMessage { probe: false } as &dyn Distinguisher),
        (&BellMessage { qubits: 1 }, &MatchMessageSide),
        (&OracleProbeMessage { qubits: 1 }, &MeasureMessage { probe: true }),
    ] {
        for policy in [OraclePolicy::none(), OraclePolicy::cpa(), OraclePolicy::cca1()] {
            let r = run_ind(&ske, mgen, dist, policy, &exact()).unwrap();
            assert!(r.advantage <= EXACT_TOL, "{} {}: {}", mgen.id(), dist.id(), r.advantage);
            // the public tag domain is too wide to enumerate around oracle calls
            if mgen.id() == "oracle-probe" {
                let r = run_ind(&ideal_pke(1), mgen, dist, policy, &GameConfig::sample(2000, 9)).unwrap();
                assert!(r.advantage <= r.ci_halfwidth, "{r:?}");
            } else {
                let r = run_ind(&ideal_pke(1), mgen, dist, policy, &exact()).unwrap();
                assert!(r.advantage <= EXACT_TOL, "{} {}: {}", mgen.id(), dist.id(), r.advantage);
            }
        }
    }
}

#[test]
fn bell_match_detects_identity_scheme_by_half() {
    let r = run_ind(&IdentityScheme::new(1), &BellMessage { qubits: 1 }, &MatchMessageSide, OraclePolicy::none(), &exact())
        .unwrap();
    assert!((r.advantage - 0.5).abs() < EXACT_TOL);
}

#[test]
fn ind_prime_examples() {
    let ones = OnesMessage { qubits: 1 };
    let coin = run_ind_prime(&IdentityScheme::new(1), &ones, &CoinGuess, OraclePolicy::none(), &exact()).unwrap();
    assert_eq!(coin.p, 0.5);
    let broken =
        run_ind_prime(&IdentityScheme::new(1), &ones, &MeasureMessage { probe: false }, OraclePolicy::none(), &exact())
            .unwrap();
    assert_eq!(broken.p, 1.0);
    let ideal =
        run_ind_prime(&RandomFunctionSke::new(1), &ones, &MeasureMessage { probe: false }, OraclePolicy::none(), &exact())
            .unwrap();
    assert!((ideal.p - 0.5).abs() < EXACT_TOL);
}

#[test]
fn ind_prime_identity_holds_for_deterministic_distinguishers() {
    let schemes_checked = [
        ind_prime_ind_identity_check(
            &QprfSke::new(1).unwrap(),
            &OnesMessage { qubits: 1 },
            &MeasureMessage { probe: false },
            OraclePolicy::none(),
            &exact(),
        ),
        ind_prime_ind_identity_check(
            &IdentityScheme::new(1),
            &BellMessage { qubits: 1 },
            &MatchMessageSide,
            OraclePolicy::none(),
            &exact(),
        ),
        ind_prime_ind_identity_check(
            &ConstantPrfSke::constant(1).unwrap(),
            &PadReuseMessage { qubits: 1 },
            &PadReuseDistinguisher,
            OraclePolicy::cpa(),
            &exact(),
        ),
    ];
    for report in schemes_checked {
        let r = report.unwrap();
        assert!(r.exact);
        assert!(r.deviation <= EXACT_TOL, "{r:?}");
        assert!((r.flipped_guess_side + r.guess_side).abs() <= EXACT_TOL);
    }
    let constant = ind_prime_ind_identity_check(
        &QprfSke::new(1).unwrap(),
        &OnesMessage { qubits: 1 },
        &ConstantGuess(true),
        OraclePolicy::none(),
        &exact(),
    )
    .unwrap();
    assert_eq!((constant.guess_side, constant.ind_side), (0.0, 0.0));
}

#[test]
fn sanitizing_maps_long_answers_to_zero() {
    let dist = TableDistinguisher { table: vec![2, 2, 2, 2] };
    let raw = run_ind_prime(&IdentityScheme::new(1), &SeededMessage { seed: 1 }, &dist, OraclePolicy::none(), &exact())
        .unwrap();
    assert_eq!(raw.p, 0.0);
    let r = ind_prime_ind_identity_check(&IdentityScheme::new(1), &SeededMessage { seed: 1 }, &dist, OraclePolicy::none(), &exact())
        .unwrap();
    assert_eq!(r.p_guess, 0.5);
    assert!(r.deviation <= EXACT_TOL);
}

fn ones_with_copy(qubits: usize) -> (OnesMessage, IdentityFunction) {
    (OnesMessage { qubits }, IdentityFunction { len: qubits })
}

#[test]
fn sem_detects_identity_scheme() {
    let scheme = IdentityScheme::new(1);
    let (ones, copy) = ones_with_copy(1);
    let mgen = ClassicalTarget { mgen: &ones, f: &copy };
    let sim = reduction_ind_to_sem(&scheme, &MeasureAdversary, SimulatorMode::OwnKey);
    let r = run_sem(&scheme, &mgen, &MeasureAdversary, &sim, &EqualityDistinguisher, OraclePolicy::none(), &exact())
        .unwrap();
    assert!(r.advantage >= 0.9, "{r:?}");
    assert_eq!((r.p_real, r.p_ideal), (1.0, 0.0));
}

#[test]
fn sem_adversary_equal_to_simulator_gives_zero() {
    let scheme = QprfSke::new(1).unwrap();
    let (ones, copy) = ones_with_copy(1);
    let mgen = ClassicalTarget { mgen: &ones, f: &copy };
    let blind = BlindRole { bits: 1 };
    let r = run_sem(&scheme, &mgen, &blind, &blind, &EqualityDistinguisher, OraclePolicy::none(), &exact()).unwrap();
    assert_eq!(r.advantage, 0.0);
}

#[test]
fn sem_requires_output_register() {
    struct Silent;
    impl Adversary for Silent {
        fn id(&self) -> &str {
            "silent"
        }
        fn attack(
            &self,
            _: &PublicKey,
            c: &Ciphertext,
            _: &mut dyn OracleAccess,
            _: &mut dyn CoinSource,
        ) -> crate::Result<DensityMatrix> {
            Ok(c.payload.clone())
        }
    }
    let scheme = IdentityScheme::new(1);
    let err = run_sem(&scheme, &OnesMessage { qubits: 1 }, &Silent, &BlindRole { bits: 1 }, &OutputNonzero, OraclePolicy::none(), &exact())
        .unwrap_err();
    assert!(matches!(err, Error::UnknownSubsystem(_)));
}

#[test]
fn sem2_examples() {
    let scheme = IdentityScheme::new(1);
    let (random, copy) = (RandomBasisMessage { qubits: 1 }, IdentityFunction { len: 1 });
    let mgen = ClassicalTarget { mgen: &random, f: &copy };
    let r = run_sem2(&scheme, &mgen, &MeasureAdversary, &UniformSimulator { bits: 1 }, OraclePolicy::none(), &exact())
        .unwrap();
    assert_eq!((r.p_real, r.p_ideal), (1.0, 0.5));
    // outputs of the wrong length never match
    let r = run_sem2(&scheme, &mgen, &BlindRole { bits: 2 }, &UniformSimulator { bits: 3 }, OraclePolicy::none(), &exact())
        .unwrap();
    assert_eq!((r.p_real, r.p_ideal), (0.0, 0.0));
}

#[test]
fn sem2_rejects_quantum_targets() {
    let err = run_sem2(&IdentityScheme::new(1), &QuantumTarget, &MeasureAdversary, &UniformSimulator { bits: 1 }, OraclePolicy::none(), &exact())
        .unwrap_err();
    assert!(matches!(err, Error::Mode(_)));
    assert!(matches!(classical_target(&DensityMatrix::zero(MESSAGE, 1)), Err(Error::Mode(_))));
}

#[test]
fn sem3_examples() {
    let scheme = IdentityScheme::new(1);
    let ones = OnesMessage { qubits: 1 };
    let zero_f = ConstantFunction { input_len: 1, out_len: 1 };
    let blind = BlindRole { bits: 1 };
    let r = run_sem3(&scheme, &ones, &zero_f, &MeasureAdversary, &blind, OraclePolicy::none(), &exact()).unwrap();
    assert_eq!((r.p_real, r.p_ideal), (0.0, 1.0));

    let copy = IdentityFunction { len: 1 };
    let sim = reduction_ind_to_sem(&scheme, &MeasureAdversary, SimulatorMode::OwnKey);
    let r = run_sem3(&scheme, &ones, &copy, &MeasureAdversary, &sim, OraclePolicy::none(), &exact()).unwrap();
    assert!(r.p_real >= 0.9);

    let measure = MeasureMessage { probe: false };
    let coin = sem3_from_ind_prime(&ones, &measure, 1);
    let sim = reduction_ind_to_sem(&scheme, &coin.adversary, SimulatorMode::OwnKey);
    let r = run_sem3(&scheme, &coin.mgen, &coin.f, &coin.adversary, &sim, OraclePolicy::none(), &exact()).unwrap();
    assert_eq!(r.p_real, 1.0);
    assert!(r.p_ideal <= 0.5 + EXACT_TOL);

    let wrong = IdentityFunction { len: 2 };
    let err = run_sem3(&scheme, &ones, &wrong, &MeasureAdversary, &blind, OraclePolicy::none(), &exact()).unwrap_err();
    assert_eq!(err, Error::LengthMismatch { expected: 2, actual: 1 });
}

#[test]
fn decryption_after_challenge_is_a_policy_error() {
    let err = run_ind(&QprfSke::new(1).unwrap(), &OnesMessage { qubits: 1 }, &DecryptChallenge, OraclePolicy::cca1(), &exact())
        .unwrap_err();
    assert!(matches!(err, Error::PolicyViolation(_)));
}

#[test]
fn symmetric_plain_games_grant_no_oracles() {
    let err = run_ind(&QprfSke::new(1).unwrap(), &Greedy { calls: 1 }, &ConstantGuess(true), OraclePolicy::none(), &exact())
        .unwrap_err();
    assert!(matches!(err, Error::PolicyViolation(_)));
    // the public key suffices to encrypt
    let pke = FixedKeyScheme::generate(TowpPke::new(1).unwrap(), &mut DetRng::new(1)).unwrap();
    run_ind(&pke, &Greedy { calls: 1 }, &ConstantGuess(true), OraclePolicy::none(), &GameConfig::sample(4, 0)).unwrap();
}

#[test]
fn oracle_budget_is_enforced() {
    let scheme = QprfSke::new(1).unwrap();
    let cfg = GameConfig::sample(2, 3);
    run_ind(&scheme, &Greedy { calls: 64 }, &ConstantGuess(true), OraclePolicy::cpa(), &cfg).unwrap();
    let err = run_ind(&scheme, &Greedy { calls: 65 }, &ConstantGuess(true), OraclePolicy::cpa(), &cfg).unwrap_err();
    assert_eq!(err, Error::BudgetExhausted(64));
    let tight = GameConfig { budget: 2, ..cfg };
    assert_eq!(
        run_ind(&scheme, &Greedy { calls: 3 }, &ConstantGuess(true), OraclePolicy::cpa(), &tight).unwrap_err(),
        Error::BudgetExhausted(2)
    );
}

#[test]
fn oracle_probe_runs_under_every_policy() {
    let scheme = QprfSke::new(1).unwrap();
    for policy in [OraclePolicy::none(), OraclePolicy::cpa(), OraclePolicy::cca1()] {
        run_ind(&scheme, &OracleProbeMessage { qubits: 1 }, &MeasureMessage { probe: true }, policy, &exact()).unwrap();
    }
}

/// Average of a role's output state over all its coins.
fn averaged(run: impl FnMut(&mut dyn CoinSource) -> crate::Result<DensityMatrix>) -> DensityMatrix {
    let mut acc: Option<(DensityMatrix, CMatrix)> = None;
    for_each_branch(1 << 16, run, |w, out| {
        let m = out.matrix() * num_complex::Complex64::new(w, 0.0);
        match acc.as_mut() {
            Some((_, a)) => *a += m,
            None => acc = Some((out, m)),
        }
    })
    .unwrap();
    let (first, m) = acc.unwrap();
    DensityMatrix::new(m, first.layout().to_vec()).unwrap()
}

#[test]
fn constructed_simulator_matches_adversary_on_zero_encryption() {
    let scheme = QprfSke::new(1).unwrap();
    let side = DensityMatrix::basis(TARGET, &BitString::ones(1));
    let sim = reduction_ind_to_sem(&scheme, &MeasureAdversary, SimulatorMode::OwnKey);
    let simulated = averaged(|c| sim.simulate(&PublicKey::None, &side, &mut NoOracles, c));
    let direct = averaged(|c| {
        let (k, _) = scheme.keygen(c)?;
        let plain = DensityMatrix::zero(MESSAGE, 1).tensor(&side)?;
        let ct = scheme.encrypt_register(&k, &plain, MESSAGE, c)?;
        MeasureAdversary.attack(&PublicKey::None, &ct, &mut NoOracles, c)
    });
    assert!(trace_distance(&simulated, &direct).unwrap() < EXACT_TOL);

    // an adversary ignoring its input is its own simulator
    let blind = BlindRole { bits: 1 };
    let sim = reduction_ind_to_sem(&scheme, &blind, SimulatorMode::OwnKey);
    let a = averaged(|c| sim.simulate(&PublicKey::None, &side, &mut NoOracles, c));
    let b = averaged(|c| Simulator::simulate(&blind, &PublicKey::None, &side, &mut NoOracles, c));
    assert!(trace_distance(&a, &b).unwrap() < EXACT_TOL);
}

#[test]
fn simulator_modes_follow_the_setting() {
    assert_eq!(SimulatorMode::for_setting(crate::schemes::Flavor::Public, &OraclePolicy::none()), SimulatorMode::PublicKey);
    assert_eq!(SimulatorMode::for_setting(crate::schemes::Flavor::Symmetric, &OraclePolicy::none()), SimulatorMode::OwnKey);
    assert_eq!(SimulatorMode::for_setting(crate::schemes::Flavor::Symmetric, &OraclePolicy::cpa()), SimulatorMode::EncOracle);
    let scheme = QprfSke::new(1).unwrap();
    let side = DensityMatrix::scalar();
    let err = reduction_ind_to_sem(&scheme, &MeasureAdversary, SimulatorMode::EncOracle)
        .simulate(&PublicKey::None, &side, &mut NoOracles, &mut DetRng::new(0))
        .unwrap_err();
    assert!(matches!(err, Error::PolicyViolation(_)));
    let err = reduction_ind_to_sem(&scheme, &MeasureAdversary, SimulatorMode::PublicKey)
        .simulate(&PublicKey::None, &side, &mut NoOracles, &mut DetRng::new(0))
        .unwrap_err();
    assert!(matches!(err, Error::Unsupported(_)));
}

#[test]
fn ind_to_sem_pipeline_bounds_sem_advantage() {
    let scheme = QprfSke::new(1).unwrap();
    let (random, copy) = (RandomBasisMessage { qubits: 1 }, IdentityFunction { len: 1 });
    let mgen = ClassicalTarget { mgen: &random, f: &copy };
    for policy in [OraclePolicy::none(), OraclePolicy::cpa()] {
        let r = ind_to_sem_pipeline(&scheme, &mgen, &MeasureAdversary, &EqualityDistinguisher, policy, &exact()).unwrap();
        assert!(r.holds, "{r:?}");
        assert!((r.sem.advantage - r.ind.advantage).abs() < EXACT_TOL);
    }
    let r = ind_to_sem_pipeline(&scheme, &mgen, &MeasureAdversary, &EqualityDistinguisher, OraclePolicy::none(), &GameConfig::sample(2000, 5))
        .unwrap();
    assert!(r.holds, "{r:?}");
}

#[test]
fn sem_to_ind_epsilon_identity() {
    let cases: Vec<EpsilonIdentity> = vec![
        sem_to_ind_identity_check(&IdentityScheme::new(1), &OnesMessage { qubits: 1 }, &MeasureMessage { probe: false }, OraclePolicy::none(), &exact())
            .unwrap(),
        sem_to_ind_identity_check(&QprfSke::new(1).unwrap(), &BellMessage { qubits: 1 }, &MatchMessageSide, OraclePolicy::none(), &exact())
            .unwrap(),
        sem_to_ind_identity_check(&ConstantPrfSke::constant(1).unwrap(), &PadReuseMessage { qubits: 1 }, &PadReuseDistinguisher, OraclePolicy::cpa(), &exact())
            .unwrap(),
    ];
    for c in &cases {
        assert!(c.deviation <= EXACT_TOL, "{c:?}");
        assert_eq!(c.sem.p_ideal, 0.5);
    }
    assert!(cases[0].twice_max_excess / 2.0 >= 0.45);
    let constant = sem_to_ind_identity_check(&QprfSke::new(1).unwrap(), &OnesMessage { qubits: 1 }, &ConstantGuess(false), OraclePolicy::none(), &exact())
        .unwrap();
    assert_eq!((constant.sem.advantage, constant.sem_flipped.advantage), (0.0, 0.0));
}

#[test]
fn cca1_reduction_matches_game_success_with_real_prf() {
    let prf = GgmPrf::for_scheme(1).unwrap();
    let probe = OracleProbeMessage { qubits: 1 };
    let measure = MeasureMessage { probe: true };
    let r = cca1_to_prf_pipeline(&prf, &probe, &measure, OraclePolicy::cca1(), &exact()).unwrap();
    assert!((r.game.p - r.prf.p_real).abs() < EXACT_TOL, "{r:?}");

    let pad = PadReuseMessage { qubits: 1 };
    let r = cca1_to_prf_pipeline(&ConstantZeroPrf::for_scheme(1), &pad, &PadReuseDistinguisher, OraclePolicy::cca1(), &exact())
        .unwrap();
    assert_eq!((r.game.p, r.prf.p_real), (1.0, 1.0));
    // random function: tags collide with probability 1/4 at n = 1
    assert!((r.prf.p_ideal - (0.5 + 0.125)).abs() < EXACT_TOL);
}

#[test]
fn cca1_reduction_with_coin_guesser_has_no_advantage() {
    let prf = GgmPrf::for_scheme(1).unwrap();
    let r = cca1_to_prf_pipeline(&prf, &OnesMessage { qubits: 1 }, &CoinGuess, OraclePolicy::cca1(), &exact()).unwrap();
    assert_eq!(r.prf.advantage, 0.0);
}

#[test]
fn cca1_reduction_breaks_constant_prf() {
    let r = cca1_to_prf_pipeline(
        &ConstantZeroPrf::for_scheme(2),
        &PadReuseMessage { qubits: 2 },
        &PadReuseDistinguisher,
        OraclePolicy::cpa(),
        &GameConfig::sample(1000, 11),
    )
    .unwrap();
    assert!(r.prf.advantage >= 0.4, "{r:?}");
    assert!((r.prf.advantage - 0.46875).abs() <= r.prf.ci_halfwidth);
}

#[test]
fn cca1_reduction_enforces_policy_and_budget() {
    let prf = GgmPrf::for_scheme(1).unwrap();
    let a0 = reduction_cca1_to_prf(&OnesMessage { qubits: 1 }, &DecryptChallenge, 1, OraclePolicy::cca1(), 64);
    let mut phi = crate::classical::RandomFunctionOracle::new(2, 2);
    let err = crate::classical::PrfDistinguisher::run(&a0, &mut phi, &mut DetRng::new(0)).unwrap_err();
    assert!(matches!(err, Error::PolicyViolation(_)));
    let greedy = Greedy { calls: 5 };
    let a0 = reduction_cca1_to_prf(&greedy, &CoinGuess, 1, OraclePolicy::cca1(), 4);
    let mut f = crate::classical::KeyedFunction { prf: &prf, key: BitString::ones(1) };
    let err = crate::classical::PrfDistinguisher::run(&a0, &mut f, &mut DetRng::new(0)).unwrap_err();
    assert_eq!(err, Error::BudgetExhausted(4));
}

fn padded_pair() -> StatePair {
    let rho = DensityMatrix::basis(PAD_REGISTER, &BitString::ones(1)).tensor(&DensityMatrix::plus(REST_REGISTER)).unwrap();
    StatePair::new(rho, DensityMatrix::zero(PAD_REGISTER, 1)).unwrap()
}

#[test]
fn qotp_to_prg_uniform_arm_is_one_half() {
    let prg = crate::classical::OrdinalPrg::new(
        ToyRsaFamily::new(8).unwrap().generate(&mut DetRng::new(2)).index,
        2,
        2,
    )
    .unwrap();
    let d = reduction_qotp_to_prg(&MeasurePadRegister, padded_pair());
    let r = prg_distinguisher_advantage(&d, &prg, &exact()).unwrap();
    assert_eq!(r.p_ideal, 0.5);
    let coin = reduction_qotp_to_prg(&CoinStateGuess, padded_pair());
    assert_eq!(prg_distinguisher_advantage(&coin, &prg, &exact()).unwrap().advantage, 0.0);
}

#[test]
fn qotp_to_prg_breaks_constant_generator() {
    let prg = ConstantPrg { seed_len: 1, out_len: 2 };
    let d = reduction_qotp_to_prg(&MeasurePadRegister, padded_pair());
    let r = prg_distinguisher_advantage(&d, &prg, &exact()).unwrap();
    assert_eq!((r.p_real, r.p_ideal, r.advantage), (1.0, 0.5, 0.5));
    let err = d.run(&BitString::zeros(3), &mut DetRng::new(0)).unwrap_err();
    assert_eq!(err, Error::LengthMismatch { expected: 2, actual: 3 });
}

#[test]
fn state_pair_builds_product_second_state() {
    let pair = padded_pair();
    assert_eq!(pair.second().layout(), pair.first().layout());
    let expect = DensityMatrix::zero(PAD_REGISTER, 1).tensor(&DensityMatrix::plus(REST_REGISTER)).unwrap();
    assert!(trace_distance(pair.second(), &expect).unwrap() < EXACT_TOL);
    assert!(StatePair::new(DensityMatrix::zero(PAD_REGISTER, 1), DensityMatrix::zero(PAD_REGISTER, 2)).is_err());
}

#[test]
fn relation_chain_carries_broken_witnesses() {
    let ones = OnesMessage { qubits: 1 };
    let measure = MeasureMessage { probe: false };
    let chain = relation_chain(&IdentityScheme::new(1), &ones, &measure, 1, OraclePolicy::none(), &exact()).unwrap();
    assert_eq!(chain.ind_prime.p, 1.0);
    assert!(chain.real_arm_spread() <= EXACT_TOL);
    for arm in [&chain.sem3, &chain.sem2, &chain.sem] {
        assert!(arm.p_ideal <= 0.5 + EXACT_TOL);
        assert!(arm.advantage >= 0.5 - EXACT_TOL);
    }

    let pad = PadReuseMessage { qubits: 1 };
    let chain =
        relation_chain(&ConstantPrfSke::constant(1).unwrap(), &pad, &PadReuseDistinguisher, 1, OraclePolicy::cpa(), &exact())
            .unwrap();
    assert_eq!(chain.ind_prime.p, 1.0);
    assert!(chain.real_arm_spread() <= EXACT_TOL);
    assert!(chain.sem3.p_ideal <= 0.5 + EXACT_TOL);
}

#[test]
fn ideal_schemes_give_zero_in_semantic_games() {
    let (random, copy) = (RandomBasisMessage { qubits: 1 }, IdentityFunction { len: 1 });
    let mgen = ClassicalTarget { mgen: &random, f: &copy };
    let ske = RandomFunctionSke::new(1);
    let pke = ideal_pke(1);
    for policy in [OraclePolicy::none(), OraclePolicy::cpa(), OraclePolicy::cca1()] {
        let sim = reduction_ind_to_sem(&ske, &MeasureAdversary, SimulatorMode::for_setting(ske.flavor(), &policy));
        let r = run_sem(&ske, &mgen, &MeasureAdversary, &sim, &EqualityDistinguisher, policy, &exact()).unwrap();
        assert!(r.advantage <= EXACT_TOL, "{r:?}");
        let sim = reduction_ind_to_sem(&pke, &MeasureAdversary, SimulatorMode::PublicKey);
        let r = run_sem(&pke, &mgen, &MeasureAdversary, &sim, &EqualityDistinguisher, policy, &exact()).unwrap();
        assert!(r.advantage <= EXACT_TOL, "{r:?}");
    }
}

#[test]
fn pad_reuse_against_random_function_sees_only_collisions() {
    // Pr[tag collision] = 2^{-2n}, which is exactly the IND advantage
    for n in 1..=2usize {
        let r = run_ind(&RandomFunctionSke::new(n), &PadReuseMessage { qubits: n }, &PadReuseDistinguisher, OraclePolicy::cpa(), &exact())
            .unwrap();
        assert!((r.advantage - 0.25f64.powi(n as i32)).abs() < EXACT_TOL, "n={n}: {r:?}");
    }
}

#[test]
fn constant_prf_scheme_falls_to_pad_reuse() {
    let r = run_ind(
        &ConstantPrfSke::constant(1).unwrap(),
        &PadReuseMessage { qubits: 1 },
        &PadReuseDistinguisher,
        OraclePolicy::cpa(),
        &GameConfig::sample(1000, 1),
    )
    .unwrap();
    assert!(r.advantage >= 0.9 && r.ci_halfwidth <= 0.05, "{r:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ind_prime_identity_for_table_distinguishers(seed in 0u64..1000, table in proptest::collection::vec(0u8..3, 4)) {
        let dist = TableDistinguisher { table };
        let r = ind_prime_ind_identity_check(&QprfSke::new(1).unwrap(), &SeededMessage { seed }, &dist, OraclePolicy::none(), &exact())
            .unwrap();
        prop_assert!(r.deviation <= EXACT_TOL);
    }

    #[test]
    fn epsilon_identity_for_table_distinguishers(seed in 0u64..1000, table in proptest::collection::vec(0u8..3, 4)) {
        let dist = TableDistinguisher { table };
        let r = sem_to_ind_identity_check(&IdentityScheme::new(1), &SeededMessage { seed }, &dist, OraclePolicy::none(), &exact())
            .unwrap();
        prop_assert!(r.deviation <= EXACT_TOL);
    }

    #[test]
    fn sampled_ind_tracks_exact(seed in 0u64..50) {
        let scheme = IdentityScheme::new(1);
        let mgen = SeededMessage { seed };
        let dist = TableDistinguisher { table: vec![0, 1, 1, 0] };
        let e = run_ind(&scheme, &mgen, &dist, OraclePolicy::none(), &exact()).unwrap();
        let s = run_ind(&scheme, &mgen, &dist, OraclePolicy::none(), &GameConfig::sample(4000, seed)).unwrap();
        // 4.5 sigma per arm keeps the false-failure rate negligible over the cases
        let slack = 4.5 / 1.96 * s.ci_halfwidth;
        prop_assert!((s.signed() - e.signed()).abs() <= slack, "{:?} vs {:?}", s, e);
    }
}
