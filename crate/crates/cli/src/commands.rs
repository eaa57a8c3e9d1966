use qenc::classical::{
    prg_iterated, ConstantZeroPrf, GgmPrf, Prf, ToyRsaFamily, MAX_MODULUS_BITS, MIN_MODULUS_BITS,
};
use qenc::estimate::{AdvantageEstimate, GameConfig, ProbabilityEstimate};
use qenc::games::battery::{ClassicalTarget, EqualityDistinguisher};
use qenc::games::reductions::{
    cca1_to_prf_pipeline, ind_to_sem_pipeline, prg_distinguisher_advantage, reduction_ind_to_sem,
    reduction_qotp_to_prg, reduction_sem_to_ind, sem3_from_ind_prime, sem_to_ind_identity_check, CoinStateGuess,
    MeasurePadRegister, SimulatorMode, StateDistinguisher, StatePair, PAD_REGISTER, REST_REGISTER,
};
use qenc::games::{
    ind_prime_ind_identity_check, run_ind, run_ind_prime, run_sem, run_sem2, run_sem3, Adversary, GameKind,
    MessageGenerator, OraclePolicy, SemDistinguisher, Simulator, TranscriptFunction,
};
use qenc::quantum::{
    apply_pauli, channel_choi_distance, qotp_average, trace_distance, CMatrix, DensityMatrix,
    IdentityChannel, PauliKey, N_MAX_EXHAUSTIVE, TOL_ALGEBRA,
};
use qenc::schemes::QuantumEncryptionScheme;
use qenc::{BitString, CoinSource, DetRng};
use serde::Serialize;
use serde_json::{json, Value};

use crate::registry::{self, Preset, SchemeChoice, SchemeTask};
use crate::report::Report;
use crate::CliError;

/// Tolerance of the identities checked in exact mode.
const EXACT_TOL: f64 = 1e-12;

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentConfig {
    pub scheme: String,
    pub n: Option<usize>,
    pub qubits: usize,
    pub trials: u64,
    pub seed: u64,
    pub mode: &'static str,
    pub adversary: Option<String>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.trials == 0 {
            return Err(CliError::Usage("--trials must be at least 1".into()));
        }
        if self.qubits == 0 {
            return Err(CliError::Usage("--qubits must be at least 1".into()));
        }
        if self.is_exact() && self.qubits > N_MAX_EXHAUSTIVE {
            return Err(CliError::Usage(format!("exact mode supports at most {N_MAX_EXHAUSTIVE} qubits")));
        }
        Ok(())
    }

    pub fn is_exact(&self) -> bool {
        self.mode == "exact"
    }

    fn game_config(&self) -> GameConfig {
        if self.is_exact() {
            GameConfig { seed: self.seed, ..GameConfig::exact() }
        } else {
            GameConfig::sample(self.trials, self.seed)
        }
    }

    fn scheme_choice(&self) -> SchemeChoice {
        SchemeChoice {
            id: self.scheme.clone(),
            qubits: self.qubits,
            n: self.n,
            pin_public_keys: self.is_exact(),
            seed: self.seed,
        }
    }

    fn adversary_or(&self, default: &str) -> String {
        self.adversary.clone().unwrap_or_else(|| default.into())
    }

    fn to_value(&self, extra: Value) -> Value {
        let mut v = serde_json::to_value(self).expect("config serializes");
        if let (Value::Object(map), Value::Object(more)) = (&mut v, extra) {
            map.extend(more);
        }
        v
    }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("estimate serializes")
}

struct Correctness<'a> {
    cfg: &'a ExperimentConfig,
    corrupt: bool,
}

impl SchemeTask for Correctness<'_> {
    type Output = Vec<(u64, f64)>;

    fn run<S: QuantumEncryptionScheme>(self, scheme: &S) -> Result<Self::Output, CliError> {
        let q = scheme.plaintext_qubits();
        let mut rows = Vec::new();
        for i in 0..self.cfg.trials {
            // keys are regenerated inside every enumerated branch so that
            // lazily sampled keys do not leak between branches
            let channel = |state: &DensityMatrix, target: &str, coins: &mut dyn CoinSource| {
                let (ek, dk) = scheme.keygen(&mut DetRng::with_stream(self.cfg.seed, i))?;
                let c = scheme.encrypt_register(&ek, state, target, coins)?;
                if self.corrupt {
                    // decryption that forgets to undo the pad
                    Ok(c.payload)
                } else {
                    scheme.decrypt_register(&dk, &c, coins)
                }
            };
            let d = channel_choi_distance(&channel, &IdentityChannel, q)?;
            rows.push((i, d));
        }
        Ok(rows)
    }
}

pub fn correctness(cfg: &ExperimentConfig, corrupt: bool) -> Result<Report, CliError> {
    let rows = registry::with_scheme(&cfg.scheme_choice(), Correctness { cfg, corrupt })?;
    let mut report = Report::new("correctness", cfg.to_value(json!({ "corrupt_decrypt": corrupt })));
    for (key, d) in rows {
        report.push(json!({ "key": key, "choi_distance": d, "bound": TOL_ALGEBRA }), d <= TOL_ALGEBRA);
    }
    Ok(report)
}

fn maximally_mixed_like(state: &DensityMatrix) -> Result<DensityMatrix, CliError> {
    let dim = state.dim();
    let m = CMatrix::identity(dim, dim) / num_complex::Complex64::new(dim as f64, 0.0);
    Ok(DensityMatrix::new(m, state.layout().to_vec())?)
}

/// Basis states, a Bell pair (from two qubits on) and random pure and mixed
/// states, truncated to `count`.
pub fn state_battery(qubits: usize, count: usize, seed: u64) -> Result<Vec<(String, DensityMatrix)>, CliError> {
    let mut out = Vec::new();
    for x in 0..1u64 << qubits {
        let b = BitString::from_u64(x, qubits);
        out.push((format!("basis:{b}"), DensityMatrix::basis("M", &b)));
    }
    if qubits >= 2 {
        let mut bell = DensityMatrix::maximally_entangled("A", "B", 1)?;
        if qubits > 2 {
            bell = bell.tensor(&DensityMatrix::zero("C", qubits - 2))?;
        }
        out.push(("bell".into(), bell));
    }
    let mut rng = DetRng::with_stream(seed, 0x6d6978);
    let mut i = 0;
    while out.len() < count {
        let state = if i % 2 == 0 {
            DensityMatrix::random_pure("M", qubits, &mut rng)
        } else {
            DensityMatrix::random_mixed("M", qubits, 2.min(1 << qubits), &mut rng)
        };
        out.push((format!("random-{}:{}", if i % 2 == 0 { "pure" } else { "mixed" }, i / 2), state));
        i += 1;
    }
    out.truncate(count);
    Ok(out)
}

fn pauli_label(key: &PauliKey) -> String {
    let q = key.qubits();
    let (x, z) = key.masks();
    (0..q)
        .map(|j| {
            let bit = 1 << (q - 1 - j);
            match (x & bit != 0, z & bit != 0) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            }
        })
        .collect()
}

pub fn qotp_mix(cfg: &ExperimentConfig, states: usize, single_key: bool) -> Result<Report, CliError> {
    if cfg.qubits > N_MAX_EXHAUSTIVE {
        return Err(CliError::Usage(format!("qotp-mix averages over all keys of at most {N_MAX_EXHAUSTIVE} qubits")));
    }
    let mut report =
        Report::new("qotp-mix", cfg.to_value(json!({ "states": states, "single_key": single_key })));
    for (label, state) in state_battery(cfg.qubits, states, cfg.seed)? {
        let avg = qotp_average(&state)?;
        let d = trace_distance(&avg, &maximally_mixed_like(&state)?)?;
        report.push(json!({ "table": "average", "state": label, "distance": d, "bound": TOL_ALGEBRA }), d <= TOL_ALGEBRA);
    }
    if single_key {
        let zero = DensityMatrix::zero("M", cfg.qubits);
        let mixed = maximally_mixed_like(&zero)?;
        for r in 0..1u64 << (2 * cfg.qubits) {
            let key = PauliKey::new(BitString::from_u64(r, 2 * cfg.qubits))?;
            let d = trace_distance(&apply_pauli(&key, &zero, "M")?, &mixed)?;
            report.push(json!({ "table": "single-key", "state": "zero", "pad": pauli_label(&key), "distance": d }), true);
        }
    }
    Ok(report)
}

fn estimate_row(game: &str, scheme: &str, roles: Value, cfg: &ExperimentConfig, est: &AdvantageEstimate) -> Value {
    json!({
        "game": game,
        "scheme": scheme,
        "roles": roles,
        "mode": cfg.mode,
        "trials": est.trials,
        "seed": cfg.seed,
        "p_real": est.p_real,
        "p_ideal": est.p_ideal,
        "advantage": est.advantage,
        "ci": est.ci_halfwidth,
    })
}

/// An IND' run reported as its distance from a fair guess.
fn guess_as_advantage(p: &ProbabilityEstimate) -> AdvantageEstimate {
    AdvantageEstimate {
        p_real: p.p,
        p_ideal: 0.5,
        advantage: (p.p - 0.5).abs(),
        ci_halfwidth: p.ci_halfwidth,
        trials: p.trials,
        exact: p.exact,
    }
}

struct Game<'a> {
    cfg: &'a ExperimentConfig,
    kind: GameKind,
    preset: Preset,
}

impl SchemeTask for Game<'_> {
    type Output = Value;

    fn run<S: QuantumEncryptionScheme>(self, scheme: &S) -> Result<Value, CliError> {
        let gc = self.cfg.game_config();
        let policy = self.kind.default_policy();
        let (mgen, dist) = (self.preset.mgen.as_ref(), self.preset.dist.as_ref());
        let mode = SimulatorMode::for_setting(scheme.flavor(), &policy);
        let ind_roles = json!({ "message": mgen.id(), "distinguisher": dist.id() });
        let (roles, est) = match self.kind {
            GameKind::Ind | GameKind::IndCpa | GameKind::IndCca1 => {
                (ind_roles, run_ind(scheme, mgen, dist, policy, &gc)?)
            }
            GameKind::IndPrime => (ind_roles, guess_as_advantage(&run_ind_prime(scheme, mgen, dist, policy, &gc)?)),
            GameKind::Sem => {
                let r = reduction_sem_to_ind(mgen, dist);
                let sim = reduction_ind_to_sem(scheme, &r.adversary, mode);
                let est = run_sem(scheme, &r.mgen, &r.adversary, &sim, &r.distinguisher, policy, &gc)?;
                let roles = json!({
                    "message": format!("{}/{}", r.mgen.id(), mgen.id()),
                    "adversary": format!("{}/{}", r.adversary.id(), dist.id()),
                    "simulator": sim.id(),
                    "distinguisher": r.distinguisher.id(),
                });
                (roles, est)
            }
            GameKind::Sem2 | GameKind::Sem3 => {
                let r = sem3_from_ind_prime(mgen, dist, self.preset.transcript_len);
                let sim = reduction_ind_to_sem(scheme, &r.adversary, mode);
                let est = if self.kind == GameKind::Sem2 {
                    let classical = ClassicalTarget { mgen: &r.mgen, f: &r.f };
                    run_sem2(scheme, &classical, &r.adversary, &sim, policy, &gc)?
                } else {
                    run_sem3(scheme, &r.mgen, &r.f, &r.adversary, &sim, policy, &gc)?
                };
                let roles = json!({
                    "message": format!("{}/{}", r.mgen.id(), mgen.id()),
                    "function": r.f.id(),
                    "adversary": format!("{}/{}", r.adversary.id(), dist.id()),
                    "simulator": sim.id(),
                });
                (roles, est)
            }
        };
        Ok(estimate_row(self.kind.name(), scheme.id(), roles, self.cfg, &est))
    }
}

pub fn game(cfg: &ExperimentConfig, name: &str) -> Result<Report, CliError> {
    let kind = GameKind::parse(name).ok_or_else(|| CliError::Usage(format!("unknown game `{name}` (see --list)")))?;
    let preset = registry::preset(&cfg.adversary_or("measure"), cfg.qubits)?;
    let row = registry::with_scheme(&cfg.scheme_choice(), Game { cfg, kind, preset })?;
    let mut report = Report::new("game", cfg.to_value(json!({ "game": kind.name() })));
    report.push(row, true);
    Ok(report)
}

fn attack_policy(game: Option<&str>, default: GameKind) -> Result<(GameKind, OraclePolicy), CliError> {
    let kind = match game {
        Some(name) => GameKind::parse(name).ok_or_else(|| CliError::Usage(format!("unknown game `{name}`")))?,
        None => default,
    };
    Ok((kind, kind.default_policy()))
}

struct IndToSem<'a> {
    cfg: &'a ExperimentConfig,
    preset: Preset,
    policy: OraclePolicy,
}

impl SchemeTask for IndToSem<'_> {
    type Output = (Value, Value, bool);

    fn run<S: QuantumEncryptionScheme>(self, scheme: &S) -> Result<Self::Output, CliError> {
        let gc = self.cfg.game_config();
        let r = reduction_sem_to_ind(self.preset.mgen.as_ref(), self.preset.dist.as_ref());
        let rep = ind_to_sem_pipeline(scheme, &r.mgen, &r.adversary, &EqualityDistinguisher, self.policy, &gc)?;
        let pre = json!({ "stage": "pre", "quantity": "ind advantage of the composed distinguisher", "estimate": to_value(&rep.ind) });
        let post = json!({
            "stage": "post",
            "quantity": "sem advantage with the constructed simulator",
            "simulator_mode": to_value(&rep.mode),
            "estimate": to_value(&rep.sem),
            "bound": rep.bound,
        });
        Ok((pre, post, rep.holds))
    }
}

struct SemToInd<'a> {
    cfg: &'a ExperimentConfig,
    preset: Preset,
    policy: OraclePolicy,
}

impl SchemeTask for SemToInd<'_> {
    type Output = Vec<(Value, bool)>;

    fn run<S: QuantumEncryptionScheme>(self, scheme: &S) -> Result<Self::Output, CliError> {
        let gc = self.cfg.game_config();
        let (mgen, dist) = (self.preset.mgen.as_ref(), self.preset.dist.as_ref());
        let eps = sem_to_ind_identity_check(scheme, mgen, dist, self.policy, &gc)?;
        let prime = ind_prime_ind_identity_check(scheme, mgen, dist, self.policy, &gc)?;
        Ok(vec![
            (json!({ "stage": "pre", "quantity": "ind advantage", "estimate": to_value(&eps.ind) }), true),
            (
                json!({
                    "stage": "post",
                    "quantity": "twice the best sem excess",
                    "sem": to_value(&eps.sem),
                    "sem_flipped": to_value(&eps.sem_flipped),
                    "value": eps.twice_max_excess,
                    "deviation": eps.deviation,
                }),
                eps.deviation <= EXACT_TOL,
            ),
            (
                json!({
                    "stage": "identity",
                    "quantity": "ind-prime guess against ind arms",
                    "guess_side": prime.guess_side,
                    "ind_side": prime.ind_side,
                    "flipped_guess_side": prime.flipped_guess_side,
                    "flipped_ind_side": prime.flipped_ind_side,
                    "deviation": prime.deviation,
                }),
                prime.deviation <= EXACT_TOL,
            ),
        ])
    }
}

pub fn reduce(
    cfg: &ExperimentConfig,
    reduction: &str,
    game: Option<&str>,
    prg_id: &str,
) -> Result<Report, CliError> {
    let gc = cfg.game_config();
    let mut extra = json!({ "reduction": reduction });
    let mut rows: Vec<(Value, bool)> = Vec::new();
    match reduction {
        "cca1-to-prf" => {
            let (kind, policy) = attack_policy(game, GameKind::IndCca1)?;
            extra["game"] = json!(kind.name());
            let preset = registry::preset(&cfg.adversary_or("pad-reuse"), cfg.qubits)?;
            let (mgen, dist) = (preset.mgen.as_ref(), preset.dist.as_ref());
            let (prf_id, rep) = match cfg.scheme.as_str() {
                "qprf-ske" => ("ggm", cca1_to_prf_pipeline(&GgmPrf::for_scheme(cfg.qubits)?, mgen, dist, policy, &gc)?),
                "const-prf-ske" => (
                    "constant-zero",
                    cca1_to_prf_pipeline(&ConstantZeroPrf::for_scheme(cfg.qubits), mgen, dist, policy, &gc)?,
                ),
                other => return Err(CliError::Usage(format!("cca1-to-prf needs a PRF-based scheme, got `{other}`"))),
            };
            let gap = (rep.game.p - rep.prf.p_real).abs();
            let slack = if gc.is_exact() { EXACT_TOL } else { rep.game.ci_halfwidth + rep.prf.ci_halfwidth };
            rows.push((json!({ "stage": "pre", "quantity": "ind-prime guess probability", "estimate": to_value(&rep.game) }), true));
            rows.push((
                json!({
                    "stage": "post",
                    "quantity": "prf distinguisher advantage",
                    "prf": prf_id,
                    "estimate": to_value(&rep.prf),
                    "real_arm_gap": gap,
                }),
                gap <= slack,
            ));
        }
        "ind-to-sem" => {
            let (kind, policy) = attack_policy(game, GameKind::Ind)?;
            extra["game"] = json!(kind.name());
            let preset = registry::preset(&cfg.adversary_or("measure"), cfg.qubits)?;
            let (pre, post, holds) = registry::with_scheme(&cfg.scheme_choice(), IndToSem { cfg, preset, policy })?;
            rows.push((pre, true));
            rows.push((post, holds));
        }
        "sem-to-ind" => {
            if !gc.is_exact() {
                return Err(CliError::Usage("sem-to-ind checks exact identities and needs --exact".into()));
            }
            let (kind, policy) = attack_policy(game, GameKind::Ind)?;
            extra["game"] = json!(kind.name());
            let preset = registry::preset(&cfg.adversary_or("measure"), cfg.qubits)?;
            rows = registry::with_scheme(&cfg.scheme_choice(), SemToInd { cfg, preset, policy })?;
        }
        "qotp-to-prg" => {
            extra["prg"] = json!(prg_id);
            let prg = registry::generator(prg_id, cfg.qubits, cfg.seed)?;
            let dist: &dyn StateDistinguisher = match cfg.adversary_or("measure").as_str() {
                "measure" => &MeasurePadRegister,
                "coin" => &CoinStateGuess,
                other => return Err(CliError::Usage(format!("qotp-to-prg takes `measure` or `coin`, got `{other}`"))),
            };
            let rho = DensityMatrix::basis(PAD_REGISTER, &BitString::ones(cfg.qubits))
                .tensor(&DensityMatrix::plus(REST_REGISTER))?;
            let pair = StatePair::new(rho, DensityMatrix::zero(PAD_REGISTER, cfg.qubits))?;
            let d = reduction_qotp_to_prg(dist, pair);
            let est = prg_distinguisher_advantage(&d, prg.as_ref(), &gc)?;
            let slack = if gc.is_exact() { EXACT_TOL } else { est.ci_halfwidth };
            rows.push((
                json!({ "stage": "pre", "quantity": "state distinguisher", "distinguisher": dist.id() }),
                true,
            ));
            rows.push((
                json!({
                    "stage": "post",
                    "quantity": "prg distinguisher advantage",
                    "estimate": to_value(&est),
                    "uniform_arm_success": est.p_ideal,
                }),
                (est.p_ideal - 0.5).abs() <= slack,
            ));
        }
        other => return Err(CliError::Usage(format!("unknown reduction `{other}` (see --list)"))),
    }
    let mut report = Report::new("reduce", cfg.to_value(extra));
    for (row, ok) in rows {
        report.push(row, ok);
    }
    Ok(report)
}

/// Toy permutation keypairs with sample points, generator output and GGM
/// output, and an exhaustive inversion check on each.
pub fn vectors(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let bits = cfg.n.unwrap_or(10);
    if !(MIN_MODULUS_BITS..=MAX_MODULUS_BITS).contains(&bits) {
        return Err(CliError::Usage(format!("--n must be a modulus width in {MIN_MODULUS_BITS}..={MAX_MODULUS_BITS}")));
    }
    let family = ToyRsaFamily::new(bits)?;
    let prf = GgmPrf::toy(cfg.qubits, 2 * cfg.qubits, 2 * cfg.qubits, cfg.seed)?;
    let mut report = Report::new("vectors", cfg.to_value(json!({ "modulus_bits": bits })));
    for i in 0..cfg.trials {
        let kp = family.generate(&mut DetRng::with_stream(cfg.seed, i));
        let (index, trapdoor) = (&kp.index, &kp.trapdoor);
        let domain = index.domain();
        let mut failures = 0u64;
        for &x in &domain {
            if trapdoor.invert(index.evaluate(x)?)? != x {
                failures += 1;
            }
        }
        let seed = domain[domain.len() / 2];
        let points: Vec<Value> = domain
            .iter()
            .take(8)
            .map(|&x| Ok(json!([x, index.evaluate(x)?, index.hardcore(x)? as u8])))
            .collect::<Result<_, qenc::Error>>()?;
        report.push(
            json!({
                "keypair": i,
                "modulus": index.modulus(),
                "exponent": index.exponent(),
                "inverse_exponent": trapdoor.inverse_exponent(),
                "mask": index.mask(),
                "domain_size": domain.len(),
                "inversion_failures": failures,
                "points": points,
                "prg": { "seed": seed, "t": 12, "output": prg_iterated(index, seed, 12)?.to_string() },
            }),
            failures == 0,
        );
    }
    let key = BitString::ones(cfg.qubits);
    let inputs: Vec<Value> = (0..1u64 << (2 * cfg.qubits))
        .map(|x| {
            let x = BitString::from_u64(x, 2 * cfg.qubits);
            Ok(json!([x.to_string(), prf.eval(&key, &x)?.to_string()]))
        })
        .collect::<Result<_, qenc::Error>>()?;
    report.push(json!({ "ggm": { "key": key.to_string(), "outputs": inputs } }), true);
    Ok(report)
}
