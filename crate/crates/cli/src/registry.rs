//! Named schemes, attack presets, reductions and generators the CLI can run.

use qenc::classical::{ConstantPrg, OrdinalPrg, Prg, ToyRsaFamily};
use qenc::games::battery::{
    BellMessage, CoinGuess, ConstantGuess, MatchMessageSide, MeasureMessage, OnesMessage, OracleProbeMessage,
    PadReuseDistinguisher, PadReuseMessage,
};
use qenc::games::{Distinguisher, MessageGenerator};
use qenc::schemes::{
    ConstantPrfSke, FixedKeyScheme, IdealizedPke, IdentityScheme, QprfSke, QuantumEncryptionScheme, RandomFunctionSke,
    TowpPke,
};
use qenc::DetRng;

use crate::CliError;

pub const SCHEMES: &[(&str, &str)] = &[
    ("qprf-ske", "symmetric scheme padded by the GGM function of a fresh tag"),
    ("const-prf-ske", "the symmetric scheme over the all-zero function (broken)"),
    ("qtowp-pke", "public-key scheme padded by the iterated-permutation generator"),
    ("identity", "no encryption at all (broken)"),
    ("ideal-ske", "symmetric scheme padded by a truly random function of the tag"),
    ("ideal-pke", "public-key scheme padded by a truly random function of the tag"),
];

pub const PRESETS: &[(&str, &str)] = &[
    ("measure", "message |1..1>, distinguisher measures the payload"),
    ("bell-match", "message entangled with E, distinguisher compares M with E"),
    ("oracle-probe", "message probed through the oracles, distinguisher measures the payload"),
    ("pad-reuse", "learns one pad through the encryption oracle and looks for it again"),
    ("coin", "distinguisher flips a coin"),
    ("const-0", "distinguisher always answers 0"),
    ("const-1", "distinguisher always answers 1"),
];

pub const REDUCTIONS: &[(&str, &str)] = &[
    ("cca1-to-prf", "IND-CCA1 attack on the symmetric scheme turned into a PRF distinguisher"),
    ("ind-to-sem", "simulator built from the SEM adversary, compared with the IND run"),
    ("sem-to-ind", "IND advantage against twice the best SEM excess, and the IND' identity"),
    ("qotp-to-prg", "padded-state distinguisher turned into a PRG distinguisher"),
];

pub const GENERATORS: &[(&str, &str)] = &[
    ("toy-prg", "iterated toy permutation on ordinal seeds"),
    ("constant-prg", "all-zero output (broken)"),
];

/// Work generic over the selected scheme.
pub trait SchemeTask {
    type Output;

    fn run<S: QuantumEncryptionScheme>(self, scheme: &S) -> Result<Self::Output, CliError>;
}

#[derive(Clone, Debug)]
pub struct SchemeChoice {
    pub id: String,
    pub qubits: usize,
    /// Modulus width for the public-key schemes; must equal `qubits` for the
    /// symmetric ones.
    pub n: Option<usize>,
    /// Pin public keys (drawn from `seed`) so exact runs need not enumerate
    /// key generation.
    pub pin_public_keys: bool,
    pub seed: u64,
}

fn symmetric_n(choice: &SchemeChoice) -> Result<(), CliError> {
    match choice.n {
        Some(n) if n != choice.qubits => Err(CliError::Usage(format!(
            "`{}` uses n = qubits, got --n {n} with --qubits {}",
            choice.id, choice.qubits
        ))),
        _ => Ok(()),
    }
}

pub fn with_scheme<T: SchemeTask>(choice: &SchemeChoice, task: T) -> Result<T::Output, CliError> {
    let q = choice.qubits;
    let key_coins = || DetRng::with_stream(choice.seed, 0x6b6579);
    match choice.id.as_str() {
        "qprf-ske" => {
            symmetric_n(choice)?;
            task.run(&QprfSke::new(q)?)
        }
        "const-prf-ske" => {
            symmetric_n(choice)?;
            task.run(&ConstantPrfSke::constant(q)?)
        }
        "identity" => {
            symmetric_n(choice)?;
            task.run(&IdentityScheme::new(q))
        }
        "ideal-ske" => {
            symmetric_n(choice)?;
            task.run(&RandomFunctionSke::new(q))
        }
        "qtowp-pke" => {
            let scheme = TowpPke::with_modulus_bits(q, choice.n.unwrap_or_else(|| TowpPke::modulus_bits(q)))?;
            if choice.pin_public_keys {
                task.run(&FixedKeyScheme::generate(scheme, &mut key_coins())?)
            } else {
                task.run(&scheme)
            }
        }
        "ideal-pke" => {
            let bits = choice.n.unwrap_or_else(|| TowpPke::modulus_bits(q));
            if choice.pin_public_keys {
                let kp = ToyRsaFamily::new(bits)?.generate(&mut key_coins());
                task.run(&IdealizedPke::with_keypair(q, kp)?)
            } else if bits == TowpPke::modulus_bits(q) {
                task.run(&IdealizedPke::new(q)?)
            } else {
                Err(CliError::Usage("`ideal-pke` samples keys at the default modulus width only".into()))
            }
        }
        other => Err(CliError::Usage(format!("unknown scheme `{other}` (see --list)"))),
    }
}

/// An IND pair plus the length of the generator's transcript.
pub struct Preset {
    pub mgen: Box<dyn MessageGenerator>,
    pub dist: Box<dyn Distinguisher>,
    pub transcript_len: usize,
}

pub fn preset(id: &str, qubits: usize) -> Result<Preset, CliError> {
    let ones = || Box::new(OnesMessage { qubits }) as Box<dyn MessageGenerator>;
    let (mgen, dist, transcript_len): (Box<dyn MessageGenerator>, Box<dyn Distinguisher>, usize) = match id {
        "measure" => (ones(), Box::new(MeasureMessage { probe: false }), qubits),
        "bell-match" => (Box::new(BellMessage { qubits }), Box::new(MatchMessageSide), 0),
        "oracle-probe" => (Box::new(OracleProbeMessage { qubits }), Box::new(MeasureMessage { probe: true }), qubits),
        "pad-reuse" => (Box::new(PadReuseMessage { qubits }), Box::new(PadReuseDistinguisher), qubits),
        "coin" => (ones(), Box::new(CoinGuess), qubits),
        "const-0" => (ones(), Box::new(ConstantGuess(false)), qubits),
        "const-1" => (ones(), Box::new(ConstantGuess(true)), qubits),
        other => return Err(CliError::Usage(format!("unknown adversary `{other}` (see --list)"))),
    };
    Ok(Preset { mgen, dist, transcript_len })
}

pub fn generator(id: &str, qubits: usize, seed: u64) -> Result<Box<dyn Prg>, CliError> {
    match id {
        "toy-prg" => {
            let index = ToyRsaFamily::new(8)?.generate(&mut DetRng::with_stream(seed, 0x707267)).index;
            Ok(Box::new(OrdinalPrg::new(index, qubits, 2 * qubits)?))
        }
        "constant-prg" => Ok(Box::new(ConstantPrg { seed_len: qubits, out_len: 2 * qubits })),
        other => Err(CliError::Usage(format!("unknown generator `{other}` (see --list)"))),
    }
}
