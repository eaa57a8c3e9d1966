//! `qenc`: correctness suites, mixing checks, security games, reduction
//! pipelines and toy vectors, with JSON (and CSV) results.

mod commands;
mod registry;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::ExperimentConfig;
use report::Report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qenc::Error),
    #[error("cannot write output: {0}")]
    Output(String),
}

#[derive(Parser, Debug)]
#[command(name = "qenc", version, about = "Quantum encryption experiments at desk scale")]
struct Cli {
    /// List the registered games, schemes, adversaries, reductions and generators.
    #[arg(long)]
    list: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Debug, Clone)]
struct Common {
    #[arg(long, default_value = "qprf-ske")]
    scheme: String,
    /// Security parameter: PRF key length (equal to --qubits) for symmetric
    /// schemes, modulus width for public-key ones.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 1)]
    qubits: usize,
    /// Samples per arm; keys for `correctness`, keypairs for `vectors`.
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Enumerate every coin sequence instead of sampling.
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    adversary: Option<String>,
    /// Write the JSON here and its CSV mirror next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn config(&self, default_trials: u64) -> ExperimentConfig {
        ExperimentConfig {
            scheme: self.scheme.clone(),
            n: self.n,
            qubits: self.qubits,
            trials: self.trials.unwrap_or(default_trials),
            seed: self.seed,
            mode: if self.exact { "exact" } else { "sample" },
            adversary: self.adversary.clone(),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Choi distance of decrypt-after-encrypt from the identity, per key.
    Correctness {
        #[command(flatten)]
        common: Common,
        /// Decrypt without undoing the pad.
        #[arg(long)]
        corrupt_decrypt: bool,
    },
    /// Distance of the key-averaged pad from the maximally mixed state.
    QotpMix {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 24)]
        states: usize,
        /// Also tabulate each single pad applied to |0..0>.
        #[arg(long)]
        single_key: bool,
    },
    /// Run one security game.
    Game {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        game: String,
    },
    /// Run a reduction pipeline.
    Reduce {
        reduction: String,
        #[command(flatten)]
        common: Common,
        /// Game whose oracle policy the attack runs under.
        #[arg(long)]
        game: Option<String>,
        /// Generator for `qotp-to-prg`.
        #[arg(long, default_value = "toy-prg")]
        prg: String,
    },
    /// Toy permutation, generator and GGM vectors.
    Vectors {
        #[command(flatten)]
        common: Common,
    },
}

fn listing() -> String {
    let mut out = String::new();
    let games: Vec<(&str, &str)> = qenc::games::GameKind::ALL.iter().map(|g| (g.name(), "")).collect();
    for (title, entries) in [
        ("games", games.as_slice()),
        ("schemes", registry::SCHEMES),
        ("adversaries", registry::PRESETS),
        ("reductions", registry::REDUCTIONS),
        ("generators", registry::GENERATORS),
    ] {
        out.push_str(title);
        out.push_str(":\n");
        for (id, about) in entries {
            if about.is_empty() {
                out.push_str(&format!("  {id}\n"));
            } else {
                out.push_str(&format!("  {id:<14} {about}\n"));
            }
        }
    }
    out
}

fn run(command: Command) -> Result<(Report, Option<PathBuf>), CliError> {
    let (report, out) = match command {
        Command::Correctness { common, corrupt_decrypt } => {
            let cfg = common.config(20);
            cfg.validate()?;
            (commands::correctness(&cfg, corrupt_decrypt)?, common.out)
        }
        Command::QotpMix { common, states, single_key } => {
            let cfg = common.config(1);
            cfg.validate()?;
            (commands::qotp_mix(&cfg, states, single_key)?, common.out)
        }
        Command::Game { common, game } => {
            let cfg = common.config(1000);
            cfg.validate()?;
            (commands::game(&cfg, &game)?, common.out)
        }
        Command::Reduce { reduction, common, game, prg } => {
            let cfg = common.config(1000);
            cfg.validate()?;
            (commands::reduce(&cfg, &reduction, game.as_deref(), &prg)?, common.out)
        }
        Command::Vectors { common } => {
            let cfg = common.config(5);
            cfg.validate()?;
            (commands::vectors(&cfg)?, common.out)
        }
    };
    Ok((report, out))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if cli.list {
        print!("{}", listing());
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        eprintln!("error: no command given (see --help)");
        return ExitCode::from(2);
    };
    let outcome = run(command).and_then(|(report, out)| {
        let text = report.to_json()?;
        if let Some(path) = out {
            report.write(&path)?;
        }
        print!("{text}");
        Ok(report.pass)
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
