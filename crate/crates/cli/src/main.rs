//! `loopquiver`: every check of the library as a subcommand with a JSON
//! report. Exit status 0 when all checks pass, 1 when a check fails or the
//! input lacks the required property, 2 on usage errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use commands::{Failure, Outcome};

pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

/// Desk-scale caps on the size parameters.
pub const MAX_MN: usize = 16;
pub const MAX_WINDOW: usize = 16;

#[derive(Debug, Parser)]
#[command(
    name = "loopquiver",
    version,
    about = "Exact checks on loop-quiver and degenerate affine Grassmannians"
)]
struct Cli {
    /// Also write the report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    json_out: Option<PathBuf>,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Include wall-clock timings; the report is then no longer reproducible.
    #[arg(long, global = true)]
    timings: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Shape {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long = "N")]
    pub depth: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ProfileArg {
    Quick,
    Full,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Module type of a subspace (`{"m","N","generators"}`) or a framed pair
    /// (`{"k","m","N","phi","f"}`) read from JSON.
    Classify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Orbits of `X^(N)_{k,m}` with dimensions and dominance covers.
    OrbitPoset {
        #[command(flatten)]
        shape: Shape,
        /// Check rank conditions against dominance and every cover family.
        #[arg(long)]
        verify: bool,
    },
    /// The two-row family between `(l1, l2)` and `(l1-1, l2+1)`.
    Degeneration {
        #[arg(long)]
        l1: usize,
        #[arg(long)]
        l2: usize,
        #[arg(long = "N")]
        depth: usize,
        /// Parameter values; defaults to 2, 5, -3, 0, 1, -1.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        z: Vec<String>,
    },
    /// Tower dimension and random flags of the resolution for `λ`.
    Desing {
        /// Comma-separated parts.
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        m: usize,
        #[arg(long = "N")]
        depth: usize,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Plücker relations (and the conjectured equations) on points of
    /// `X^(2)_{2,m}`, or the coordinates of one input subspace.
    Pluecker {
        #[arg(long, required_unless_present = "input")]
        m: Option<usize>,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long)]
        conjecture: bool,
        #[arg(long, conflicts_with_all = ["m", "conjecture"])]
        input: Option<PathBuf>,
    },
    /// Folding, open cell and Jacobian checks for the degenerate affine
    /// Grassmannian of `gl_n`.
    Graff {
        #[arg(long)]
        n: usize,
        #[arg(long = "N")]
        depth: usize,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Flat-family membership against the chart equations.
    Flatfam {
        #[arg(long = "K")]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Rational `ħ`, e.g. `2/3`.
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        hbar: String,
        #[arg(long, default_value_t = 30)]
        samples: usize,
    },
    /// The `sl_2` open cell: membership and Jacobian rank.
    Sl2 {
        #[arg(long = "N")]
        depth: usize,
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
    /// The `sp_2n` open cell: membership and Jacobian rank.
    Sp {
        #[arg(long)]
        n: usize,
        #[arg(long = "N")]
        depth: usize,
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
    /// Dimension of the torus acting on the degenerate `sl_2` cell.
    Torus {
        #[arg(long = "K")]
        depth: usize,
    },
    /// Fixed points of `X^(N)_{k,m}` and the index map to the Grassmannian.
    Schubert {
        #[command(flatten)]
        shape: Shape,
    },
    /// ehf-monomial counts and linear independence per energy.
    Ehf {
        #[arg(long, default_value_t = loopquiver::wedge::DEFAULT_ENERGY)]
        max_energy: usize,
    },
    /// The abelianized `gl_1` relation `h(z)^2 |0> = 0`.
    Gl1 {
        #[arg(long, default_value_t = 8)]
        max_energy: usize,
    },
    /// All acceptance criteria.
    VerifyAll {
        #[arg(long, value_enum, default_value_t = ProfileArg::Quick)]
        profile: ProfileArg,
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
        /// Corrupt one expected value to check that failures are reported.
        #[arg(long)]
        inject_fault: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::OrbitPoset { .. } => "orbit-poset",
            Command::Degeneration { .. } => "degeneration",
            Command::Desing { .. } => "desing",
            Command::Pluecker { .. } => "pluecker",
            Command::Graff { .. } => "graff",
            Command::Flatfam { .. } => "flatfam",
            Command::Sl2 { .. } => "sl2",
            Command::Sp { .. } => "sp",
            Command::Torus { .. } => "torus",
            Command::Schubert { .. } => "schubert",
            Command::Ehf { .. } => "ehf",
            Command::Gl1 { .. } => "gl1",
            Command::VerifyAll { .. } => "verify-all",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(EXIT_USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let start = Instant::now();
    let name = cli.command.name();
    let outcome = commands::run(&cli.command, cli.seed);
    let (code, mut report) = match outcome {
        Ok(Outcome {
            pass,
            config,
            result,
        }) => (
            if pass { 0 } else { EXIT_FAIL },
            json!({ "command": name, "seed": cli.seed, "config": config, "pass": pass, "result": result }),
        ),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            (
                EXIT_FAIL,
                json!({ "command": name, "seed": cli.seed, "pass": false, "error": msg }),
            )
        }
    };
    if cli.timings {
        report["elapsed_ms"] = Value::from(start.elapsed().as_millis() as u64);
    }
    let text = serde_json::to_string_pretty(&report).expect("JSON values serialize");
    println!("{text}");
    if let Some(path) = &cli.json_out {
        if let Err(e) = std::fs::write(path, format!("{text}\n")) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_USAGE);
        }
    }
    ExitCode::from(code)
}
