//! `modspec` — batch CLI over the modspectra library.
//!
//! Reads a workspace of named algebraic bindings (see [`dsl`]), runs one
//! command against it, and emits a report on stdout.  Diagnostics go to
//! stderr.  Exit codes: 0 on success or a verified suite, 2 when a
//! verification suite finds a counterexample, 1 on any error.

mod commands;
mod dsl;
mod error;

use std::io::Read;

use clap::{Parser, Subcommand, ValueEnum};

use commands::MemberClass;
use error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser)]
#[command(
    name = "modspec",
    version,
    about = "Support and associated-prime calculus, torsion theory, and subcategory \
             verification for finitely presented modules over commutative noetherian rings"
)]
struct Cli {
    /// Workspace file in the modspec statement language; `-` reads stdin.
    #[arg(short, long, global = true, value_name = "PATH")]
    workspace: Option<String>,

    /// Report format.
    #[arg(short, long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Associated primes of a bound module.
    Ass {
        #[arg(long)]
        module: String,
    },
    /// Support of a bound module, as a union of prime closures.
    Supp {
        #[arg(long)]
        module: String,
    },
    /// A verified filtration with cyclic prime quotients.
    Filtration {
        #[arg(long)]
        module: String,
    },
    /// Whether a single prime governs the module (annihilator = unique Ass).
    Spectral {
        #[arg(long)]
        module: String,
    },
    /// Torsion/torsion-free decomposition along a specialization-closed set.
    Torsion {
        #[arg(long)]
        module: String,
        #[arg(long)]
        set: String,
    },
    /// Nonvanishing of bass numbers at a prime over an inclusive degree range.
    Bass {
        #[arg(long)]
        module: String,
        /// A bound prime name or an inline literal such as `(2)`.
        #[arg(long)]
        prime: String,
        /// Inclusive degree range `k0..k1`.
        #[arg(long)]
        range: String,
    },
    /// Symbolic minimal injective resolution up to a degree.
    Injres {
        #[arg(long)]
        module: String,
        #[arg(long)]
        upto: usize,
    },
    /// Membership of a module in a named subcategory.
    Member {
        #[arg(long)]
        module: String,
        #[arg(long, value_enum)]
        class: MemberClass,
        /// Specialization-closed set binding (point set for `--class psi`).
        #[arg(long)]
        set: Option<String>,
        /// Decreasing-sequence binding for `--class ctilde`.
        #[arg(long)]
        gseq: Option<String>,
    },
    /// Run a verification suite and report pass/fail with evidence.
    Verify {
        /// One of: p3_9, ashah, dr9_4, bass, torsionpair, supp_ass.
        #[arg(long)]
        suite: String,
        /// Ring literal for exhaustive suites, e.g. `Z/12` or `GF(2)[x]/(x^3)`
        /// [default: Z/12].
        #[arg(long)]
        ring: Option<String>,
        /// Cardinality bound for exhaustive suites [default: 144].
        #[arg(long)]
        bound: Option<u64>,
        /// Seed for sampled suites; reports are byte-identical per seed
        /// [default: 0].
        #[arg(long)]
        seed: Option<u64>,
        /// Sample-count override for sampled suites [default: each suite's
        /// contract size].
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Parse a workspace and re-emit it in canonical form.
    Print,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("modspec: {e}");
            1
        }
    }
}

fn execute(cli: &Cli) -> CliResult<i32> {
    if let Cmd::Verify { suite, ring, bound, seed, samples } = &cli.command {
        let report =
            commands::verify(suite, ring.as_deref(), *bound, *seed, *samples)?;
        emit(cli.format, &report);
        return Ok(if report.verification_failed() { 2 } else { 0 });
    }

    let ws = load_workspace(cli.workspace.as_deref())?;
    if let Cmd::Print = cli.command {
        let rendered = ws.render();
        match cli.format {
            Format::Text => print!("{rendered}"),
            Format::Json => {
                println!("{}", serde_json::json!({ "command": "print", "workspace": rendered }));
            }
        }
        return Ok(0);
    }

    let report = match &cli.command {
        Cmd::Ass { module } => commands::ass(&ws, module)?,
        Cmd::Supp { module } => commands::supp(&ws, module)?,
        Cmd::Filtration { module } => commands::filtration(&ws, module)?,
        Cmd::Spectral { module } => commands::spectral(&ws, module)?,
        Cmd::Torsion { module, set } => commands::torsion(&ws, module, set)?,
        Cmd::Bass { module, prime, range } => commands::bass(&ws, module, prime, range)?,
        Cmd::Injres { module, upto } => commands::injres(&ws, module, *upto)?,
        Cmd::Member { module, class, set, gseq } => {
            commands::member(&ws, module, *class, set.as_deref(), gseq.as_deref())?
        }
        Cmd::Verify { .. } | Cmd::Print => unreachable!("handled above"),
    };
    emit(cli.format, &report);
    Ok(0)
}

fn emit(format: Format, report: &commands::Report) {
    match format {
        Format::Text => println!("{}", report.text()),
        Format::Json => println!("{}", report.envelope()),
    }
}

fn load_workspace(path: Option<&str>) -> CliResult<dsl::Workspace> {
    let path = path.ok_or_else(|| {
        CliError::usage("this command needs a workspace; pass --workspace <PATH> (or `-` for stdin)")
    })?;
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::Io { path: "<stdin>".to_string(), source: e })?;
        dsl::parse_workspace(&text, "<stdin>")
    } else {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io { path: path.to_string(), source: e })?;
        dsl::parse_workspace(&text, path)
    }
}
