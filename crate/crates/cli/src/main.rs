//! `sphroot`: Demazure roots of complexity-one SL2-varieties from the
//! command line. JSON on stdout, diagnostics on stderr.
//!
//! Exit codes: 0 success, 1 invalid data, 2 parse or schema error,
//! 3 a bounded check came out inconclusive.

mod commands;
mod doc;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;
use sphroot_core::engine::DEFAULT_PRESERVATION_BOUND;
use sphroot_core::type1::BorelSide;

use commands::{Failure, Outcome, RootsArgs};
use doc::{parse_document, SideName, SpecDocument};

#[derive(Parser)]
#[command(name = "sphroot", version, about = "Demazure roots of affine spherical SL2-varieties of complexity one")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a spec file; exit 0 iff it describes valid data.
    Validate {
        /// Spec file, or `-` for stdin.
        file: PathBuf,
    },
    /// Root families, optionally enumerated in a box and certified.
    Roots {
        file: PathBuf,
        /// Enumerate roots with sup-norm at most this.
        #[arg(long)]
        bound: Option<i64>,
        /// Certify every enumerated root by its derivation.
        #[arg(long)]
        certify: bool,
        #[arg(long, value_enum)]
        side: Option<SideName>,
        /// Degree radius for the preservation and nilpotency checks; also the
        /// enumeration bound for `--certify` without `--bound`.
        #[arg(long, env = "SPHROOT_BOUND_DEFAULT", default_value_t = DEFAULT_PRESERVATION_BOUND)]
        preservation_bound: i64,
        /// Add wall-clock timing to the output (makes it nondeterministic).
        #[arg(long)]
        timing: bool,
    },
    /// The colored cone of a spec, or with `--inverse` the spec of a colored cone.
    Cone {
        file: PathBuf,
        #[arg(long, value_enum)]
        side: Option<SideName>,
        #[arg(long)]
        inverse: bool,
    },
    /// Emit a spec for a homogeneous space from the catalog.
    Catalog {
        /// One of Q1, Q2, N1, N2.
        kind: String,
        param: Option<i64>,
    },
}

fn read_doc(path: &PathBuf) -> Outcome<SpecDocument> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map(|_| s)
    } else {
        std::fs::read_to_string(path)
    }
    .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    parse_document(&text).map_err(Failure::Parse)
}

fn side_of(flag: Option<SideName>, doc: &SpecDocument) -> BorelSide {
    flag.or_else(|| doc.options.as_ref().and_then(|o| o.side)).unwrap_or(SideName::Minus).into()
}

enum Output {
    Value(Value),
    Doc(SpecDocument),
}

fn run(cli: &Cli) -> Outcome<Output> {
    match &cli.cmd {
        Cmd::Validate { file } => commands::validate(&read_doc(file)?).map(Output::Value),
        Cmd::Roots { file, bound, certify, side, preservation_bound, timing } => {
            let doc = read_doc(file)?;
            let opts = doc.options.clone().unwrap_or_default();
            let args = RootsArgs {
                side: side_of(*side, &doc),
                bound: bound.or(opts.bound),
                certify: *certify || opts.certify.unwrap_or(false),
                preservation_bound: *preservation_bound,
            };
            if args.bound.is_some_and(|b| b < 0) || args.preservation_bound < 0 {
                return Err(Failure::Parse("bounds must be non-negative".into()));
            }
            let start = Instant::now();
            let mut out = commands::roots(&doc, &args)?;
            out["input"] = serde_json::to_value(&doc).expect("serializable");
            if *timing {
                out["timing_ms"] = Value::from(start.elapsed().as_millis() as u64);
            }
            Ok(Output::Value(out))
        }
        Cmd::Cone { file, side, inverse } => {
            let doc = read_doc(file)?;
            if *inverse {
                commands::cone_inverse(&doc).map(Output::Doc)
            } else {
                commands::cone(&doc, side_of(*side, &doc)).map(Output::Doc)
            }
        }
        Cmd::Catalog { kind, param } => commands::catalog(kind, *param).map(Output::Doc),
    }
}

fn emit(v: &Value, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(v).expect("serializable")),
        Format::Text => print!("{}", commands::render_text(v)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Output::Value(v)) => emit(&v, cli.format),
        Ok(Output::Doc(d)) => match cli.format {
            Format::Json => print!("{}", d.to_pretty()),
            Format::Text => emit(&serde_json::to_value(&d).expect("serializable"), Format::Text),
        },
        Err(f) => {
            match &f {
                Failure::Parse(msg) => eprintln!("error: {msg}"),
                Failure::Domain(diag) => {
                    for d in diag {
                        eprintln!("invalid: {d}");
                    }
                    if matches!(cli.cmd, Cmd::Validate { .. }) {
                        emit(&serde_json::json!({ "valid": false, "diagnostics": diag }), cli.format);
                    }
                }
                Failure::Inconclusive(msg, partial) => {
                    eprintln!("inconclusive: {msg}");
                    if let Some(v) = partial {
                        emit(v, cli.format);
                    }
                }
            }
            return ExitCode::from(f.code());
        }
    }
    ExitCode::SUCCESS
}
