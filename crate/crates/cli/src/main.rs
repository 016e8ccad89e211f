//! `gerbe`: level tables, obstruction certificates and finite cohomology from the command line.
//!
//! Exit codes: 0 success (including verdict no-claim), 1 bad input, 2 a cap
//! was exceeded, 3 a level verdict is mismatch, 4 internal error.

mod commands;
mod input;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gerbe_core::levels::ClaimTable;
use gerbe_core::rootdata::{Form, Series};
use gerbe_core::weyl::DEFAULT_WEYL_CAP;
use gerbe_core::Error;

use commands::{Caps, Report};

const DEFAULT_RANGE: &str = "A:1-4,B:2-3,C:2-3,D:3-4";

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Parser)]
#[command(name = "gerbe", version, about = "Levels, obstruction classes and finite cocycle models on reductive groups")]
struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Also write the output to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_WEYL_CAP, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    max_weyl_order: u64,
    #[arg(long, default_value_t = 4, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    max_denominator: u64,
    /// Claim table replacing the built-in one.
    #[arg(long, global = true)]
    fixture: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct DatumArgs {
    series: Option<Series>,
    rank: Option<usize>,
    form: Option<Form>,
    /// Target form for `H → G`; defaults to FORM.
    #[arg(long)]
    target: Option<Form>,
    /// Root datum or `{source, target}` JSON file instead of a classical datum.
    #[arg(long)]
    isogeny: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Invariant and allowable level lattices, compared with the claim table.
    Levels {
        series: Option<Series>,
        rank: Option<usize>,
        source: Option<Form>,
        target: Option<Form>,
        #[arg(long)]
        isogeny: Option<PathBuf>,
    },
    /// Obstruction class of a level at one semisimple point.
    Obstruction {
        #[command(flatten)]
        datum: DatumArgs,
        /// The point, as `1/2,-1/2,0`.
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        /// Read `--xi` in cocharacter-basis coordinates instead of ambient ones.
        #[arg(long)]
        basis: bool,
        /// `b0`, `2*b0`, `b0 + sum_sq`, or a JSON integer matrix.
        #[arg(long, default_value = "b0", allow_hyphen_values = true)]
        level: String,
    },
    /// Obstruction classes on every torsion point up to the denominator bound.
    Scan {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long, default_value = "b0", allow_hyphen_values = true)]
        level: String,
    },
    /// Level comparison over a range of classical families.
    Atlas {
        #[arg(long, default_value = DEFAULT_RANGE)]
        range: String,
        /// Add an exhaustive obstruction scan at the first allowable generator.
        #[arg(long)]
        scan: bool,
    },
    /// Čech cohomology of a nerve.
    Cohomology {
        complex: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value = "Z")]
        coefficients: String,
        /// Cochain `{values}` to classify and, if possible, trivialize.
        #[arg(long)]
        cochain: Option<PathBuf>,
    },
    /// Equivariant cohomology of a finite group acting on a nerve.
    Equivariant {
        complex: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value = "Z")]
        coefficients: String,
    },
    /// Central extension of a finite group by a 2-cocycle.
    Extension { file: PathBuf },
    /// Print and validate a root datum or isogeny.
    Datum {
        #[command(flatten)]
        datum: DatumArgs,
    },
}

fn resolve(d: &DatumArgs, strict: bool) -> gerbe_core::Result<gerbe_core::rootdata::IsogenyDatum> {
    commands::resolve_isogeny(d.isogeny.as_deref(), strict, d.series, d.rank, d.form, d.target)
}

fn claims(path: Option<&Path>) -> gerbe_core::Result<ClaimTable> {
    match path {
        Some(p) => {
            let s = fs::read_to_string(p).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", p.display())))?;
            ClaimTable::from_json(&s)
        }
        None => Ok(ClaimTable::builtin()),
    }
}

/// Runs the command; the flag says whether a datum failed validation.
fn run(cli: &Cli) -> gerbe_core::Result<(Report, bool)> {
    let caps = Caps { weyl_order: cli.max_weyl_order, max_denominator: cli.max_denominator };
    let ok = |r: Report| Ok((r, true));
    match &cli.command {
        Command::Levels { series, rank, source, target, isogeny } => {
            let key = match (series, rank, source) {
                (Some(s), Some(r), Some(a)) => Some((*s, *r, *a, target.unwrap_or(*a))),
                (None, None, None) => None,
                _ => return Err(Error::InvalidInput("give SERIES RANK SOURCE [TARGET]".into())),
            };
            ok(commands::levels(isogeny.as_deref(), key, &claims(cli.fixture.as_deref())?, caps)?)
        }
        Command::Obstruction { datum, xi, basis, level } => ok(commands::obstruction(&resolve(datum, true)?, level, xi, *basis, caps)?),
        Command::Scan { datum, level } => ok(commands::scan(&resolve(datum, true)?, level, caps)?),
        Command::Atlas { range, scan } => ok(commands::atlas(range, *scan, &claims(cli.fixture.as_deref())?, caps)?),
        Command::Cohomology { complex, degree, coefficients, cochain } => {
            ok(commands::cohomology_cmd(complex, *degree, coefficients, cochain.as_deref())?)
        }
        Command::Equivariant { complex, degree, coefficients } => ok(commands::equivariant_cmd(complex, *degree, coefficients)?),
        Command::Extension { file } => ok(commands::extension_cmd(file)?),
        Command::Datum { datum } => Ok(commands::datum_cmd(&resolve(datum, false)?)),
    }
}

fn render(report: &Report, format: Format) -> String {
    let head = format!("# gerbe {}\n", env!("CARGO_PKG_VERSION"));
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.json).expect("json values print");
            s.push('\n');
            s
        }
        Format::Text => head + &report.text,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &report.csv {
                w.write_record(row).expect("in-memory csv");
            }
            let body = String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv");
            head + &body
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CapExceeded { .. } => 2,
        Error::Internal(_) => 4,
        _ => 1,
    }
}

fn main() -> ExitCode {
    // clap would use exit code 2 for usage errors, which is reserved for caps
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (report, valid) = match run(&cli) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let out = render(&report, cli.format);
    if let Some(p) = &cli.out {
        if let Err(e) = fs::write(p, &out) {
            eprintln!("error: cannot write {}: {e}", p.display());
            return ExitCode::from(1);
        }
    }
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(1);
    }
    if !valid {
        ExitCode::from(1)
    } else if report.mismatch {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    }
}
