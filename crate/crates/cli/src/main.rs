mod commands;
mod load;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use toporeal_core::Error;

#[derive(Parser)]
#[command(
    name = "toporeal",
    version,
    about = "Realizations, sheafification and descent checks over finite sites"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Realize F against a presheaf and report its homology.
    Realize(Opts),
    /// Sheafify a set-valued presheaf.
    Sheafify(Opts),
    /// Check covariant descent of F on covering sieves.
    DescentCheck(Opts),
    /// Compare the realizations of two presheaves along a map.
    Compare(Opts),
    /// Write a gallery instance.
    Examples(ExampleOpts),
    /// Validate the given inputs.
    Validate(Opts),
}

#[derive(Clone, Copy, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Args, Clone, Default)]
pub struct Opts {
    /// Category JSON, optionally with `coverings`.
    #[arg(long)]
    pub cat: Option<PathBuf>,
    /// Finite space JSON; its site is the poset of nonempty opens.
    #[arg(long)]
    pub space: Option<PathBuf>,
    /// Presheaf JSON; repeat for commands taking two.
    #[arg(long)]
    pub presheaf: Vec<PathBuf>,
    /// Covariant diagram JSON, or `order-complex` / `point`.
    #[arg(long)]
    pub functor: Option<String>,
    /// JSON list of morphism ids generating the sieve.
    #[arg(long)]
    pub sieve: Option<PathBuf>,
    #[arg(long)]
    pub object: Option<String>,
    /// Presheaf map JSON for `compare`.
    #[arg(long)]
    pub map: Option<PathBuf>,
    /// Use a built-in gallery instance as input.
    #[arg(long)]
    pub example: Option<String>,
    #[arg(long)]
    pub dim_cap: Option<usize>,
    /// Highest homology degree reported; at most dim-cap - 1.
    #[arg(long)]
    pub max_deg: Option<usize>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
struct ExampleOpts {
    name: String,
    /// Directory to write the instance files into; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Validation(_) => 3,
        Error::Invariant(_) => 4,
        _ => 2,
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Error> {
    match out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Error::input(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::input(e.to_string()))
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let (text, out) = match cli.command {
        Command::Examples(o) => {
            let inst = toporeal_core::gallery::instance(&o.name, 4)?;
            match &o.out {
                Some(dir) => {
                    std::fs::create_dir_all(dir).map_err(|e| {
                        Error::input(format!("cannot create {}: {e}", dir.display()))
                    })?;
                    for (name, v) in inst.files() {
                        let body = serde_json::to_string_pretty(&v).expect("json") + "\n";
                        emit(&body, Some(&dir.join(name)))?;
                    }
                    return Ok(());
                }
                None => (
                    commands::render(&commands::examples_bundle(&inst), o.format),
                    None,
                ),
            }
        }
        Command::Realize(o) => (commands::realize(&o)?, o.out.clone()),
        Command::Sheafify(o) => (commands::sheafify(&o)?, o.out.clone()),
        Command::DescentCheck(o) => (commands::descent_check(&o)?, o.out.clone()),
        Command::Compare(o) => (commands::compare(&o)?, o.out.clone()),
        Command::Validate(o) => (commands::validate(&o)?, o.out.clone()),
    };
    emit(&text, out.as_ref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = exit_code(&e);
            let record =
                json!({"error": {"kind": e.kind(), "message": e.to_string(), "exit_code": code}});
            eprintln!("{record}");
            ExitCode::from(code)
        }
    }
}
