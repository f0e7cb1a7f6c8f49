use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nilscalars::verify::Scale;
use nilscalars_cli::{
    cmd_analyze, cmd_emit_edef, cmd_interpret, cmd_solve, cmd_translate, cmd_verify, read, CliError, EdefKind,
    EdefOptions, Target,
};

#[derive(Parser)]
#[command(name = "nilscalars", version, about = "Rings of scalars and interpretations in nilpotent groups")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sections, gate, commutator map, ring of scalars and its recognition.
    Analyze {
        group: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print an equational definition as a system.
    EmitEdef {
        #[arg(value_enum)]
        kind: Kind,
        group: PathBuf,
        #[arg(long)]
        width: Option<usize>,
        #[arg(long)]
        word: Option<String>,
        #[arg(long)]
        class: Option<u32>,
    },
    /// Build an e-interpretation and write it as a chain file.
    Interpret {
        group: PathBuf,
        #[arg(long, value_enum, default_value = "int")]
        target: TargetArg,
        #[arg(long, requires = "b")]
        a: Option<String>,
        #[arg(long, requires = "a")]
        b: Option<String>,
    },
    /// Translate a system through a chain.
    Translate { chain: PathBuf, system: PathBuf },
    /// Solve a system on both sides of a chain and compare.
    Verify {
        chain: PathBuf,
        system: PathBuf,
        #[command(flatten)]
        scale: ScaleArgs,
        #[arg(long)]
        json: bool,
    },
    /// Solve a group system directly.
    Solve {
        group: PathBuf,
        system: PathBuf,
        #[command(flatten)]
        scale: ScaleArgs,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ScaleArgs {
    /// Work modulo m-th powers of the generators.
    #[arg(long = "mod")]
    modulus: Option<i64>,
    /// Work in the exponent box [-B, B].
    #[arg(long = "box")]
    bound: Option<i64>,
}

impl ScaleArgs {
    fn scale(&self) -> Result<Scale, CliError> {
        match (self.modulus, self.bound) {
            (Some(m), _) if m >= 2 => Ok(Scale::Mod(m)),
            (_, Some(b)) if b >= 0 => Ok(Scale::Box(b)),
            _ => Err(CliError::Usage("need --mod m with m >= 2 or --box B with B >= 0".into())),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Center,
    Verbal,
    Maxnilp,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Int,
    Scalars,
    Quotient,
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.cmd {
        Cmd::Analyze { group, json } => {
            let r = cmd_analyze(&read(&group)?)?;
            Ok(if json { serde_json::to_string_pretty(&r).expect("report serializes") + "\n" } else { r.to_string() })
        }
        Cmd::EmitEdef { kind, group, width, word, class } => {
            let kind = match kind {
                Kind::Center => EdefKind::Center,
                Kind::Verbal => EdefKind::Verbal,
                Kind::Maxnilp => EdefKind::Maxnilp,
            };
            cmd_emit_edef(kind, &read(&group)?, &EdefOptions { width, word, class })
        }
        Cmd::Interpret { group, target, a, b } => {
            let target = match target {
                TargetArg::Int => Target::Int,
                TargetArg::Scalars => Target::Scalars,
                TargetArg::Quotient => Target::Quotient,
            };
            let pair = a.as_deref().zip(b.as_deref());
            cmd_interpret(&read(&group)?, target, pair)
        }
        Cmd::Translate { chain, system } => cmd_translate(&read(&chain)?, &read(&system)?),
        Cmd::Verify { chain, system, scale, json } => cmd_verify(&read(&chain)?, &read(&system)?, scale.scale()?, json),
        Cmd::Solve { group, system, scale, json } => cmd_solve(&read(&group)?, &read(&system)?, scale.scale()?, json),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(CliError::Mismatch(text)) => {
            print!("{text}");
            eprintln!("error: verification failed");
            ExitCode::from(5)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
