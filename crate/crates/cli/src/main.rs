//! `wdrep`: validate, analyze and compare Weil-Deligne representations
//! stored in `wdrep/1` documents.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Failure, Outcome};

#[derive(Parser, Debug)]
#[command(name = "wdrep", version, about = "Exact Weil-Deligne representation analysis")]
pub struct Cli {
    /// Bound on the size of finite group closures.
    #[arg(long, global = true, default_value_t = wdrep_core::linalg::DEFAULT_CAP)]
    pub cap: usize,
    /// Work at cyclotomic level N * M before any root search.
    #[arg(long = "cyclo-mult", global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub cyclo_mult: u32,
    /// Emit a `wdrep/1` report document instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a document and check every invariant of the object.
    Validate { file: PathBuf },
    /// Monodromy filtration, purity verdict and weight.
    Analyze { file: PathBuf },
    /// Block structure after Frobenius semisimplification.
    Decompose { file: PathBuf },
    /// Inverse Euler factor.
    Euler { file: PathBuf },
    /// Fibre of a family at a point.
    Specialize {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Check the purity theorem for a family at the given points.
    VerifyPurity {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        points: Vec<String>,
    },
    /// Isomorphism of two representations.
    Iso { a: PathBuf, b: PathBuf },
    /// Characteristic polynomial of a word under a pseudorepresentation.
    PseudoCharpoly {
        file: PathBuf,
        #[arg(long)]
        word: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = commands::run(&cli);
    let code = match &result {
        Ok(o) => o.code,
        Err(f) => f.code,
    };
    if cli.json {
        print!("{}", commands::json_report(&cli, &result));
    } else {
        match result {
            Ok(Outcome { text, .. }) => print!("{text}"),
            Err(Failure { message, .. }) => eprintln!("error: {message}"),
        }
    }
    ExitCode::from(code)
}
