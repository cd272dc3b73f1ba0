//! `pathmonoid`: counting, enumeration, Green's classes, factorization and
//! rank checks for partial automorphisms and endomorphisms of the path.

mod commands;
mod selftest;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pathmonoid_core::{Error, Family};

#[derive(Debug, Parser)]
#[command(name = "pathmonoid", version, about = "Monoids of partial maps on the n-vertex path")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json, env = "PATHMONOID_FORMAT")]
    pub format: Format,

    /// Worker threads, 0 for one per core
    #[arg(long, global = true, default_value_t = 0, env = "PATHMONOID_THREADS")]
    pub threads: usize,

    /// Number of path vertices
    #[arg(long, global = true)]
    pub n: Option<u32>,

    /// Largest n for which elements are listed
    #[arg(long, global = true, default_value_t = 8, env = "PATHMONOID_N_MAX_ENUMERATE",
          value_parser = clap::value_parser!(u32).range(1..))]
    pub n_max_enumerate: u32,

    /// Largest n for closures, ideal computations and classification
    #[arg(long, global = true, default_value_t = 6, env = "PATHMONOID_N_MAX_CLOSURE",
          value_parser = clap::value_parser!(u32).range(1..))]
    pub n_max_closure: u32,

    /// Most candidate subsets an exhaustive rank search may examine
    #[arg(long, global = true, default_value_t = 10_000_000, env = "PATHMONOID_SUBSET_BUDGET",
          value_parser = clap::value_parser!(u64).range(1..))]
    pub subset_budget: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Paut,
    Iend,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Paut => Family::PAut,
            FamilyArg::Iend => Family::IEnd,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CountFamily {
    Paut,
    Iend,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlphabetArg {
    Base,
    Derived,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact monoid sizes from the counting formula
    Count {
        #[arg(long, value_enum, default_value_t = CountFamily::Both)]
        family: CountFamily,
        /// Also list the contribution of every domain
        #[arg(long)]
        per_mask: bool,
    },
    /// List every element of a monoid
    Enumerate {
        #[arg(long, value_enum)]
        family: FamilyArg,
    },
    /// Partition a monoid into Green's classes
    Classify {
        #[arg(long, value_enum, default_value_t = FamilyArg::Iend)]
        family: FamilyArg,
        /// One of L, R, H, J
        #[arg(long)]
        relation: String,
        /// Use principal ideals instead of the characterizations
        #[arg(long)]
        oracle: bool,
    },
    /// Write an element as a word over the generators
    Factor {
        /// Element in the form `n=5;1>3,2>4`
        #[arg(long)]
        element: String,
        #[arg(long, value_enum, default_value_t = AlphabetArg::Base)]
        alphabet: AlphabetArg,
    },
    /// Rewrite a generator or word into the minimal alphabet
    Expand {
        /// A single generator such as `es1,4`
        #[arg(long, conflicts_with = "word", required_unless_present = "word")]
        symbol: Option<String>,
        /// Space-separated generators
        #[arg(long)]
        word: Option<String>,
    },
    /// Check the shipped generating set against the rank formula
    VerifyRank {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Also search all smaller subsets of the monoid
        #[arg(long)]
        exhaustive: bool,
        /// Skip everything that enumerates the monoid
        #[arg(long, conflicts_with = "exhaustive")]
        formula_only: bool,
    },
    /// Run the cross-checks up to --n (default 4)
    Selftest,
}

/// What a command produced: renderings for each format and whether its
/// checks held.
pub struct Output {
    pub json: String,
    pub text: String,
    pub csv: Option<(Vec<&'static str>, Vec<Vec<String>>)>,
    pub ok: bool,
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub kind: String,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            kind: "usage".into(),
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = if e.is_resource_refusal() {
            3
        } else if e.is_usage() {
            2
        } else {
            1
        };
        CliError {
            code,
            kind: e.kind().into(),
            message: e.to_string(),
        }
    }
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: &'a str,
    exit_code: u8,
}

#[derive(Serialize)]
struct ErrorObject<'a> {
    error: ErrorBody<'a>,
}

fn render(format: Format, out: Output) -> Result<String, CliError> {
    match format {
        Format::Json => Ok(out.json),
        Format::Text => Ok(out.text),
        Format::Csv => {
            let (header, rows) = out
                .csv
                .ok_or_else(|| CliError::usage("csv output is only available for enumerate and classify"))?;
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| CliError::usage(e.to_string());
            w.write_record(&header).map_err(io)?;
            for row in rows {
                w.write_record(&row).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::usage(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8").trim_end().to_string())
        }
    }
}

fn run(cli: Cli) -> Result<Output, CliError> {
    if cli.global.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.global.threads)
            .build_global()
            .map_err(|e| CliError::usage(e.to_string()))?;
    }
    let g = &cli.global;
    match &cli.command {
        Command::Count { family, per_mask } => commands::count(g, *family, *per_mask),
        Command::Enumerate { family } => commands::enumerate_cmd(g, *family),
        Command::Classify {
            family,
            relation,
            oracle,
        } => commands::classify(g, *family, relation, *oracle),
        Command::Factor { element, alphabet } => commands::factor(g, element, *alphabet),
        Command::Expand { symbol, word } => commands::expand(g, symbol.as_deref(), word.as_deref()),
        Command::VerifyRank {
            family,
            exhaustive,
            formula_only,
        } => commands::verify_rank(g, *family, *exhaustive, *formula_only),
        Command::Selftest => selftest::run(g),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let format = cli.global.format;
    let result = run(cli).and_then(|out| {
        let ok = out.ok;
        render(format, out).map(|text| (text, ok))
    });
    match result {
        Ok((text, ok)) => {
            println!("{text}");
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(e) => {
            if format == Format::Json {
                let obj = ErrorObject {
                    error: ErrorBody {
                        kind: &e.kind,
                        message: &e.message,
                        exit_code: e.code,
                    },
                };
                eprintln!("{}", serde_json::to_string(&obj).expect("error object serializes"));
            } else {
                eprintln!("error: {}", e.message);
            }
            ExitCode::from(e.code)
        }
    }
}
