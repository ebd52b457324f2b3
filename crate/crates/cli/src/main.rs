use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use kmk2::catalog::{enumerate_rank2_hyperbolic, enumerate_rank3_hyperbolic, rank3_partition,
    verify_catalog, Table};
use kmk2::document::ResultDocument;
use kmk2::gcm::Gcm;
use kmk2::text::parse_matrix;
use serde_json::json;

const EXIT_INPUT: u8 = 1;
const EXIT_UNRESOLVED: u8 = 2;
const EXIT_VERIFY: u8 = 3;

/// K2 of Kac-Moody groups over fields, computed from the Cartan matrix.
///
/// A matrix is given as text such as "2 -1; -1 2" (rows separated by ';'
/// or newlines) or as @path to a file holding that text.
#[derive(Parser)]
#[command(name = "kmk2", version)]
struct Cli {
    /// Print JSON instead of plain text.
    #[arg(long, global = true)]
    machine: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cartan type of every indecomposable block.
    Classify {
        #[arg(allow_hyphen_values = true)]
        matrix: String,
    },
    /// K2(A,F) as a product of quotients of K2(F) and K2(2,F).
    K2 {
        #[arg(allow_hyphen_values = true)]
        matrix: String,
        /// Show the rules applied.
        #[arg(long)]
        trace: bool,
        /// Exit with status 2 when no rule resolves the matrix.
        #[arg(long)]
        strict: bool,
    },
    /// Compare the conjectured Smith-form splitting with the engine.
    Conjecture {
        #[arg(allow_hyphen_values = true)]
        matrix: String,
        #[arg(long)]
        trace: bool,
    },
    /// List hyperbolic GCMs of rank 2 (entries up to --bound) or rank 3.
    Enumerate {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
        rank: u8,
        #[arg(long, required_if_eq("rank", "2"), value_parser = clap::value_parser!(u32).range(1..))]
        bound: Option<u32>,
    },
    /// Check the engine against the tabulated values.
    VerifyTables {
        #[arg(long, value_enum, default_value = "all")]
        section: Section,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Section {
    /// Rank-3 list and the two class 3 matrices.
    #[value(name = "7", alias = "rank3")]
    Rank3,
    /// Ranks 4 to 6.
    #[value(name = "8", alias = "higher")]
    Higher,
    All,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("kmk2: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let machine = cli.machine;
    match cli.command {
        Command::Classify { matrix } => {
            let doc = ResultDocument::classify(&read_matrix(&matrix)?);
            emit(&doc, machine, false);
        }
        Command::K2 { matrix, trace, strict } => {
            let doc = ResultDocument::k2(&read_matrix(&matrix)?);
            emit(&doc, machine, trace);
            if strict && doc.is_unresolved() {
                return Ok(ExitCode::from(EXIT_UNRESOLVED));
            }
        }
        Command::Conjecture { matrix, trace } => {
            let doc = ResultDocument::conjecture(&read_matrix(&matrix)?);
            emit(&doc, machine, trace);
        }
        Command::Enumerate { rank, bound } => enumerate(rank, bound, machine),
        Command::VerifyTables { section } => {
            let table = match section {
                Section::Rank3 => Some(Table::Rank3),
                Section::Higher => Some(Table::Higher),
                Section::All => None,
            };
            let report = verify_catalog(table);
            if machine {
                put(&serde_json::to_string_pretty(&report).expect("serializable"));
            } else {
                put(&report.to_string());
            }
            if !report.all_pass() {
                return Ok(ExitCode::from(EXIT_VERIFY));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn read_matrix(arg: &str) -> Result<Gcm, String> {
    let text = match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?,
        None => arg.to_string(),
    };
    parse_matrix(&text).map_err(|e| e.to_string())
}

fn emit(doc: &ResultDocument, machine: bool, trace: bool) {
    if machine {
        put(&doc.to_json());
    } else {
        put(doc.to_human(trace).trim_end());
    }
}

fn enumerate(rank: u8, bound: Option<u32>, machine: bool) {
    let all = match rank {
        2 => enumerate_rank2_hyperbolic(bound.expect("required for rank 2")),
        _ => enumerate_rank3_hyperbolic(),
    };
    let partition = (rank == 3).then(rank3_partition);
    if machine {
        let matrices: Vec<String> = all.iter().map(ToString::to_string).collect();
        let doc = json!({ "count": all.len(), "matrices": matrices, "partition": partition });
        put(&serde_json::to_string_pretty(&doc).expect("serializable"));
        return;
    }
    let mut text: String = all.iter().map(|g| format!("{g}\n")).collect();
    text.push_str(&format!("count: {}", all.len()));
    if let Some(p) = partition {
        text.push_str(&format!("\n{}", p.to_string().trim_end()));
    }
    put(&text);
}

/// Writes a line to stdout; a closed pipe is not an error.
fn put(text: &str) {
    let mut out = io::stdout().lock();
    let _ = writeln!(out, "{text}");
}
