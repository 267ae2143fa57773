//! `coxroot`: validate E-GCM graphs, compute roots and inversion sets, and
//! play the numbers game.
//!
//! Words are written in application order: in `--word 1,2` the generator
//! `s1` acts first. Node indices are 1-based.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "coxroot", version, about = "Root systems and the numbers game for E-generalized Cartan matrices")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphArg {
    /// Graph file (JSON).
    graph: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a graph file is a valid E-GCM.
    Validate(GraphArg),
    /// Matrix type, bond orders, ON-components and odd asymmetries.
    Classify(GraphArg),
    /// Enumerate roots breadth-first by witness length.
    Roots {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value_t = 30)]
        max_length: usize,
        #[arg(long, default_value_t = 10_000)]
        max_count: usize,
    },
    /// Scalar multiples of a simple root that are roots.
    Smult {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        node: usize,
    },
    /// Inversion set of a group element.
    Inversions {
        #[command(flatten)]
        graph: GraphArg,
        /// Comma-separated 1-based letters in application order; empty for the identity.
        #[arg(long, value_parser = parse_word, allow_hyphen_values = true)]
        word: Word,
    },
    /// Reduce a word.
    Reduce {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, value_parser = parse_word, allow_hyphen_values = true)]
        word: Word,
    },
    /// Factor w when w.alpha_node is a multiple of a simple root.
    Factor {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, value_parser = parse_word, allow_hyphen_values = true)]
        word: Word,
        #[arg(long)]
        node: usize,
    },
    /// Search for a group element separating two roots.
    Dominance {
        #[command(flatten)]
        graph: GraphArg,
        /// Coefficients over the simple roots, comma-separated.
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, default_value_t = 8)]
        bound: usize,
    },
    /// Play the numbers game.
    Game {
        #[command(flatten)]
        graph: GraphArg,
        /// Comma-separated coordinates, e.g. `1,-1/5,0.25`.
        #[arg(long, allow_hyphen_values = true)]
        position: String,
        #[arg(long, value_enum, default_value_t = StrategyArg::FirstLegal, conflicts_with = "moves")]
        strategy: StrategyArg,
        /// Seed for the random strategy.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        max_steps: usize,
        /// Fire exactly these 1-based nodes.
        #[arg(long, value_parser = parse_word)]
        moves: Option<Word>,
    },
    /// Play from the all-ones position to test whether the group is finite.
    Finite {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value_t = 10_000)]
        max_steps: usize,
    },
    /// Run the HTTP JSON service.
    Serve {
        #[arg(long, env = "COXROOT_PORT", default_value_t = coxroot_service::DEFAULT_PORT)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long, default_value_t = 256)]
        max_sessions: usize,
        /// Sessions idle this long are dropped.
        #[arg(long, default_value_t = 30)]
        idle_minutes: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum StrategyArg {
    FirstLegal,
    Random,
}

/// 1-based letters as typed.
#[derive(Clone, Debug)]
struct Word(Vec<usize>);

fn parse_word(s: &str) -> Result<Word, String> {
    let s = s.trim();
    if s.is_empty() || s == "e" {
        return Ok(Word(Vec::new()));
    }
    s.split(',')
        .map(|t| match t.trim().parse::<usize>() {
            Ok(k) if k >= 1 => Ok(k),
            _ => Err(format!("{t:?} is not a 1-based node index")),
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Word)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match commands::run(cli.command) {
        Ok(out) => {
            if cli.json {
                emit(&format!("{}\n", serde_json::to_string_pretty(&out.json).expect("serializable")));
            } else {
                emit(&out.text);
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            if cli.json {
                let body = serde_json::json!({ "code": f.code, "detail": f.detail });
                emit(&format!("{}\n", serde_json::to_string_pretty(&body).expect("serializable")));
            }
            eprintln!("error[{}]: {}", f.code, f.detail);
            ExitCode::from(1)
        }
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}
