use clap::{Args, Parser, Subcommand};

use quivertex_cli::{
    cmd_capped, cmd_chamber, cmd_character, cmd_monodromy, cmd_selftest, cmd_vertex,
    parse_complex, parse_context, parse_partition, thread_cap, CliError, OutputMode,
};
use quivertex_core::selftest::SelftestConfig;

/// Exact vertex functions, descendant insertions, stability chambers, and
/// numerical monodromy for the quiver varieties attached to partitions.
#[derive(Parser)]
#[command(name = "quivertex", version, disable_help_subcommand = true)]
struct Cli {
    /// Output format: json or text
    #[arg(long, global = true, default_value = "text")]
    output: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ExactArgs {
    /// Partition as comma-separated decreasing parts, e.g. 5,4,3,2
    #[arg(short = 'p', long)]
    partition: String,
    /// Specialized value of q as an exact rational
    #[arg(long, default_value = "3/7")]
    q: String,
    /// Specialized value of ħ as an exact rational
    #[arg(long, default_value = "5/11")]
    hbar: String,
}

#[derive(Subcommand)]
enum Command {
    /// Bare vertex function as a truncated series
    Vertex {
        #[command(flatten)]
        exact: ExactArgs,
        /// Total-degree cap of the series
        #[arg(short = 'D', long, default_value_t = 4)]
        degree: u32,
        /// product, localization, or both (with a diff check)
        #[arg(long, default_value = "product")]
        method: String,
    },
    /// Capped vertex function with descendant Λ^r V_n
    Capped {
        #[command(flatten)]
        exact: ExactArgs,
        /// Node (content) of the insertion
        #[arg(short = 'n', long)]
        node: i32,
        /// Exterior power rank
        #[arg(short = 'r', long)]
        rank: u32,
        /// Expand as a series to this degree
        #[arg(short = 'D', long)]
        degree: Option<u32>,
        /// Evaluate exactly at a rational point "content=p/q,…"
        #[arg(long)]
        eval: Option<String>,
    },
    /// Classify a stability direction or enumerate all chambers
    Chamber {
        /// Partition as comma-separated decreasing parts
        #[arg(short = 'p', long)]
        partition: String,
        /// Rational direction, comma separated per content
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<String>,
        /// Enumerate every chamber of the refined arrangement
        #[arg(long, default_value_t = false)]
        enumerate: bool,
    },
    /// Character of Λ^r V_n for the chamber of a direction
    Character {
        /// Partition as comma-separated decreasing parts
        #[arg(short = 'p', long)]
        partition: String,
        #[arg(short = 'n', long)]
        node: i32,
        #[arg(short = 'r', long)]
        rank: u32,
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
    },
    /// Numeric monodromy between two chambers
    Monodromy {
        /// Partition as comma-separated decreasing parts
        #[arg(short = 'p', long)]
        partition: String,
        #[arg(long, allow_hyphen_values = true)]
        theta1: String,
        #[arg(long, allow_hyphen_values = true)]
        theta2: String,
        /// Complex q with |q| < 1, e.g. 0.3 or 0.25+0.1i
        #[arg(long, default_value = "0.3")]
        q: String,
        /// Complex ħ
        #[arg(long, default_value = "0.55")]
        hbar: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 10)]
        samples: u32,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Run the invariant suites of every module
    Selftest {
        /// Smaller diagrams and caps
        #[arg(long, default_value_t = false)]
        quick: bool,
        /// Number of exact specialization contexts to repeat suites at
        #[arg(long, default_value_t = 1)]
        contexts: u32,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn run() -> Result<String, CliError> {
    let cli = Cli::try_parse().map_err(|e| CliError::usage(e.to_string()))?;
    let mode = match cli.output.as_str() {
        "json" => OutputMode::Json,
        "text" => OutputMode::Text,
        other => return Err(CliError::usage(format!("unknown output mode \"{other}\""))),
    };
    match cli.command {
        Command::Vertex {
            exact,
            degree,
            method,
        } => {
            let la = parse_partition(&exact.partition)?;
            let ctx = parse_context(&exact.q, &exact.hbar)?;
            cmd_vertex(&la, degree, &ctx, &method, mode)
        }
        Command::Capped {
            exact,
            node,
            rank,
            degree,
            eval,
        } => {
            let la = parse_partition(&exact.partition)?;
            let ctx = parse_context(&exact.q, &exact.hbar)?;
            cmd_capped(&la, node, rank, degree, eval.as_deref(), &ctx, mode)
        }
        Command::Chamber {
            partition,
            theta,
            enumerate,
        } => {
            let la = parse_partition(&partition)?;
            cmd_chamber(&la, theta.as_deref(), enumerate, mode)
        }
        Command::Character {
            partition,
            node,
            rank,
            theta,
        } => {
            let la = parse_partition(&partition)?;
            cmd_character(&la, node, rank, &theta, mode)
        }
        Command::Monodromy {
            partition,
            theta1,
            theta2,
            q,
            hbar,
            tol,
            samples,
            seed,
        } => {
            let la = parse_partition(&partition)?;
            cmd_monodromy(
                &la,
                &theta1,
                &theta2,
                parse_complex(&q)?,
                parse_complex(&hbar)?,
                tol,
                samples,
                seed,
                mode,
            )
        }
        Command::Selftest {
            quick,
            contexts,
            seed,
        } => {
            let cfg = SelftestConfig {
                quick,
                seed,
                contexts,
            };
            cmd_selftest(&cfg, thread_cap(), mode)
        }
    }
}

fn main() {
    use std::io::Write;
    match run() {
        Ok(out) => {
            // tolerate closed pipes downstream
            let mut stdout = std::io::stdout();
            if writeln!(stdout, "{out}").is_err() {
                std::process::exit(0);
            }
        }
        Err(e) => {
            let mut stderr = std::io::stderr();
            let _ = writeln!(stderr, "{}", e.message);
            std::process::exit(e.code);
        }
    }
}
