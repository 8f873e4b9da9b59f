mod commands;
mod input;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "tangles",
    version,
    about = "Tangles, ends and ultrafilter tangles of finite and finitely presented graphs"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
pub struct Global {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for sampling and for seeded ultrafilter tie-breaks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of samples, overriding each command's default.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Truncation depth for commands that look at a finite part of a schema.
    #[arg(long, global = true)]
    pub truncation: Option<u64>,
}

#[derive(Subcommand)]
pub enum Command {
    /// Enumerate the tangles of a finite graph.
    Finite {
        graph: String,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        count_only: bool,
    },
    /// Ends and ultrafilter tangle classes of a schema.
    Census { schema: String },
    /// Orient a separation by a tangle.
    Orient {
        schema: String,
        #[arg(long)]
        tangle: String,
        #[arg(long)]
        sep: String,
    },
    /// End tangle or ultrafilter tangle.
    Classify {
        schema: String,
        #[arg(long)]
        tangle: String,
    },
    /// Least finite set at which an ultrafilter tangle's ultrafilter is non-principal.
    Witness {
        schema: String,
        #[arg(long)]
        tangle: String,
    },
    /// Query an ultrafilter on the components at a separator.
    Uf {
        schema: String,
        /// Separator, e.g. `{c}`.
        #[arg(long)]
        at: String,
        /// `lazy`, `lazy:<class>` or `principal:<component>`.
        #[arg(long, default_value = "lazy")]
        kind: String,
        /// Component collections such as `{L{0+2n}}`.
        #[arg(long)]
        query: Vec<String>,
        /// Commitment log to replay before answering.
        #[arg(long)]
        replay: Option<String>,
    },
    /// Closedness, kernel and limit-point probes of a tangle.
    Closed {
        schema: String,
        #[arg(long)]
        tangle: String,
    },
    /// Decide whether a finite cover covers the compactification.
    Subcover {
        schema: String,
        #[arg(long)]
        cover: String,
    },
    /// The k-blocks of a finite graph.
    Blocks {
        graph: String,
        #[arg(long)]
        k: usize,
    },
    /// Build a subdivided complete graph on a branch set.
    Tk {
        graph: String,
        /// Branch vertices, comma separated.
        #[arg(long)]
        set: String,
    },
    /// Compare finite stars' suprema with the intersections of their big sides.
    Observation { input: String },
    /// Run the acceptance checks.
    Check {
        /// Only `all` is bundled.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Run only these checks, by number or name.
        #[arg(long)]
        only: Vec<String>,
    },
    /// DOT rendering of a finite graph or a truncated schema.
    Dot { input: String },
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub msg: String,
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError {
            code: 2,
            msg: msg.into(),
        }
    }
}

impl From<tangles::Error> for CliError {
    fn from(e: tangles::Error) -> Self {
        let code = if matches!(e, tangles::Error::ResourceGuard(_)) {
            3
        } else {
            2
        };
        CliError {
            code,
            msg: e.to_string(),
        }
    }
}

/// What a command produced: a JSON result, its text rendering, and whether
/// every check it ran passed.
pub struct Report {
    pub source: input::Source,
    pub result: Value,
    pub text: String,
    pub ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = commands::name(&cli.command);
    match commands::run(&cli.command, &cli.global) {
        Ok(rep) => {
            if cli.global.json {
                let doc = json!({
                    "command": name,
                    "input": rep.source.name,
                    "sha256": rep.source.digest(),
                    "seed": cli.global.seed,
                    "ok": rep.ok,
                    "result": rep.result,
                });
                println!(
                    "{}",
                    serde_json::to_string_pretty(&doc).expect("serializable")
                );
            } else {
                print!("{}", rep.text);
            }
            if rep.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}
