use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use clawfree_cli::commands::{self, Exit, HoleChoice, Outcome, RenderStyle};
use clawfree_cli::format::Format;
use clawfree_cli::{batch, expand_glob, read_graph, read_text, FileError};
use clawfree_core::decomp::DEFAULT_THRESHOLD;
use clawfree_core::Graph;

/// Recognise, decompose, synthesize clique-width expressions for and
/// colour (claw, 4K1, bridge, C4-twin)-free graphs.
///
/// Exit status: 0 success, 1 negative verdict, 2 input error.
#[derive(Parser)]
#[command(name = "clawfree", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Graph file (edge list, DIMACS or JSON).
    path: Option<PathBuf>,
    /// Process every file matching the pattern; prints one JSON line each.
    #[arg(long)]
    glob: Option<String>,
}

#[derive(Args)]
struct Input {
    #[command(flatten)]
    source: Source,
    /// Input format; by default taken from the extension (.json, .dimacs,
    /// .col, .clq; anything else is an edge list).
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Test membership; prints forbidden-pattern witnesses.
    Check {
        #[command(flatten)]
        input: Input,
    },
    /// Decompose around a hole and verify the structural properties.
    Decompose {
        #[command(flatten)]
        input: Input,
        /// auto, 5, 6 or 7.
        #[arg(long, default_value = "auto")]
        hole: HoleChoice,
        /// Sets smaller than this are removed.
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: usize,
    },
    /// Build a bounded-width clique-width expression.
    Synthesize {
        #[command(flatten)]
        input: Input,
        /// Use a hole of this length even if a longer one exists.
        #[arg(long, value_parser = clap::value_parser!(u8).range(5..=7))]
        hole: Option<u8>,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: usize,
        /// Also write the expression text to this file.
        #[arg(long)]
        expr_out: Option<PathBuf>,
    },
    /// Evaluate an expression file.
    Eval {
        expr: PathBuf,
        /// Compare with this graph instead of printing the result.
        #[arg(long)]
        against: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Output format for the evaluated graph.
        #[arg(long, value_enum, default_value = "edge-list")]
        to: Format,
    },
    /// Compute the chromatic number and an optimal colouring.
    Colour {
        #[command(flatten)]
        input: Input,
        /// Search node budget of the exact solver.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Plant a class member from a JSON spec.
    Generate {
        spec: PathBuf,
        /// Overrides the seed in the spec.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "json")]
        to: Format,
    },
    /// Print Graphviz DOT for a graph or an expression.
    Render {
        path: PathBuf,
        /// The file holds an expression, not a graph.
        #[arg(long)]
        expr: bool,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long, value_enum, default_value = "plain")]
        style: RenderStyle,
    },
}

fn on_input<F>(input: &Input, command: F) -> Result<Outcome, FileError>
where
    F: Fn(&Graph) -> Outcome + Sync,
{
    match (&input.source.path, &input.source.glob) {
        (Some(path), _) => Ok(command(&read_graph(path, input.format)?)),
        (None, Some(pattern)) => {
            let paths = expand_glob(pattern).map_err(|source| FileError { path: pattern.into(), source })?;
            Ok(batch(&paths, input.format, command))
        }
        (None, None) => unreachable!("clap requires a source"),
    }
}

fn read_expression(path: &std::path::Path) -> Result<clawfree_core::cwd::CwdExpr, FileError> {
    commands::parse_expression(&read_text(path)?).map_err(|source| FileError { path: path.to_path_buf(), source })
}

fn run(cli: Cli) -> Result<Outcome, FileError> {
    match cli.command {
        Command::Check { input } => on_input(&input, commands::check),
        Command::Decompose { input, hole, threshold } => on_input(&input, |g| commands::decompose(g, hole, threshold)),
        Command::Synthesize { input, hole, threshold, expr_out } => {
            let hole = hole.map(usize::from);
            if let (Some(out), Some(path)) = (&expr_out, &input.source.path) {
                let g = read_graph(path, input.format)?;
                let (outcome, expr) = commands::synthesize_graph(&g, hole, threshold);
                if let Some(e) = expr {
                    let text = clawfree_core::cwd::text::serialize(&e) + "\n";
                    std::fs::write(out, text).map_err(|e| FileError {
                        path: out.clone(),
                        source: commands::InputError::Invalid(format!("cannot write: {e}")),
                    })?;
                }
                return Ok(outcome);
            }
            on_input(&input, |g| commands::synthesize_graph(g, hole, threshold).0)
        }
        Command::Eval { expr, against, format, to } => {
            let e = read_expression(&expr)?;
            let g = against.as_deref().map(|p| read_graph(p, format)).transpose()?;
            commands::eval(&e, g.as_ref(), to).map_err(|source| FileError { path: expr, source })
        }
        Command::Colour { input, budget } => on_input(&input, |g| commands::colour(g, budget)),
        Command::Generate { spec, seed, to } => {
            let s =
                commands::parse_spec(&read_text(&spec)?).map_err(|source| FileError { path: spec.clone(), source })?;
            commands::generate(&s, seed, to).map_err(|source| FileError { path: spec, source })
        }
        Command::Render { path, expr, format, style } => {
            if expr {
                Ok(commands::render_expression(&read_expression(&path)?))
            } else {
                Ok(commands::render_graph(&read_graph(&path, format)?, style))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            // A closed pipe is not worth a panic.
            let _ = out.write_all(outcome.render().as_bytes());
            ExitCode::from(outcome.exit as u8)
        }
        Err(e) => {
            eprintln!("clawfree: {e}");
            ExitCode::from(Exit::InputError as u8)
        }
    }
}
