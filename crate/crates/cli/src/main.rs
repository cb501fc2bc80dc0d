use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use tdl_cli::commands::{self, Format};
use tdl_cli::config::{ContextConfig, Preset, Settings};
use tdl_cli::error::CliError;
use tdl_cli::selfcheck;

#[derive(Parser)]
#[command(name = "tdl", version, about = "Twisted Dyer-Lashof operations over F_p")]
struct Cli {
    #[command(flatten)]
    ctx: ContextArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    Sign,
    Untwisted,
}

#[derive(Args)]
struct ContextArgs {
    /// JSON context document
    #[arg(long, global = true, conflicts_with = "preset")]
    context: Option<PathBuf>,
    /// Built-in one-generator context, used when no --context is given [default: sign]
    #[arg(long, global = true, value_enum)]
    preset: Option<PresetArg>,
    /// The prime (overrides the context document)
    #[arg(long = "p", global = true)]
    p: Option<u32>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    max_degree: Option<i64>,
    #[arg(long, global = true)]
    max_charge: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t)]
    format: Format,
    /// Budget for Adem expansions and for enumeration search steps
    #[arg(long, global = true)]
    budget: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Rewrite a combination of operation words into admissible form
    Rewrite { word: String },
    /// Basis of the free algebra in one bidegree
    Basis {
        /// Grading group element, comma separated
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        grade: Vec<i64>,
        #[arg(long, allow_hyphen_values = true)]
        degree: i64,
    },
    /// Dimensions by (charge, grading, degree) within the cutoffs
    Table,
    /// Apply an operation word to an element
    Act { op: String, element: String },
    /// Evaluate an element expression into basis form
    Eval { element: String },
    /// Basis of the free module over the operation algebra on the generators
    Dmodule {
        #[arg(long)]
        generator: Option<String>,
    },
    /// Group homology read off the one-point presets
    Example {
        #[command(subcommand)]
        which: Example,
    },
    /// Run the built-in invariant checks
    Selfcheck,
}

#[derive(Subcommand)]
enum Example {
    /// H_*(S_k; F_p) with sign coefficients
    SymSign,
    /// H_*(A_k; F_p)
    Alternating,
}

fn settings(args: &ContextArgs) -> Result<Settings> {
    let mut cfg = match &args.context {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(e.to_string()))
                .with_context(|| format!("reading {}", path.display()))?;
            ContextConfig::from_json(&text).with_context(|| format!("in {}", path.display()))?
        }
        None => {
            let preset = match args.preset.unwrap_or(PresetArg::Sign) {
                PresetArg::Sign => Preset::Sign,
                PresetArg::Untwisted => Preset::Untwisted,
            };
            ContextConfig::preset(preset, 3)
        }
    };
    if let Some(p) = args.p {
        cfg.p = p;
    }
    if let Some(d) = args.max_degree {
        cfg.cutoffs.max_degree = d;
    }
    if let Some(c) = args.max_charge {
        cfg.cutoffs.max_charge = c;
    }
    if let Some(b) = args.budget {
        cfg.rewrite_budget = b;
        cfg.enumeration_budget = b;
    }
    Ok(cfg.build()?)
}

fn run(cli: &Cli) -> Result<String> {
    let fmt = cli.ctx.format;
    if let Command::Selfcheck = cli.command {
        let mut out = String::new();
        let mut failed = 0;
        for r in selfcheck::run() {
            match r.outcome {
                Ok(detail) => out.push_str(&format!("PASS {}: {detail}\n", r.name)),
                Err(why) => {
                    failed += 1;
                    out.push_str(&format!("FAIL {}: {why}\n", r.name));
                }
            }
        }
        print!("{out}");
        if failed > 0 {
            bail!("{failed} self-checks failed");
        }
        return Ok(String::new());
    }
    let s = settings(&cli.ctx)?;
    let out = match &cli.command {
        Command::Rewrite { word } => commands::rewrite(&s, word)?,
        Command::Basis { grade, degree } => commands::basis_cmd(&s, grade, *degree, fmt)?,
        Command::Table => commands::table(&s, fmt)?,
        Command::Act { op, element } => commands::act(&s, op, element)?,
        Command::Eval { element } => commands::eval(&s, element)?,
        Command::Dmodule { generator } => commands::dmodule(&s, generator.as_deref(), fmt)?,
        Command::Example { which } => {
            let (p, k, q) = (s.ctx.prime(), s.cutoffs.max_charge, s.cutoffs.max_degree);
            match which {
                Example::SymSign => commands::example_sym_sign(p, k, q, fmt)?,
                Example::Alternating => commands::example_alternating(p, k, q, fmt)?,
            }
        }
        Command::Selfcheck => unreachable!("handled above"),
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.downcast_ref::<CliError>().map_or(1, CliError::exit_code);
            ExitCode::from(code as u8)
        }
    }
}
