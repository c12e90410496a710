use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qaw::commands::{self, Cmd, Construct, Opts};
use qaw::dsl;
use qaw::report::content_hash;
use qaw::workbench::WorkbenchFile;

/// Workbench for quantitative and continuous algebras on finite models.
#[derive(Parser)]
#[command(name = "qaw", version, about)]
struct Cli {
    /// Input workbench file (.qaw for the DSL, .json for the mirror)
    #[arg(long, global = true)]
    file: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Largest carrier admitted in enumeration-heavy commands
    /// (env QAW_MAX_CARRIER overrides the default)
    #[arg(long, global = true)]
    max_carrier: Option<usize>,
    /// Bound on enumerated maps and interpretations
    #[arg(long, global = true, default_value_t = 10_000_000)]
    max_maps: u128,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the metric axioms of a declared space
    CheckMetric {
        #[arg(long)]
        space: String,
    },
    /// Validate the poset axioms of a declared poset
    CheckPoset {
        #[arg(long)]
        poset: String,
    },
    /// Validate the operations of a declared algebra
    CheckAlgebra {
        #[arg(long)]
        algebra: String,
    },
    /// Decide satisfaction of a declared equation by a declared algebra
    Satisfies {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        eq: String,
    },
    /// Decide definability of an extended term in a continuous algebra
    Definable {
        #[arg(long)]
        algebra: String,
        /// Term text, e.g. "join from x0 step mul(z, x0)"
        #[arg(long)]
        term: String,
    },
    /// Colimit computations
    #[command(subcommand)]
    Colimit(ColimitCmd),
    /// Commutation checks between colimits and finite products
    #[command(subcommand)]
    Commute(CommuteCmd),
    /// HSP constructions on declared algebras
    #[command(subcommand)]
    Hsp(HspCmd),
    /// Monad-presentation operations
    #[command(subcommand)]
    Monad(MonadCmd),
    /// Kan evaluation of presentations
    #[command(subcommand)]
    Kan(KanCmd),
    /// Enumerate terms of bounded height over a signature
    FreeTerms {
        #[arg(long)]
        signature: String,
        /// Generator leaves, comma separated
        #[arg(long, value_delimiter = ',', default_value = "")]
        gens: Vec<String>,
        #[arg(long)]
        depth: usize,
    },
}

#[derive(Subcommand)]
enum ColimitCmd {
    /// Precongruence of a space and its basic-weight colimit
    Precongruence {
        #[arg(long)]
        space: String,
    },
    /// Coinserter of a declared parallel pair
    Coinserter {
        #[arg(long)]
        pair: String,
    },
    /// Directed colimit of a declared chain
    Chain {
        #[arg(long)]
        chain: String,
    },
}

#[derive(Subcommand)]
enum CommuteCmd {
    /// Directed colimits against finite products
    Products {
        #[arg(long)]
        chain_a: String,
        #[arg(long)]
        chain_b: String,
    },
    /// Reflexive coinserters against finite products
    Coinserters {
        #[arg(long)]
        pair_a: String,
        #[arg(long)]
        pair_b: String,
    },
}

#[derive(Subcommand)]
enum HspCmd {
    /// Apply an HSP construction and check equation preservation
    Close(HspArgs),
}

#[derive(Subcommand)]
enum KanCmd {
    /// Evaluate a metric presentation on a declared space
    Eval {
        #[arg(long)]
        presentation: String,
        #[arg(long)]
        space: String,
    },
}

#[derive(Args)]
struct HspArgs {
    #[arg(long)]
    algebra: String,
    /// One of: product, sub, image
    #[arg(long)]
    construct: String,
    /// Second algebra for product/image
    #[arg(long)]
    with: Option<String>,
    /// Generators for sub, comma separated
    #[arg(long, value_delimiter = ',')]
    generators: Option<Vec<String>>,
    /// Carrier map for image, e.g. "p->u,q->u"
    #[arg(long)]
    map: Option<String>,
    /// Declared equations to re-check on the result, comma separated
    #[arg(long, value_delimiter = ',')]
    eqs: Option<Vec<String>>,
}

#[derive(Subcommand)]
enum MonadCmd {
    /// Check the Kleisli-triple laws of a presentation
    Laws {
        #[arg(long)]
        presentation: String,
    },
    /// Generate the presented variety as a reusable equation file
    Eqgen {
        #[arg(long)]
        presentation: String,
    },
    /// Verify freeness of the presentation carrier against declared targets
    Freeness {
        #[arg(long)]
        presentation: String,
        #[arg(long)]
        arity: usize,
        /// Declared algebras, comma separated
        #[arg(long, value_delimiter = ',')]
        targets: Vec<String>,
    },
}

fn to_cmd(command: Command) -> Result<Cmd, String> {
    Ok(match command {
        Command::CheckMetric { space } => Cmd::CheckMetric { space },
        Command::CheckPoset { poset } => Cmd::CheckPoset { poset },
        Command::CheckAlgebra { algebra } => Cmd::CheckAlgebra { algebra },
        Command::Satisfies { algebra, eq } => Cmd::Satisfies { algebra, eq },
        Command::Definable { algebra, term } => Cmd::Definable { algebra, term },
        Command::Colimit(ColimitCmd::Precongruence { space }) => {
            Cmd::ColimitPrecongruence { space }
        }
        Command::Colimit(ColimitCmd::Coinserter { pair }) => Cmd::ColimitCoinserter { pair },
        Command::Colimit(ColimitCmd::Chain { chain }) => Cmd::ColimitChain { chain },
        Command::Commute(CommuteCmd::Products { chain_a, chain_b }) => {
            Cmd::CommuteProducts { chain_a, chain_b }
        }
        Command::Commute(CommuteCmd::Coinserters { pair_a, pair_b }) => {
            Cmd::CommuteCoinserters { pair_a, pair_b }
        }
        Command::Hsp(HspCmd::Close(args)) => {
            let construct = match args.construct.as_str() {
                "product" => Construct::Product {
                    with: args.with.ok_or("--with is required for product")?,
                },
                "sub" => Construct::Sub {
                    generators: args.generators.unwrap_or_default(),
                },
                "image" => {
                    let map_text = args.map.ok_or("--map is required for image")?;
                    let mut map = Vec::new();
                    for entry in map_text.split(',').filter(|s| !s.trim().is_empty()) {
                        let (from, to) = entry
                            .split_once("->")
                            .ok_or_else(|| format!("bad map entry {entry:?}"))?;
                        map.push((from.trim().to_string(), to.trim().to_string()));
                    }
                    Construct::Image {
                        with: args.with.ok_or("--with is required for image")?,
                        map,
                    }
                }
                other => return Err(format!("unknown construct {other:?}")),
            };
            Cmd::HspClose {
                algebra: args.algebra,
                construct,
                eqs: args.eqs.unwrap_or_default(),
            }
        }
        Command::Monad(MonadCmd::Laws { presentation }) => Cmd::MonadLaws { presentation },
        Command::Monad(MonadCmd::Eqgen { presentation }) => Cmd::MonadEqgen { presentation },
        Command::Monad(MonadCmd::Freeness {
            presentation,
            arity,
            targets,
        }) => Cmd::MonadFreeness {
            presentation,
            arity,
            targets,
        },
        Command::Kan(KanCmd::Eval {
            presentation,
            space,
        }) => Cmd::KanEval {
            presentation,
            space,
        },
        Command::FreeTerms {
            signature,
            gens,
            depth,
        } => Cmd::FreeTerms {
            signature,
            gens: gens.into_iter().filter(|g| !g.is_empty()).collect(),
            depth,
        },
    })
}

fn load_file(path: &PathBuf) -> Result<(WorkbenchFile, String), String> {
    let bytes = std::fs::read(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let hash = content_hash(&bytes);
    let text = String::from_utf8(bytes).map_err(|e| format!("{}: {e}", path.display()))?;
    let file = if path.extension().map(|e| e == "json").unwrap_or(false) {
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?
    } else {
        dsl::parse(&text).map_err(|errs| {
            errs.iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join("\n")
        })?
    };
    Ok((file, hash))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (file, hash) = match &cli.file {
        Some(path) => match load_file(path) {
            Ok(v) => v,
            Err(message) => {
                eprintln!("{message}");
                return ExitCode::from(commands::EXIT_INPUT as u8);
            }
        },
        None => (WorkbenchFile::default(), content_hash(b"")),
    };
    let max_carrier = cli
        .max_carrier
        .or_else(|| {
            std::env::var("QAW_MAX_CARRIER")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(6);
    let opts = Opts {
        max_carrier,
        max_maps: cli.max_maps,
    };
    let cmd = match to_cmd(cli.command) {
        Ok(c) => c,
        Err(message) => {
            eprintln!("{message}");
            return ExitCode::from(commands::EXIT_INPUT as u8);
        }
    };
    let report = commands::run(&cmd, &file, &hash, &opts);
    let rendered = match cli.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    // tolerate closed pipes when output is truncated by a pager
    use std::io::Write;
    let _ = writeln!(std::io::stdout(), "{rendered}");
    ExitCode::from(report.exit_code as u8)
}
