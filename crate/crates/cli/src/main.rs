//! `fatdelta`: enumerate, factor and export fat Delta morphisms, build
//! nerves, and run the bounded verification sweeps.
//!
//! Exit codes: 0 on success (and, for checks, when everything passed), 1 on
//! domain errors or failed checks, 2 on usage errors.

mod export;
mod render;

use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use fatdelta_core::fat::FatClass;
use fatdelta_core::hypermoment::Suite;

use render::Output;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "fatdelta", version, about = "Calculator and verifier for the fat Delta category")]
struct Cli {
    /// Output format. `dot` applies to `export` only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the objects with at most `--max-edges` edges.
    Objects {
        #[arg(long, default_value_t = 2)]
        max_edges: usize,
        #[arg(long)]
        count: bool,
    },
    /// List the morphisms between two objects, given as {u,m} strings.
    Hom {
        dom: String,
        cod: String,
        #[arg(long, default_value = "all", value_parser = parse_class)]
        class: FatClass,
        #[arg(long)]
        count: bool,
    },
    /// Compose two morphisms: `compose G F` prints G∘F.
    Compose { g: String, f: String },
    /// Active-inert factorization of a morphism given as JSON.
    Factorize { morphism: String },
    /// Pushout of an inert morphism and an active one with the same domain.
    Pushout { inert: String, active: String },
    /// Concatenate two objects, or two active maps of Δ in `[m]->[n]:(..)` form.
    Vee { left: String, right: String },
    /// Build the nerve of a relative semicategory read from a JSON file.
    Nerve {
        file: String,
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
    /// Run the Segal check on a presheaf read from a JSON file.
    SegalCheck { file: String },
    /// Image under the edge-count functor to Γ of a morphism or an object.
    Gamma { target: String },
    /// Run a bounded verification sweep.
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
    /// Export a diagram as DOT or JSON.
    Export {
        #[command(subcommand)]
        kind: ExportKind,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyTarget {
    /// Active-inert factorizations and lifting squares.
    Factorization {
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
    /// φ and ψ between objects and linear relative graphs, and hom counts.
    #[command(alias = "descent")]
    PhiPsi {
        #[arg(long, default_value_t = 3)]
        max_edges: usize,
    },
    /// Cartesianness of the free relative semicategory monad, degreewise.
    Cartesian {
        #[arg(long, default_value_t = 3)]
        bound: usize,
        /// Check a single graph (JSON or {u,m} string file) instead of the universe.
        #[arg(long)]
        graph: Option<String>,
        #[arg(long, default_value_t = 3)]
        max_vertices: usize,
        #[arg(long, default_value_t = 3)]
        max_edges: usize,
    },
    /// Unique fillers for the generic maps built from strings and arities.
    Generic {
        #[arg(long, default_value_t = 3)]
        bound: usize,
        #[arg(long, default_value_t = 3)]
        max_vertices: usize,
        #[arg(long, default_value_t = 3)]
        max_edges: usize,
    },
    /// The hypermoment checkers.
    Hypermoment {
        #[arg(long, default_value_t = 3)]
        bound: usize,
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
    },
    /// No morphism lowers the degree; endomorphisms are identities.
    Directness {
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
    /// Contractions are exactly the maps whose two factorizations agree.
    Contraction {
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
    /// Functors against nerve maps over a corpus of small relative semicategories.
    Nerve {
        #[arg(long, default_value_t = 2)]
        max_objects: usize,
        #[arg(long, default_value_t = 3)]
        max_morphisms: usize,
    },
    /// Everything above at `--bound`, with a small nerve corpus.
    All {
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExportKind {
    /// Objects with at most `--bound` edges and the elementary arrows between them.
    ObjectsPoset {
        #[arg(long, default_value_t = 2)]
        bound: usize,
    },
    /// Domain and codomain side by side with the top map between them.
    MorphismDiagram { morphism: String },
}

fn parse_class(s: &str) -> Result<FatClass, String> {
    s.parse().map_err(|e: fatdelta_core::Error| e.to_string())
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: fatdelta_core::Error| e.to_string())
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("FATDELTA_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("FATDELTA_THREADS must be a positive integer, got `{raw}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn run(cli: &Cli) -> anyhow::Result<Output> {
    if cli.format == Format::Dot && !matches!(cli.command, Command::Export { .. }) {
        bail!(render::Usage("--format dot is only available for export".into()));
    }
    match &cli.command {
        Command::Objects { max_edges, count } => render::objects(*max_edges, *count),
        Command::Hom { dom, cod, class, count } => render::hom(dom, cod, *class, *count),
        Command::Compose { g, f } => render::compose(g, f),
        Command::Factorize { morphism } => render::factorize(morphism),
        Command::Pushout { inert, active } => render::pushout(inert, active),
        Command::Vee { left, right } => render::vee(left, right),
        Command::Nerve { file, bound } => render::nerve_of(&read(file)?, *bound),
        Command::SegalCheck { file } => render::segal(&read(file)?),
        Command::Gamma { target } => render::gamma(target),
        Command::Verify { target } => render::verify(target),
        Command::Export { kind } => export::run(kind),
    }
}

fn read(path: &str) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read `{path}`"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.render(cli.format, command_name(&cli.command)));
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            if let Some(u) = e.downcast_ref::<render::Usage>() {
                eprintln!("error: {}", u.0);
                return ExitCode::from(2);
            }
            eprintln!("{}", render::error_object(&e));
            ExitCode::from(1)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Objects { .. } => "objects",
        Command::Hom { .. } => "hom",
        Command::Compose { .. } => "compose",
        Command::Factorize { .. } => "factorize",
        Command::Pushout { .. } => "pushout",
        Command::Vee { .. } => "vee",
        Command::Nerve { .. } => "nerve",
        Command::SegalCheck { .. } => "segal-check",
        Command::Gamma { .. } => "gamma",
        Command::Verify { .. } => "verify",
        Command::Export { .. } => "export",
    }
}
