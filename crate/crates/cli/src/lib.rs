//! `modview` command line: statistics, SVG/scene rendering, 3D colouring and
//! a local read-only server.
//!
//! Exit codes: 0 success, 2 I/O error, 3 validation error (including bad
//! arguments), 4 structure fetch failure, 5 port busy.

pub mod color3d;
pub mod config;
pub mod inputs;
pub mod output;
pub mod render;
pub mod serve;
pub mod stats;

use std::ffi::OsString;
use std::net::{Ipv4Addr, SocketAddr};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use modview::analytics::RowKey;
use modview::ingest::fetch::HttpTransport;
use modview::ingest::{parse_manifest, Fetcher};
use modview::model::Window;
use modview::pipeline::{OrderMode, RenderOptions};
use serde::Serialize;

use config::FileConfig;
use output::{read_text, summarize_failures, Exit, Failure};
use render::ViewArg;

#[derive(Debug, Parser)]
#[command(
    name = "modview",
    version,
    about = "Protein modification statistics and visual encodings"
)]
pub struct Cli {
    /// JSON config file: layout, palette, mutation counting, download URLs.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Print the JSON results on stdout as well.
    #[arg(long, global = true)]
    pub stdout: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Modification table (.csv, or .tsv/.tab for tab-separated).
    #[arg(long)]
    pub table: PathBuf,
    /// Protein sequences.
    #[arg(long)]
    pub fasta: PathBuf,
    /// Leave mutation records out of per-residue counts and hot-spot bins.
    #[arg(long)]
    pub exclude_mutations: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-accession statistics as <ACC>.stats.json.
    Stats {
        #[command(flatten)]
        input: InputArgs,
        /// Matrix used for repeated-pattern groups.
        #[arg(long, default_value = "mod_type")]
        row_key: RowKey,
    },
    /// SVG views and <ACC>.scene.json.
    Render {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value = "all")]
        view: ViewArg,
        /// Focus window A:B (1-based, inclusive); clamped to each sequence.
        #[arg(long)]
        window: Option<Window>,
        /// Row order of the classification and type views: greedy or none.
        #[arg(long, default_value = "greedy")]
        order: OrderMode,
        /// Collapse stacks taller than this into one circle and a count.
        #[arg(long)]
        max_stack: Option<usize>,
    },
    /// Per-residue hot-spot colouring of the best structure per accession.
    Color3d {
        #[command(flatten)]
        input: InputArgs,
        /// JSON list of {accession, structure_ids, preferred_chain?}.
        #[arg(long)]
        manifest: PathBuf,
        /// Structure cache directory.
        #[arg(long, env = "MODIE_CACHE", default_value = ".modview-cache")]
        cache: PathBuf,
    },
    /// Serve the output directory (and optionally a UI bundle) over HTTP.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Static UI bundle served at /.
        #[arg(long)]
        ui: Option<PathBuf>,
    },
}

/// Parses arguments and runs; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                Exit::Validation as i32
            } else {
                Exit::Ok as i32
            };
        }
    };
    match execute(&cli) {
        Ok(exit) => exit as i32,
        Err(f) => {
            eprintln!("error: {f}");
            f.exit as i32
        }
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("results serialize"));
}

fn load_inputs(input: &InputArgs, cli: &Cli) -> Result<(inputs::Inputs, Exit), Failure> {
    let loaded = inputs::load(&input.table, &input.fasta)?;
    loaded.report.warn();
    loaded.report.write(&cli.out)?;
    let exit = if loaded.report.is_fatal() {
        Exit::Validation
    } else {
        Exit::Ok
    };
    Ok((loaded, exit))
}

fn execute(cli: &Cli) -> Result<Exit, Failure> {
    let config = FileConfig::load(cli.config.as_deref())?;
    match &cli.command {
        Command::Stats { input, row_key } => {
            let (loaded, exit) = load_inputs(input, cli)?;
            let include = config.include_mutations_in_counts && !input.exclude_mutations;
            let (docs, failures) = stats::run(&loaded.proteins, &cli.out, *row_key, include);
            if cli.stdout {
                print_json(&docs);
            }
            Ok(exit.max(summarize_failures(&failures)))
        }
        Command::Render {
            input,
            view,
            window,
            order,
            max_stack,
        } => {
            let (loaded, exit) = load_inputs(input, cli)?;
            let mut layout = config.layout.clone();
            if max_stack.is_some() {
                layout.max_stack = *max_stack;
            }
            let options = RenderOptions {
                window: *window,
                order: *order,
                layout,
            };
            let (docs, failures) = render::run(&loaded.proteins, &cli.out, *view, &options);
            if cli.stdout {
                print_json(&docs);
            }
            Ok(exit.max(summarize_failures(&failures)))
        }
        Command::Color3d { input, manifest, cache } => {
            let manifest_text = read_text(manifest)?;
            let manifest = parse_manifest(&manifest_text)
                .map_err(|e| Failure::validation(format!("{}: {e}", manifest.display())))?;
            let (loaded, exit) = load_inputs(input, cli)?;
            let include = config.include_mutations_in_counts && !input.exclude_mutations;
            let fetcher = Fetcher::new(cache, HttpTransport).with_templates(config.templates());
            let colors = &config.layout.palette.hotspot;
            let (summaries, failures) = color3d::run(&manifest, &loaded, &fetcher, &cli.out, include, colors);
            eprint!("{}", color3d::summary_table(&summaries));
            if cli.stdout {
                print_json(&summaries);
            }
            Ok(exit.max(summarize_failures(&failures)))
        }
        Command::Serve { port, ui } => {
            let listener = serve::bind(SocketAddr::from((Ipv4Addr::LOCALHOST, *port)))?;
            serve::serve(listener, &cli.out, ui.as_deref())?;
            Ok(Exit::Ok)
        }
    }
}
