//! `tropic-pic`: Picard and class groups of graphs and triangulated graph products.

mod commands;
mod input;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{error::ErrorKind, Args, Parser, Subcommand, ValueEnum};

use commands::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// First factor: a graph file or a family (path:N, cycle:N, complete:N, theta:N, tree:random:N:SEED).
    /// Sweeps accept size ranges such as cycle:3..5.
    #[arg(long, value_name = "FILE|FAMILY")]
    pub g: Option<String>,
    /// Second factor, same syntax as --g.
    #[arg(long, value_name = "FILE|FAMILY")]
    pub h: Option<String>,
    /// Diagonal policy: standard, random or a file of `d <G-edge> <H-edge> <0|1>` lines.
    /// Sweeps accept a comma-separated list.
    #[arg(long, default_value = "standard")]
    pub policy: String,
    /// Seed for random diagonal policies.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Include the principal and balancing matrices (pic-product).
    #[arg(long)]
    pub matrices: bool,
    /// Include wall-clock timings; output is then no longer reproducible.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Pic, critical group, genus and spanning-tree count of one graph.
    PicGraph(Options),
    /// Pic and Cl of the triangulated product of two graphs.
    PicProduct(Options),
    /// Check the product theorems on one product; exits with 2 on a violation.
    Check(Options),
    /// Compare Pic of each product with the predicted structure, one JSON line per product.
    Sweep(Options),
}

#[derive(Debug, Parser)]
#[command(name = "tropic-pic", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create `{}`", path.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cli: Cli) -> Result<Verdict> {
    let (opts, report) = match &cli.command {
        Command::PicGraph(o) => (o, commands::pic_graph(o)?),
        Command::PicProduct(o) => (o, commands::pic_product(o)?),
        Command::Check(o) => (o, commands::check(o)?),
        Command::Sweep(o) => {
            let mut out = sink(&o.out)?;
            let verdict = commands::sweep(o, &mut out)?;
            out.flush()?;
            return Ok(verdict);
        }
    };
    let (text, verdict) = report;
    let mut out = sink(&opts.out)?;
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(verdict)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(Verdict::Clean) => ExitCode::SUCCESS,
        Ok(Verdict::Violation) => {
            eprintln!("error: theorem violation reported");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
