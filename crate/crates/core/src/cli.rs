//! Command-line front end. Exit codes: 0 success, 1 verification failure,
//! 2 usage or input error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::Result;
use crate::instance_io::{
    generate_instance, read_instance, render_svg, run_campaign, run_report, BBox, CampaignConfig,
    InstanceFile,
};
use crate::verification::build_pipeline;
use crate::visibility::GeoGraph;

/// Thread count override for the rayon pool.
pub const THREADS_ENV: &str = "HALF_THETA6_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "half-theta6",
    version,
    about = "Constrained half-theta-6 spanners and their bounded-degree subgraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a random instance in general position.
    Gen {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        n: usize,
        /// Maximum number of constraints (defaults to n).
        #[arg(long)]
        budget: Option<usize>,
        /// Side of the square bounding box for coordinates.
        #[arg(long, default_value_t = 1000)]
        bbox: i64,
        /// Output file (stdout if omitted).
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Print the edge list of one graph as JSON.
    Build {
        instance: PathBuf,
        #[arg(long, value_enum)]
        graph: GraphKind,
    },
    /// Run every check and print a JSON report.
    Verify { instance: PathBuf },
    /// Render an instance and chosen graphs to SVG.
    Svg {
        instance: PathBuf,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "theta6")]
        layers: Vec<GraphKind>,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Verify many seeded random instances.
    Campaign {
        #[arg(long, default_value_t = 500)]
        instances: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        n_min: usize,
        #[arg(long, default_value_t = 60)]
        n_max: usize,
        /// Bounding-box side; 0 scales with n.
        #[arg(long, default_value_t = 0)]
        bbox: i64,
        /// Write one JSON report per instance to this file.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum GraphKind {
    Vis,
    Theta6,
    G9,
    G6,
}

impl GraphKind {
    fn name(self) -> &'static str {
        match self {
            GraphKind::Vis => "vis",
            GraphKind::Theta6 => "theta6",
            GraphKind::G9 => "g9",
            GraphKind::G6 => "g6",
        }
    }
}

fn configure_threads() {
    let Some(threads) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    else {
        return;
    };
    // Fails only if the pool already exists, e.g. when called twice in tests.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
}

/// Parses `args` (including the program name) and runs the command.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    configure_threads();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn emit(out: Option<&PathBuf>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn graphs_by_kind(
    instance: &Path,
    kinds: &[GraphKind],
) -> Result<(crate::cones::Instance, Vec<(GraphKind, GeoGraph)>)> {
    let inst = read_instance(instance)?;
    let p = build_pipeline(&inst)?;
    let graphs = kinds
        .iter()
        .map(|&k| {
            let g = match k {
                GraphKind::Vis => p.vis.clone(),
                GraphKind::Theta6 => p.ht.graph.clone(),
                GraphKind::G9 => p.g9.clone(),
                GraphKind::G6 => p.g6.clone(),
            };
            (k, g)
        })
        .collect();
    Ok((inst, graphs))
}

fn run(command: Command) -> Result<i32> {
    match command {
        Command::Gen {
            seed,
            n,
            budget,
            bbox,
            out,
        } => {
            let budget = budget.unwrap_or(n);
            let inst = generate_instance(seed, n, budget, BBox::square(bbox))?;
            let meta = BTreeMap::from([
                ("seed".to_string(), Value::from(seed)),
                ("n".to_string(), Value::from(n)),
                ("constraint_budget".to_string(), Value::from(budget)),
                ("bbox".to_string(), Value::from(bbox)),
            ]);
            emit(
                out.as_ref(),
                &InstanceFile::from_instance(&inst, meta).to_bytes(),
            )?;
            Ok(0)
        }
        Command::Build { instance, graph } => {
            let (inst, graphs) = graphs_by_kind(&instance, &[graph])?;
            let g = &graphs[0].1;
            let edges: Vec<[usize; 2]> = g.edges().map(|(a, b)| [a, b]).collect();
            let doc = json!({ "graph": graph.name(), "vertex_count": inst.len(), "edges": edges });
            println!("{doc}");
            Ok(0)
        }
        Command::Verify { instance } => {
            let inst = read_instance(&instance)?;
            let report = run_report(&inst, None)?;
            println!(
                "{}",
                serde_json::to_string(&report).expect("reports serialize")
            );
            for c in report.checks.iter().filter(|c| !c.passed) {
                eprintln!("FAIL {}: {:?}", c.name, c.witness);
            }
            Ok(if report.passed { 0 } else { 1 })
        }
        Command::Svg {
            instance,
            layers,
            out,
        } => {
            let (inst, graphs) = graphs_by_kind(&instance, &layers)?;
            let named: Vec<(&str, &GeoGraph)> = graphs.iter().map(|(k, g)| (k.name(), g)).collect();
            render_svg(&inst, &named, &out)?;
            Ok(0)
        }
        Command::Campaign {
            instances,
            seed,
            n_min,
            n_max,
            bbox,
            out,
        } => {
            if n_min == 0 || n_min > n_max {
                return Err(crate::Error::PreconditionViolated(format!(
                    "invalid n range {n_min}..={n_max}"
                )));
            }
            let config = CampaignConfig {
                instances,
                seed,
                n_min,
                n_max,
                bbox_side: bbox,
            };
            let mut writer = match &out {
                Some(path) => Some(std::io::BufWriter::new(std::fs::File::create(path)?)),
                None => None,
            };
            let mut write_error = None;
            let summary = run_campaign(&config, |report| {
                if let Some(w) = writer.as_mut() {
                    let line = serde_json::to_string(report).expect("reports serialize");
                    if let Err(e) = writeln!(w, "{line}") {
                        write_error.get_or_insert(e);
                    }
                }
            });
            if let Some(e) = write_error {
                return Err(e.into());
            }
            if let Some(mut w) = writer {
                w.flush()?;
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&summary).expect("summaries serialize")
            );
            Ok(if summary.passed() { 0 } else { 1 })
        }
    }
}
