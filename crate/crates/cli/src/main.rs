use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::{Parser, ValueEnum};
use hsgn_core::{
    build_hop_table, load_communities, load_edge_list, pipeline::write_matrix, run_pipeline, sweep, Error, Graph,
    GroundTruth, NmiNormalization, PipelineConfig, SolverKind, SweepAxis, Threshold,
};

/// Community detection by high-order-proximity reconstruction and
/// symmetric, graph-regularized nonnegative matrix factorization.
#[derive(Debug, Parser)]
#[command(name = "hsgn", version)]
struct Args {
    /// Edge list: one `u v` pair per line, `#` comments allowed.
    #[arg(long, value_name = "PATH")]
    edges: PathBuf,

    /// Ground-truth communities: one community per line, whitespace-separated ids.
    #[arg(long, value_name = "PATH")]
    communities: Option<PathBuf>,

    /// Number of communities; taken from the ground truth when omitted.
    #[arg(long)]
    k: Option<usize>,

    #[arg(long, default_value_t = 0.125)]
    theta: f64,

    #[arg(long, default_value_t = 1.0)]
    lambda: f64,

    /// Reconstruction threshold (> 1), or `disabled`.
    #[arg(long, default_value = "5", value_name = "FLOAT|disabled")]
    epsilon: Threshold,

    /// Highest path order used by the proximity metric (1..=6).
    #[arg(long, default_value_t = 2)]
    r: usize,

    /// Reconstruction passes (1..=6).
    #[arg(long, default_value_t = 3)]
    d: usize,

    #[arg(long, default_value_t = 0.5)]
    beta: f64,

    #[arg(long, default_value_t = 1e-3)]
    tol: f64,

    #[arg(long, default_value_t = 200)]
    max_iters: usize,

    #[arg(long, default_value_t = 10)]
    trials: usize,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long, default_value = "sgn", value_name = "sgn|snmf")]
    solver: SolverKind,

    /// Factorize the input graph as given.
    #[arg(long)]
    no_reconstruct: bool,

    #[arg(long, value_enum, default_value_t = Nmi::Sqrt)]
    nmi: Nmi,

    /// JSON report destination.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,

    /// Sweep one hyper-parameter: theta, lambda, epsilon, r or d.
    #[arg(long, value_name = "AXIS")]
    sweep: Option<SweepAxis>,

    /// Comma-separated sweep values; defaults to the standard grid for the axis.
    #[arg(long, requires = "sweep", value_delimiter = ',')]
    grid: Option<Vec<String>>,

    /// Write the reconstructed graph as an edge list.
    #[arg(long, value_name = "PATH", conflicts_with = "sweep")]
    dump_enhanced: Option<PathBuf>,

    /// Write the first trial's indicator matrix, one row per node.
    #[arg(long, value_name = "PATH", conflicts_with = "sweep")]
    dump_factors: Option<PathBuf>,

    /// Write `id_i id_j ratio` for every pair seen on the input graph.
    #[arg(long, value_name = "PATH", conflicts_with = "sweep")]
    dump_hop: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Nmi {
    Sqrt,
    Arithmetic,
}

impl Args {
    fn config(&self) -> PipelineConfig {
        PipelineConfig {
            k: self.k,
            theta: self.theta,
            lambda: self.lambda,
            epsilon: self.epsilon,
            r: self.r,
            d: self.d,
            beta: self.beta,
            tol: self.tol,
            max_iters: self.max_iters,
            trials: self.trials,
            seed: self.seed,
            solver: self.solver,
            reconstruct: !self.no_reconstruct,
            nmi_normalization: match self.nmi {
                Nmi::Sqrt => NmiNormalization::Geometric,
                Nmi::Arithmetic => NmiNormalization::Arithmetic,
            },
        }
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    let f = File::open(path).map_err(Error::from).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(BufReader::new(f))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).map_err(Error::from).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn write_json(value: serde_json::Value, path: &Path) -> Result<()> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, &value)?;
    writeln!(out).map_err(Error::from)?;
    out.flush().map_err(Error::from)?;
    Ok(())
}

fn run(args: &Args) -> Result<()> {
    let graph: Graph = load_edge_list(open(&args.edges)?).with_context(|| format!("in {}", args.edges.display()))?;
    let truth: Option<GroundTruth> = match &args.communities {
        Some(p) => {
            let t = load_communities(open(p)?, &graph).with_context(|| format!("in {}", p.display()))?;
            if t.overlap_warnings > 0 {
                eprintln!("warning: {} overlapping memberships ignored (first one kept)", t.overlap_warnings);
            }
            Some(t)
        }
        None => None,
    };
    let cfg = args.config();

    if let Some(axis) = args.sweep {
        let grid = args.grid.clone().unwrap_or_else(|| axis.default_grid());
        let report = sweep(&graph, truth.as_ref(), &cfg, axis, &grid)?;
        for point in &report.points {
            print!("[{:?}={}] {}", axis, point.value, point.report.summary());
        }
        if let Some(p) = &args.output {
            write_json(serde_json::to_value(&report)?, p)?;
        }
        return Ok(());
    }

    if let Some(p) = &args.dump_hop {
        let table = build_hop_table(&graph, args.r)?;
        let mut out = create(p)?;
        table.write_dump(&graph, &mut out)?;
        out.flush().map_err(Error::from)?;
    }
    let output = run_pipeline(&graph, truth.as_ref(), &cfg)?;
    print!("{}", output.report.summary());
    if let Some(p) = &args.output {
        write_json(serde_json::to_value(&output.report)?, p)?;
    }
    if let Some(p) = &args.dump_enhanced {
        let mut out = create(p)?;
        output.enhanced.write_edge_list(&mut out)?;
        out.flush().map_err(Error::from)?;
    }
    if let Some(p) = &args.dump_factors {
        let x = output.indicators.first().context("no trials were run")?;
        let mut out = create(p)?;
        write_matrix(x, &mut out)?;
        out.flush().map_err(Error::from)?;
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(e) if e.is_data_error() => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
