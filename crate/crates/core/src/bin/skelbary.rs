//! Command-line front end. Exit status: 0 success, 1 a `k·n ≥ d` instance
//! without a valid decomposition (or a dimension-inequality violation),
//! 2 bad input.

use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use skelbary::experiment::{
    probe_infeasible, run_theorem_sweep, ExperimentReport, ExperimentSpec, Generator, TargetKind,
};
use skelbary::solver::{
    check_witness, decompose_with, parse_parts, verify_dimension_inequality, DecompositionRequest,
    DecompositionWitness, Outcome, Part, SearchOptions, Strategy,
};
use skelbary::testmap::evaluate_phi;
use skelbary::{Error, Polytope, Result, Scalar, Vector};

#[derive(Parser)]
#[command(
    name = "skelbary",
    version,
    about = "Barycenter decompositions on polytope skeleta"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a polytope from a JSON vertex file and print its lattice summary.
    Build {
        #[arg(long)]
        polytope: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a point as a weighted barycenter of points on skeleta.
    Decompose(DecomposeArgs),
    /// Sweep k·n ≥ d instances; every one must decompose.
    VerifyTheorem(SweepArgs),
    /// Probe k·n < d instances on random polytopes.
    ProbeInfeasible(SweepArgs),
    /// Evaluate the distance test map at a tuple of points.
    Testmap {
        #[arg(long)]
        polytope: PathBuf,
        #[arg(long)]
        k: usize,
        /// Points separated by ';', e.g. "0,1;1/2,0".
        #[arg(long, conflicts_with = "witness", allow_hyphen_values = true)]
        points: Option<String>,
        /// Witness JSON as written by `decompose`.
        #[arg(long)]
        witness: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check dim ≥ n(k+1) − d over face tuples, after centering the polytope.
    DimCheck {
        #[arg(long)]
        polytope: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    polytope: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    point: String,
    #[arg(long, requires = "k", conflicts_with = "parts")]
    n: Option<usize>,
    #[arg(long, requires = "n")]
    k: Option<usize>,
    /// Heterogeneous parts "k:λ,k:λ,…".
    #[arg(long)]
    parts: Option<String>,
    #[arg(long, default_value = "direct")]
    strategy: String,
    #[arg(long)]
    parallel: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value = "cube")]
    generator: String,
    #[arg(long)]
    dim: usize,
    /// Inclusive range "a..b", or a single value.
    #[arg(long)]
    n: String,
    #[arg(long)]
    k: String,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// barycenter, interior or boundary.
    #[arg(long, default_value = "interior")]
    target: String,
    #[arg(long, default_value = "direct")]
    strategy: String,
    #[arg(long)]
    parallel: bool,
    /// CSV report path (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write one polytope file per row plus an instances.csv index.
    #[arg(long)]
    dump_instances: Option<PathBuf>,
    /// Write 0 in the elapsed_ms column so reruns are byte-identical.
    #[arg(long)]
    no_timing: bool,
    /// JSON file for feasible probe draws (default stderr).
    #[arg(long)]
    anomalies: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>> {
    let bad = || Error::InvalidExperiment(format!("bad range {s:?}, expected a..b"));
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    match s.split_once("..") {
        Some((a, b)) => Ok(parse(a)?..=parse(b.trim_start_matches('='))?),
        None => {
            let v = parse(s)?;
            Ok(v..=v)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn emit_json(out: Option<&Path>, value: &impl Serialize) -> Result<()> {
    emit(out, &serde_json::to_string_pretty(value)?)
}

#[derive(Serialize)]
struct FacetSummary<'a> {
    normal: &'a Vector,
    offset: &'a Scalar,
    vertex_ids: &'a [usize],
}

#[derive(Serialize)]
struct BuildSummary<'a> {
    name: &'a str,
    dim: usize,
    ambient_dim: usize,
    vertices: &'a [Vector],
    f_vector: Vec<usize>,
    faces: usize,
    facets: Vec<FacetSummary<'a>>,
}

fn build(polytope: &Path, out: Option<&Path>) -> Result<ExitCode> {
    let p = Polytope::load(polytope)?;
    let summary = BuildSummary {
        name: p.name(),
        dim: p.dim(),
        ambient_dim: p.ambient_dim(),
        vertices: p.vertices(),
        f_vector: p.f_vector(),
        faces: p.lattice().len(),
        facets: p
            .facets()
            .iter()
            .map(|f| FacetSummary {
                normal: &f.normal,
                offset: &f.offset,
                vertex_ids: &f.vertex_ids,
            })
            .collect(),
    };
    emit_json(out, &summary)?;
    Ok(ExitCode::SUCCESS)
}

fn decompose(args: &DecomposeArgs) -> Result<ExitCode> {
    let p = Polytope::load(&args.polytope)?;
    let target: Vector = args.point.parse()?;
    let strategy: Strategy = args.strategy.parse()?;
    let parts: Vec<Part> = match (&args.parts, args.n, args.k) {
        (Some(parts), _, _) => parse_parts(parts)?,
        (None, Some(n), Some(k)) => DecompositionRequest::homogeneous(&p, target.clone(), n, k)?
            .parts()
            .to_vec(),
        _ => {
            return Err(Error::InvalidRequest(
                "give either --n and --k, or --parts".into(),
            ))
        }
    };
    let req = DecompositionRequest::new(&p, target, parts)?;
    let options = SearchOptions {
        parallel: args.parallel,
        ..SearchOptions::default()
    };
    let outcome = decompose_with(&req, strategy, options)?;
    emit_json(args.out.as_deref(), &outcome)?;
    let guaranteed = req.is_homogeneous()
        && req.total_skeleton_dim() >= p.carrier_face(req.target())?.dim() as usize;
    let failed = match &outcome {
        Outcome::Witness(w) => !check_witness(&req, w),
        Outcome::Infeasible(_) => guaranteed,
    };
    Ok(if failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn sweep_spec(args: &SweepArgs) -> Result<ExperimentSpec> {
    let generator: Generator = args.generator.parse()?;
    let target: TargetKind = args.target.parse()?;
    Ok(ExperimentSpec::new(
        generator,
        args.dim,
        parse_range(&args.n)?,
        parse_range(&args.k)?,
        args.trials,
        args.seed,
    )
    .with_target(target)
    .with_strategy(args.strategy.parse()?)
    .with_parallel(args.parallel))
}

fn write_report(args: &SweepArgs, report: &mut ExperimentReport) -> Result<()> {
    if args.no_timing {
        report.clear_timing();
    }
    match &args.out {
        Some(path) => report.write_csv(std::fs::File::create(path)?)?,
        None => report.write_csv(std::io::stdout().lock())?,
    }
    if let Some(dir) = &args.dump_instances {
        report.dump_instances(dir)?;
    }
    let s = &report.summary;
    eprintln!(
        "success={} failure={} violations={} anomalies={}",
        s.success, s.failure, s.violations, s.anomalies
    );
    Ok(())
}

fn verify_theorem(args: &SweepArgs) -> Result<ExitCode> {
    let mut report = run_theorem_sweep(&sweep_spec(args)?)?;
    write_report(args, &mut report)?;
    Ok(if report.summary.violations > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn probe(args: &SweepArgs) -> Result<ExitCode> {
    let mut report = probe_infeasible(&sweep_spec(args)?)?;
    write_report(args, &mut report)?;
    if !report.anomalies.is_empty() {
        let json = serde_json::to_string_pretty(&report.anomalies)?;
        match &args.anomalies {
            Some(path) => std::fs::write(path, json)?,
            None => eprintln!("{json}"),
        }
    }
    Ok(if report.summary.failure > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn testmap(
    polytope: &Path,
    k: usize,
    points: Option<&str>,
    witness: Option<&Path>,
    out: Option<&Path>,
) -> Result<ExitCode> {
    let p = Polytope::load(polytope)?;
    let pts: Vec<Vector> = match (points, witness) {
        (Some(s), _) => s.split(';').map(str::parse).collect::<Result<_>>()?,
        (None, Some(path)) => {
            DecompositionWitness::from_json(&std::fs::read_to_string(path)?)?.points
        }
        (None, None) => {
            return Err(Error::InvalidRequest("give --points or --witness".into()));
        }
    };
    emit_json(out, &evaluate_phi(&pts, &p, k)?)?;
    Ok(ExitCode::SUCCESS)
}

fn dim_check(polytope: &Path, n: usize, k: usize, out: Option<&Path>) -> Result<ExitCode> {
    let p = Polytope::load(polytope)?;
    let centered = p.translated(&p.vertex_centroid().scale(&-Scalar::one()))?;
    let report = verify_dimension_inequality(&centered, n, k)?;
    emit_json(out, &report)?;
    Ok(if report.violations > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Build { polytope, out } => build(&polytope, out.as_deref()),
        Command::Decompose(args) => decompose(&args),
        Command::VerifyTheorem(args) => verify_theorem(&args),
        Command::ProbeInfeasible(args) => probe(&args),
        Command::Testmap {
            polytope,
            k,
            points,
            witness,
            out,
        } => testmap(
            &polytope,
            k,
            points.as_deref(),
            witness.as_deref(),
            out.as_deref(),
        ),
        Command::DimCheck {
            polytope,
            n,
            k,
            out,
        } => dim_check(&polytope, n, k, out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
