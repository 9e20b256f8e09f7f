use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use sperkit_core::job::{exit_code, ConeJob, ReduceJob, ResolveJob, SegmentJob, SignJob, StaircaseJob, WitnessJob};
use sperkit_core::rational::{matrix_as_strings, vec_as_strings, Rational};
use sperkit_core::{
    run_job, ConeSystem, Error, ExponentVec, Job, MonomialPoint, Poly, RelationSystem, Segment, ValVec,
};

/// Exact monomial valuations, blowings up and certificates.
#[derive(Parser)]
#[command(name = "sperkit", version)]
struct Cli {
    /// Run a JSON job file instead of a subcommand.
    #[arg(long, global = true)]
    job: Option<PathBuf>,
    /// Write the result document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write the resolution tree as Graphviz DOT (resolve jobs only).
    #[arg(long, global = true)]
    dot: Option<PathBuf>,
    /// Maximum number of nodes per resolution tree.
    #[arg(long, global = true)]
    node_cap: Option<usize>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Build the resolution tree of x^alpha - x^gamma.
    Resolve(ResolveArgs),
    /// Reduce a system of rational relations to monomial charts.
    Reduce(ReduceArgs),
    /// Sign and value of a polynomial at a monomial point.
    Sign(SignArgs),
    /// Build the witness system of polynomials at a point.
    Witness(WitnessArgs),
    /// Test membership in a cone system.
    Cone(ConeArgs),
    /// Staircase certificate between two cone points.
    Staircase(StaircaseArgs),
    /// Test membership in a segment.
    Segment(SegmentArgs),
}

#[derive(Args)]
struct ResolveArgs {
    /// Comma-separated exponents, e.g. 2,0
    #[arg(long, value_parser = parse_exponents)]
    alpha: ExponentVec,
    #[arg(long, value_parser = parse_exponents)]
    gamma: ExponentVec,
    /// Value vector (JSON) at which to select a chart.
    #[arg(long)]
    select: Option<PathBuf>,
}

#[derive(Args)]
struct ReduceArgs {
    /// Relation system {"n","theta"} or a bare matrix of rows.
    #[arg(long)]
    theta: PathBuf,
    #[arg(long)]
    select: Option<PathBuf>,
}

#[derive(Args)]
struct SignArgs {
    /// Polynomial as a JSON term list or string, or a plain-text file.
    #[arg(long)]
    poly: PathBuf,
    #[arg(long)]
    point: PathBuf,
}

#[derive(Args)]
struct WitnessArgs {
    #[arg(long)]
    point: PathBuf,
    /// JSON list of polynomials.
    #[arg(long)]
    polys: PathBuf,
    /// Variables with fixed signs, e.g. 1,2 (default: all).
    #[arg(long, value_delimiter = ',')]
    fixed: Option<Vec<usize>>,
    /// JSON list of sample points to check for sign constancy.
    #[arg(long)]
    samples: Option<PathBuf>,
}

#[derive(Args)]
struct ConeArgs {
    /// Cone system {"n","omega","theta"} or a bare matrix of strict rows.
    #[arg(long)]
    omega: PathBuf,
    /// Optional matrix of equality rows.
    #[arg(long)]
    theta: Option<PathBuf>,
    #[arg(long)]
    member: PathBuf,
}

#[derive(Args)]
struct StaircaseArgs {
    #[arg(long)]
    omega: PathBuf,
    /// First endpoint as a JSON list of rationals.
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    /// Depth of the emitted value vectors.
    #[arg(long, default_value_t = 1)]
    depth: usize,
}

#[derive(Args)]
struct SegmentArgs {
    #[arg(long)]
    c: PathBuf,
    #[arg(long)]
    d: PathBuf,
    #[arg(long)]
    member: PathBuf,
}

#[derive(Debug)]
enum Failure {
    Io(String),
    Job(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Job(e)
    }
}

fn parse_exponents(s: &str) -> Result<ExponentVec, String> {
    s.split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|e| format!("bad exponent {t:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()
        .map(ExponentVec)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| Failure::Job(Error::Parse(format!("{}: {e}", path.display()))))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixOr<T> {
    Full(T),
    #[serde(with = "matrix_as_strings")]
    Rows(Vec<Vec<Rational>>),
}

fn width(rows: &[Vec<Rational>]) -> Result<usize, Failure> {
    rows.first().map(Vec::len).ok_or_else(|| Failure::Job(Error::Parse("a bare matrix needs at least one row".into())))
}

#[derive(Deserialize)]
#[serde(transparent)]
struct Rows(#[serde(with = "matrix_as_strings")] Vec<Vec<Rational>>);

#[derive(Deserialize)]
#[serde(transparent)]
struct Column(#[serde(with = "vec_as_strings")] Vec<Rational>);

fn load_rows(path: &Path) -> Result<Vec<Vec<Rational>>, Failure> {
    load::<Rows>(path).map(|r| r.0)
}

fn load_column(path: &Path) -> Result<Vec<Rational>, Failure> {
    load::<Column>(path).map(|c| c.0)
}

fn load_poly(path: &Path) -> Result<Poly, Failure> {
    let text = read(path)?;
    match serde_json::from_str(&text) {
        Ok(p) => Ok(p),
        Err(_) => Ok(Poly::parse(text.trim(), None)?),
    }
}

fn build_job(cli: &Cli) -> Result<Job, Failure> {
    if let Some(path) = &cli.job {
        if cli.command.is_some() {
            return Err(Failure::Job(Error::Parse("--job cannot be combined with a subcommand".into())));
        }
        let mut job = Job::from_json(&read(path)?)?;
        if let Some(cap) = cli.node_cap {
            match &mut job {
                Job::Resolve(j) => j.node_cap = Some(cap),
                Job::Reduce(j) => j.node_cap = Some(cap),
                _ => {}
            }
        }
        return Ok(job);
    }
    let command = cli
        .command
        .as_ref()
        .ok_or_else(|| Failure::Job(Error::Parse("either --job or a subcommand is required".into())))?;
    let select = |p: &Option<PathBuf>| p.as_deref().map(load::<ValVec>).transpose();
    Ok(match command {
        Command::Resolve(a) => Job::Resolve(ResolveJob {
            alpha: a.alpha.clone(),
            gamma: a.gamma.clone(),
            select: select(&a.select)?,
            node_cap: cli.node_cap,
        }),
        Command::Reduce(a) => {
            let system = match load::<MatrixOr<RelationSystem>>(&a.theta)? {
                MatrixOr::Full(s) => s,
                MatrixOr::Rows(rows) => RelationSystem::new(width(&rows)?, rows)?,
            };
            Job::Reduce(ReduceJob { system, select: select(&a.select)?, node_cap: cli.node_cap })
        }
        Command::Sign(a) => Job::Sign(SignJob { poly: load_poly(&a.poly)?, point: load::<MonomialPoint>(&a.point)? }),
        Command::Witness(a) => Job::Witness(WitnessJob {
            point: load(&a.point)?,
            polys: load(&a.polys)?,
            fixed: a
                .fixed
                .as_ref()
                .map(|v| {
                    v.iter()
                        .map(|&q| q.checked_sub(1).ok_or_else(|| Error::Parse("variables are numbered from 1".into())))
                        .collect()
                })
                .transpose()?,
            samples: a.samples.as_deref().map(load).transpose()?.unwrap_or_default(),
        }),
        Command::Cone(a) => {
            let theta = a.theta.as_deref().map(load_rows).transpose()?.unwrap_or_default();
            let cone = match load::<MatrixOr<ConeSystem>>(&a.omega)? {
                MatrixOr::Full(c) if theta.is_empty() => c,
                MatrixOr::Full(c) => {
                    ConeSystem::new(c.omega().first().map_or(width(&theta)?, Vec::len), c.omega().to_vec(), theta)?
                }
                MatrixOr::Rows(rows) => ConeSystem::new(width(&rows)?, rows, theta)?,
            };
            Job::Cone(ConeJob { cone, member: load(&a.member)? })
        }
        Command::Staircase(a) => Job::Staircase(StaircaseJob {
            omega: load_rows(&a.omega)?,
            a: load_column(&a.a)?,
            b: load_column(&a.b)?,
            depth: a.depth,
        }),
        Command::Segment(a) => {
            Job::Segment(SegmentJob { segment: Segment::new(load(&a.c)?, load(&a.d)?)?, member: load(&a.member)? })
        }
    })
}

fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let job = build_job(cli)?;
    let doc = run_job(&job)?;
    if let Some(path) = &cli.dot {
        let dot = doc
            .dot()
            .ok_or_else(|| Failure::Job(Error::InvalidInput("--dot is only available for resolve jobs".into())))?;
        write_atomic(path, &dot)?;
    }
    let json = doc.to_json();
    match &cli.out {
        Some(path) => write_atomic(path, &json),
        None => std::io::stdout().write_all(json.as_bytes()).map_err(|e| Failure::Io(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Job(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
