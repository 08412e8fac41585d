use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{ArgGroup, Args, Parser, Subcommand};

use tropcong::congruence::{synthesize_generator, variety_of_pair, verify_generator};
use tropcong::curves::{check_geometric_conditions, default_epsilon, ray_bump, segment_tent, vertex_star};
use tropcong::json::{self, Codec};
use tropcong::scalar::parse_q;
use tropcong::{CongruencePair, CurveComplex, Error, GeneratorCertificate, PolyhedralUnion, TropicalPoly};

/// Exact tropical congruence and curve toolkit.
#[derive(Parser, Debug)]
#[command(name = "tropcong", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for all random sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Number of random samples per check.
    #[arg(long, global = true, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,

    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a polynomial or rational function at a point.
    Eval {
        function: PathBuf,
        /// Point as `1/2,-3` or a JSON array.
        #[arg(allow_hyphen_values = true)]
        point: String,
    },
    /// Print the canonical form of a polynomial.
    Canon { poly: PathBuf },
    /// Decide functional equality of two polynomials.
    Eq { lhs: PathBuf, rhs: PathBuf },
    /// Compute the variety of a congruence pair.
    Variety { pair: PathBuf },
    /// Synthesize a generator certificate for a polyhedral union.
    Generate { union: PathBuf },
    /// Check a generator certificate; exit code 1 on any failure.
    Verify { certificate: PathBuf },
    /// Check the geometric conditions of a curve complex; exit code 1 on a violation.
    CurveCheck { complex: PathBuf },
    /// Build a chart function on a curve complex.
    Chart(ChartArgs),
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("target").required(true).multiple(false).args(["ray", "segment", "vertex"])))]
struct ChartArgs {
    complex: PathBuf,
    #[arg(long)]
    ray: Option<usize>,
    #[arg(long)]
    segment: Option<usize>,
    #[arg(long)]
    vertex: Option<usize>,
    /// Radius of the vertex star, as an exact rational.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["ray", "segment"])]
    eps: Option<String>,
}

/// Result of a command that ran to completion.
struct Outcome {
    text: String,
    failed: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, failed: false }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load<T: Codec>(path: &Path) -> anyhow::Result<T> {
    json::from_str(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn pretty<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let samples = usize::try_from(cli.samples).context("--samples is too large")?;
    match &cli.command {
        Command::Eval { function, point } => {
            let f = json::function_from_str(&read(function)?).with_context(|| format!("in {}", function.display()))?;
            let x = json::parse_point(point)?;
            Ok(Outcome::ok(format!("{}\n", f.eval(&x)?)))
        }
        Command::Canon { poly } => {
            let p: TropicalPoly = load(poly)?;
            Ok(Outcome::ok(json::to_string(&p.canonicalize())))
        }
        Command::Eq { lhs, rhs } => {
            let a: TropicalPoly = load(lhs)?;
            let b: TropicalPoly = load(rhs)?;
            let text = match a.func_eq_witness(&b)? {
                None => "true\n".to_string(),
                Some(w) => format!("false\nwitness: {}\n", json::point_to_json(&w)),
            };
            Ok(Outcome::ok(text))
        }
        Command::Variety { pair } => {
            let pair: CongruencePair = load(pair)?;
            Ok(Outcome::ok(json::to_string(&variety_of_pair(&pair)?)))
        }
        Command::Generate { union } => {
            let v: PolyhedralUnion = load(union)?;
            Ok(Outcome::ok(json::to_string(&synthesize_generator(&v)?)))
        }
        Command::Verify { certificate } => {
            let cert: GeneratorCertificate = load(certificate)?;
            let report = verify_generator(&cert, samples, cli.seed)?;
            Ok(Outcome { text: pretty(&json::verify_report_json(&report)), failed: !report.passed() })
        }
        Command::CurveCheck { complex } => {
            let c: CurveComplex = load(complex)?;
            let report = check_geometric_conditions(&c);
            Ok(Outcome { text: pretty(&json::geometric_report_json(&report)), failed: !report.passed() })
        }
        Command::Chart(args) => {
            let c: CurveComplex = load(&args.complex)?;
            let chart = match (args.ray, args.segment, args.vertex) {
                (Some(r), _, _) => ray_bump(&c, r)?,
                (_, Some(s), _) => segment_tent(&c, s)?,
                (_, _, Some(v)) => {
                    let eps = match &args.eps {
                        Some(s) => parse_q(s)?,
                        None => default_epsilon(&c, v),
                    };
                    vertex_star(&c, v, &eps)?
                }
                _ => unreachable!("clap enforces one target"),
            };
            Ok(Outcome::ok(json::to_string(&chart)))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Parse(_)) => 2,
        Some(Error::DimensionMismatch { .. }) => 3,
        Some(Error::Precondition(_) | Error::Overflow(_) | Error::Inconclusive(_)) => 4,
        None if err.downcast_ref::<io::Error>().is_some() => 2,
        None => 1,
    }
}

fn emit(out: Option<&Path>, text: &str) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(cli.out.as_deref(), &outcome.text) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(u8::from(outcome.failed))
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
