use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use evoalg::report::{self, AnalysisReport, Settings};
use evoalg::{AlgebraDocument, Error, Permutation};

/// Exact analyses of evolution algebras defined by two permutations.
#[derive(Parser)]
#[command(name = "evoalg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,

    /// Residual tolerance for floating idempotent coordinates.
    #[arg(long, global = true, default_value_t = evoalg::idempotent::DEFAULT_TOL, value_parser = parse_tol)]
    tol: f64,

    /// Seed for randomized verification samples.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Coordinate weight functions.
    Baric { file: PathBuf },
    /// Absolute nilpotent elements (also accepts a bare `matrix` document).
    Nilpotent { file: PathBuf },
    /// Idempotent system; complete solution in dimension two.
    Idempotent { file: PathBuf },
    /// Direct-sum decomposition along common cycle supports.
    Decompose { file: PathBuf },
    /// Canonical cycle form (tau = identity or tau = pi inverse).
    Canonical { file: PathBuf },
    /// Isomorphism along a conjugator of the two pi's (both tau = identity).
    Iso {
        alpha: PathBuf,
        beta: PathBuf,
        /// Conjugator as a 1-based image list, e.g. `2,3,1`; searched when omitted.
        #[arg(long, value_parser = parse_perm)]
        gamma: Option<Permutation>,
    },
    /// Every applicable analysis; inapplicable ones are listed with a reason.
    Analyze { file: PathBuf },
}

fn parse_tol(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        _ => Err(format!("tolerance must be a positive number, got {s:?}")),
    }
}

fn parse_perm(s: &str) -> Result<Permutation, String> {
    let image = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| format!("not an index: {t:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    Permutation::new(image).map_err(|e| e.to_string())
}

fn run(cli: &Cli) -> evoalg::Result<AnalysisReport> {
    let settings = Settings { tol: cli.tol, seed: cli.seed };
    let load = |p: &PathBuf| AlgebraDocument::read(p);
    match &cli.command {
        Command::Baric { file } => {
            let doc = load(file)?;
            let e = doc.algebra()?;
            Ok(AnalysisReport { baric: Some(report::baric_section(e, &settings)), ..AnalysisReport::for_algebra("baric", e) })
        }
        Command::Nilpotent { file } => {
            let doc = load(file)?;
            match &doc.algebra {
                Some(e) => Ok(AnalysisReport {
                    nilpotent: Some(report::nilpotent_section(e)),
                    ..AnalysisReport::for_algebra("nilpotent", e)
                }),
                None => {
                    let m = doc.structural_matrix();
                    Ok(AnalysisReport {
                        command: "nilpotent".into(),
                        nilpotent: Some(report::nilpotent_matrix_section(&m)?),
                        matrix: Some(m),
                        ..Default::default()
                    })
                }
            }
        }
        Command::Idempotent { file } => {
            let doc = load(file)?;
            let e = doc.algebra()?;
            Ok(AnalysisReport {
                idempotent: Some(report::idempotent_section(e, &settings)?),
                ..AnalysisReport::for_algebra("idempotent", e)
            })
        }
        Command::Decompose { file } => {
            let doc = load(file)?;
            let e = doc.algebra()?;
            Ok(AnalysisReport {
                decomposition: Some(report::decomposition_section(e)?),
                ..AnalysisReport::for_algebra("decompose", e)
            })
        }
        Command::Canonical { file } => {
            let doc = load(file)?;
            let e = doc.algebra()?;
            Ok(AnalysisReport { canonical: Some(report::canonical_section(e)?), ..AnalysisReport::for_algebra("canonical", e) })
        }
        Command::Iso { alpha, beta, gamma } => {
            let a = load(alpha)?;
            let b = load(beta)?;
            let (ea, eb) = (a.algebra()?, b.algebra()?);
            Ok(AnalysisReport {
                isomorphism: Some(report::isomorphism_section(ea, eb, gamma.as_ref())?),
                ..AnalysisReport::for_algebra("iso", ea)
            })
        }
        Command::Analyze { file } => {
            let doc = load(file)?;
            report::analyze(doc.algebra()?, &settings)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Baric { .. } => "baric",
        Command::Nilpotent { .. } => "nilpotent",
        Command::Idempotent { .. } => "idempotent",
        Command::Decompose { .. } => "decompose",
        Command::Canonical { .. } => "canonical",
        Command::Iso { .. } => "iso",
        Command::Analyze { .. } => "analyze",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            if cli.pretty {
                print!("{}", r.pretty());
            } else {
                println!("{}", r.to_json());
            }
            ExitCode::SUCCESS
        }
        Err(e) if e.is_input_error() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {} precondition failed: {}", command_name(&cli.command), precondition(&e));
            ExitCode::from(1)
        }
    }
}

/// Error text with the hypothesis it violates spelled out.
fn precondition(e: &Error) -> String {
    match e {
        Error::SupportsDiffer => "decomposition hypothesis: cycle supports of pi and tau differ".into(),
        Error::RankNotNMinus2 { .. } => format!("rank test hypothesis: {e}"),
        Error::NotAConjugator => "gamma does not satisfy gamma pi_alpha gamma^-1 = pi_beta".into(),
        other => other.to_string(),
    }
}
