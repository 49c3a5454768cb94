use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use fibdet::closedforms::{
    carlitz_d, corollary8_det, corollary9_det, generalized_d, theorem5_det, theorem7_det,
};
use fibdet::harness::{bench_report, run_verification, GridSpec, Target};
use fibdet::matrices::{det_bareiss, det_cofactor, det_dodgson};
use fibdet::scalar::{format_scalar, parse_scalar};
use fibdet::sympoly::{
    corollary4_sides, lemma3_sides, lemma6_bilinear_sides, lemma6_sides, PolyIdentity,
};
use fibdet::{ExactMatrix, HoradamSequence, PowerMatrixSpec, ProductMatrixSpec, RecurrenceParams};

#[derive(Parser)]
#[command(
    name = "fibdet",
    version,
    about = "Exact determinant identities for second-order recurrences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Recurrence parameters; defaults give the Fibonacci numbers.
#[derive(Args, Clone)]
struct ParamArgs {
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    a0: String,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    a1: String,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    c1: String,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    c2: String,
}

impl ParamArgs {
    fn params(&self) -> Result<RecurrenceParams> {
        Ok(RecurrenceParams::new(
            parse_scalar(&self.a0)?,
            parse_scalar(&self.a1)?,
            parse_scalar(&self.c1)?,
            parse_scalar(&self.c2)?,
        )?)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    Cofactor,
    Bareiss,
    Dodgson,
}

#[derive(Clone, Copy, ValueEnum)]
enum Formula {
    Eq1,
    Eq2,
    Thm5,
    Thm7,
    Cor8,
    Cor9,
}

#[derive(Subcommand)]
enum Command {
    /// Print W_n for n in [from, to], one `index<TAB>value` per line.
    Seq {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, allow_hyphen_values = true)]
        from: i64,
        #[arg(long, allow_hyphen_values = true)]
        to: i64,
    },
    /// Run a verification campaign and emit a JSON report.
    Verify {
        /// Target id, comma-separated list, or `all`.
        target: String,
        /// GridSpec JSON file; the default grid is used when omitted.
        #[arg(long)]
        grid: Option<PathBuf>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact determinant of a matrix file.
    Det {
        #[arg(long, value_enum, default_value = "bareiss")]
        engine: Engine,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Evaluate a closed-form determinant.
    Closed {
        #[arg(long, value_enum)]
        formula: Formula,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        s: i64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        p: i64,
        /// Comma-separated d_1..d_r (thm7).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        d: Vec<i64>,
        /// Comma-separated e_1..e_r (thm7).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        e: Vec<i64>,
        /// Also print the factor trace as JSON.
        #[arg(long)]
        trace: bool,
    },
    /// Certify a determinant lemma by full polynomial expansion.
    Symbolic {
        #[arg(long, value_parser = ["3", "4", "6"])]
        lemma: String,
        #[arg(long)]
        r: u32,
        /// Print both canonical polynomials (graded lexicographic order).
        #[arg(long)]
        dump: bool,
    },
    /// Time closed form vs. Bareiss vs. Dodgson on power matrices.
    Bench {
        #[arg(long)]
        rmax: u32,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        s: i64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        n: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Seq { params, from, to } => {
            let seq = HoradamSequence::new(params.params()?);
            for (idx, value) in (from..).zip(seq.terms_range(from, to)?) {
                println!("{idx}\t{}", format_scalar(&value));
            }
        }
        Command::Verify { target, grid, out } => {
            let targets: BTreeSet<Target> = Target::parse_list(&target)?;
            let grid = match grid {
                Some(path) => {
                    let text = fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    GridSpec::from_json(&text)?
                }
                None => GridSpec::default(),
            };
            let report = run_verification(&grid, &targets)?;
            emit(&report.to_json(), out.as_ref())?;
            let s = report.summary;
            eprintln!("total {} passed {} failed {}", s.total, s.passed, s.failed);
            if s.failed > 0 {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Det { engine, matrix } => {
            let text = fs::read_to_string(&matrix)
                .with_context(|| format!("reading {}", matrix.display()))?;
            let m = ExactMatrix::parse(&text)?;
            let det = match engine {
                Engine::Cofactor => det_cofactor(&m)?,
                Engine::Bareiss => det_bareiss(&m),
                Engine::Dodgson => det_dodgson(&m),
            };
            println!("{}", format_scalar(&det));
        }
        Command::Closed {
            formula,
            params,
            r,
            s,
            k,
            n,
            p,
            d,
            e,
            trace,
        } => {
            let params = params.params()?;
            let result = match formula {
                Formula::Eq1 => carlitz_d(r, n),
                Formula::Eq2 => generalized_d(r, s, k, n),
                Formula::Thm5 => theorem5_det(&PowerMatrixSpec { params, r, s, k, n }),
                Formula::Thm7 => {
                    if d.len() != e.len() {
                        bail!("--d and --e must have the same length (that length is r)");
                    }
                    theorem7_det(&ProductMatrixSpec::new(params, s, k, n, d, e)?)
                }
                Formula::Cor8 => corollary8_det(r, s, k),
                Formula::Cor9 => corollary9_det(&params, r, s, k, n, p),
            };
            println!("{}", format_scalar(&result.value));
            if trace {
                println!("{}", serde_json::to_string_pretty(&result.to_json())?);
            }
        }
        Command::Symbolic { lemma, r, dump } => {
            let sides: Vec<PolyIdentity> = match lemma.as_str() {
                "3" => vec![lemma3_sides(r)?],
                "4" => vec![corollary4_sides(r)?],
                _ if r <= 3 => vec![lemma6_sides(r)?, lemma6_bilinear_sides(r)?],
                _ => vec![lemma6_sides(r)?],
            };
            let holds = sides.iter().all(PolyIdentity::holds);
            println!("{}", if holds { "PASS" } else { "FAIL" });
            if dump {
                for id in &sides {
                    println!("lhs: {}", id.lhs);
                    println!("rhs: {}", id.rhs);
                }
            }
            if !holds {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Bench {
            rmax,
            params,
            s,
            k,
            n,
            out,
        } => {
            let report = bench_report(rmax, &params.params()?, s, k, n);
            emit(&serde_json::to_string_pretty(&report)?, out.as_ref())?;
            if report.records.iter().any(|r| !r.values_equal) {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
