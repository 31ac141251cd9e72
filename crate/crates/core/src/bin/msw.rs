//! `msw`: command-line front end. Every command prints one JSON report.
//!
//! Exit codes: 0 completed or verified, 1 violation found, 2 inconclusive or
//! capped, 3 malformed input file, 4 usage or I/O error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use msw_core::constructions::{wedge_space, NamedSpace};
use msw_core::duality::dual_space;
use msw_core::primitivity::{classify, condition_i, condition_ii, minimal_degenerate_compression};
use msw_core::recognition::{
    equivalence_probe, solve_alternating_congruence, strict_triangularization, EquivalenceVerdict, Search,
};
use msw_core::spacefile::{parse_matrix, parse_space, render_space, to_json, FileError};
use msw_core::spectral::spectral_report;
use msw_core::theorems::{
    exhaustive_scan, random_probe, run_generalized_pipeline, verify_atkinson_on_instance,
    verify_gerstenhaber_bound, ProbeConfig, ProbeKind, ScanPredicate, Verdict,
};
use msw_core::{FieldSpec, Matrix, MatrixSpace, MswError, DEFAULT_CAP};

const REPORT_FORMAT: &str = "msw-report-1";

#[derive(Parser)]
#[command(name = "msw", version, about = "Exact matrix-space workbench over GF(p)")]
struct Cli {
    /// Largest number of space elements any single enumeration may visit.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: u64,
    /// Indent width of the JSON report; 0 prints it on one line.
    #[arg(long, global = true, default_value_t = 2)]
    json_indent: usize,
    /// Print nothing on success; only the exit code reports the outcome.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RecognizeKind {
    Alt,
    StrictUt,
    Wedge,
}

#[derive(Clone, Copy, ValueEnum)]
enum TheoremKind {
    Gerstenhaber,
    Generalized,
    Atkinson,
}

#[derive(Clone, Copy, ValueEnum)]
enum PredicateArg {
    TrivialSpectrum,
    Nilpotent,
}

#[derive(Subcommand)]
enum Command {
    /// Write a named space as an msw-1 file.
    Construct {
        /// altn, strict-ut, wedge, p-alt, conj-strict-ut or transformed-wedge.
        #[arg(value_parser = construct_names())]
        name: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Spectral properties of a square space.
    Props { file: PathBuf },
    /// Conditions (i)-(iv) and the resulting classification.
    Primitivity { file: PathBuf },
    /// The dual space of a square space.
    Dual {
        file: PathBuf,
        /// Basis change applied on the right of every row (msw-1 matrix file).
        #[arg(long = "P")]
        basis_change: Option<PathBuf>,
    },
    /// Compression onto a minimal degenerate column subspace.
    Reduce { file: PathBuf },
    /// Decide membership in an extremal class.
    Recognize {
        kind: RecognizeKind,
        file: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Count d-dimensional subspaces of Mat_n(GF(p)) satisfying a predicate.
    Scan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        dim: usize,
        #[arg(long, value_enum)]
        predicate: PredicateArg,
        /// Half-open index range `A:B` in Grassmannian order.
        #[arg(long)]
        partition: Option<String>,
    },
    /// Check a bound and its equality case on one space.
    Theorem {
        which: TheoremKind,
        file: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Seeded random probes: implications, equivalence-invariance, dual, grassmannian, pipeline, all.
    Probe {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        trials: u64,
        /// Restrict to n x n spaces.
        #[arg(long)]
        n: Option<usize>,
        /// Restrict to one prime.
        #[arg(long)]
        p: Option<u64>,
    },
}

enum CliError {
    Capped(String),
    Malformed(PathBuf, FileError),
    Usage(String),
}

impl From<MswError> for CliError {
    fn from(e: MswError) -> Self {
        match e {
            MswError::EnumerationTooLarge { .. } | MswError::ScanTooLarge { .. } => CliError::Capped(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[derive(Serialize)]
struct Timing {
    elapsed_ms: f64,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    format: &'static str,
    command: &'static str,
    result: &'a T,
    /// The only field that varies between identical invocations.
    timing: Timing,
}

struct Output {
    command: &'static str,
    body: serde_json::Value,
    code: u8,
}

fn output<T: Serialize>(command: &'static str, result: &T, code: u8) -> Output {
    Output {
        command,
        body: serde_json::to_value(result).expect("serializable report"),
        code,
    }
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Verified | Verdict::NotApplicable => 0,
        Verdict::Violated => 1,
        Verdict::Inconclusive => 2,
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn load_space(path: &Path) -> Result<MatrixSpace, CliError> {
    parse_space(&read(path)?).map_err(|e| CliError::Malformed(path.to_path_buf(), e))
}

fn load_matrix(path: &Path) -> Result<Matrix, CliError> {
    parse_matrix(&read(path)?).map_err(|e| CliError::Malformed(path.to_path_buf(), e))
}

fn construct_names() -> clap::builder::PossibleValuesParser {
    clap::builder::PossibleValuesParser::new(NamedSpace::ALL.map(NamedSpace::name))
}

fn parse_partition(s: &str) -> Result<std::ops::Range<u128>, CliError> {
    let bad = || CliError::Usage(format!("partition must look like A:B, got {s:?}"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let a: u128 = a.trim().parse().map_err(|_| bad())?;
    let b: u128 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok(a..b)
}

#[derive(Serialize)]
struct DualSummary {
    m: usize,
    n: usize,
    basis_change: Matrix,
    generators: Vec<Matrix>,
    space: MatrixSpace,
    urk: usize,
    condition_i: bool,
    condition_ii: bool,
}

#[derive(Serialize)]
struct Written {
    file: String,
    p: u32,
    rows: usize,
    cols: usize,
    dim: usize,
}

fn run(cli: &Cli) -> Result<Option<Output>, CliError> {
    let cap = cli.cap;
    let out = match &cli.command {
        Command::Construct {
            name,
            n,
            p,
            seed,
            output: path,
        } => {
            let space = name.parse::<NamedSpace>()?.build(FieldSpec::new(*p)?, *n, *seed)?;
            let text = render_space(&space, cli.json_indent);
            match path {
                None => {
                    if !cli.quiet {
                        println!("{text}");
                    }
                    return Ok(None);
                }
                Some(path) => {
                    fs::write(path, format!("{text}\n"))
                        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
                    let w = Written {
                        file: path.display().to_string(),
                        p: space.field().p(),
                        rows: space.rows(),
                        cols: space.cols(),
                        dim: space.dim(),
                    };
                    output("construct", &w, 0)
                }
            }
        }
        Command::Props { file } => {
            let s = load_space(file)?;
            output("props", &spectral_report(&s, cap)?, 0)
        }
        Command::Primitivity { file } => {
            let s = load_space(file)?;
            output("primitivity", &classify(&s, cap)?, 0)
        }
        Command::Dual { file, basis_change } => {
            let s = load_space(file)?;
            let pm = basis_change.as_deref().map(load_matrix).transpose()?;
            if let Some(pm) = &pm {
                if pm.field() != s.field() {
                    return Err(MswError::FieldMismatch {
                        left: s.field().p(),
                        right: pm.field().p(),
                    }
                    .into());
                }
            }
            let dual = dual_space(&s, pm.as_ref())?;
            let summary = DualSummary {
                m: dual.m(),
                n: dual.n(),
                urk: dual.space.upper_rank(cap)?.0,
                condition_i: condition_i(&dual.space).holds,
                condition_ii: condition_ii(&dual.space).holds,
                basis_change: dual.basis_change,
                generators: dual.generators,
                space: dual.space,
            };
            output("dual", &summary, 0)
        }
        Command::Reduce { file } => {
            let s = load_space(file)?;
            output("reduce", &minimal_degenerate_compression(&s, cap)?, 0)
        }
        Command::Recognize {
            kind,
            file,
            budget,
            seed,
        } => {
            let s = load_space(file)?;
            match kind {
                RecognizeKind::Alt => {
                    let sol = solve_alternating_congruence(&s)?;
                    let code = if sol.result == Search::Inconclusive { 2 } else { 0 };
                    output("recognize", &sol, code)
                }
                RecognizeKind::StrictUt => output("recognize", &strict_triangularization(&s)?, 0),
                RecognizeKind::Wedge => {
                    let wedge = wedge_space(s.field(), s.cols())?;
                    let verdict = equivalence_probe(&wedge, &s, *budget, *seed, cap)?;
                    let code = matches!(verdict, EquivalenceVerdict::Inconclusive { .. }) as u8 * 2;
                    output("recognize", &verdict, code)
                }
            }
        }
        Command::Scan {
            n,
            p,
            dim,
            predicate,
            partition,
        } => {
            let f = FieldSpec::new(*p)?;
            let predicate = match predicate {
                PredicateArg::TrivialSpectrum => ScanPredicate::TrivialSpectrum,
                PredicateArg::Nilpotent => ScanPredicate::Nilpotent,
            };
            let range = partition.as_deref().map(parse_partition).transpose()?;
            let r = exhaustive_scan(*n, f, *dim, predicate, range, cap)?;
            output("scan", &r, verdict_code(r.verdict))
        }
        Command::Theorem {
            which,
            file,
            budget,
            seed,
        } => {
            let s = load_space(file)?;
            match which {
                TheoremKind::Gerstenhaber => {
                    let r = verify_gerstenhaber_bound(&s, cap)?;
                    output("theorem", &r, verdict_code(r.verdict))
                }
                TheoremKind::Generalized => {
                    let r = run_generalized_pipeline(&s, cap)?;
                    output("theorem", &r, verdict_code(r.verdict))
                }
                TheoremKind::Atkinson => {
                    let r = verify_atkinson_on_instance(&s, cap, *budget, *seed)?;
                    output("theorem", &r, verdict_code(r.verdict))
                }
            }
        }
        Command::Probe {
            spec,
            seed,
            trials,
            n,
            p,
        } => {
            let kind: ProbeKind = spec.parse()?;
            let mut config = ProbeConfig::new(kind, *seed, *trials);
            config.cap = cap;
            if let Some(n) = n {
                config.sizes = vec![*n];
            }
            if let Some(p) = p {
                config.primes = vec![*p];
            }
            let r = random_probe(&config)?;
            output("probe", &r, verdict_code(r.verdict))
        }
    };
    Ok(Some(out))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    match run(&cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(out)) => {
            if !cli.quiet {
                let env = Envelope {
                    format: REPORT_FORMAT,
                    command: out.command,
                    result: &out.body,
                    timing: Timing {
                        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
                    },
                };
                println!("{}", to_json(&env, cli.json_indent));
            }
            ExitCode::from(out.code)
        }
        Err(CliError::Capped(msg)) => {
            eprintln!("msw: capped: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Malformed(path, e)) => {
            eprintln!("msw: {}:{}:{}: {}", path.display(), e.line, e.column, e.message);
            ExitCode::from(3)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("msw: {msg}");
            ExitCode::from(4)
        }
    }
}
