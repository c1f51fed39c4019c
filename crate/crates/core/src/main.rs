use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use garsia::conjugates::Selection;
use garsia::criteria::{MethodChoice, ReportOptions, Threshold};
use garsia::geometry::TailDepth;
use garsia::harness::drivers::{
    parse_parameter, run_certify, run_certify_region, run_oracle, CertifyRequest,
};
use garsia::harness::fixtures::{load_fixtures, DEFAULT_FIXTURES};
use garsia::harness::sweep::{run_sweep, write_csv, write_pgm, GridRange, SweepSpec};
use garsia::harness::tables::{verify_tables, RowStatus, VerifyOptions};
use garsia::harness::ExitStatus;
use garsia::poly::IntPolynomial;
use garsia::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "garsia",
    version,
    about = "Certified Garsia entropy bounds for algebraic Bernoulli convolution parameters"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether a polynomial's root in (1, 2) gives dimension one.
    Certify(CertifyArgs),
    /// Recompute the shipped table fixtures.
    VerifyTables(VerifyArgs),
    /// Scan a grid of real (beta1, beta2) pairs.
    Sweep(SweepArgs),
    /// Exact collision counts and H_n for short words.
    Oracle(OracleArgs),
    /// Certify m_n over a rectangle of free parameters.
    CertifyRegion(RegionArgs),
}

fn parse_tail(s: &str) -> std::result::Result<TailDepth, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(TailDepth::Auto);
    }
    s.parse::<usize>()
        .map(TailDepth::Fixed)
        .map_err(|_| format!("expected 'auto' or a positive integer, got {s:?}"))
}

fn parse_selection(s: &str) -> std::result::Result<Selection, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(Selection::AllOutsideUnitCircle);
    }
    s.split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(Selection::Explicit)
        .map_err(|_| format!("expected 'all' or a list of root indices, got {s:?}"))
}

fn parse_poly(s: &str) -> std::result::Result<IntPolynomial, String> {
    IntPolynomial::parse(s).map_err(|e| e.to_string())
}

fn parse_grid(s: &str) -> std::result::Result<GridRange, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Args, Debug)]
struct CertifyArgs {
    /// Coefficients in ascending degree, e.g. "-1,0,-1,0,1".
    #[arg(long, allow_hyphen_values = true, value_parser = parse_poly)]
    poly: IntPolynomial,
    /// "all" or comma-separated root indices.
    #[arg(long, default_value = "all", value_parser = parse_selection)]
    conjugates: Selection,
    /// Root index of beta1 when several roots lie in (1, 2).
    #[arg(long)]
    beta1_index: Option<usize>,
    #[arg(long, default_value_t = 10)]
    n_max: usize,
    /// Truncation depth of the tail sums: "auto" or an integer.
    #[arg(long = "tail-N", default_value = "auto", value_parser = parse_tail)]
    tail_n: TailDepth,
    /// 0.82 or 0.9804085.
    #[arg(long, default_value = "0.9804085")]
    threshold: String,
    /// auto, threshold or box.
    #[arg(long, default_value = "auto")]
    method: String,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value = DEFAULT_FIXTURES)]
    fixtures: PathBuf,
    #[arg(long, default_value = "1,2,3,4", value_delimiter = ',')]
    tables: Vec<u8>,
    #[arg(long, default_value_t = 10)]
    n_cap: usize,
    /// Also run rows whose listed n exceeds the cap.
    #[arg(long)]
    slow: bool,
    #[arg(long, default_value_t = 5e-3)]
    tolerance: f64,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// lo:hi:count
    #[arg(long, value_parser = parse_grid)]
    beta1: GridRange,
    /// lo:hi:count; with --negative either the magnitudes or the negative range.
    #[arg(long, allow_hyphen_values = true)]
    beta2: String,
    #[arg(long)]
    negative: bool,
    #[arg(long, default_value_t = 3)]
    n_min: usize,
    #[arg(long, default_value_t = 10)]
    n_max: usize,
    #[arg(long = "tail-N", default_value = "auto", value_parser = parse_tail)]
    tail_n: TailDepth,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    pgm: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_poly)]
    poly: IntPolynomial,
    #[arg(long)]
    n: usize,
    /// Print N_n(a) for every word.
    #[arg(long)]
    per_word: bool,
}

#[derive(Args, Debug)]
struct RegionArgs {
    /// Comma-separated centres, beta1 first; complex values as 0.3+1.2i.
    #[arg(long, allow_hyphen_values = true)]
    params: String,
    /// One halfwidth for every coordinate, or one per coordinate.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    halfwidth: Vec<f64>,
    #[arg(long)]
    n: usize,
    #[arg(long = "tail-N", default_value = "auto", value_parser = parse_tail)]
    tail_n: TailDepth,
}

fn certify(args: CertifyArgs) -> Result<ExitStatus> {
    let req = CertifyRequest {
        polynomial: args.poly,
        selection: args.conjugates,
        beta1_index: args.beta1_index,
        options: ReportOptions {
            n_max: args.n_max,
            threshold: args.threshold.parse::<Threshold>()?,
            method: args.method.parse::<MethodChoice>()?,
            tail: args.tail_n,
        },
    };
    let report = run_certify(&req)?;
    println!("{report}");
    Ok(report.status())
}

fn verify(args: VerifyArgs) -> Result<ExitStatus> {
    let rows = load_fixtures(&args.fixtures)?;
    let opts = VerifyOptions {
        tables: args.tables,
        n_cap: args.n_cap,
        slow: args.slow,
        tolerance: args.tolerance,
        tail: TailDepth::Auto,
    };
    let outcomes = verify_tables(&rows, &opts)?;
    let mut failed = 0;
    for o in &outcomes {
        println!("{o}");
        if o.status == RowStatus::Fail {
            failed += 1;
        }
    }
    println!("{} rows, {failed} failed", outcomes.len());
    Ok(if failed == 0 {
        ExitStatus::Certified
    } else {
        ExitStatus::Inconclusive
    })
}

fn sweep(args: SweepArgs) -> Result<ExitStatus> {
    let mut beta2: GridRange = args.beta2.parse()?;
    if args.negative && beta2.hi <= 0.0 {
        beta2 = GridRange::new(-beta2.hi, -beta2.lo, beta2.count)?;
    }
    let spec = SweepSpec {
        beta1: args.beta1,
        beta2,
        negative: args.negative,
        n_min: args.n_min,
        n_max: args.n_max,
        tail: args.tail_n,
    };
    let grid = run_sweep(&spec)?;
    match &args.out {
        Some(path) => write_csv(&grid, BufWriter::new(File::create(path)?))?,
        None => write_csv(&grid, std::io::stdout().lock())?,
    }
    if let Some(path) = &args.pgm {
        let mut w = BufWriter::new(File::create(path)?);
        write_pgm(&grid, &mut w)?;
        w.flush()?;
    }
    let proven = grid.cells.iter().filter(|c| c.first_proving_n > 0).count();
    eprintln!("{proven} of {} cells proven", grid.cells.len());
    Ok(ExitStatus::Certified)
}

fn oracle(args: OracleArgs) -> Result<ExitStatus> {
    let report = run_oracle(&args.poly, args.n, args.per_word)?;
    println!("{report}");
    Ok(ExitStatus::Certified)
}

fn certify_region(args: RegionArgs) -> Result<ExitStatus> {
    let centers = args
        .params
        .split(',')
        .map(parse_parameter)
        .collect::<Result<Vec<_>>>()?;
    let report = run_certify_region(&centers, &args.halfwidth, args.n, args.tail_n)?;
    println!("{report}");
    Ok(report.status())
}

fn main() -> ExitCode {
    // clap reports usage errors with status 2, which here means inconclusive
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(ExitStatus::Error.code() as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match cli.command {
        Command::Certify(a) => certify(a),
        Command::VerifyTables(a) => verify(a),
        Command::Sweep(a) => sweep(a),
        Command::Oracle(a) => oracle(a),
        Command::CertifyRegion(a) => certify_region(a),
    };
    match outcome {
        Ok(status) => ExitCode::from(status.code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(ExitStatus::Error.code() as u8)
        }
    }
}
