//! Command-line surface: classify single actions, reproduce the full
//! classification table, and run the verification suites.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use spinact::actions::{ActionSpec, Family};
use spinact::error::Error;
use spinact::lifting::classify;
use spinact::report::{Report, ReportMeta};
use spinact::suites;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Characters,
    Appendix,
    Algebra,
    All,
}

#[derive(Parser)]
#[command(
    name = "spinact",
    about = "Decides invariance of the sphere's spin structure under all transitive compact group actions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a single action.
    Classify {
        /// Family token: so, u, su, sp, sp-u1, sp-sp1, g2, spin7, spin9.
        #[arg(long)]
        family: String,
        /// Family parameter (ignored by g2/spin7/spin9).
        #[arg(long, default_value_t = 0)]
        n: usize,
        /// Loop samples.
        #[arg(long, default_value_t = spinact::DEFAULT_STEPS)]
        steps: usize,
        /// Orthogonality tolerance for the realized paths.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Write the output here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = spinact::DEFAULT_SEED)]
        seed: u64,
    },
    /// Reproduce the full classification table over the default ranges.
    Table {
        /// Comma-separated family tokens (default: all nine).
        #[arg(long)]
        families: Option<String>,
        /// Cap the family parameter.
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long, default_value_t = spinact::DEFAULT_STEPS)]
        steps: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Parallel row computations.
        #[arg(long, default_value_t = 2)]
        jobs: usize,
        #[arg(long, default_value_t = spinact::DEFAULT_SEED)]
        seed: u64,
    },
    /// Run a verification suite and print max residuals per identity.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = spinact::DEFAULT_SEED)]
        seed: u64,
        /// Samples per certified identity.
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

/// Default desk-scale rows, in table order.
fn default_rows() -> Vec<(Family, usize)> {
    let mut rows = Vec::new();
    for family in Family::ALL {
        let (min, max) = family.supported_range();
        for n in min..=max {
            rows.push((family, n));
        }
    }
    rows
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::ParameterOutOfRange { .. } | Error::UnsupportedFamily(_) => 1,
        Error::MethodDisagreement { .. } => 2,
        _ => 3,
    }
}

/// Validate the realized generator loop against the requested orthogonality
/// tolerance before classification runs.
fn validate_tol(spec: &ActionSpec, steps: usize, tol: f64) -> Result<(), Error> {
    let lp = spinact::actions::stabilizer_loop(spec, steps)?;
    for s in &lp.samples {
        let res = spinact::linalg::so_residual(s);
        if res > tol {
            return Err(Error::NotSpecialOrthogonal(res));
        }
    }
    Ok(())
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run_classify(
    family: &str,
    n: usize,
    steps: usize,
    tol: f64,
    format: Format,
    out: &Option<PathBuf>,
    seed: u64,
) -> Result<bool, Error> {
    let family = Family::parse(family)?;
    let spec = ActionSpec::new(family, n)?;
    validate_tol(&spec, steps, tol)?;
    let started = Instant::now();
    let record = classify(&spec, steps)?;
    let report = Report {
        records: vec![record],
        meta: ReportMeta {
            steps,
            tolerance: tol,
            seed,
            wall_ms: vec![started.elapsed().as_secs_f64() * 1e3],
        },
    };
    let text = match format {
        Format::Table => report.to_table(),
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    emit(&text, out)?;
    Ok(report.all_match())
}

#[allow(clippy::too_many_arguments)]
fn run_table(
    families: &Option<String>,
    n_max: Option<usize>,
    steps: usize,
    tol: f64,
    format: Format,
    out: &Option<PathBuf>,
    jobs: usize,
    seed: u64,
) -> Result<bool, Error> {
    let selected: Vec<Family> = match families {
        Some(list) => list
            .split(',')
            .map(|t| Family::parse(t.trim()))
            .collect::<Result<_, _>>()?,
        None => Family::ALL.to_vec(),
    };
    let rows: Vec<(Family, usize)> = default_rows()
        .into_iter()
        .filter(|(f, n)| selected.contains(f) && n_max.map_or(true, |cap| *n <= cap))
        .collect();
    if rows.is_empty() {
        return Err(Error::Invalid("no rows selected".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
    // rows run in parallel; output order stays the declaration order
    let results: Vec<_> = pool.install(|| {
        use rayon::prelude::*;
        rows.par_iter()
            .map(|(family, n)| {
                let spec = ActionSpec::new(*family, *n)?;
                validate_tol(&spec, steps, tol)?;
                let started = Instant::now();
                let record = classify(&spec, steps)?;
                Ok::<_, Error>((record, started.elapsed().as_secs_f64() * 1e3))
            })
            .collect()
    });
    let mut records = Vec::with_capacity(results.len());
    let mut wall_ms = Vec::with_capacity(results.len());
    for r in results {
        let (record, ms) = r?;
        records.push(record);
        wall_ms.push(ms);
    }
    let report = Report {
        records,
        meta: ReportMeta {
            steps,
            tolerance: tol,
            seed,
            wall_ms,
        },
    };
    let text = match format {
        Format::Table => report.to_table(),
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    emit(&text, out)?;
    Ok(report.all_match())
}

fn run_verify(suite: Suite, seed: u64, trials: usize) -> Result<bool, Error> {
    let mut checks = Vec::new();
    if matches!(suite, Suite::Algebra | Suite::All) {
        checks.extend(suites::algebra_suite(seed)?);
    }
    if matches!(suite, Suite::Characters | Suite::All) {
        checks.extend(suites::character_suite(seed, trials)?);
    }
    if matches!(suite, Suite::Appendix | Suite::All) {
        checks.extend(suites::appendix_suite(seed)?);
    }
    let mut first_failure: Option<String> = None;
    for c in &checks {
        let status = if c.passed() { "pass" } else { "FAIL" };
        println!(
            "{status}  {:<58} residual {:>12.3e}  (tolerance {:.0e})",
            c.name, c.residual, c.tolerance
        );
        if !c.passed() && first_failure.is_none() {
            first_failure = Some(c.name.clone());
        }
    }
    match first_failure {
        Some(name) => {
            eprintln!("first failing identity: {name}");
            Ok(false)
        }
        None => {
            println!("-- {} checks passed", checks.len());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Classify {
            family,
            n,
            steps,
            tol,
            format,
            out,
            seed,
        } => run_classify(family, *n, *steps, *tol, *format, out, *seed).map(|ok| (ok, 3u8)),
        Command::Table {
            families,
            n_max,
            steps,
            tol,
            format,
            out,
            jobs,
            seed,
        } => run_table(families, *n_max, *steps, *tol, *format, out, *jobs, *seed)
            .map(|ok| (ok, 3u8)),
        Command::Verify {
            suite,
            seed,
            trials,
        } => run_verify(*suite, *seed, *trials).map(|ok| (ok, 4u8)),
    };
    match outcome {
        Ok((true, _)) => ExitCode::SUCCESS,
        Ok((false, fail_code)) => {
            // mismatched verdicts / failing checks without a hard error
            ExitCode::from(fail_code)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
