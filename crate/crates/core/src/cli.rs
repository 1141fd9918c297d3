//! Command-line interface.
//!
//! Exit codes: 0 success, 1 a check failed (verify failures, bijection
//! `FAIL`, bench disagreement), 2 usage or budget errors. Data goes to
//! stdout, diagnostics to stderr.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bench::{run_suite, to_csv, Suite};
use crate::bijection::{verify_bijectivity, BijectionRecord};
use crate::engine::Method;
use crate::enumerate::{enumerate, EnumerationBudget};
use crate::identity::{run_grid, Formula, IdentityFamily, Ranges, Span, VerificationReport};
use crate::partition::{ConstraintSpec, LengthMode};
use crate::Engine;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "partition-kit",
    version,
    about = "Exact counts of constrained integer partitions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count partitions of N under the given constraints.
    Count {
        #[arg(allow_negative_numbers = true)]
        n: i64,
        #[command(flatten)]
        constraints: Constraints,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// List the partitions of N under the given constraints.
    Enumerate {
        n: u64,
        #[command(flatten)]
        constraints: Constraints,
        /// Stop after this many partitions.
        #[arg(long)]
        limit: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Check an identity family over a parameter grid.
    Verify {
        /// Family id (e.g. PROP2_SPLIT, THEOREM_MAIN) or `all`.
        #[arg(long)]
        family: String,
        #[arg(long)]
        n_max: Option<i64>,
        #[arg(long)]
        k_max: Option<i64>,
        #[arg(long)]
        d_max: Option<i64>,
        #[arg(long)]
        m_max: Option<i64>,
        #[arg(long, value_enum, default_value_t = FormulaArg::Paper)]
        formula: FormulaArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Print the staircase bijection for the partitions of N.
    Bijection {
        n: u64,
        /// Padded length; defaults to N.
        #[arg(long = "L", short = 'L')]
        length: Option<usize>,
        #[arg(long, default_value_t = 0)]
        d: u64,
        /// Also verify bijectivity against an enumeration of the target set.
        #[arg(long)]
        check: bool,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Time the counting routes and cross-check their counts.
    Bench {
        #[arg(long)]
        suite: String,
        #[arg(long, value_enum, default_value_t = BenchOut::Csv)]
        out: BenchOut,
        /// Override the suite's repetition count.
        #[arg(long)]
        repetitions: Option<usize>,
    },
}

#[derive(Debug, Args)]
struct Constraints {
    /// Exactly K parts.
    #[arg(long, conflicts_with = "at_most")]
    k: Option<u64>,
    /// At most K parts.
    #[arg(long)]
    at_most: Option<u64>,
    #[arg(long, default_value_t = 1)]
    min_part: u64,
    /// Minimum difference between adjacent parts.
    #[arg(long, default_value_t = 0)]
    gap: u64,
}

impl Constraints {
    fn spec(&self) -> Result<ConstraintSpec, String> {
        let length = match (self.k, self.at_most) {
            (Some(k), None) => LengthMode::Exactly(k),
            (None, Some(k)) => LengthMode::AtMost(k),
            (None, None) => LengthMode::Any,
            (Some(_), Some(_)) => return Err("--k and --at-most are mutually exclusive".into()),
        };
        ConstraintSpec::new(length, self.min_part, self.gap).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Recurrence,
    Reduction,
    Auto,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Recurrence => Method::Recurrence,
            MethodArg::Reduction => Method::Reduction,
            MethodArg::Auto => Method::Auto,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormulaArg {
    Paper,
    Corrected,
}

impl From<FormulaArg> for Formula {
    fn from(f: FormulaArg) -> Self {
        match f {
            FormulaArg::Paper => Formula::Paper,
            FormulaArg::Corrected => Formula::Corrected,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BenchOut {
    Csv,
}

/// Outcome of a subcommand: exit code, or a usage error message.
type Outcome = Result<i32, String>;

/// Runs the CLI with `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Count {
            n,
            constraints,
            method,
            format,
        } => cmd_count(n, &constraints, method.into(), format, out),
        Command::Enumerate {
            n,
            constraints,
            limit,
            format,
        } => cmd_enumerate(n, &constraints, limit, format, out),
        Command::Verify {
            family,
            n_max,
            k_max,
            d_max,
            m_max,
            formula,
            format,
        } => cmd_verify(
            &family,
            [n_max, k_max, d_max, m_max],
            formula.into(),
            format,
            out,
            err,
        ),
        Command::Bijection {
            n,
            length,
            d,
            check,
            format,
        } => cmd_bijection(n, length.unwrap_or(n as usize), d, check, format, out),
        Command::Bench {
            suite,
            out: BenchOut::Csv,
            repetitions,
        } => cmd_bench(&suite, repetitions, out, err),
    };
    match result {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_USAGE
        }
    }
}

fn io_err(e: std::io::Error) -> String {
    format!("write failed: {e}")
}

fn cmd_count(
    n: i64,
    constraints: &Constraints,
    method: Method,
    format: Format,
    out: &mut dyn Write,
) -> Outcome {
    let spec = constraints.spec()?;
    let engine = Engine::new();
    let count = engine.count_with(n, &spec, method);
    match format {
        Format::Plain => writeln!(out, "{count}"),
        Format::Json => writeln!(
            out,
            "{}",
            json!({
                "n": n,
                "k": spec.length().to_string(),
                "min_part": spec.min_part(),
                "gap": spec.min_gap(),
                "count": count.to_string(),
            })
        ),
        Format::Csv => writeln!(
            out,
            "n,k,d,r,count\n{n},{},{},{},{count}",
            spec.length(),
            spec.min_gap(),
            spec.min_part()
        ),
    }
    .map_err(io_err)?;
    Ok(EXIT_OK)
}

fn cmd_enumerate(
    n: u64,
    constraints: &Constraints,
    limit: Option<u64>,
    format: Format,
    out: &mut dyn Write,
) -> Outcome {
    let spec = constraints.spec()?;
    let mut budget = EnumerationBudget::from_env().map_err(|e| e.to_string())?;
    if limit.is_some() {
        budget.max_count = limit;
        budget.fail_fast = false;
    }
    let partitions = enumerate(n, &spec, &budget)
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    match format {
        Format::Plain => {
            for p in &partitions {
                writeln!(out, "{p}").map_err(io_err)?;
            }
            writeln!(out, "total: {}", partitions.len()).map_err(io_err)?;
        }
        Format::Json => {
            let arrays: Vec<&[u64]> = partitions.iter().map(|p| p.parts()).collect();
            writeln!(
                out,
                "{}",
                serde_json::to_string(&arrays).expect("serializable")
            )
            .map_err(io_err)?;
        }
        Format::Csv => {
            writeln!(out, "weight,length,parts").map_err(io_err)?;
            for p in &partitions {
                let parts: Vec<String> = p.parts().iter().map(u64::to_string).collect();
                writeln!(out, "{},{},{}", p.weight(), p.len(), parts.join(" ")).map_err(io_err)?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn ranges_from_maxima(family: IdentityFamily, maxima: [Option<i64>; 4]) -> Ranges {
    let defaults = family.default_ranges();
    let [n, k, d, m] = maxima;
    let with_max = |default: Option<Span>, hi: Option<i64>| match (default, hi) {
        (Some(span), Some(hi)) => Some(Span::new(span.lo, hi)),
        (default, _) => default,
    };
    Ranges {
        n: with_max(defaults.n, n),
        k: with_max(defaults.k, k),
        d: with_max(defaults.d, d),
        m: with_max(defaults.m, m),
        formula: None,
    }
}

fn render_report(report: &VerificationReport) -> String {
    let status = if report.passed() { "PASS" } else { "FAIL" };
    let mut line = format!(
        "{}: {status} ({} cells, {} failures)",
        report.family,
        report.cells,
        report.failures.len()
    );
    for failure in &report.failures {
        let params: Vec<String> = failure
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        line.push_str(&format!(
            "\n  {}: lhs={} rhs={}",
            params.join(" "),
            failure.lhs,
            failure.rhs
        ));
    }
    line
}

fn cmd_verify(
    family: &str,
    maxima: [Option<i64>; 4],
    formula: Formula,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let families: Vec<IdentityFamily> = if family.eq_ignore_ascii_case("all") {
        IdentityFamily::ALL
            .into_iter()
            .filter(|f| !matches!(f, IdentityFamily::GeneralizedM(other) if *other != formula))
            .collect()
    } else {
        vec![IdentityFamily::parse(family, formula)
            .map_err(|e| format!("{e}; expected a family id or `all`"))?]
    };
    let engine = Engine::new();
    let reports: Vec<VerificationReport> = families
        .iter()
        .map(|&f| run_grid(&engine, f, &ranges_from_maxima(f, maxima)))
        .collect();
    let all_passed = reports.iter().all(VerificationReport::passed);
    match format {
        Format::Json => {
            let text = if reports.len() == 1 {
                reports[0].to_json()
            } else {
                serde_json::to_string(&reports).expect("serializable")
            };
            writeln!(out, "{text}").map_err(io_err)?;
        }
        Format::Plain | Format::Csv => {
            for r in &reports {
                writeln!(out, "{}", render_report(r)).map_err(io_err)?;
            }
        }
    }
    if !all_passed {
        let failing: Vec<&str> = reports
            .iter()
            .filter(|r| !r.passed())
            .map(|r| r.family.as_str())
            .collect();
        let _ = writeln!(err, "failures in {}", failing.join(", "));
        return Ok(EXIT_CHECK_FAILED);
    }
    Ok(EXIT_OK)
}

fn cmd_bijection(
    n: u64,
    length: usize,
    d: u64,
    check: bool,
    format: Format,
    out: &mut dyn Write,
) -> Outcome {
    let budget = EnumerationBudget::from_env().map_err(|e| e.to_string())?;
    let records: Vec<BijectionRecord> =
        enumerate(n, &ConstraintSpec::at_most(length as u64), &budget)
            .map(|p| {
                let p = p.map_err(|e| e.to_string())?;
                BijectionRecord::new(p, length, d).map_err(|e| e.to_string())
            })
            .collect::<Result<_, _>>()?;
    let verdict = if check {
        let report = verify_bijectivity(n, length, d, &budget).map_err(|e| e.to_string())?;
        Some(report.passed())
    } else {
        None
    };
    let label = |ok: bool| if ok { "PASS" } else { "FAIL" };
    match format {
        Format::Json => {
            let pairs: Vec<_> = records
                .iter()
                .map(|r| json!({"source": r.source.parts(), "image": r.image.parts()}))
                .collect();
            let mut doc = json!({"n": n, "L": length, "d": d, "pairs": pairs});
            if let Some(ok) = verdict {
                doc["check"] = json!(label(ok));
            }
            writeln!(out, "{doc}").map_err(io_err)?;
        }
        Format::Plain | Format::Csv => {
            for r in &records {
                writeln!(out, "{r}").map_err(io_err)?;
            }
            if let Some(ok) = verdict {
                writeln!(out, "{}", label(ok)).map_err(io_err)?;
            }
        }
    }
    Ok(match verdict {
        Some(false) => EXIT_CHECK_FAILED,
        _ => EXIT_OK,
    })
}

fn cmd_bench(
    suite: &str,
    repetitions: Option<usize>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let suite: Suite = suite
        .parse()
        .map_err(|e| format!("{e}; expected one of {}", Suite::NAMES.join(", ")))?;
    let budget = EnumerationBudget::from_env().map_err(|e| e.to_string())?;
    let mut cases = suite.cases();
    if let Some(reps) = repetitions {
        if reps == 0 {
            return Err("--repetitions must be at least 1".into());
        }
        for case in &mut cases {
            case.repetitions = reps;
        }
    }
    match run_suite(&cases, &budget) {
        Ok(rows) => {
            write!(out, "{}", to_csv(&rows)).map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            Ok(EXIT_CHECK_FAILED)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("partition-kit").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn count_examples() {
        assert_eq!(
            run_args(&["count", "22", "--k", "4", "--gap", "1"]).1,
            "34\n"
        );
        assert_eq!(run_args(&["count", "0"]).1, "1\n");
        let (code, out, _) = run_args(&[
            "count",
            "18",
            "--k",
            "3",
            "--gap",
            "2",
            "--method",
            "reduction",
        ]);
        assert_eq!((code, out.as_str()), (0, "12\n"));
        assert_eq!(run_args(&["count", "-4"]).1, "0\n");
    }

    #[test]
    fn conflicting_length_flags_are_usage_errors() {
        let (code, out, err) = run_args(&["count", "5", "--k", "2", "--at-most", "3"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(out.is_empty());
        assert!(!err.is_empty());
        assert_eq!(run_args(&["count", "5", "--min-part", "0"]).0, EXIT_USAGE);
    }

    #[test]
    fn help_goes_to_stdout() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("verify"));
    }

    #[test]
    fn enumerate_formats() {
        assert_eq!(
            run_args(&["enumerate", "6", "--k", "3", "--gap", "1"]).1,
            "3,2,1\ntotal: 1\n"
        );
        assert_eq!(run_args(&["enumerate", "0"]).1, "\ntotal: 1\n");
        let (_, out, _) = run_args(&[
            "enumerate",
            "18",
            "--k",
            "3",
            "--gap",
            "2",
            "--format",
            "json",
        ]);
        let arrays: Vec<Vec<u64>> = serde_json::from_str(&out).unwrap();
        assert_eq!(arrays.len(), 12);
        assert!(arrays
            .iter()
            .all(|a| a.len() == 3 && a.iter().sum::<u64>() == 18));
        let (_, out, _) = run_args(&["enumerate", "5", "--format", "csv", "--limit", "2"]);
        assert_eq!(out, "weight,length,parts\n5,1,5\n5,2,4 1\n");
        assert_eq!(run_args(&["enumerate", "61"]).0, EXIT_USAGE);
    }

    #[test]
    fn bijection_examples() {
        let (code, out, _) = run_args(&["bijection", "3", "--d", "2"]);
        assert_eq!(code, 0);
        assert!(out.lines().any(|l| l == "2,1 -> 7,4,1"));
        assert_eq!(run_args(&["bijection", "0", "--d", "1"]).1, " -> \n");
        let (code, out, _) = run_args(&["bijection", "4", "--L", "8", "--d", "1", "--check"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().last(), Some("PASS"));
    }

    #[test]
    fn verify_exit_codes() {
        assert_eq!(
            run_args(&[
                "verify",
                "--family",
                "THEOREM_MAIN",
                "--n-max",
                "12",
                "--d-max",
                "3"
            ])
            .0,
            0
        );
        let (code, out, _) = run_args(&[
            "verify",
            "--family",
            "GENERALIZED_M",
            "--formula",
            "paper",
            "--n-max",
            "6",
            "--m-max",
            "3",
            "--d-max",
            "2",
        ]);
        assert_eq!(code, EXIT_CHECK_FAILED);
        let report: VerificationReport = serde_json::from_str(&out).unwrap();
        assert!(report.has_failure(&[("n", 2), ("m", 2), ("d", 1)]));
        assert_eq!(
            run_args(&[
                "verify",
                "--family",
                "DELTA_TABLE",
                "--k-max",
                "5",
                "--d-max",
                "3"
            ])
            .0,
            0
        );
        assert_eq!(run_args(&["verify", "--family", "BOGUS"]).0, EXIT_USAGE);
    }

    #[test]
    fn bench_rejects_empty_suite() {
        let (code, out, err) = run_args(&["bench", "--suite", ""]);
        assert_eq!(code, EXIT_USAGE);
        assert!(out.is_empty());
        assert!(err.contains("unknown bench suite"));
    }
}
