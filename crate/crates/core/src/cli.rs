//! Command-line front end: per-record measures, curve tables, and the
//! property suite.
//!
//! Input is UTF-8 text, one record per line. `#` starts a comment line and
//! blank lines are skipped. Both formats accept an optional `id:` prefix.
//!
//! ```text
//! # probs: comma and/or whitespace separated, optional brackets
//! coin: 0.5, 0.5
//! [1.0]
//! # counts: comma separated label=count pairs
//! die: 1=1,2=1,3=1,4=1,5=1,6=1
//! ```
//!
//! Output is TSV with a header row, or JSON lines with `--json`. Reals are
//! printed with 15 significant digits.

use std::ffi::OsString;
use std::io::{BufRead, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Serialize, Serializer};

use crate::distributions::{empirical_distribution, make_distribution, synthetic_labels};
use crate::error::{Error, Result};
use crate::verification::{run_suite, Functional, SuiteConfig};
use crate::{
    lin_entropy, lin_entropy_uniform, logical_entropy, normalized_shannon_entropy,
    shannon_entropy, DistributionF64,
};

pub const SIGNIFICANT_DIGITS: usize = 15;

/// `x` with 15 significant digits: fixed notation for magnitudes in
/// `[1e-5, 1e15)`, scientific otherwise.
pub fn format_real(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".to_string() } else { x.to_string() };
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
    }
}

/// Comma-joined masses, readable back as a `probs` record.
pub fn format_masses(masses: &[f64]) -> String {
    masses
        .iter()
        .map(|&m| format_real(m))
        .collect::<Vec<_>>()
        .join(",")
}

fn serialize_real<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(format_real(*x).parse().unwrap_or(*x))
}

fn serialize_normalized<S: Serializer>(
    x: &Option<f64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => serialize_real(v, s),
        None => s.serialize_str(UNDEFINED),
    }
}

/// Printed in place of normalized Shannon entropy on one-symbol alphabets.
pub const UNDEFINED: &str = "undefined";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    Probs,
    Counts,
}

/// Every measure of one input record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureReport {
    pub input_id: String,
    pub alphabet_size: usize,
    #[serde(serialize_with = "serialize_real")]
    pub shannon: f64,
    /// `None` when the alphabet has a single symbol.
    #[serde(serialize_with = "serialize_normalized")]
    pub normalized_shannon: Option<f64>,
    #[serde(serialize_with = "serialize_real")]
    pub lin: f64,
    #[serde(serialize_with = "serialize_real")]
    pub logical: f64,
    pub max_symbol: String,
}

impl MeasureReport {
    pub const TSV_HEADER: &'static str =
        "id\talphabet_size\tshannon\tnormalized_shannon\tlin\tlogical\tmax_symbol";

    pub fn new(input_id: impl Into<String>, p: &DistributionF64) -> Self {
        Self {
            input_id: input_id.into(),
            alphabet_size: p.len(),
            shannon: shannon_entropy(p),
            normalized_shannon: normalized_shannon_entropy(p).ok(),
            lin: lin_entropy(p),
            logical: logical_entropy(p),
            max_symbol: p.max_symbol().to_string(),
        }
    }

    pub fn to_tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.input_id,
            self.alphabet_size,
            format_real(self.shannon),
            self.normalized_shannon
                .map(format_real)
                .unwrap_or_else(|| UNDEFINED.to_string()),
            format_real(self.lin),
            format_real(self.logical),
            self.max_symbol,
        )
    }
}

fn split_id(body: &str, format: InputFormat) -> (Option<&str>, &str) {
    match body.split_once(':') {
        Some((id, rest)) if format == InputFormat::Probs || !id.contains('=') => {
            let id = id.trim();
            (if id.is_empty() { None } else { Some(id) }, rest)
        }
        _ => (None, body),
    }
}

/// Parses one non-comment line. `line` is 1-based and only used for
/// messages and the default id.
pub fn parse_record(text: &str, line: usize, format: InputFormat) -> Result<(String, DistributionF64)> {
    let parse_err = |message: String| Error::Parse { line, message };
    let (id, body) = split_id(text.trim(), format);
    let id = id.map(str::to_string).unwrap_or_else(|| format!("line{line}"));
    let body = body.trim();

    let dist = match format {
        InputFormat::Probs => {
            let body = body
                .strip_prefix('[')
                .map(|b| b.strip_suffix(']').ok_or_else(|| parse_err("unclosed '['".into())))
                .transpose()?
                .unwrap_or(body);
            let masses = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|_| parse_err(format!("not a probability: {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            make_distribution(synthetic_labels(masses.len()), masses)
        }
        InputFormat::Counts => {
            let pairs = body
                .split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| {
                    let (label, count) = t
                        .split_once('=')
                        .ok_or_else(|| parse_err(format!("expected label=count, got {t:?}")))?;
                    let count = count
                        .trim()
                        .parse::<u64>()
                        .map_err(|_| parse_err(format!("not a count: {:?}", count.trim())))?;
                    Ok((label.trim().to_string(), count))
                })
                .collect::<Result<Vec<_>>>()?;
            empirical_distribution(pairs)
        }
    };
    let dist = dist.map_err(|e| Error::Record {
        record: id.clone(),
        line,
        source: Box::new(e),
    })?;
    Ok((id, dist))
}

/// Parses every record of `input` and computes its measures, in input order.
pub fn measure(input: &str, format: InputFormat) -> Result<Vec<MeasureReport>> {
    input
        .lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, l)| {
            let (id, p) = parse_record(l, i + 1, format)?;
            Ok(MeasureReport::new(id, &p))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveSpec {
    /// Rows `(N, 1/N, H*(U_N))` for `N = 1..=max_n`.
    Uniform { max_n: usize },
    /// Rows `(α, H*([α, 1−α]))` on `steps` evenly spaced points of `[0, 1]`.
    Bernoulli { steps: usize },
}

impl CurveSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            CurveSpec::Uniform { max_n } if max_n < 1 => {
                Err(Error::InvalidSpec("max-n must be at least 1".into()))
            }
            CurveSpec::Bernoulli { steps } if steps < 2 => {
                Err(Error::InvalidSpec("steps must be at least 2".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn header(&self) -> &'static str {
        match self {
            CurveSpec::Uniform { .. } => "n\tinv_n\tlin_entropy",
            CurveSpec::Bernoulli { .. } => "alpha\tlin_entropy",
        }
    }

    /// Numeric rows; for the uniform curve the first column is `N`.
    pub fn rows(&self) -> Result<Vec<Vec<f64>>> {
        self.validate()?;
        match *self {
            CurveSpec::Uniform { max_n } => (1..=max_n)
                .map(|n| Ok(vec![n as f64, 1.0 / n as f64, lin_entropy_uniform(n)?]))
                .collect(),
            CurveSpec::Bernoulli { steps } => (0..steps)
                .map(|i| {
                    let alpha = i as f64 / (steps - 1) as f64;
                    let p = make_distribution(["success", "failure"], [alpha, 1.0 - alpha])?;
                    Ok(vec![alpha, lin_entropy(&p)])
                })
                .collect(),
        }
    }

    pub fn render(&self) -> Result<String> {
        let mut out = String::from(self.header());
        out.push('\n');
        for row in self.rows()? {
            let cells: Vec<String> = match self {
                CurveSpec::Uniform { .. } => std::iter::once(format!("{}", row[0] as u64))
                    .chain(row[1..].iter().map(|&x| format_real(x)))
                    .collect(),
                CurveSpec::Bernoulli { .. } => row.iter().map(|&x| format_real(x)).collect(),
            };
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
        Ok(out)
    }
}

#[derive(Debug, Parser)]
#[command(name = "linent", version, about = "One-bounded entropy measures for discrete distributions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute all measures for each record of FILE (or standard input).
    Measure {
        #[arg(long, value_enum, default_value = "probs")]
        format: InputFormat,
        /// Emit JSON lines instead of TSV.
        #[arg(long)]
        json: bool,
        file: Option<PathBuf>,
    },
    /// Emit curve data for uniform or Bernoulli distributions.
    Curve {
        #[command(subcommand)]
        kind: CurveKind,
    },
    /// Check the entropy-functional properties of a functional.
    Verify {
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        max_alphabet: Option<usize>,
        /// Largest N in the uniform sweep.
        #[arg(long)]
        max_uniform: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "lin")]
        functional: FunctionalArg,
        /// Emit JSON lines instead of tab-separated records.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Subcommand)]
enum CurveKind {
    Uniform {
        #[arg(long)]
        max_n: usize,
    },
    Bernoulli {
        #[arg(long)]
        steps: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FunctionalArg {
    Lin,
    #[value(name = "shannon-normalized", alias = "normalized-shannon")]
    ShannonNormalized,
    Logical,
}

impl From<FunctionalArg> for Functional {
    fn from(f: FunctionalArg) -> Self {
        match f {
            FunctionalArg::Lin => Functional::Lin,
            FunctionalArg::ShannonNormalized => Functional::NormalizedShannon,
            FunctionalArg::Logical => Functional::Logical,
        }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Runs the CLI and returns the process exit status: 0 on success, 1 on a
/// failed property or bad input data, 2 on a usage error.
pub fn run<I, A>(args: I, stdin: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, stdin, out, err) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

enum CliError {
    Usage(String),
    Failure(String),
}

fn failure(e: impl std::fmt::Display) -> CliError {
    CliError::Failure(e.to_string())
}

fn dispatch(
    command: Command,
    stdin: &mut dyn BufRead,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::result::Result<i32, CliError> {
    match command {
        Command::Measure { format, json, file } => {
            let input = match file {
                Some(path) => std::fs::read_to_string(&path)
                    .map_err(|e| failure(format!("{}: {e}", path.display())))?,
                None => {
                    let mut s = String::new();
                    stdin.read_to_string(&mut s).map_err(failure)?;
                    s
                }
            };
            let reports = measure(&input, format).map_err(failure)?;
            if !json {
                writeln!(out, "{}", MeasureReport::TSV_HEADER).map_err(failure)?;
            }
            for r in &reports {
                let line = if json {
                    serde_json::to_string(r).map_err(failure)?
                } else {
                    r.to_tsv()
                };
                writeln!(out, "{line}").map_err(failure)?;
            }
            Ok(EXIT_OK)
        }
        Command::Curve { kind } => {
            let spec = match kind {
                CurveKind::Uniform { max_n } => CurveSpec::Uniform { max_n },
                CurveKind::Bernoulli { steps } => CurveSpec::Bernoulli { steps },
            };
            spec.validate().map_err(|e| CliError::Usage(e.to_string()))?;
            let table = spec.render().map_err(failure)?;
            out.write_all(table.as_bytes()).map_err(failure)?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            trials,
            max_alphabet,
            max_uniform,
            seed,
            functional,
            json,
        } => {
            let defaults = SuiteConfig::default();
            let cfg = SuiteConfig {
                trials: trials.unwrap_or(defaults.trials),
                max_alphabet: max_alphabet.unwrap_or(defaults.max_alphabet),
                max_uniform: max_uniform.unwrap_or(defaults.max_uniform),
                seed: seed.unwrap_or(defaults.seed),
                ..defaults
            };
            cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
            let functional = Functional::from(functional);
            let reports = run_suite(&functional, &cfg).map_err(failure)?;
            for r in &reports {
                let line = if json {
                    serde_json::to_string(r).map_err(failure)?
                } else {
                    r.to_record()
                };
                writeln!(out, "{line}").map_err(failure)?;
            }
            let failed = reports.iter().filter(|r| !r.passed).count();
            if failed > 0 {
                let _ = writeln!(err, "{failed} of {} properties failed", reports.len());
                Ok(EXIT_FAILURE)
            } else {
                Ok(EXIT_OK)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::MassFunction;

    // H*(U_2) and H*(U_6), 50-digit mpmath evaluations of the radical form.
    const HU2: f64 = 0.311_278_124_459_132_863_909_695_792_039;
    const HU6: f64 = 0.654_857_545_826_975_694_719_054_036_922;

    fn run_args(args: &[&str], stdin: &str) -> (i32, String, String) {
        let mut input = stdin.as_bytes();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            std::iter::once("linent").chain(args.iter().copied()),
            &mut input,
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
    fn formats_fifteen_significant_digits() {
        assert_eq!(format_real(0.0), "0");
        assert_eq!(format_real(1.0), "1.00000000000000");
        assert_eq!(format_real(0.5), "0.500000000000000");
        assert_eq!(format_real(HU2), "0.311278124459133");
        assert_eq!(format_real(1e-9), "1.00000000000000e-9");
        assert_eq!(format_real(-2.5), "-2.50000000000000");
        assert_eq!(format_real(12345.678), "12345.6780000000");
    }

    #[test]
    fn parses_probs_records() {
        let (id, p) = parse_record("coin: 0.5, 0.5", 3, InputFormat::Probs).unwrap();
        assert_eq!(id, "coin");
        assert_eq!(p.masses(), &[0.5, 0.5]);
        let (id, p) = parse_record("[1.0]", 7, InputFormat::Probs).unwrap();
        assert_eq!(id, "line7");
        assert_eq!(p.masses(), &[1.0]);
        let (_, p) = parse_record("0.25 0.25\t0.5", 1, InputFormat::Probs).unwrap();
        assert_eq!(p.len(), 3);
    }

    #[test]
    fn parses_counts_records() {
        let (id, p) = parse_record("coin: h=1,t=1", 1, InputFormat::Counts).unwrap();
        assert_eq!(id, "coin");
        assert_eq!(p.labels(), &["h", "t"]);
        let (id, p) = parse_record("a=3, b=1", 2, InputFormat::Counts).unwrap();
        assert_eq!(id, "line2");
        assert_eq!(p.masses(), &[0.75, 0.25]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert_eq!(
            parse_record("0.5, x", 4, InputFormat::Probs).unwrap_err(),
            Error::Parse {
                line: 4,
                message: "not a probability: \"x\"".into()
            }
        );
        assert!(matches!(
            parse_record("a=1,b", 9, InputFormat::Counts).unwrap_err(),
            Error::Parse { line: 9, .. }
        ));
        assert!(matches!(
            parse_record("[0.5, 0.5", 1, InputFormat::Probs).unwrap_err(),
            Error::Parse { .. }
        ));
        match parse_record("bad: 0.6, 0.5", 2, InputFormat::Probs).unwrap_err() {
            Error::Record { record, line, source } => {
                assert_eq!((record.as_str(), line), ("bad", 2));
                assert!(matches!(*source, Error::NotNormalized { .. }));
            }
            e => panic!("unexpected {e:?}"),
        }
        assert!(matches!(
            parse_record("z: a=0,b=0", 1, InputFormat::Counts).unwrap_err(),
            Error::Record { .. }
        ));
    }

    #[test]
    fn measure_examples() {
        let input = "# header comment\n\ncoin: h=1,t=1\ndie: 1=1,2=1,3=1,4=1,5=1,6=1\n";
        let reports = measure(input, InputFormat::Counts).unwrap();
        assert_eq!(reports.len(), 2);
        assert!((reports[0].lin - HU2).abs() < 1e-12);
        assert_eq!(reports[0].normalized_shannon, Some(1.0));
        assert!((reports[1].lin - HU6).abs() < 1e-12);
        assert_eq!(reports[1].normalized_shannon, Some(1.0));
        assert_eq!(reports[1].max_symbol, "1");

        let reports = measure("[1.0]", InputFormat::Probs).unwrap();
        assert_eq!(reports[0].lin, 0.0);
        assert_eq!(reports[0].shannon, 0.0);
        assert_eq!(reports[0].normalized_shannon, None);
        assert!(reports[0].to_tsv().contains("\tundefined\t"));
        let json = serde_json::to_string(&reports[0]).unwrap();
        assert!(json.contains("\"normalized_shannon\":\"undefined\""), "{json}");
    }

    #[test]
    fn curve_specs() {
        let rows = CurveSpec::Uniform { max_n: 2 }.rows().unwrap();
        assert_eq!(rows[0], vec![1.0, 1.0, 0.0]);
        assert_eq!(rows[1][..2], [2.0, 0.5]);
        assert!((rows[1][2] - HU2).abs() < 1e-15);

        let rows = CurveSpec::Bernoulli { steps: 11 }.rows().unwrap();
        assert_eq!(rows[0], vec![0.0, 0.0]);
        assert_eq!(rows[10], vec![1.0, 0.0]);
        assert_eq!(rows[5][0], 0.5);
        assert!((rows[5][1] - HU2).abs() < 1e-15);

        assert!(CurveSpec::Uniform { max_n: 0 }.validate().is_err());
        assert!(CurveSpec::Bernoulli { steps: 1 }.rows().is_err());
        let text = CurveSpec::Uniform { max_n: 2 }.render().unwrap();
        assert_eq!(text, "n\tinv_n\tlin_entropy\n1\t1.00000000000000\t0\n2\t0.500000000000000\t0.311278124459133\n");
    }

    #[test]
    fn exit_codes() {
        let (code, out, _) = run_args(&["measure", "--format", "counts"], "coin: h=1,t=1\n");
        assert_eq!(code, 0);
        assert!(out.starts_with(MeasureReport::TSV_HEADER));
        let (code, _, err) = run_args(&["measure"], "0.7, 0.7\n");
        assert_eq!(code, 1);
        assert!(err.contains("line 1"), "{err}");
        assert_eq!(run_args(&["verify", "--trials", "0"], "").0, 2);
        assert_eq!(run_args(&["verify", "--functional", "renyi"], "").0, 2);
        assert_eq!(run_args(&["curve", "bernoulli", "--steps", "1"], "").0, 2);
        assert_eq!(run_args(&["frobnicate"], "").0, 2);
        assert_eq!(run_args(&["--help"], "").0, 0);
        let (code, out, _) = run_args(&["measure", "--json"], "[1.0]\n");
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 1);
    }

    #[test]
    fn verify_counterfeit_exits_one() {
        let args = [
            "verify",
            "--functional",
            "normalized-shannon",
            "--trials",
            "20",
            "--max-alphabet",
            "8",
            "--max-uniform",
            "50",
        ];
        let (code, out, _) = run_args(&args, "");
        assert_eq!(code, 1);
        let viii = out.lines().find(|l| l.contains("\tVIII\t")).unwrap();
        assert!(viii.starts_with("FAIL"), "{viii}");
    }
}
