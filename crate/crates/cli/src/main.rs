mod figure;
mod output;

use std::f64::consts::LN_2;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tm_core::entropy::{energy_exponent, entropy_series, information_dimension, MAX_ENTROPY_DIGITS};
use tm_core::grid::Grid;
use tm_core::measure::{beta_estimate, gibbs_upper_check, local_dimension_estimate};
use tm_core::potential::LOG_3_2;
use tm_core::pressure::{
    birkhoff_from_curve, dimension_from_curve, MidpointTable, PressureCurve, RestrictedTable,
    SpectrumCurve,
};
use tm_core::symbolic::{format_rational, parse_rational, BinaryWord};
use tm_core::verify::{run_suite, Suite, VerifyReport};
use tm_core::Exec;

use crate::figure::Figure;
use crate::output::{cell, csv_bytes, emit, json_bytes, num};

#[derive(Parser, Debug)]
#[command(name = "tm", version, about = "Multifractal toolkit for the Thue-Morse measure")]
struct Cli {
    /// Worker threads for the parallel kernels: a positive integer or `auto`.
    #[arg(long, global = true, default_value = "auto")]
    threads: Threads,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy)]
enum Threads {
    Auto,
    Fixed(usize),
}

impl std::str::FromStr for Threads {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "auto" => Ok(Threads::Auto),
            _ => match s.parse::<usize>() {
                Ok(n) if n > 0 => Ok(Threads::Fixed(n)),
                _ => Err(format!("expected a positive integer or `auto`, got `{s}`")),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Birkhoff,
    Dimension,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Pressure approximant p^[n](t), or the restricted pressure with --restricted.
    Pressure {
        #[arg(long, default_value_t = 20)]
        n: u32,
        /// Temperature grid `start:stop:step` or a single value.
        #[arg(long, default_value = "0:40:0.1")]
        t: Grid,
        /// Restrict to sequences without runs longer than m.
        #[arg(long, value_name = "M")]
        restricted: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Birkhoff or dimension spectrum by Legendre transform of p^[n].
    Spectrum {
        #[arg(long, value_enum, default_value_t = Kind::Birkhoff)]
        kind: Kind,
        #[arg(long, default_value_t = 20)]
        n: u32,
        /// Exponent grid; by default 401 points spanning the support, endpoints included.
        #[arg(long)]
        alpha: Option<Grid>,
        /// Temperature grid used for the transform.
        #[arg(long, default_value = "0:40:0.1")]
        t: Grid,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Metric entropy, information dimension and energy exponent.
    Entropy {
        #[arg(long, default_value_t = 10)]
        digits: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Local dimension estimate at a rational point.
    Localdim {
        /// Point `p/q` in [0, 1).
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 200)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cylinder mass under the level-N approximant and the Gibbs upper bound.
    Measure {
        /// Binary word, e.g. `0101`.
        #[arg(long)]
        word: String,
        #[arg(long)]
        level: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the numerical acceptance checks.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Writes the CSV data behind a figure to `<out>/<figure>.csv`.
    Figure {
        #[arg(value_enum)]
        figure: Figure,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Level of the pressure approximant.
        #[arg(long, default_value_t = 20)]
        n: u32,
    },
}

/// Failure of a numerical check, as opposed to bad input.
#[derive(Debug)]
struct CheckFailed;

impl std::fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("one or more checks failed")
    }
}

impl std::error::Error for CheckFailed {}

fn configure_threads(threads: Threads) -> Result<()> {
    #[cfg(feature = "parallel")]
    if let Threads::Fixed(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| anyhow!("configuring the thread pool: {e}"))?;
    }
    #[cfg(not(feature = "parallel"))]
    if let Threads::Fixed(n) = threads {
        eprintln!("note: built without parallel support, ignoring --threads {n}");
    }
    Ok(())
}

fn curve_json(curve: &PressureCurve) -> Value {
    let kind = match curve.kind {
        tm_core::pressure::PressureKind::Full => json!("full"),
        tm_core::pressure::PressureKind::Restricted { m } => json!(format!("restricted_m{m}")),
        tm_core::pressure::PressureKind::CylinderSup => json!("cylinder_sup"),
    };
    json!({
        "kind": kind,
        "n": curve.n,
        "samples": curve.samples.iter().map(|&(t, p)| json!({"t": num(t), "p": num(p)})).collect::<Vec<_>>(),
    })
}

fn pressure(n: u32, t: &Grid, restricted: Option<u32>, format: Format) -> Result<Vec<u8>> {
    let grid = t.points();
    let curve = match restricted {
        Some(m) => RestrictedTable::new(m, n)?.curve(&grid)?,
        None => MidpointTable::new(n)?.curve(&grid)?,
    };
    match format {
        Format::Csv => {
            let rows: Vec<Vec<String>> =
                curve.samples.iter().map(|&(t, p)| vec![cell(t), cell(p)]).collect();
            csv_bytes(&["t", "p"], &rows)
        }
        Format::Json => json_bytes(&curve_json(&curve)),
    }
}

/// Default exponent grid: 401 points covering the support, endpoints exact.
fn default_alphas(kind: Kind) -> Vec<f64> {
    let (a, b) = match kind {
        Kind::Birkhoff => (-LN_2, LOG_3_2),
        Kind::Dimension => (2.0 - 3f64.ln() / LN_2, 2.0),
    };
    let mut v: Vec<f64> = (0..=400).map(|i| a + (b - a) * i as f64 / 400.0).collect();
    v[400] = b;
    v
}

fn spectrum(
    kind: Kind,
    n: u32,
    alpha: Option<&Grid>,
    t: &Grid,
    format: Format,
) -> Result<Vec<u8>> {
    let curve = MidpointTable::new(n)?.curve(&t.points())?;
    let alphas = match alpha {
        Some(g) => g.points(),
        None => default_alphas(kind),
    };
    let spec: SpectrumCurve = match kind {
        Kind::Birkhoff => birkhoff_from_curve(&curve, &alphas),
        Kind::Dimension => dimension_from_curve(&curve, &alphas),
    };
    match format {
        Format::Csv => {
            let rows: Vec<Vec<String>> =
                spec.samples.iter().map(|&(a, v)| vec![cell(a), cell(v)]).collect();
            csv_bytes(&["alpha", "value"], &rows)
        }
        Format::Json => json_bytes(&json!({
            "kind": match kind { Kind::Birkhoff => "birkhoff", Kind::Dimension => "dimension" },
            "n": n,
            "samples": spec.samples.iter().map(|&(a, v)| json!({"alpha": num(a), "value": num(v)})).collect::<Vec<_>>(),
        })),
    }
}

fn record(fields: Vec<(&str, Value)>, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => json_bytes(&Value::Object(
            fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        )),
        Format::Csv => {
            let header: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            let row = fields
                .iter()
                .map(|(_, v)| match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect();
            csv_bytes(&header, &[row])
        }
    }
}

fn entropy(digits: u32, format: Format) -> Result<Vec<u8>> {
    if digits == 0 || digits > MAX_ENTROPY_DIGITS {
        bail!(tm_core::Error::OutOfRange {
            what: "digits",
            value: digits as i64,
            min: 1,
            max: MAX_ENTROPY_DIGITS as i64,
        });
    }
    let r = entropy_series(digits).map_err(|e| match e {
        tm_core::Error::Convergence { .. } => anyhow!(e).context(CheckFailed),
        other => anyhow!(other),
    })?;
    record(
        vec![
            ("h", json!(r.h)),
            ("D1", num(information_dimension(r.h_f64))),
            ("energy_exponent", num(energy_exponent())),
            ("S", json!(r.series_sum)),
            ("digits_validated", json!(r.digits_validated)),
        ],
        format,
    )
}

fn localdim(x: &str, n: u32, format: Format) -> Result<Vec<u8>> {
    let point = parse_rational(x)?;
    if point >= tm_core::Rational::from_integer(1) {
        bail!(tm_core::Error::PointOutOfRange(x.to_string()));
    }
    let d = local_dimension_estimate(&point, n);
    record(
        vec![
            ("x", json!(format_rational(&point))),
            ("n", json!(n)),
            ("local_dimension", num(d.value)),
            ("beta", num(beta_estimate(point, n))),
            ("singular", json!(d.singular)),
        ],
        format,
    )
}

fn measure(word: &str, level: u32, format: Format) -> Result<Vec<u8>> {
    let word: BinaryWord = word.parse()?;
    let check = gibbs_upper_check(&word, level)?;
    record(
        vec![
            ("word", json!(word.to_string())),
            ("level", json!(level)),
            ("mass", num(check.mass)),
            ("gibbs_bound", num(check.bound)),
            ("pass", json!(check.pass)),
        ],
        format,
    )
}

fn report_bytes(report: &VerifyReport, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => json_bytes(&json!({
            "suite": report.suite.name(),
            "overall": report.overall,
            "criteria": report.criteria().iter().map(|&(id, pass)| json!({"criterion": id, "pass": pass})).collect::<Vec<_>>(),
            "checks": report.checks.iter().map(|c| json!({
                "criterion": c.criterion,
                "name": c.name,
                "expected": num(c.expected),
                "observed": num(c.observed),
                "tolerance": num(c.tolerance),
                "pass": c.pass,
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let rows: Vec<Vec<String>> = report
                .checks
                .iter()
                .map(|c| {
                    vec![
                        c.criterion.to_string(),
                        c.name.clone(),
                        cell(c.expected),
                        cell(c.observed),
                        cell(c.tolerance),
                        c.pass.to_string(),
                    ]
                })
                .collect();
            csv_bytes(
                &["criterion", "name", "expected", "observed", "tolerance", "pass"],
                &rows,
            )
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    configure_threads(cli.threads)?;
    match cli.command {
        Command::Pressure {
            n,
            t,
            restricted,
            format,
            out,
        } => emit(out.as_deref(), &pressure(n, &t, restricted, format)?),
        Command::Spectrum {
            kind,
            n,
            alpha,
            t,
            format,
            out,
        } => emit(out.as_deref(), &spectrum(kind, n, alpha.as_ref(), &t, format)?),
        Command::Entropy {
            digits,
            format,
            out,
        } => emit(out.as_deref(), &entropy(digits, format)?),
        Command::Localdim { x, n, format, out } => emit(out.as_deref(), &localdim(&x, n, format)?),
        Command::Measure {
            word,
            level,
            format,
            out,
        } => emit(out.as_deref(), &measure(&word, level, format)?),
        Command::Verify { suite, format, out } => {
            let suite: Suite = suite.parse()?;
            let report = run_suite(suite, Exec::default())?;
            for c in &report.checks {
                eprintln!("{c}");
            }
            emit(out.as_deref(), &report_bytes(&report, format)?)?;
            if report.overall {
                Ok(())
            } else {
                Err(anyhow!(CheckFailed))
            }
        }
        Command::Figure { figure, out, n } => {
            let path = figure::write(figure, n, &out)?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<CheckFailed>().is_some() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
