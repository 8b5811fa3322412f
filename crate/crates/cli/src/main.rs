//! `sfunc`: verify, frame and generate s-functions from the command line.
//!
//! Exit status is 0 on success, 1 when a verification finds violations and 2 on
//! bad input or usage.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sfunctions::catalog::{self, CyclotomicSpec};
use sfunctions::framing::{self, Kappa};
use sfunctions::json::{self as sj, SeriesData};
use sfunctions::sfunc::{self, CheckOptions};
use sfunctions::{FieldElem, NumberField};

#[derive(Parser)]
#[command(name = "sfunc", version, about = "Integrality checks and framings for s-functions")]
struct Cli {
    /// Worker threads for the check pool (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the s-function congruences at every good prime.
    Verify {
        #[command(flatten)]
        input: SeriesInput,
        #[arg(long)]
        s: u32,
        /// Also report integrality at bad primes (informational only).
        #[arg(long)]
        primes_extra: bool,
    },
    /// Integer framing `W ↦ W_f`; without `--f` the elementary framing.
    Frame {
        #[command(flatten)]
        input: SeriesInput,
        #[arg(long, allow_hyphen_values = true)]
        f: Option<i64>,
    },
    /// Framing of a series in several variables by a symmetric integer matrix.
    FrameMulti {
        #[command(flatten)]
        input: SeriesInput,
        /// Rows separated by `;`, entries by `,`.
        #[arg(long, allow_hyphen_values = true)]
        kappa: String,
    },
    /// Product factorization `V = -Σ log(1 - b_d z^d)`.
    Dwork {
        #[command(flatten)]
        input: SeriesInput,
    },
    /// Generator from a rational combination of roots of unity.
    GenAbelian {
        #[arg(long)]
        conductor: u64,
        /// JSON map `{"i": "c_i"}` or list of the `c_i`.
        #[arg(long)]
        coeffs: PathBuf,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        order: usize,
    },
    /// s-function with `a_1 = x` built by Chinese remaindering.
    GenCrt {
        #[arg(long)]
        field: Option<PathBuf>,
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        order: usize,
    },
    /// `V = Σ_m Li_s`-expansion of `log Q(z)` for a polynomial `Q` with `Q(0) = 1`.
    FromLog {
        #[arg(long)]
        field: Option<PathBuf>,
        /// Coefficients of `Q`, low degree first: a list, or `{"field": …, "coeffs": […]}`.
        #[arg(long)]
        coeffs: PathBuf,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        order: usize,
    },
    /// Multiplicities of the framed trilogarithm.
    PolylogTable {
        /// Degrees, e.g. `1..7` (inclusive) or `1,2,5`.
        #[arg(long)]
        d: String,
        /// Framings, e.g. `2..5` or `-1,3`.
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// `binom(pkf, pk) ≡ binom(kf, k)` to the expected power of `p`.
    JkCheck {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        kmax: u64,
        #[arg(long)]
        fmax: u64,
    },
}

#[derive(Args)]
struct SeriesInput {
    #[arg(long)]
    series: PathBuf,
    /// Field file used when the series does not embed one.
    #[arg(long)]
    field: Option<PathBuf>,
    /// Truncate the input to this order.
    #[arg(long)]
    order: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Failure that maps to exit status 2.
struct Fail(String);

impl<E: Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail(e.to_string())
    }
}

type Outcome = std::result::Result<(String, bool), Fail>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            eprintln!("sfunc: {}", msg.lines().next().unwrap_or("usage error").trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Fail(msg)) => {
            eprintln!("sfunc: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> std::result::Result<bool, Fail> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        if j == 0 {
            return Err(Fail("--jobs must be positive".into()));
        }
        pool = pool.num_threads(j);
    }
    let pool = pool.build()?;
    let (text, ok) = pool.install(|| dispatch(cli.command))?;
    match cli.out {
        Some(path) => std::fs::write(&path, text).map_err(|e| Fail(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(ok)
}

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::Verify { input, s, primes_extra } => {
            let opts = CheckOptions { primes_extra };
            let report = match load(&input)? {
                SeriesData::Uni(v) => sfunc::check_sfunction_with(&v, s, opts)?,
                SeriesData::Multi(v) => sfunc::check_msfunction_with(&v, s, opts)?,
            };
            Ok((pretty(&sj::report_to_json(&report)), report.pass))
        }
        Command::Frame { input, f } => {
            let v = uni(load(&input)?)?;
            let framed = match f {
                Some(f) => framing::frame_f(&v, f)?,
                None => framing::frame_elementary(&v)?,
            };
            Ok((pretty(&sj::series_to_json(&framed)), true))
        }
        Command::FrameMulti { input, kappa } => {
            let kappa: Kappa = kappa.parse()?;
            let v = match load(&input)? {
                SeriesData::Multi(v) => v,
                SeriesData::Uni(v) => sfunctions::mseries::MSeries::from_series(&v),
            };
            Ok((pretty(&sj::mseries_to_json(&framing::frame_multi(&v, &kappa)?)), true))
        }
        Command::Dwork { input } => {
            let v = uni(load(&input)?)?;
            if !v.const_term().is_zero() {
                return Err(sfunctions::Error::ConstantTermNonzero.into());
            }
            let b = sfunc::dwork_factor(&v);
            let nonintegral: Vec<usize> = b.iter().enumerate().filter(|(_, x)| !x.is_integral()).map(|(i, _)| i + 1).collect();
            let out = json!({
                "order": v.order(),
                "b": b.iter().map(sj::elem_to_json).collect::<Vec<_>>(),
                "integral": nonintegral.is_empty(),
                "nonintegral": nonintegral,
            });
            Ok((pretty(&out), nonintegral.is_empty()))
        }
        Command::GenAbelian { conductor, coeffs, s, order } => {
            let c = catalog::parse_cyclotomic_coeffs(&sj::read_json(&coeffs)?)?;
            let v = catalog::abelian_generator(&CyclotomicSpec::new(conductor, c, s)?, order)?;
            Ok((pretty(&sj::series_to_json(&v)), true))
        }
        Command::GenCrt { field, x, s, order } => {
            let field = field.as_deref().map(sj::load_field).transpose()?;
            let x = sj::elem_from_file(&x, field.as_ref())?;
            let v = sfunc::generate_crt(x.field(), &x, s, order)?;
            Ok((pretty(&sj::series_to_json(&v)), true))
        }
        Command::FromLog { field, coeffs, s, order } => {
            let field = field.as_deref().map(sj::load_field).transpose()?;
            let (field, q) = log_poly(&coeffs, field)?;
            let v = catalog::from_log_poly(&field, &q, s, order)?;
            Ok((pretty(&sj::series_to_json(&v)), true))
        }
        Command::PolylogTable { d, f, format } => {
            let ds = parse_list(&d)?
                .into_iter()
                .map(|x| u64::try_from(x).ok().filter(|&x| x > 0).ok_or_else(|| Fail(format!("bad degree {x}"))))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let fs = parse_list(&f)?;
            let t = catalog::polylog_frame_table(&fs, &ds)?;
            let text = match format {
                Format::Csv => t.to_csv(),
                Format::Json => pretty(&t.to_json()),
            };
            Ok((text, true))
        }
        Command::JkCheck { p, kmax, fmax } => {
            let r = catalog::jk_check(p, kmax, fmax)?;
            let failures: Vec<_> = r.entries.iter().filter(|e| !e.pass).collect();
            let out = json!({
                "p": r.p,
                "kmax": kmax,
                "fmax": fmax,
                "pass": r.pass,
                "checked": r.entries.len(),
                "failures": failures,
            });
            Ok((pretty(&out), r.pass))
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn load(input: &SeriesInput) -> std::result::Result<SeriesData, Fail> {
    let field = input.field.as_deref().map(sj::load_field).transpose()?;
    let data = sj::load_series(&input.series, field.as_ref())?;
    Ok(match (data, input.order) {
        (SeriesData::Uni(v), Some(n)) if n < v.order() => SeriesData::Uni(v.truncate(n)),
        (SeriesData::Multi(v), Some(n)) if n < v.order() => SeriesData::Multi(v.truncate(n)),
        (d, _) => d,
    })
}

fn uni(d: SeriesData) -> std::result::Result<sfunctions::series::Series, Fail> {
    match d {
        SeriesData::Uni(v) => Ok(v),
        SeriesData::Multi(_) => Err(Fail("expected a series in one variable".into())),
    }
}

fn log_poly(path: &Path, field: Option<Arc<NumberField>>) -> std::result::Result<(Arc<NumberField>, Vec<FieldElem>), Fail> {
    let v = sj::read_json(path)?;
    let (field, list) = match &v {
        Value::Object(m) => {
            let field = match (field, m.get("field")) {
                (Some(f), _) => f,
                (None, Some(f)) => sj::field_from_json(f, path.parent())?,
                (None, None) => sfunctions::numfield::rationals(),
            };
            let list = m.get("coeffs").cloned().ok_or_else(|| Fail("polynomial needs \"coeffs\"".into()))?;
            (field, list)
        }
        _ => (field.unwrap_or_else(sfunctions::numfield::rationals), v.clone()),
    };
    let q = list
        .as_array()
        .ok_or_else(|| Fail("polynomial coefficients must be a list".into()))?
        .iter()
        .map(|c| sj::elem_from_json(c, &field))
        .collect::<sfunctions::Result<Vec<_>>>()?;
    Ok((field, q))
}

/// `a..b` (inclusive), `a..=b`, a comma list or a single integer.
fn parse_list(s: &str) -> std::result::Result<Vec<i64>, Fail> {
    let int = |t: &str| t.trim().parse::<i64>().map_err(|_| Fail(format!("bad integer {t:?} in {s:?}")));
    if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (int(a)?, int(b.trim_start_matches('='))?);
        if a > b {
            return Err(Fail(format!("empty range {s:?}")));
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(int).collect()
}
