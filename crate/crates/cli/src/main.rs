use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use detrep::constructions::construct_size;
use detrep::oracle::{oracle_roots, OracleOptions};
use detrep::twopareig::{solve, RootSet, SolveOptions, SolveStatus};
use detrep::{construct, verify, CPoly, Error, Method, QRep, VerifyMode, VerifyOptions};

const DEFAULT_RADIUS: i64 = 1_000_000;

#[derive(Parser)]
#[command(name = "detrep", version, about = "Uniform determinantal representations and bivariate root finding")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the representation of the generic polynomial p_{n,d}.
    Construct {
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'd')]
        d: usize,
        #[arg(long, default_value = "minunif")]
        method: String,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check det(M) = p_{n,d} for a representation file.
    Verify {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Symbolic)]
        mode: Mode,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Random points are drawn from [-radius, radius].
        #[arg(long, default_value_t = DEFAULT_RADIUS)]
        radius: i64,
        /// Largest size verified symbolically.
        #[arg(long, default_value_t = detrep::biaffine::DEFAULT_SYMBOLIC_CAP)]
        cap: usize,
    },
    /// Solve p(x,y) = q(x,y) = 0.
    Solve {
        #[arg(long, required_unless_present = "batch")]
        p: Option<PathBuf>,
        #[arg(long, required_unless_present = "batch")]
        q: Option<PathBuf>,
        /// Directory of system files, each {"p": poly, "q": poly}.
        #[arg(long, conflicts_with_all = ["p", "q"])]
        batch: Option<PathBuf>,
        #[arg(long, default_value = "minunif")]
        method: String,
        /// Residual threshold for accepting a root.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        out: Format,
        /// Output file; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Use the resultant solver instead of the eigenvalue pipeline.
        #[arg(long)]
        oracle: bool,
    },
    /// Tabulate representation sizes per method.
    Sizes {
        /// Inclusive range such as 2..8; empty when start > end.
        #[arg(long, default_value = "2..8")]
        n_range: String,
        #[arg(long, default_value = "2..9")]
        d_range: String,
        /// Comma-separated methods; lin1 is an alias for cons1-tree.
        #[arg(long)]
        methods: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Symbolic,
    Random,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
    detail: Value,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            kind: "usage",
            message: message.into(),
            detail: Value::Null,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::SymbolicCapExceeded { .. } => (2, "cap_exceeded"),
            Error::InapplicableMethod { .. } | Error::NotTabulated { .. } | Error::UnsupportedFamily(_) => {
                (2, "inapplicable")
            }
            Error::ZeroPolynomial => (2, "zero_polynomial"),
            Error::Parse(_) | Error::LengthMismatch { .. } | Error::VariableCountMismatch { .. } => (2, "input"),
            Error::DegreeOutOfRange { .. } => (2, "input"),
            Error::RankAmbiguous { .. }
            | Error::NoRegularPart
            | Error::NonCommuting(_)
            | Error::PositiveDimensional => (1, "numerical"),
            _ => (2, "invalid"),
        };
        let message = match e {
            Error::SymbolicCapExceeded { size, cap } => {
                format!("cap exceeded, use random (size {size} > symbolic cap {cap})")
            }
            other => other.to_string(),
        };
        Failure {
            code,
            kind,
            message,
            detail: Value::Null,
        }
    }
}

type CliResult = std::result::Result<(), Failure>;

fn seed_or_env(seed: Option<u64>) -> std::result::Result<u64, Failure> {
    if let Some(s) = seed {
        return Ok(s);
    }
    match std::env::var("DETREP_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("DETREP_SEED is not an unsigned integer: {v:?}"))),
        Err(_) => Ok(0),
    }
}

fn read_json(path: &Path) -> std::result::Result<Value, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())).into())
}

fn emit(output: Option<&Path>, text: &str) -> CliResult {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = io::stdout().lock();
            match out.write_all(text.as_bytes()) {
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Failure::usage(format!("stdout: {e}"))),
                _ => Ok(()),
            }
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}

fn parse_method(name: &str) -> std::result::Result<Method, Failure> {
    match name.to_ascii_lowercase().as_str() {
        "lin1" => Ok(Method::Cons1Tree),
        other => Ok(other.parse::<Method>()?),
    }
}

fn parse_range(s: &str) -> std::result::Result<Vec<usize>, Failure> {
    let bad = || Failure::usage(format!("bad range {s:?}; expected a..b, a-b or a single value"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    let (lo, hi) = if let Some((a, b)) = s.split_once("..") {
        (num(a)?, num(b.trim_start_matches('='))?)
    } else if let Some((a, b)) = s.split_once('-') {
        (num(a)?, num(b)?)
    } else {
        let v = num(s)?;
        (v, v)
    };
    Ok((lo..=hi).collect())
}

fn cmd_construct(n: usize, d: usize, method: &str, out: Option<&Path>) -> CliResult {
    let method = parse_method(method)?;
    let rep: QRep = construct(n, d, method)?;
    emit(out, &pretty(&rep.to_json()))
}

fn cmd_verify(rep: &Path, mode: Mode, trials: usize, seed: Option<u64>, radius: i64, cap: usize) -> CliResult {
    let rep = QRep::from_json(&read_json(rep)?)?;
    if radius < 1 {
        return Err(Failure::usage("radius must be positive"));
    }
    let opts = VerifyOptions {
        mode: match mode {
            Mode::Symbolic => VerifyMode::Symbolic,
            Mode::Random => VerifyMode::Randomized,
        },
        trials,
        seed: seed_or_env(seed)?,
        radius,
        cap,
    };
    let report = verify(&rep, &opts)?;
    let mut v = report.to_json();
    v["N"] = json!(rep.size());
    v["n"] = json!(rep.nvars());
    v["d"] = json!(rep.degree());
    emit(None, &pretty(&v))?;
    if report.pass {
        Ok(())
    } else {
        Err(Failure {
            code: 1,
            kind: "verification_failed",
            message: "det(M) differs from the generic polynomial".into(),
            detail: v["witness"].clone(),
        })
    }
}

fn read_poly(v: &Value, what: &str) -> std::result::Result<CPoly, Failure> {
    CPoly::from_json(v).map_err(|e| Failure::from(Error::Parse(format!("{what}: {e}"))))
}

fn run_solver(p: &CPoly, q: &CPoly, opts: &SolveOptions, oracle: bool) -> detrep::Result<RootSet> {
    if oracle {
        let o = OracleOptions {
            accept: opts.accept,
            seed: opts.seed,
            ..OracleOptions::default()
        };
        oracle_roots(p, q, &o)
    } else {
        solve(p, q, opts)
    }
}

fn render(set: &RootSet, format: Format) -> std::result::Result<String, Failure> {
    match format {
        Format::Csv => {
            let mut buf = Vec::new();
            set.write_csv(&mut buf)?;
            Ok(String::from_utf8(buf).expect("csv output is utf-8"))
        }
        _ => Ok(pretty(&set.to_json())),
    }
}

fn status_failure(set: &RootSet) -> CliResult {
    match set.status {
        SolveStatus::Ok => Ok(()),
        status => Err(Failure {
            code: 1,
            kind: "solve_incomplete",
            message: format!(
                "solver status {}: {}",
                status.name(),
                set.failure.clone().unwrap_or_else(|| "roots missing".into())
            ),
            detail: json!({ "roots": set.roots.len(), "retries": set.retries }),
        }),
    }
}

struct SolveArgs<'a> {
    method: &'a str,
    tol: f64,
    seed: Option<u64>,
    out: Format,
    output: Option<&'a Path>,
    oracle: bool,
}

impl SolveArgs<'_> {
    fn options(&self) -> std::result::Result<SolveOptions, Failure> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Failure::usage("tol must be positive"));
        }
        Ok(SolveOptions {
            method: parse_method(self.method)?,
            accept: self.tol,
            seed: seed_or_env(self.seed)?,
            ..SolveOptions::default()
        })
    }
}

fn cmd_solve(p: &Path, q: &Path, args: &SolveArgs) -> CliResult {
    let opts = args.options()?;
    let p = read_poly(&read_json(p)?, "p")?;
    let q = read_poly(&read_json(q)?, "q")?;
    let set = run_solver(&p, &q, &opts, args.oracle)?;
    emit(args.output, &render(&set, args.out)?)?;
    status_failure(&set)
}

fn cmd_solve_batch(dir: &Path, args: &SolveArgs) -> CliResult {
    if args.out == Format::Csv {
        return Err(Failure::usage("batch output is JSON only"));
    }
    let opts = args.options()?;
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let results: Vec<Value> = files
        .par_iter()
        .map(|path| {
            let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let outcome = read_json(path).and_then(|v| {
                let p = read_poly(v.get("p").unwrap_or(&Value::Null), "p")?;
                let q = read_poly(v.get("q").unwrap_or(&Value::Null), "q")?;
                Ok(run_solver(&p, &q, &opts, args.oracle)?)
            });
            match outcome {
                Ok(set) => json!({ "system": name, "result": set.to_json() }),
                Err(f) => json!({ "system": name, "error": { "kind": f.kind, "message": f.message } }),
            }
        })
        .collect();
    let failed = results
        .iter()
        .filter(|r| r.get("error").is_some() || r["result"]["status"] != "ok")
        .count();
    emit(args.output, &pretty(&Value::Array(results)))?;
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure {
            code: 1,
            kind: "solve_incomplete",
            message: format!("{failed} of {} systems failed or are incomplete", files.len()),
            detail: Value::Null,
        })
    }
}

fn cmd_sizes(n_range: &str, d_range: &str, methods: Option<&str>, format: Format) -> CliResult {
    let ns = parse_range(n_range)?;
    let ds = parse_range(d_range)?;
    let methods: Vec<Method> = match methods {
        Some(list) => list
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| parse_method(s.trim()))
            .collect::<std::result::Result<_, _>>()?,
        None => Method::ALL.to_vec(),
    };
    let mut rows: Vec<(usize, usize, Vec<Option<usize>>)> = Vec::new();
    for &n in &ns {
        for &d in &ds {
            let sizes: Vec<Option<usize>> = methods.iter().map(|&m| construct_size(n, d, m).ok()).collect();
            rows.push((n, d, sizes));
        }
    }
    let best = |sizes: &[Option<usize>]| sizes.iter().flatten().min().copied();
    let text = match format {
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|(n, d, sizes)| {
                    let per: serde_json::Map<String, Value> =
                        methods.iter().zip(sizes).map(|(m, s)| (m.name().to_string(), json!(s))).collect();
                    json!({ "n": n, "d": d, "sizes": per, "best": best(sizes) })
                })
                .collect();
            pretty(&Value::Array(rows))
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Failure::usage(format!("csv output: {e}"));
            let mut header = vec!["n".to_string(), "d".to_string()];
            header.extend(methods.iter().map(|m| m.name().to_string()));
            header.push("best".into());
            w.write_record(&header).map_err(io)?;
            for (n, d, sizes) in &rows {
                let mut rec = vec![n.to_string(), d.to_string()];
                rec.extend(sizes.iter().map(|s| s.map(|v| v.to_string()).unwrap_or_default()));
                rec.push(best(sizes).map(|v| v.to_string()).unwrap_or_default());
                w.write_record(&rec).map_err(io)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| Failure::usage(e.to_string()))?)
                .expect("csv output is utf-8")
        }
        Format::Text => {
            let cell = |s: Option<usize>| s.map(|v| v.to_string()).unwrap_or_else(|| "-".into());
            let mut out = format!("{:>3} {:>3}", "n", "d");
            for m in &methods {
                out += &format!(" {:>13}", m.name());
            }
            out += &format!(" {:>5}\n", "best");
            for (n, d, sizes) in &rows {
                out += &format!("{n:>3} {d:>3}");
                for s in sizes {
                    out += &format!(" {:>13}", cell(*s));
                }
                out += &format!(" {:>5}\n", cell(best(sizes)));
            }
            out
        }
    };
    emit(None, &text)
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Construct { n, d, method, out } => cmd_construct(n, d, &method, out.as_deref()),
        Command::Verify {
            rep,
            mode,
            trials,
            seed,
            radius,
            cap,
        } => cmd_verify(&rep, mode, trials, seed, radius, cap),
        Command::Solve {
            p,
            q,
            batch,
            method,
            tol,
            seed,
            out,
            output,
            oracle,
        } => {
            let args = SolveArgs {
                method: &method,
                tol,
                seed,
                out,
                output: output.as_deref(),
                oracle,
            };
            match (batch, p, q) {
                (Some(dir), _, _) => cmd_solve_batch(&dir, &args),
                (None, Some(p), Some(q)) => cmd_solve(&p, &q, &args),
                _ => Err(Failure::usage("solve needs --p and --q, or --batch")),
            }
        }
        Command::Sizes {
            n_range,
            d_range,
            methods,
            format,
        } => cmd_sizes(&n_range, &d_range, methods.as_deref(), format),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let report = json!({
                "error": f.kind,
                "message": f.message,
                "exit_code": f.code,
                "detail": f.detail,
            });
            eprintln!("{report}");
            ExitCode::from(f.code)
        }
    }
}
