//! `lpf`: evaluation, verification sweeps, format tuples, zero bounds and
//! monodromy queries for the Legendre family.
//!
//! Exit codes: 0 pass, 1 check failure, 2 usage error, 3 numerical-engine
//! failure.

mod config;
mod eval;
mod output;
mod parse;
mod verify;

use clap::{Args, Parser, Subcommand, ValueEnum};
use config::{OutputFormat, RunConfig, Threads};
use eval::{Arg, Function, SideArg};
use legendre_pfaff::abel::{monodromy_rho, parse_word, standard_loop, AbelMap, MonodromyElement};
use legendre_pfaff::pfaffian::{big_to_f64, compose_theorem_format, khovanskii_zero_bound, TheoremFunction, MIN_DEGREE};
use legendre_pfaff::Error;
use output::{Emitter, Row};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_ENGINE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "lpf", version, about = "Periods, Weierstrass functions and verification sweeps for the Legendre family")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// `key = value` file with tol, seed, samples, output_format, threads
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Write CSV instead of JSON lines
    #[arg(long, global = true)]
    csv: bool,
    /// `auto` or a count; defaults to $LPF_THREADS
    #[arg(long, global = true, env = "LPF_THREADS")]
    threads: Option<String>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Omit the timestamp and wall-time fields, making reports byte-identical
    /// across runs
    #[arg(long, global = true)]
    no_timestamp: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one function at one point
    Eval {
        #[arg(value_enum)]
        function: Function,
        /// λ as `re,im`
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// `re,im` or `b1,b2@basis` for b1·ω₁ + b2·ω₂
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        /// Point of the slit plane, `re,im`
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<String>,
        /// Side of approach for a point on a slit
        #[arg(long, value_enum)]
        side: Option<SideArg>,
    },
    /// Run a verification suite
    Verify {
        #[arg(value_enum)]
        suite: verify::Suite,
    },
    /// Format tuples (r, α, β, n, L, M) of the graphs
    Formats {
        #[arg(long, value_enum, default_value = "all")]
        which: Which,
    },
    /// Zero bound for P(z, f(z)) with deg P ≤ T
    ZeroBound {
        #[arg(long = "T")]
        t: u64,
        #[arg(long, value_enum, default_value = "wp")]
        which: FunctionArg,
    },
    /// Monodromy of a word in γ₁, γ₂, γ₃, or of a numeric loop
    Monodromy {
        /// e.g. "g1 g2^-1 g3"
        #[arg(long, conflicts_with_all = ["lambda", "puncture"])]
        word: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "puncture")]
        lambda: Option<String>,
        /// 0, 1 or lambda
        #[arg(long, requires = "lambda")]
        puncture: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FunctionArg {
    Wp,
    Zeta,
    Phi,
}

impl FunctionArg {
    fn theorem(self) -> TheoremFunction {
        match self {
            FunctionArg::Wp => TheoremFunction::Wp,
            FunctionArg::Zeta => TheoremFunction::Zeta,
            FunctionArg::Phi => TheoremFunction::Phi,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Wp,
    Zeta,
    Phi,
    All,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    kind: String,
    message: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Failure {
        Failure { code: EXIT_USAGE, kind: "usage".into(), message: msg.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = if e.is_numerical() { EXIT_ENGINE } else { EXIT_USAGE };
        Failure { code, kind: e.code().into(), message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure { code: EXIT_USAGE, kind: "io".into(), message: e.to_string() }
    }
}

fn resolve_config(g: &Global) -> Result<RunConfig, Failure> {
    let mut c = RunConfig::default();
    let err = |e: config::ConfigError| Failure::usage(e.0);
    if let Some(p) = &g.config {
        c.apply_file(p).map_err(err)?;
    }
    if let Some(t) = g.tol {
        c.tol = t;
    }
    if let Some(s) = g.seed {
        c.seed = s;
    }
    if let Some(n) = g.samples {
        c.samples = Some(n);
    }
    if g.csv {
        c.output_format = OutputFormat::Csv;
    }
    if let Some(t) = &g.threads {
        c.threads = config::parse_threads(t).map_err(err)?;
    }
    c.validate().map_err(err)?;
    Ok(c)
}

fn timestamp() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn element_string(e: MonodromyElement) -> String {
    format!("({},({},{}))", e.sign, e.translation[0], e.translation[1])
}

fn element_row(row: Row, e: MonodromyElement) -> Row {
    row.with("sign", e.sign)
        .with("translation_m", e.translation[0])
        .with("translation_n", e.translation[1])
        .with("element", element_string(e))
}

struct Ctx<W: Write> {
    cfg: RunConfig,
    stamp: bool,
    out: Emitter<W>,
}

impl<W: Write> Ctx<W> {
    fn emit(&mut self, mut row: Row) -> Result<(), Failure> {
        if self.stamp && row.get("type").and_then(|v| v.as_str()) != Some("record") {
            row.set("timestamp", timestamp());
        }
        self.out.emit(&row)?;
        Ok(())
    }
}

fn run<W: Write>(cmd: Command, ctx: &mut Ctx<W>) -> Result<u8, Failure> {
    match cmd {
        Command::Eval { function, lambda, z, xi, side } => {
            let lam = parse::complex(&lambda).map_err(Failure::usage)?;
            let arg = match (function.takes_xi(), z, xi) {
                (false, Some(z), None) => Arg::Z(parse::z_input(&z).map_err(Failure::usage)?),
                (true, None, Some(x)) => Arg::Xi(parse::complex(&x).map_err(Failure::usage)?, side),
                (false, _, _) => return Err(Failure::usage(format!("{} takes --z only", function.name()))),
                (true, _, _) => return Err(Failure::usage(format!("{} takes --xi only", function.name()))),
            };
            let row = eval::eval(function, lam, arg, ctx.cfg.tol)?;
            ctx.emit(row)?;
            Ok(0)
        }
        Command::Verify { suite } => {
            let samples = ctx.cfg.samples.unwrap_or_else(|| suite.default_samples());
            let start = Instant::now();
            let checks = verify::run(suite, ctx.cfg.seed, samples);
            let summary = verify::Summary::of(&checks);
            for (i, c) in checks.iter().enumerate() {
                let mut row = Row::new("record").with("suite", suite.name()).with("index", i);
                for (k, v) in &c.row.0 {
                    if k != "type" {
                        row.set(k, v.clone());
                    }
                }
                ctx.emit(row)?;
            }
            let mut srow = summary.row(suite, ctx.cfg.seed, samples);
            if ctx.stamp {
                srow.set("wall_time_s", start.elapsed().as_secs_f64());
            }
            match ctx.cfg.output_format {
                OutputFormat::JsonLines => ctx.emit(srow)?,
                // the summary has other columns; keep the CSV rectangular
                OutputFormat::Csv => eprintln!("{}", serde_json::to_string(&srow.0).unwrap_or_default()),
            }
            if let Some(i) = summary.first_failure {
                eprintln!("first failing record: {}", serde_json::to_string(&checks[i].row.0).unwrap_or_default());
            }
            Ok(if summary.numerical_errors > 0 {
                EXIT_ENGINE
            } else if summary.passed() {
                0
            } else {
                EXIT_FAIL
            })
        }
        Command::Formats { which } => {
            let list: Vec<TheoremFunction> = match which {
                Which::Wp => vec![TheoremFunction::Wp],
                Which::Zeta => vec![TheoremFunction::Zeta],
                Which::Phi => vec![TheoremFunction::Phi],
                Which::All => TheoremFunction::ALL.to_vec(),
            };
            for f in list {
                let t = compose_theorem_format(f);
                ctx.emit(
                    Row::new("format")
                        .with("which", format!("{f:?}").to_lowercase())
                        .with("tuple", t.tuple_string())
                        .with("r", t.r)
                        .with("alpha", t.alpha)
                        .with("beta", t.beta)
                        .with("n", t.n)
                        .with("L", t.L.to_string())
                        .with("M", t.M),
                )?;
            }
            Ok(0)
        }
        Command::ZeroBound { t, which } => {
            if t < MIN_DEGREE {
                return Err(Error::DegreeTooSmall(t).into());
            }
            let f = compose_theorem_format(which.theorem());
            let b = khovanskii_zero_bound(&f, t);
            let within = b.within_stated();
            ctx.emit(
                Row::new("zero_bound")
                    .with("which", format!("{which:?}").to_lowercase())
                    .with("tuple", f.tuple_string())
                    .with("T", t)
                    .with("per_piece", b.per_piece.to_string())
                    .with("value", b.value.to_string())
                    .with("value_f64", big_to_f64(&b.value))
                    .with("coefficient", b.coefficient)
                    .with("stated", b.stated)
                    .with("ratio_to_stated", b.ratio_to_stated())
                    .with("within_stated", within),
            )?;
            Ok(if within { 0 } else { EXIT_FAIL })
        }
        Command::Monodromy { word, lambda, puncture } => {
            match (word, lambda, puncture) {
                (Some(w), None, None) => {
                    let letters = parse_word(&w)?;
                    let e = monodromy_rho(&letters);
                    ctx.emit(element_row(Row::new("monodromy").with("word", w.trim()), e))?;
                }
                (None, Some(l), Some(p)) => {
                    let lam = parse::complex(&l).map_err(Failure::usage)?;
                    let p = parse::puncture(&p).map_err(Failure::usage)?;
                    let m = AbelMap::new(lam)?;
                    let (found, cont) = m.monodromy_numeric(&standard_loop(lam, p))?;
                    let tab = found.generator().rho();
                    let row = element_row(
                        Row::new("monodromy").complex("lambda", lam).with("puncture", format!("{found:?}").to_lowercase()),
                        cont.element,
                    )
                    .with("tabulated", element_string(tab))
                    .with("matches_tabulated", cont.element == tab)
                    .with("residual", cont.residual);
                    ctx.emit(row)?;
                }
                _ => return Err(Failure::usage("give --word, or --lambda with --puncture")),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = resolve_config(&cli.global).and_then(|cfg| {
        if let Threads::Count(n) = cfg.threads {
            rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::usage(e.to_string()))?;
        }
        let sink: Box<dyn Write> = match &cli.global.out {
            Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
            None => Box::new(std::io::stdout().lock()),
        };
        let mut ctx = Ctx { out: Emitter::new(cfg.output_format, sink), stamp: !cli.global.no_timestamp, cfg };
        let code = run(cli.command, &mut ctx)?;
        ctx.out.finish()?;
        Ok(code)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let msg = serde_json::json!({ "type": "error", "error": f.kind, "message": f.message });
            eprintln!("{msg}");
            ExitCode::from(f.code)
        }
    }
}
