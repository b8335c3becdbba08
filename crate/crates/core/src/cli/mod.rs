//! Command-line front end.
//!
//! Every command writes one JSON [`RunReport`]. Exit codes: 0 success,
//! 1 usage or invalid input, 2 I/O, 3 certification rejected, 4 no path,
//! 5 numeric failure. `QUADRIC_ATLAS_THREADS` sets the worker count.

pub mod io;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::admissibility::{
    self, certify_admissibility_with_cap, net::DEFAULT_NET_CAP, GeneratorParams,
};
use crate::connect::{self, ConnectOptions};
use crate::error::Error;
use crate::forms::{self, EvalVector, FormSpace};
use crate::seed::derive_seed;
use crate::solver::{self, AvoidSet, SolveOptions};
use io::{parse_json, read_text, to_json, vec_of, InstanceFile};

pub const THREADS_ENV: &str = "QUADRIC_ATLAS_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_REJECT: i32 = 3;
pub const EXIT_NO_PATH: i32 = 4;
pub const EXIT_NUMERIC: i32 = 5;

#[derive(Parser, Debug)]
#[command(
    name = "quadric-atlas",
    version,
    about = "Admissibility, solving and connectivity for systems of real quadrics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate an m-admissible instance.
    Gen(GenArgs),
    /// Certify m-admissibility with a covering net.
    Certify(CertifyArgs),
    /// Solve E(v) = t, or find a nonsingular null vector with `--target null`.
    Solve(SolveArgs),
    /// Connect two nonsingular null vectors by a verified path.
    Connect(ConnectArgs),
    /// Monte Carlo connectivity statistics over random pairs.
    Experiment(ExperimentArgs),
    /// Verify a path file.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(short = 'k')]
    k: usize,
    #[arg(short = 'm')]
    m: usize,
    /// Ambient dimension (default 2mk).
    #[arg(short = 'n')]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    disguise: bool,
    /// Instance destination; without it the instance goes to stdout and the report to stderr.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[arg(short, long)]
    instance: PathBuf,
    #[arg(short = 'm')]
    m: usize,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    #[arg(long, default_value_t = DEFAULT_NET_CAP)]
    max_net_points: usize,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(short, long)]
    instance: PathBuf,
    /// JSON array of k values, or `null`.
    #[arg(long)]
    target: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Avoid-set file: {"clearance": ρ, "subspaces": [[spanning vectors], ...]}.
    #[arg(long)]
    avoid: Option<PathBuf>,
    #[arg(long)]
    max_restarts: Option<usize>,
    #[arg(long)]
    no_fallback: bool,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ConnectArgs {
    #[arg(short, long)]
    instance: PathBuf,
    /// Start point as a JSON array.
    #[arg(long, requires = "q", required_unless_present = "random_pair")]
    p: Option<String>,
    /// End point as a JSON array.
    #[arg(long, requires = "p")]
    q: Option<String>,
    /// Draw both endpoints with the solver.
    #[arg(long, conflicts_with_all = ["p", "q"])]
    random_pair: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    avoid: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[arg(short, long)]
    instance: PathBuf,
    #[arg(long, default_value_t = 100)]
    pairs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(short, long)]
    instance: PathBuf,
    #[arg(long)]
    path: PathBuf,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long)]
    avoid: Option<PathBuf>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub total_ms: f64,
}

/// Machine-readable output of every command. `results` is deterministic for
/// a fixed seed; `timings` is not.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub command: Value,
    pub seed: Option<u64>,
    pub exit_code: i32,
    pub timings: Timings,
    pub results: Value,
}

#[derive(Debug)]
enum Failure {
    Io(String),
    Lib(Error),
    /// Command ran but its verdict is negative; results still reported.
    Verdict(i32, Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Input(_) | Error::Precondition(_) => EXIT_USAGE,
        Error::NoPath { .. } | Error::Escalate(_) => EXIT_NO_PATH,
        _ => EXIT_NUMERIC,
    }
}

fn error_payload(e: &Error) -> Value {
    let kind = match e {
        Error::Input(_) => "input",
        Error::Precondition(_) => "precondition",
        Error::Numeric(_) => "numeric",
        Error::Infeasible(_) => "infeasible",
        Error::Resource(_) => "resource",
        Error::NoSolution { .. } => "no_solution",
        Error::Clearance(_) => "clearance",
        Error::Escalate(_) => "escalate",
        Error::NoPath { .. } => "no_path",
    };
    let mut out = json!({ "kind": kind, "message": e.to_string() });
    match e {
        Error::NoSolution {
            restarts,
            best_residual,
            sign_history,
        } => {
            out["restarts"] = json!(restarts);
            out["best_residual"] = json!(best_residual);
            out["sign_history"] = json!(sign_history);
        }
        Error::NoPath { stage, detail } => {
            out["stage"] = json!(stage);
            out["detail"] = json!(detail);
        }
        _ => {}
    }
    out
}

fn read_file(path: &Path) -> Result<String, Failure> {
    read_text(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<FormSpace, Failure> {
    let inst: InstanceFile = parse_json(&read_file(path)?, "instance")?;
    Ok(inst.to_space()?)
}

#[derive(Deserialize)]
struct AvoidFile {
    clearance: f64,
    subspaces: Vec<Vec<Vec<f64>>>,
}

fn load_avoid(path: Option<&Path>, n: usize) -> Result<AvoidSet, Failure> {
    let Some(path) = path else {
        return Ok(AvoidSet::empty());
    };
    let file: AvoidFile = parse_json(&read_file(path)?, "avoid file")?;
    let spans = file
        .subspaces
        .iter()
        .enumerate()
        .map(|(i, cols)| {
            if cols.is_empty() || cols.iter().any(|c| c.len() != n) {
                return Err(Error::Input(format!(
                    "avoid subspace {i} needs spanning vectors of length {n}"
                )));
            }
            let cols: Vec<DVector<f64>> =
                cols.iter().map(|c| DVector::from_column_slice(c)).collect();
            Ok(DMatrix::from_columns(&cols))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(AvoidSet::new(spans, file.clearance)?)
}

fn parse_vector(text: &str, what: &str, n: usize) -> Result<DVector<f64>, Failure> {
    let xs: Vec<f64> = parse_json(text, what)?;
    if xs.len() != n {
        return Err(Error::Input(format!("{what} has length {}, expected {n}", xs.len())).into());
    }
    Ok(DVector::from_vec(xs))
}

fn cmd_gen(a: &GenArgs) -> Result<(Value, Option<String>), Failure> {
    let params = GeneratorParams {
        k: a.k,
        m: a.m,
        ambient_n: a.n,
        seed: a.seed,
        disguise: a.disguise,
    };
    let space = admissibility::make_admissible_space(&params)?;
    let meta = json!({ "generator": serde_json::to_value(&params).expect("plain struct") });
    let text = to_json(&InstanceFile::from_space(&space, meta))? + "\n";
    let constants = [-1, 0, 1]
        .iter()
        .map(|&i| admissibility::theorem_constants(i, a.k as i64, 1))
        .collect::<Result<Vec<_>, _>>()?;
    let mut results = json!({
        "n": space.dim_v(),
        "k": space.dim_w(),
        "m": a.m,
        "theorem_constants": constants,
    });
    match &a.out {
        Some(path) => {
            write_file(path, &text)?;
            results["instance_path"] = json!(path.display().to_string());
            Ok((results, None))
        }
        None => Ok((results, Some(text))),
    }
}

fn cmd_certify(a: &CertifyArgs) -> Result<Value, Failure> {
    let space = load_instance(&a.instance)?;
    let cert = certify_admissibility_with_cap(&space, a.m, a.delta, a.max_net_points)?;
    let value = serde_json::to_value(&cert).expect("plain struct");
    if cert.is_certified() {
        Ok(value)
    } else {
        Err(Failure::Verdict(EXIT_REJECT, value))
    }
}

fn cmd_solve(a: &SolveArgs) -> Result<Value, Failure> {
    let space = load_instance(&a.instance)?;
    let mut opts = SolveOptions::with_seed(a.seed);
    opts.avoid = load_avoid(a.avoid.as_deref(), space.dim_v())?;
    opts.fallback_enabled = !a.no_fallback;
    if let Some(r) = a.max_restarts {
        opts.max_restarts = r;
    }
    let target: Value = parse_json(&a.target, "target")?;
    let (res, t) = if target.is_null() {
        (
            solver::solve_null(&space, &opts)?,
            EvalVector::zeros(space.dim_w()),
        )
    } else {
        let t = EvalVector::new(parse_vector(&a.target, "target", space.dim_w())?);
        (solver::solve_e(&space, &t, &opts)?, t)
    };
    let eval = forms::eval_map(&space, &res.v)?;
    Ok(json!({
        "target": vec_of(&t.coords),
        "v": vec_of(&res.v),
        "eval": vec_of(&eval.coords),
        "residual": res.residual,
        "restarts_used": res.restarts_used,
        "path_taken": res.path_taken,
        "nonsingular": forms::is_w_independent(&space, std::slice::from_ref(&res.v), opts.rank_tol)?,
    }))
}

fn cmd_connect(a: &ConnectArgs) -> Result<Value, Failure> {
    let space = load_instance(&a.instance)?;
    let mut opts = ConnectOptions::with_seed(a.seed);
    opts.solve.avoid = load_avoid(a.avoid.as_deref(), space.dim_v())?;
    opts.verify_samples = a.samples;
    let n = space.dim_v();
    let (p, q) = if a.random_pair {
        let draw = |label: &str| -> Result<DVector<f64>, Error> {
            let mut o = opts.solve.clone();
            o.seed = derive_seed(a.seed, label, 0);
            Ok(solver::solve_null(&space, &o)?.v)
        };
        (draw("cli-p")?, draw("cli-q")?)
    } else {
        let p =
            a.p.as_deref()
                .ok_or_else(|| Error::Input("--p is required".into()))?;
        let q =
            a.q.as_deref()
                .ok_or_else(|| Error::Input("--q is required".into()))?;
        (parse_vector(p, "p", n)?, parse_vector(q, "q", n)?)
    };
    match connect::connect(&space, &p, &q, &opts) {
        Ok(c) => Ok(json!({
            "p": vec_of(&p),
            "q": vec_of(&q),
            "knots": c.path.knots_as_vecs(),
            "escalated": c.escalated,
            "escalation_reason": c.escalation_reason,
            "restarts": c.restarts,
            "report": c.report,
        })),
        Err(e) => {
            let mut payload = json!({ "p": vec_of(&p), "q": vec_of(&q) });
            payload["error"] = error_payload(&e);
            Err(Failure::Verdict(exit_code(&e), payload))
        }
    }
}

fn cmd_experiment(a: &ExperimentArgs) -> Result<Value, Failure> {
    let space = load_instance(&a.instance)?;
    let stats =
        connect::monte_carlo_connectivity(&space, a.pairs, &ConnectOptions::default(), a.seed)?;
    Ok(serde_json::to_value(&stats).expect("plain struct"))
}

fn cmd_verify(a: &VerifyArgs) -> Result<Value, Failure> {
    let space = load_instance(&a.instance)?;
    let knots = io::parse_knots(&read_file(&a.path)?)?;
    let mut opts = ConnectOptions::default();
    opts.solve.avoid = load_avoid(a.avoid.as_deref(), space.dim_v())?;
    let report = connect::verify_path(&space, &knots, a.samples, &opts)?;
    let value = serde_json::to_value(&report).expect("plain struct");
    if report.verified {
        Ok(value)
    } else {
        Err(Failure::Verdict(EXIT_NO_PATH, value))
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got `{raw}`"))?;
    // A pool built earlier in the same process wins; that is fine for tests.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    Ok(())
}

fn command_echo(cmd: &Command) -> (Value, Option<u64>) {
    let path = |p: &Path| p.display().to_string();
    match cmd {
        Command::Gen(a) => (
            json!({"name": "gen", "k": a.k, "m": a.m, "n": a.n, "disguise": a.disguise, "out": a.out.as_deref().map(path)}),
            Some(a.seed),
        ),
        Command::Certify(a) => (
            json!({"name": "certify", "instance": path(&a.instance), "m": a.m, "delta": a.delta, "max_net_points": a.max_net_points}),
            None,
        ),
        Command::Solve(a) => (
            json!({"name": "solve", "instance": path(&a.instance), "target": a.target, "avoid": a.avoid.as_deref().map(path), "max_restarts": a.max_restarts, "no_fallback": a.no_fallback}),
            Some(a.seed),
        ),
        Command::Connect(a) => (
            json!({"name": "connect", "instance": path(&a.instance), "p": a.p, "q": a.q, "random_pair": a.random_pair, "avoid": a.avoid.as_deref().map(path), "samples": a.samples}),
            Some(a.seed),
        ),
        Command::Experiment(a) => (
            json!({"name": "experiment", "instance": path(&a.instance), "pairs": a.pairs}),
            Some(a.seed),
        ),
        Command::Verify(a) => (
            json!({"name": "verify", "instance": path(&a.instance), "path": path(&a.path), "samples": a.samples, "avoid": a.avoid.as_deref().map(path)}),
            None,
        ),
    }
}

fn out_path(cmd: &Command) -> Option<&Path> {
    match cmd {
        Command::Gen(_) => None,
        Command::Certify(a) => a.out.as_deref(),
        Command::Solve(a) => a.out.as_deref(),
        Command::Connect(a) => a.out.as_deref(),
        Command::Experiment(a) => a.out.as_deref(),
        Command::Verify(a) => a.out.as_deref(),
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(stdout, "{text}")
            } else {
                write!(stderr, "{text}")
            };
            return code;
        }
    };
    if let Err(msg) = configure_threads() {
        let _ = writeln!(stderr, "error: {msg}");
        return EXIT_USAGE;
    }
    let start = Instant::now();
    let mut side_output = None;
    let outcome = match &cli.command {
        Command::Gen(a) => cmd_gen(a).map(|(v, text)| {
            side_output = text;
            v
        }),
        Command::Certify(a) => cmd_certify(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Connect(a) => cmd_connect(a),
        Command::Experiment(a) => cmd_experiment(a),
        Command::Verify(a) => cmd_verify(a),
    };
    let (code, results) = match outcome {
        Ok(v) => (EXIT_OK, v),
        Err(Failure::Verdict(code, v)) => (code, v),
        Err(Failure::Io(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            (
                EXIT_IO,
                json!({ "error": { "kind": "io", "message": msg } }),
            )
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            (exit_code(&e), json!({ "error": error_payload(&e) }))
        }
    };
    let (command, seed) = command_echo(&cli.command);
    let report = RunReport {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command,
        seed,
        exit_code: code,
        timings: Timings {
            total_ms: start.elapsed().as_secs_f64() * 1e3,
        },
        results,
    };
    let text = match to_json(&report) {
        Ok(t) => t + "\n",
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_NUMERIC;
        }
    };
    match (side_output, out_path(&cli.command)) {
        (Some(instance), _) => {
            let _ = write!(stdout, "{instance}");
            let _ = write!(stderr, "{text}");
        }
        (None, Some(path)) => {
            if let Err(Failure::Io(msg)) = write_file(path, &text) {
                let _ = writeln!(stderr, "error: {msg}");
                return EXIT_IO;
            }
        }
        (None, None) => {
            let _ = write!(stdout, "{text}");
        }
    }
    code
}
