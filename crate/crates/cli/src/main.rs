use std::path::PathBuf;
use std::time::Instant;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use symcoh::problem::ProblemFile;
use symcoh::report;
use symcoh::verify;
use symcoh_core::bott;
use symcoh_core::cohomology::{
    ample_check, h0_surface_positive_twist, h_all, h_all_exact, phi_kernel, poly_display,
    psi_kernel, sweep, witness, CohomologyError, CohomologyReport, Method, QueryOpts, VerifyLevel,
    DEFAULT_PRIMES,
};
use symcoh_core::complexes::Problem;

/// Exact cohomology of twisted symmetric powers of cotangent bundles of
/// smooth complete intersections in projective space.
#[derive(Parser)]
#[command(name = "symcoh", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Comma-separated list of odd primes below 2^31.
    #[arg(long, value_delimiter = ',', global = false)]
    primes: Option<Vec<u64>>,
    /// A single prime (shorthand for --primes with one entry).
    #[arg(long, conflicts_with = "primes")]
    prime: Option<u64>,
    /// 0: no structural checks; 1: D^2=0 (and descent on small instances);
    /// 2: force explicit matrices and run every check.
    #[arg(long, default_value_t = 1)]
    verify_level: u8,
    /// Cap the worker pool (default: all cores). Parallelism is task-level
    /// across primes and sweep cells; each elimination is single-threaded.
    #[arg(long)]
    threads: Option<usize>,
    /// Also certify the ranks by fraction-free rational elimination
    /// (refused on instances with more than --exact-bound rows and columns).
    #[arg(long)]
    exact: bool,
    /// Size bound for --exact.
    #[arg(long, default_value_t = 2000)]
    exact_bound: usize,
}

impl CommonOpts {
    fn query_opts(&self) -> QueryOpts {
        let primes = match (&self.primes, self.prime) {
            (Some(ps), _) => ps.clone(),
            (None, Some(p)) => vec![p],
            (None, None) => DEFAULT_PRIMES.to_vec(),
        };
        QueryOpts {
            primes,
            verify: VerifyLevel::from_u8(self.verify_level),
            ..QueryOpts::default()
        }
    }

    fn init_threads(&self) {
        if let Some(t) = self.threads {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form cohomology of S^m Omega_{P^N}(m+n) on projective space.
    Bott {
        #[arg(long = "N")]
        ambient: usize,
        #[arg(long)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// h^i(X, S^m Omega_X(m-n)) for a problem file.
    Hi {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        i: i64,
        #[arg(long, default_value = "both")]
        method: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// h^0(X, S^m Omega_X(m+t)) for a complete intersection surface,
    /// through Serre duality.
    #[command(name = "h0-surface")]
    H0Surface {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        m: i64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        t: i64,
        #[arg(long, default_value = "complex1")]
        method: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Kernel of the quadric multiplication map into coker(delta);
    /// dimension of the twisted symmetric algebra in degree m.
    Phi0 {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        m: i64,
        /// Also print a kernel basis.
        #[arg(long)]
        basis: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Kernel of the minimal-degree multiplication map into coker(delta);
    /// nonzero certifies a global section at the sharp twist.
    Psi {
        #[arg(long)]
        problem: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// The three-vanishing ampleness criterion for surfaces in P^4.
    AmpleCheck {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        m: i64,
        #[arg(long, default_value = "complex1")]
        method: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Batch h^i over a grid of (m, n).
    Table {
        #[arg(long)]
        problem: PathBuf,
        /// Inclusive range, e.g. 1:4.
        #[arg(long = "m-range")]
        m_range: String,
        /// Inclusive range, e.g. 2:6.
        #[arg(long = "n-range")]
        n_range: String,
        /// Comma-separated degrees.
        #[arg(long, value_delimiter = ',')]
        i: Vec<i64>,
        #[arg(long, default_value = "complex1")]
        method: String,
        /// Emit CSV (header m,n,i,h,method,prime) instead of JSON.
        #[arg(long)]
        csv: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Extract and re-verify a kernel witness polynomial.
    Witness {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 0)]
        position: usize,
        #[arg(long, default_value = "complex1")]
        method: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run the built-in invariant suite and report pass/fail counts.
    Verify {
        /// Optional problem file to include in the structural checks.
        #[arg(long)]
        problem: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(cli));
}

fn parse_method(s: &str) -> Result<Method, CliFailure> {
    Method::parse(s).ok_or_else(|| {
        CliFailure::validity(format!("unknown method {s:?}; expected complex1, complex2 or both"))
    })
}

struct CliFailure {
    message: String,
    code: i32,
}

impl CliFailure {
    fn validity(message: String) -> Self {
        CliFailure { message, code: 1 }
    }
}

impl From<CohomologyError> for CliFailure {
    fn from(e: CohomologyError) -> Self {
        CliFailure { message: e.to_string(), code: symcoh::exit_code_for(&e) }
    }
}

impl From<anyhow::Error> for CliFailure {
    fn from(e: anyhow::Error) -> Self {
        CliFailure::validity(format!("{e:#}"))
    }
}

fn run(cli: Cli) -> i32 {
    let start = Instant::now();
    let outcome = dispatch(cli, start);
    match outcome {
        Ok(value) => {
            println!("{}", serde_json::to_string_pretty(&value).expect("serializable report"));
            0
        }
        Err(fail) => {
            let err = json!({
                "tool": report::TOOL,
                "version": report::VERSION,
                "error": fail.message,
                "exit_code": fail.code,
            });
            println!("{}", serde_json::to_string_pretty(&err).unwrap());
            eprintln!("error: {}", fail.message);
            fail.code
        }
    }
}

fn load(path: &std::path::Path) -> Result<(ProblemFile, Problem), CliFailure> {
    let file = ProblemFile::load(path)?;
    let prob = file.to_problem()?;
    Ok((file, prob))
}

/// Run `h_all` over the primes of `opts` in parallel, merging with the
/// same agreement rule as the sequential path.
fn h_all_parallel(
    prob: &Problem,
    m: i64,
    n: i64,
    method: Method,
    opts: &QueryOpts,
) -> Result<CohomologyReport, CohomologyError> {
    use rayon::prelude::*;
    if opts.primes.len() < 2 {
        return h_all(prob, m, n, method, opts);
    }
    let runs: Vec<Result<CohomologyReport, CohomologyError>> = opts
        .primes
        .par_iter()
        .map(|&p| {
            let single = QueryOpts { primes: vec![p], ..opts.clone() };
            h_all(prob, m, n, method, &single)
        })
        .collect();
    let mut merged: Option<CohomologyReport> = None;
    for run in runs {
        let rep = run?;
        match &mut merged {
            None => merged = Some(rep),
            Some(base) => {
                if base.h != rep.h || base.term_dims != rep.term_dims || base.ranks != rep.ranks {
                    return Err(CohomologyError::Disagreement(format!(
                        "primes {:?} and {:?} disagree at (m,n)=({m},{n}): {:?} vs {:?}",
                        base.primes, rep.primes, base.h, rep.h
                    )));
                }
            }
        }
    }
    let mut rep = merged.unwrap();
    rep.primes = opts.primes.clone();
    Ok(rep)
}

fn dispatch(cli: Cli, start: Instant) -> Result<Value, CliFailure> {
    match cli.command {
        Command::Bott { ambient, m, n } => {
            if m < 0 {
                return Err(CliFailure::validity("m must be nonnegative".into()));
            }
            let h = bott::proj_cotangent_cohomology(ambient, m, n);
            let mut map = report::envelope(
                "bott",
                json!({"N": ambient, "m": m, "n": n, "twist": m + n}),
            );
            let hjson: Value = Value::Object(
                h.iter()
                    .map(|(k, v)| {
                        let val = u64::try_from(v)
                            .map(|x| json!(x))
                            .unwrap_or_else(|_| json!(v.to_string()));
                        (k.to_string(), val)
                    })
                    .collect(),
            );
            map.insert("h".into(), hjson);
            Ok(report::finish(map, start.elapsed().as_millis() as u64))
        }
        Command::Hi { problem, m, n, i, method, common } => {
            common.init_threads();
            let (file, prob) = load(&problem)?;
            let method = parse_method(&method)?;
            let opts = common.query_opts();
            if i < 0 || i > prob.dim() {
                return Err(CliFailure::validity(format!(
                    "degree i={i} outside [0, {}]",
                    prob.dim()
                )));
            }
            let mut rep = if common.threads != Some(1) {
                h_all_parallel(&prob, m, n, method, &opts)?
            } else {
                h_all(&prob, m, n, method, &opts)?
            };
            let mut map = report::envelope(
                "hi",
                json!({
                    "problem": problem.display().to_string(),
                    "description": file.description,
                    "m": m, "n": n, "i": i,
                }),
            );
            if common.exact {
                let exact = h_all_exact(&prob, m, n, method, common.exact_bound)?;
                for (&deg, &v) in &exact {
                    if rep.value(deg) != v {
                        return Err(CliFailure::from(CohomologyError::Disagreement(format!(
                            "exact rank differs from modular at degree {deg}: {v} vs {}",
                            rep.value(deg)
                        ))));
                    }
                }
                rep.flags.push("exact-certified".to_string());
            }
            map.insert("value".into(), json!(rep.value(i)));
            report::add_cohomology(&mut map, &rep);
            Ok(report::finish(map, start.elapsed().as_millis() as u64))
        }
        Command::H0Surface { problem, m, t, method, common } => {
            common.init_threads();
            let (file, prob) = load(&problem)?;
            let method = parse_method(&method)?;
            let opts = common.query_opts();
            let rep = h0_surface_positive_twist(&prob, m, t, method, &opts)?;
            let mut map = report::envelope(
                "h0-surface",
                json!({
                    "problem": problem.display().to_string(),
                    "description": file.description,
                    "m": m, "t": t, "dual_n": rep.n,
                }),
            );
            map.insert("value".into(), json!(rep.value(2)));
            report::add_cohomology(&mut map, &rep);
            Ok(report::finish(map, start.elapsed().as_millis() as u64))
        }
        Command::Phi0 { problem, m, basis, common } => {
            common.init_threads();
            let (file, prob) = load(&problem)?;
            let opts = common.query_opts();
            let out = phi_kernel(&prob, m, &opts)?;
            let mut map = report::envelope(
                "phi0",
                json!({
                    "problem": problem.display().to_string(),
                    "description": file.description,
                    "m": m,
                }),
            );
            map.insert("value".into(), json!(out.dimension));
            map.insert("primes".into(), json!(opts.primes));
            map.insert("flags".into(), json!(out.flags));
            if basis {
                let rendered: Vec<Vec<String>> = out
                    .basis
                    .iter()
                    .map(|tuple| tuple.iter().map(poly_display).collect())
                    .collect();
                map.insert("basis".into(), json!(rendered));
            }
            Ok(report::finish(map, start.elapsed().as_millis() as u64))
        }
        Command::Psi { problem, common } => {
            common.init_threads();
            let (file, prob) = load(&problem)?;
            let opts = common.query_opts();
            let out = psi_kernel(&prob, &opts)?;
            let mut map = report::envelope(
                "psi",
                json!({
                    "problem": problem.display().to_string(),
                    "description": file.description,
                }),
            );
            map.insert("value".into(), json!(out.dimension));
            map.insert("m".into(), json!(out.m));
            map.insert("degree".into(), json!(out.degree));
            map.insert("sources".into(), json!(out.sources));
            map.insert("primes".into(), json!(opts.primes));
            map.insert(
                "certifies_nonvanishing".into(),
                json!(out.dimension > 0),
            );
            Ok(report::finish(map, start.elapsed().as_millis() as u64))
        }
        Command::AmpleCheck { problem, m, method, common } => {
            common.init_threads();
            let (file, prob) = load(&problem)?;
            let method = parse_method(&method)?;
            let opts = common.query_opts();
            let out = ample_check(&prob, m, method, &opts)?;
            let mut map = report::envelope(
                "ample-check",
                json!({
                    "problem": problem.display().to_string(),
                    "description": file.description,
                    "m": m,
                }),
            );
            map.insert("ample_certified".into(), json!(out.ample_certified));
            if let Some(f) = &out.failing {
                map.insert("failing_group".into(), json!(f));
            }
            let sub: Vec<Value> = out
                .queries
                .iter()
                .map(|q| {
                    json!({
                        "m": q.m, "n": q.n, "twist": q.m - q.n,
                        "h": report::h_map(&q.h),
                    })
                })
                .collect();
            map.insert("queries".into(), json!(sub));
            map.insert("primes".into(), json!(opts.primes));
            Ok(report::finish(map, start.elapsed().as_millis() as u64))
        }
        Command::Table { problem, m_range, n_range, i, method, csv, common } => {
            common.init_threads();
            let (file, prob) = load(&problem)?;
            let method = parse_method(&method)?;
            let opts = common.query_opts();
            let ms = parse_range(&m_range)?;
            let ns = parse_range(&n_range)?;
            let degrees = if i.is_empty() {
                (0..=prob.dim()).collect::<Vec<_>>()
            } else {
                i
            };
            // cells are independent deterministic pipelines; run them in
            // parallel and reassemble in grid order
            use rayon::prelude::*;
            let grid: Vec<(i64, i64)> =
                ms.iter().flat_map(|&m| ns.iter().map(move |&n| (m, n))).collect();
            let cells: Vec<symcoh_core::cohomology::SweepCell> = grid
                .par_iter()
                .flat_map_iter(|&(m, n)| {
                    sweep(&prob, &[m], &[n], &degrees, method, &opts).into_iter()
                })
                .collect();
            if csv {
                // CSV goes raw to stdout; not wrapped in JSON
                print!("{}", report::sweep_csv(&cells, method.name(), &opts.primes));
                std::process::exit(0);
            }
            let mut map = report::envelope(
                "table",
                json!({
                    "problem": problem.display().to_string(),
                    "description": file.description,
                    "m_range": m_range, "n_range": n_range, "i": degrees,
                }),
            );
            map.insert("method".into(), json!(method.name()));
            map.insert("primes".into(), json!(opts.primes));
            map.insert("cells".into(), report::sweep_json(&cells));
            Ok(report::finish(map, start.elapsed().as_millis() as u64))
        }
        Command::Witness { problem, m, n, position, method, common } => {
            common.init_threads();
            let (file, prob) = load(&problem)?;
            let method = parse_method(&method)?;
            let opts = common.query_opts();
            let out = witness(&prob, m, n, position, method, &opts)?;
            let mut map = report::envelope(
                "witness",
                json!({
                    "problem": problem.display().to_string(),
                    "description": file.description,
                    "m": m, "n": n, "position": position,
                }),
            );
            map.insert("kernel_dimension".into(), json!(out.kernel_dimension));
            map.insert("prime".into(), json!(out.prime));
            map.insert("nonzero_in_quotient".into(), json!(out.nonzero_in_quotient));
            map.insert("maps_to_zero".into(), json!(out.maps_to_zero));
            map.insert("verified".into(), json!(out.nonzero_in_quotient && out.maps_to_zero));
            let comp: Vec<Value> = out
                .components
                .iter()
                .map(|(label, poly)| json!({"summand": label, "polynomial": poly}))
                .collect();
            map.insert("components".into(), json!(comp));
            if !(out.nonzero_in_quotient && out.maps_to_zero) {
                return Err(CliFailure::from(CohomologyError::Disagreement(
                    "witness verification failed".into(),
                )));
            }
            Ok(report::finish(map, start.elapsed().as_millis() as u64))
        }
        Command::Verify { problem } => {
            let prob = match &problem {
                Some(path) => Some(load(path)?.1),
                None => None,
            };
            let checks = verify::run_all(prob.as_ref());
            let passed = checks.iter().filter(|c| c.passed).count();
            let failed = checks.len() - passed;
            for c in &checks {
                eprintln!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            let mut map = report::envelope("verify", json!({}));
            map.insert(
                "checks".into(),
                json!(checks
                    .iter()
                    .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
                    .collect::<Vec<_>>()),
            );
            map.insert("passed".into(), json!(passed));
            map.insert("failed".into(), json!(failed));
            let value = report::finish(map, start.elapsed().as_millis() as u64);
            if failed > 0 {
                println!("{}", serde_json::to_string_pretty(&value).unwrap());
                std::process::exit(2);
            }
            Ok(value)
        }
    }
}

fn parse_range(text: &str) -> Result<Vec<i64>, CliFailure> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || CliFailure::validity(format!("range {text:?} is not of the form a:b"));
    match parts.as_slice() {
        [a, b] => {
            let lo: i64 = a.parse().map_err(|_| bad())?;
            let hi: i64 = b.parse().map_err(|_| bad())?;
            if lo > hi {
                return Err(bad());
            }
            Ok((lo..=hi).collect())
        }
        [a] => {
            let v: i64 = a.parse().map_err(|_| bad())?;
            Ok(vec![v])
        }
        _ => Err(bad()),
    }
}
