//! Command-line front end.
//!
//! Exit codes: 0 success, 1 invalid input or usage, 2 numerical
//! non-convergence, 3 a `--check` or comparison threshold was not met.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::analysis::{
    self, farthest_pair_peak, lambda_step, linspace, log_poly_fit, logspace, power_law_fit,
    tfim_lambda_derivative, FitResult, Side, SweepRecord, SweepSpec,
};
use crate::denmat::{self, random};
use crate::edoracle::EdChain;
use crate::error::Error;
use crate::ising2d::{self, Ensemble};
use crate::tfim::{self, FreeFermionChain, Sector};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CONVERGENCE: i32 = 2;
pub const EXIT_CHECK: i32 = 3;

pub const CSV_HEADER: &str = "model,T,lambda,N,r,S_i,S_j,S_ij,MI,tag";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "critent",
    version,
    about = "Two-site mutual information (correlation entropy) of exactly solvable spin models",
    args_override_self = true
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalOpts {
    /// JSON file whose keys are long flag names; flags given on the command line win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for sweeps and scans.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Heisenberg dimer: MI as a function of temperature (units of the exchange coupling).
    Dimer(TempGrid),
    /// Classical 2D Ising model, diagonal pairs (T in units of the Ising coupling).
    ///
    /// Toeplitz coefficients come from trapezoid quadrature of the symbol,
    /// starting at 4096 points and doubling until successive estimates agree.
    Ising2d {
        #[command(subcommand)]
        cmd: IsingCmd,
    },
    /// Transverse-field Ising ring (T and lambda in units of the transverse field).
    Tfim {
        #[command(subcommand)]
        cmd: TfimCmd,
    },
    /// Free-fermion vs exact-diagonalization comparison.
    Oracle {
        #[command(subcommand)]
        cmd: OracleCmd,
    },
    /// Least-squares fits of two-column (x, y) CSV data.
    Fit {
        #[command(subcommand)]
        cmd: FitCmd,
    },
    /// Randomized density-matrix property checks (Klein inequality, MI identities).
    Props {
        /// Number of random states per check.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
}

#[derive(Debug, Args)]
struct TempGrid {
    #[arg(long, default_value_t = 0.1)]
    t_min: f64,
    #[arg(long, default_value_t = 10.0)]
    t_max: f64,
    #[arg(long, default_value_t = 100)]
    t_count: usize,
}

#[derive(Debug, Subcommand)]
enum IsingCmd {
    /// Diagonal correlations <s(0,0) s(N,N)> for N = 1..n-max.
    Corr {
        /// Temperature.
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
    },
    /// MI between (0,0) and (N,N).
    Mi {
        /// Temperature.
        #[arg(long)]
        t: f64,
        /// Diagonal separation.
        #[arg(long)]
        n: usize,
        /// symmetric (m = 0) or broken (m = spontaneous magnetization below T_c).
        #[arg(long, default_value = "symmetric")]
        ensemble: Ensemble,
    },
    /// MI over a temperature by separation grid.
    Sweep {
        #[command(flatten)]
        temps: TempGrid,
        #[arg(long, default_value_t = 1)]
        n_min: usize,
        #[arg(long, default_value_t = 50)]
        n_max: usize,
        #[arg(long, default_value = "symmetric")]
        ensemble: Ensemble,
    },
    /// Power-law (below T_c) or log-law (above T_c) fit of dMI/dT.
    /// T-steps are min(1e-3, |T - T_c|/10).
    Exponents {
        #[arg(long, value_enum, default_value = "below")]
        side: SideArg,
        #[arg(long, default_value_t = 30)]
        n: usize,
        #[arg(long, default_value_t = 1e-3)]
        d_min: f64,
        #[arg(long, default_value_t = 1e-1)]
        d_max: f64,
        #[arg(long, default_value_t = 21)]
        count: usize,
        #[arg(long, default_value = "symmetric")]
        ensemble: Ensemble,
        /// Exit 3 unless the exponent is -0.75 +/- 0.05 (below) or the
        /// relative residual is under 5% (above).
        #[arg(long)]
        check: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SideArg {
    Below,
    Above,
}

#[derive(Debug, Subcommand)]
enum TfimCmd {
    /// MI between sites 0 and r.
    Mi {
        /// Ising coupling relative to the transverse field.
        #[arg(long)]
        lambda: f64,
        /// Temperature (0 for the ground state).
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        /// Ring length (even).
        #[arg(long)]
        n: usize,
        /// Separation, 1 <= r <= N/2.
        #[arg(long)]
        r: usize,
        /// Parity sector whose momenta are used (even: half-odd q).
        #[arg(long, default_value = "even")]
        sector: Sector,
    },
    /// MI over a lambda by temperature by size by separation grid.
    Sweep {
        #[arg(long, default_value_t = 0.0)]
        lambda_min: f64,
        #[arg(long, default_value_t = 2.0)]
        lambda_max: f64,
        #[arg(long, default_value_t = 21)]
        lambda_count: usize,
        #[arg(long, default_value_t = 0.0)]
        t_min: f64,
        #[arg(long, default_value_t = 0.0)]
        t_max: f64,
        #[arg(long, default_value_t = 1)]
        t_count: usize,
        /// Ring lengths.
        #[arg(long, value_delimiter = ',', default_value = "100")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        r_min: usize,
        #[arg(long, default_value_t = 50)]
        r_max: usize,
        #[arg(long, default_value = "even")]
        sector: Sector,
    },
    /// Size scaling of dS/dlambda at T = 0 (lambda step min(1e-3, 0.1/N)).
    Scaling {
        /// nearest: dS(0,1)/dlambda at lambda = 1, fit a + b ln N.
        /// farthest: max over lambda of dS(0,N/2)/dlambda, fit a + b ln^3 N.
        #[arg(long, value_enum, default_value = "nearest")]
        pair: PairArg,
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[arg(long, default_value = "even")]
        sector: Sector,
        /// Exit 3 unless b > 0 and the relative residual is below 5% (nearest)
        /// or 10% and better than the ln N model (farthest).
        #[arg(long)]
        check: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PairArg {
    Nearest,
    Farthest,
}

#[derive(Debug, Subcommand)]
enum OracleCmd {
    /// Tabulate |free fermion - exact diagonalization| for every r <= N/2.
    Compare {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        /// Exit 3 if any difference exceeds this.
        #[arg(long, default_value_t = 1e-8)]
        max_abs_diff: f64,
        #[arg(long, default_value = "even")]
        sector: Sector,
    },
}

#[derive(Debug, Subcommand)]
enum FitCmd {
    /// y = A x^p.
    Power(FitInput),
    /// y = a + b ln x.
    Log(FitInput),
    /// y = a + b ln^3 x (or a full cubic in ln x with --full).
    Logcube {
        #[command(flatten)]
        input: FitInput,
        #[arg(long)]
        full: bool,
    },
}

#[derive(Debug, Args)]
struct FitInput {
    /// CSV with x in the first column and y in the second; '#' lines and a
    /// non-numeric header are skipped.
    #[arg(long)]
    input: PathBuf,
}

/// Failure carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Convergence { .. } | Error::NonRealDeterminant { .. } | Error::Numerical(_) => EXIT_CONVERGENCE,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_failure(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

/// Parsed output plus whether a requested check failed.
struct Outcome {
    body: String,
    check_failed: bool,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Self {
            body,
            check_failed: false,
        }
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = args.into_iter().map(Into::into).collect();
    let argv = match merge_config(argv) {
        Ok(a) => a,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            return f.code;
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_INPUT
                }
            };
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let written = match &cli.global.output {
                Some(path) => fs::write(path, &outcome.body).map_err(|e| e.to_string()),
                None => out.write_all(outcome.body.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: cannot write output: {e}");
                return EXIT_INPUT;
            }
            if outcome.check_failed {
                let _ = writeln!(err, "check failed");
                EXIT_CHECK
            } else {
                EXIT_OK
            }
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Splices `--config` values in front of the command-line flags so that the
/// latter override them.
fn merge_config(argv: Vec<String>) -> Result<Vec<String>, Failure> {
    let Some(pos) = argv.iter().position(|a| a == "--config" || a.starts_with("--config=")) else {
        return Ok(argv);
    };
    let path = if let Some(p) = argv[pos].strip_prefix("--config=") {
        p.to_string()
    } else {
        argv.get(pos + 1)
            .cloned()
            .ok_or_else(|| input_failure("--config needs a path"))?
    };
    let text = fs::read_to_string(&path).map_err(|e| input_failure(format!("cannot read config {path}: {e}")))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| input_failure(format!("invalid config {path}: {e}")))?;
    let Value::Object(map) = value else {
        return Err(input_failure("config must be a JSON object"));
    };
    let mut injected = Vec::new();
    for (key, v) in map {
        let flag = format!("--{}", key.replace('_', "-"));
        match v {
            Value::Bool(true) => injected.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Array(items) => {
                let joined: Vec<String> = items.iter().map(scalar_text).collect::<Result<_, _>>()?;
                injected.push(flag);
                injected.push(joined.join(","));
            }
            other => {
                injected.push(flag);
                injected.push(scalar_text(&other)?);
            }
        }
    }
    // after the subcommand words, before the first flag
    let first_flag = argv
        .iter()
        .skip(1)
        .position(|a| a.starts_with('-'))
        .map(|p| p + 1)
        .unwrap_or(argv.len());
    let mut merged = argv[..first_flag].to_vec();
    merged.extend(injected);
    merged.extend_from_slice(&argv[first_flag..]);
    Ok(merged)
}

fn scalar_text(v: &Value) -> Result<String, Failure> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        _ => Err(input_failure(format!("unsupported config value {v}"))),
    }
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    let g = &cli.global;
    if g.workers == 0 {
        return Err(input_failure("--workers must be >= 1"));
    }
    match &cli.command {
        Command::Dimer(grid) => {
            let temps = linspace(grid.t_min, grid.t_max, grid.t_count)?;
            let recs = analysis::sweep(&SweepSpec::Dimer { temperatures: temps }, g.workers)?;
            Ok(Outcome::ok(emit_records(&recs, g.format, &["T in units of the exchange coupling J"])))
        }
        Command::Ising2d { cmd } => ising_command(cmd, g),
        Command::Tfim { cmd } => tfim_command(cmd, g),
        Command::Oracle {
            cmd:
                OracleCmd::Compare {
                    n,
                    lambda,
                    t,
                    max_abs_diff,
                    sector,
                },
        } => oracle_compare(*n, *lambda, *t, *max_abs_diff, *sector, g.format),
        Command::Fit { cmd } => fit_command(cmd),
        Command::Props { trials } => props(*trials, g.seed),
    }
}

const ISING_UNITS: &[&str] = &["T in units of Ising coupling", "N is the diagonal separation"];
const TFIM_UNITS: &[&str] = &["T and lambda in units of the transverse field"];

fn ising_command(cmd: &IsingCmd, g: &GlobalOpts) -> Result<Outcome, Failure> {
    match cmd {
        IsingCmd::Corr { t, n_max } => {
            if *n_max < 1 {
                return Err(input_failure("--n-max must be >= 1"));
            }
            let gs = ising2d::diagonal_correlations(*t, *n_max)?;
            let body = match g.format {
                Format::Csv => {
                    let mut s = comment_lines(ISING_UNITS);
                    s.push_str("T,N,correlation\n");
                    for (k, v) in gs.iter().enumerate() {
                        s.push_str(&format!("{},{},{}\n", fmt_g(*t), k + 1, fmt_g(*v)));
                    }
                    s
                }
                Format::Json => to_json(&json!({
                    "units": ISING_UNITS,
                    "T": t,
                    "correlations": gs.iter().enumerate().map(|(k, v)| json!({"N": k + 1, "correlation": v})).collect::<Vec<_>>(),
                })),
            };
            Ok(Outcome::ok(body))
        }
        IsingCmd::Mi { t, n, ensemble } => {
            let spec = SweepSpec::Ising2d {
                temperatures: vec![*t],
                separations: vec![*n],
                ensemble: *ensemble,
            };
            single_record(&spec, g, ISING_UNITS)
        }
        IsingCmd::Sweep {
            temps,
            n_min,
            n_max,
            ensemble,
        } => {
            if n_min > n_max || *n_min < 1 {
                return Err(input_failure("need 1 <= n-min <= n-max"));
            }
            let spec = SweepSpec::Ising2d {
                temperatures: linspace(temps.t_min, temps.t_max, temps.t_count)?,
                separations: (*n_min..=*n_max).collect(),
                ensemble: *ensemble,
            };
            let recs = analysis::sweep(&spec, g.workers)?;
            Ok(Outcome::ok(emit_records(&recs, g.format, ISING_UNITS)))
        }
        IsingCmd::Exponents {
            side,
            n,
            d_min,
            d_max,
            count,
            ensemble,
            check,
        } => {
            let side = match side {
                SideArg::Below => Side::Below,
                SideArg::Above => Side::Above,
            };
            let distances = logspace(*d_min, *d_max, *count)?;
            let data = in_pool(g.workers, || analysis::ising_derivative_scan(*n, side, &distances, *ensemble))??;
            let (fit, pass) = match side {
                Side::Below => {
                    let pts: Vec<(f64, f64)> = data.iter().map(|p| (p.0, p.1.abs())).collect();
                    let fit = power_law_fit(&pts)?;
                    let pass = (fit.exponent().unwrap_or(f64::NAN) + 0.75).abs() <= 0.05;
                    (fit, pass)
                }
                Side::Above => {
                    let fit = log_poly_fit(&data, 1, false)?;
                    let pass = fit.relative_residual() < 0.05;
                    (fit, pass)
                }
            };
            let body = to_json(&json!({
                "side": side,
                "N": n,
                "ensemble": ensemble,
                "units": ISING_UNITS,
                "fit": fit,
                "relative_residual": fit.relative_residual(),
                "derivative": data.iter().map(|p| json!({"distance": p.0, "dMI_dT": p.1})).collect::<Vec<_>>(),
                "pass": pass,
            }));
            Ok(Outcome {
                body,
                check_failed: *check && !pass,
            })
        }
    }
}

fn tfim_command(cmd: &TfimCmd, g: &GlobalOpts) -> Result<Outcome, Failure> {
    match cmd {
        TfimCmd::Mi {
            lambda,
            t,
            n,
            r,
            sector,
        } => {
            tfim::TfimParams::with_sector(*lambda, *t, *n, *r, *sector)?;
            let spec = SweepSpec::Tfim {
                lambdas: vec![*lambda],
                temperatures: vec![*t],
                sizes: vec![*n],
                separations: vec![*r],
                sector: *sector,
            };
            single_record(&spec, g, TFIM_UNITS)
        }
        TfimCmd::Sweep {
            lambda_min,
            lambda_max,
            lambda_count,
            t_min,
            t_max,
            t_count,
            sizes,
            r_min,
            r_max,
            sector,
        } => {
            if r_min > r_max || *r_min < 1 {
                return Err(input_failure("need 1 <= r-min <= r-max"));
            }
            let spec = SweepSpec::Tfim {
                lambdas: linspace(*lambda_min, *lambda_max, *lambda_count)?,
                temperatures: linspace(*t_min, *t_max, *t_count)?,
                sizes: sizes.clone(),
                separations: (*r_min..=*r_max).collect(),
                sector: *sector,
            };
            let recs = analysis::sweep(&spec, g.workers)?;
            Ok(Outcome::ok(emit_records(&recs, g.format, TFIM_UNITS)))
        }
        TfimCmd::Scaling {
            pair,
            sizes,
            sector,
            check,
        } => {
            let (fit, extra, pass) = match pair {
                PairArg::Nearest => {
                    let sizes = sizes.clone().unwrap_or_else(|| (6..=12).map(|k| 1usize << k).collect());
                    let pts: Vec<(f64, f64)> = sizes
                        .iter()
                        .map(|&n| Ok((n as f64, tfim_lambda_derivative(1.0, n, 1, lambda_step(n), *sector)?)))
                        .collect::<Result<_, Error>>()?;
                    let fit = log_poly_fit(&pts, 1, false)?;
                    let pass = fit.slope() > 0.0 && fit.relative_residual() < 0.05;
                    let data = pts.iter().map(|p| json!({"N": p.0, "dS_dlambda": p.1})).collect::<Vec<_>>();
                    (fit, json!({"data": data}), pass)
                }
                PairArg::Farthest => {
                    let sizes = sizes.clone().unwrap_or_else(|| (5..=9).map(|k| 1usize << k).collect());
                    let peaks = in_pool(g.workers, || {
                        sizes
                            .iter()
                            .map(|&n| farthest_pair_peak(n, 0.7, 1.5, 0.005, *sector))
                            .collect::<Result<Vec<_>, Error>>()
                    })??;
                    let pts: Vec<(f64, f64)> = peaks.iter().map(|p| (p.n as f64, p.value)).collect();
                    let fit = log_poly_fit(&pts, 3, false)?;
                    let linear = log_poly_fit(&pts, 1, false)?;
                    let pass = fit.slope() > 0.0
                        && fit.relative_residual() < 0.10
                        && fit.residual_norm < linear.residual_norm;
                    (fit, json!({"peaks": peaks, "log_linear": linear}), pass)
                }
            };
            let body = to_json(&json!({
                "units": TFIM_UNITS,
                "fit": fit,
                "relative_residual": fit.relative_residual(),
                "details": extra,
                "pass": pass,
            }));
            Ok(Outcome {
                body,
                check_failed: *check && !pass,
            })
        }
    }
}

fn in_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| input_failure(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

fn single_record(spec: &SweepSpec, g: &GlobalOpts, units: &[&str]) -> Result<Outcome, Failure> {
    let recs = analysis::sweep(spec, 1)?;
    if let Some(e) = recs.iter().find_map(|r| r.error.clone()) {
        return Err(Failure {
            code: if e.contains("converge") { EXIT_CONVERGENCE } else { EXIT_INPUT },
            message: e,
        });
    }
    Ok(Outcome::ok(emit_records(&recs, g.format, units)))
}

/// One row of the `oracle compare` table.
#[derive(Debug, Clone, Serialize)]
pub struct DivergenceRow {
    pub r: usize,
    pub quantity: &'static str,
    pub free_fermion: f64,
    pub exact: f64,
    pub abs_diff: f64,
}

fn oracle_compare(n: usize, lambda: f64, t: f64, limit: f64, sector: Sector, format: Format) -> Result<Outcome, Failure> {
    let ed = EdChain::new(n, lambda)?;
    let chain = FreeFermionChain::new(lambda, t, n, sector)?;
    let profile = chain.correlation_profile(n / 2)?;
    let mut rows = Vec::new();
    for (k, c) in profile.iter().enumerate() {
        let r = k + 1;
        let rep = ed.observables(t, r)?;
        let mi = denmat::mutual_information(&tfim::pair_state(c)?)?.value();
        let pairs = [
            ("mz", c.mz, rep.correlations.mz),
            ("gxx", c.gxx, rep.correlations.gxx),
            ("gyy", c.gyy, rep.correlations.gyy),
            ("gzz", c.gzz, rep.correlations.gzz),
            ("MI", mi, rep.mi.mi.value()),
        ];
        for (q, a, b) in pairs {
            rows.push(DivergenceRow {
                r,
                quantity: q,
                free_fermion: a,
                exact: b,
                abs_diff: (a - b).abs(),
            });
        }
    }
    let worst = rows.iter().map(|r| r.abs_diff).fold(0.0, f64::max);
    let pass = worst <= limit;
    let body = match format {
        Format::Csv => {
            let mut s = comment_lines(TFIM_UNITS);
            s.push_str(&format!(
                "# N={n} lambda={} T={} sector={} max_abs_diff={} limit={}\n",
                fmt_g(lambda),
                fmt_g(t),
                sector.tag(),
                fmt_g(worst),
                fmt_g(limit)
            ));
            s.push_str("r,quantity,free_fermion,exact,abs_diff\n");
            for row in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    row.r,
                    row.quantity,
                    fmt_g(row.free_fermion),
                    fmt_g(row.exact),
                    fmt_g(row.abs_diff)
                ));
            }
            s
        }
        Format::Json => to_json(&json!({
            "N": n, "lambda": lambda, "T": t, "sector": sector,
            "units": TFIM_UNITS,
            "max_abs_diff": worst, "limit": limit, "pass": pass,
            "rows": rows,
        })),
    };
    Ok(Outcome {
        body,
        check_failed: !pass,
    })
}

fn read_xy(path: &PathBuf) -> Result<Vec<(f64, f64)>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| input_failure(format!("cannot read {}: {e}", path.display())))?;
    let mut pts = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split(',').map(str::trim);
        let (Some(x), Some(y)) = (cols.next(), cols.next()) else {
            return Err(input_failure(format!("line {}: need two columns", i + 1)));
        };
        match (x.parse::<f64>(), y.parse::<f64>()) {
            (Ok(x), Ok(y)) => pts.push((x, y)),
            _ if pts.is_empty() => continue,
            _ => return Err(input_failure(format!("line {}: not numeric", i + 1))),
        }
    }
    Ok(pts)
}

fn fit_command(cmd: &FitCmd) -> Result<Outcome, Failure> {
    let fit: FitResult = match cmd {
        FitCmd::Power(i) => power_law_fit(&read_xy(&i.input)?)?,
        FitCmd::Log(i) => log_poly_fit(&read_xy(&i.input)?, 1, false)?,
        FitCmd::Logcube { input, full } => log_poly_fit(&read_xy(&input.input)?, 3, *full)?,
    };
    let mut v = serde_json::to_value(&fit).map_err(|e| input_failure(e.to_string()))?;
    v["relative_residual"] = json!(fit.relative_residual());
    Ok(Outcome::ok(to_json(&v)))
}

fn props(trials: usize, seed: u64) -> Result<Outcome, Failure> {
    if trials == 0 {
        return Err(input_failure("--trials must be >= 1"));
    }
    let mut rng = random::rng_from_seed(seed);
    let mut min_mi = f64::INFINITY;
    let mut worst_identity: f64 = 0.0;
    let mut min_rel: f64 = f64::INFINITY;
    for _ in 0..trials {
        let rho = if rng.random_bool(0.2) {
            random::random_pure_state::<f64, _>(&[2, 2], &mut rng)
        } else {
            random::random_density_matrix::<f64, _>(&[2, 2], &mut rng)
        };
        let mi = denmat::mutual_information(&rho)?.value();
        min_mi = min_mi.min(mi);
        let a = denmat::partial_trace(&rho, &[0])?;
        let b = denmat::partial_trace(&rho, &[1])?;
        let prod = denmat::tensor_product(&a, &b);
        if let Some(d) = denmat::relative_entropy(&rho, &prod)?.finite() {
            worst_identity = worst_identity.max((d - mi).abs());
        } else {
            worst_identity = f64::INFINITY;
        }
        let dim = [2usize, 3, 4][rng.random_range(0..3)];
        let x = random::random_density_matrix::<f64, _>(&[dim], &mut rng);
        let y = random::random_density_matrix::<f64, _>(&[dim], &mut rng);
        if let Some(d) = denmat::relative_entropy(&x, &y)?.finite() {
            min_rel = min_rel.min(d);
        }
    }
    let checks = [
        ("mutual_information_nonnegative", min_mi >= -1e-9, min_mi),
        ("relative_entropy_equals_mi", worst_identity <= 1e-9, worst_identity),
        ("relative_entropy_nonnegative", min_rel >= -1e-9, min_rel),
    ];
    let all = checks.iter().all(|c| c.1);
    let body = to_json(&json!({
        "seed": seed,
        "trials": trials,
        "checks": checks.iter().map(|c| json!({"name": c.0, "pass": c.1, "value": c.2})).collect::<Vec<_>>(),
        "pass": all,
    }));
    Ok(Outcome {
        body,
        check_failed: !all,
    })
}

fn to_json(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn comment_lines(lines: &[&str]) -> String {
    let mut s = String::from("# entropies in bits\n");
    for l in lines {
        s.push_str(&format!("# {l}\n"));
    }
    s
}

/// Records as CSV (fixed header) or JSON (`{"units": [...], "records": [...]}`).
pub fn emit_records(records: &[SweepRecord], format: Format, units: &[&str]) -> String {
    match format {
        Format::Csv => {
            let mut s = comment_lines(units);
            s.push_str(CSV_HEADER);
            s.push('\n');
            let mut errors = Vec::new();
            for (k, r) in records.iter().enumerate() {
                s.push_str(&csv_row(r));
                s.push('\n');
                if let Some(e) = &r.error {
                    errors.push(format!("# error in row {}: {e}\n", k + 1));
                }
            }
            for e in errors {
                s.push_str(&e);
            }
            s
        }
        Format::Json => {
            let mut all = vec!["entropies in bits"];
            all.extend_from_slice(units);
            to_json(&json!({ "units": all, "records": records }))
        }
    }
}

fn opt_g(v: Option<f64>) -> String {
    v.map(fmt_g).unwrap_or_default()
}

fn csv_row(r: &SweepRecord) -> String {
    [
        r.model.name().to_string(),
        fmt_g(r.t),
        opt_g(r.lambda),
        r.n.map(|n| n.to_string()).unwrap_or_default(),
        r.r.map(|n| n.to_string()).unwrap_or_default(),
        opt_g(r.s_i),
        opt_g(r.s_j),
        opt_g(r.s_ij),
        opt_g(r.mi),
        r.tag.clone(),
    ]
    .join(",")
}

/// `%.12g`: twelve significant digits, trailing zeros removed, exponent form
/// outside `1e-4 ≤ |x| < 1e12`.
pub fn fmt_g(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..DIGITS).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
