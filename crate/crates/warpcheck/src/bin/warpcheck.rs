//! Command-line interface: verification suites, monotonicity series,
//! identity reports, ODE-family checks, and scalar-flat metric generation.
//!
//! Exit codes: 0 = all checks pass, 1 = a mathematical check failed,
//! 2 = usage or configuration error.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use warpcheck::catalog;
use warpcheck::identities::{self, IdentityResidual, Tolerances};
use warpcheck::levelset::{self, Quantity};
use warpcheck::odes;
use warpcheck::profiles::{Interval, DEFAULT_EPSILON};
use warpcheck::report::{self, Report};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "warpcheck", version, about = "Numerical checks for warped-product metrics and their harmonic level sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Catalog metric name (see `warpcheck catalog`).
    #[arg(long)]
    metric: String,
    /// Metric parameter, repeatable: --param c=2
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// Number of grid points.
    #[arg(long, default_value_t = 64)]
    grid: usize,
    /// Relative endpoint margin for open/singular endpoints.
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    /// Tolerance override, repeatable: --tol lemma21=1e-7
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    tols: Vec<String>,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, ValueEnum)]
enum QuantityArg {
    Plus,
    Minus,
    Mw,
}

impl From<QuantityArg> for Quantity {
    fn from(q: QuantityArg) -> Quantity {
        match q {
            QuantityArg::Plus => Quantity::Plus,
            QuantityArg::Minus => Quantity::Minus,
            QuantityArg::Mw => Quantity::Mw,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// List catalog metrics, their parameters and domains.
    Catalog,
    /// Run the full identity/flatness verification suite on a metric.
    Verify(RunArgs),
    /// Evaluate a monotone quantity on a level-value grid.
    Monotone {
        #[command(flatten)]
        run: RunArgs,
        /// Which monotone quantity to evaluate.
        #[arg(long, value_enum)]
        quantity: QuantityArg,
    },
    /// Run the identity suite only (no scalar-flatness requirement).
    Identities(RunArgs),
    /// Check the Riccati ODE family: closed-form residuals, the
    /// compatibility equation, and integration against the closed form.
    Ode {
        /// Family parameter of the closed-form solution.
        #[arg(long = "c-family", default_value_t = 1.0, allow_hyphen_values = true)]
        c_family: f64,
        #[arg(long = "tol", value_name = "NAME=VALUE")]
        tols: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a metric from the w-solution family and optionally validate
    /// scalar-flatness.
    Generate {
        #[arg(long = "c-family", default_value_t = 1.0, allow_hyphen_values = true)]
        c_family: f64,
        #[arg(long = "K", default_value_t = 1.0)]
        k: f64,
        #[arg(long, default_value_t = 1.0)]
        c0: f64,
        /// Domain as "lo,hi" (defaults to (0, 1/c_family) or (0, 10)).
        #[arg(long, allow_hyphen_values = true)]
        domain: Option<String>,
        /// Run the scalar-flatness validation.
        #[arg(long)]
        validate: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn parse_kv(items: &[String], what: &str) -> Result<BTreeMap<String, f64>, String> {
    let mut map = BTreeMap::new();
    for item in items {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| format!("{what} '{item}' is not of the form KEY=VALUE"))?;
        let v: f64 = v
            .parse()
            .map_err(|_| format!("{what} '{item}' has a non-numeric value"))?;
        map.insert(k.to_string(), v);
    }
    Ok(map)
}

/// Tolerances from defaults, environment (WARPCHECK_TOL_<NAME>), then flags.
fn resolve_tolerances(flag_tols: &[String]) -> Result<Tolerances, String> {
    let mut tols = Tolerances::default();
    let known: Vec<String> = tols.names().map(|s| s.to_string()).collect();
    for (key, value) in std::env::vars() {
        if let Some(name) = key.strip_prefix("WARPCHECK_TOL_") {
            let name = name.to_lowercase();
            if !known.contains(&name) {
                return Err(format!("unknown tolerance in environment: {key}"));
            }
            let v: f64 = value
                .parse()
                .map_err(|_| format!("non-numeric tolerance in environment: {key}={value}"))?;
            tols.set(&name, v).map_err(|e| e.to_string())?;
        }
    }
    for (name, v) in parse_kv(flag_tols, "tolerance")? {
        tols.set(&name, v).map_err(|e| e.to_string())?;
    }
    Ok(tols)
}

fn emit(out: &Option<PathBuf>, body: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, body).map_err(|e| format!("writing {path:?}: {e}")),
        None => {
            println!("{body}");
            Ok(())
        }
    }
}

fn validate_run(run: &RunArgs) -> Result<(), String> {
    if run.grid < 8 {
        return Err("--grid must be at least 8".to_string());
    }
    if !(run.epsilon > 0.0 && run.epsilon < 0.1) {
        return Err("--epsilon must be in (0, 0.1)".to_string());
    }
    Ok(())
}

fn build_metric(run: &RunArgs) -> Result<warpcheck::CatalogEntry, String> {
    let params = parse_kv(&run.params, "parameter")?;
    catalog::build(&run.metric, &params).map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Catalog => {
            for info in catalog::listing() {
                println!("{:<14} params: {:<50} domain: {:<28} {}", info.name, info.params, info.domain, info.notes);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(run) => run_suite(run, true),
        Command::Identities(run) => run_suite(run, false),
        Command::Monotone { run, quantity } => {
            validate_run(&run)?;
            let entry = build_metric(&run)?;
            let h = catalog::canonical_harmonic(&entry).map_err(|e| e.to_string())?;
            let tols = resolve_tolerances(&run.tols)?;
            let quantity: Quantity = quantity.into();
            let grid = levelset::auto_grid(&h, quantity, run.grid, run.epsilon)
                .map_err(|e| format!("quantity/metric domain mismatch: {e}"))?;
            let series =
                levelset::monotone_series(&h, quantity, &grid).map_err(|e| e.to_string())?;
            let verdict = levelset::monotonicity_verdict(&series, tols.get("monotone"));
            let body = match run.format {
                Format::Csv => report::series_to_csv(&series),
                Format::Json => {
                    let mut rep = Report::new(&run.metric, entry.params.clone());
                    rep.series = Some(series);
                    rep.finalize(Some(verdict.pass));
                    report::to_json_string(&rep).map_err(|e| e.to_string())?
                }
            };
            emit(&run.out, &body)?;
            Ok(if verdict.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_CHECK_FAILED)
            })
        }
        Command::Ode { c_family, tols, out } => {
            let tols = resolve_tolerances(&tols)?;
            let suite = ode_suite(c_family, &tols)?;
            let mut rep = Report::new("riccati-family", [("c_family".to_string(), c_family)].into());
            rep.suite = suite;
            let pass = rep.finalize(None);
            let body = report::to_json_string(&rep).map_err(|e| e.to_string())?;
            emit(&out, &body)?;
            Ok(if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_CHECK_FAILED)
            })
        }
        Command::Generate {
            c_family,
            k,
            c0,
            domain,
            validate,
            out,
        } => {
            let domain = match domain {
                Some(s) => {
                    let (lo, hi) = s
                        .split_once(',')
                        .ok_or_else(|| format!("--domain '{s}' is not of the form LO,HI"))?;
                    let lo: f64 = lo.trim().parse().map_err(|_| "non-numeric domain bound")?;
                    let hi: f64 = hi.trim().parse().map_err(|_| "non-numeric domain bound")?;
                    Interval::open(lo, hi).map_err(|e| e.to_string())?
                }
                None => odes::default_family_domain(c_family),
            };
            let gm = odes::generate_metric(c_family, k, c0, domain).map_err(|e| e.to_string())?;
            let mut rep = Report::new("family", gm.entry.params.clone());
            let pass = if validate {
                let flat = odes::scalar_flat_validate(&gm, 100).map_err(|e| e.to_string())?;
                rep.suite.push(IdentityResidual::equality(
                    "generated_flat_closed",
                    domain.lo,
                    flat.max_sc_closed,
                    0.0,
                    flat.closed_tol,
                ));
                rep.suite.push(IdentityResidual::equality(
                    "generated_flat_oracle",
                    domain.lo,
                    flat.max_sc_oracle,
                    0.0,
                    flat.oracle_tol,
                ));
                rep.finalize(None)
            } else {
                rep.finalize(None)
            };
            let body = report::to_json_string(&rep).map_err(|e| e.to_string())?;
            emit(&out, &body)?;
            Ok(if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_CHECK_FAILED)
            })
        }
    }
}

fn run_suite(run: RunArgs, require_flatness: bool) -> Result<ExitCode, String> {
    validate_run(&run)?;
    if run.format == Format::Csv {
        return Err("CSV output is limited to series data; use `monotone --format csv`".into());
    }
    let entry = build_metric(&run)?;
    let h = catalog::canonical_harmonic(&entry).map_err(|e| e.to_string())?;
    let tols = resolve_tolerances(&run.tols)?;
    let mut suite = identities::verification_suite(&h, run.grid, run.epsilon, &tols)
        .map_err(|e| e.to_string())?;
    if !require_flatness {
        suite.retain(|r| r.name != "scalar_flat");
    }
    let mut rep = Report::new(&run.metric, entry.params.clone());
    rep.suite = suite;
    let pass = rep.finalize(None);
    let body = report::to_json_string(&rep).map_err(|e| e.to_string())?;
    emit(&run.out, &body)?;
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_CHECK_FAILED)
    })
}

/// Residual suite for the ODE family at one c: closed-form Riccati residual,
/// compatibility residual, and integration-vs-closed-form error.
fn ode_suite(c: f64, tols: &Tolerances) -> Result<Vec<IdentityResidual>, String> {
    let h = odes::closed_form_h(c);
    let pair = odes::FHPair::inverse_square_with_family(c);
    let mut suite = Vec::new();
    // Start at 0.3: below that the compatibility equation's r^-4 terms grow
    // past the point where an absolute 1e-10 residual is resolvable.
    let grid: Vec<f64> = warpcheck::profiles::linspace(0.3, 3.0, 40)
        .into_iter()
        .filter(|&r| r.abs() >= odes::POLE_MARGIN && (c == 0.0 || (r - 1.0 / c).abs() >= odes::POLE_MARGIN))
        .collect();
    let mut max_riccati: f64 = 0.0;
    let mut max_fh: f64 = 0.0;
    for &r in &grid {
        max_riccati = max_riccati.max(odes::riccati_residual(&h, r).abs());
        max_fh = max_fh.max(odes::fh_residual(&pair, r).map_err(|e| e.to_string())?.abs());
    }
    suite.push(IdentityResidual::equality(
        "riccati",
        grid[0],
        max_riccati,
        0.0,
        tols.get("riccati"),
    ));
    suite.push(IdentityResidual::equality(
        "fh",
        grid[0],
        max_fh,
        0.0,
        tols.get("fh"),
    ));
    // Integrate over the longest pole-free subinterval of [0.05, 3].
    let (r0, r1) = if c > 1.0 / 3.0 {
        (1.0 / c + 2.0 * odes::POLE_MARGIN, 3.0)
    } else {
        (0.05, if c > 0.0 { (1.0 / c - 2.0 * odes::POLE_MARGIN).min(3.0) } else { 3.0 })
    };
    let flow = odes::integrate_riccati(r0, h.eval(r0), r1).map_err(|e| e.to_string())?;
    let mut max_int: f64 = 0.0;
    for &r in warpcheck::profiles::linspace(r0, r1, 10).iter() {
        let y = flow.eval(r).map_err(|e| e.to_string())?;
        max_int = max_int.max((y - h.eval(r)).abs());
    }
    suite.push(IdentityResidual::equality(
        "riccati_integration",
        r0,
        max_int,
        0.0,
        1e-6,
    ));
    Ok(suite)
}
