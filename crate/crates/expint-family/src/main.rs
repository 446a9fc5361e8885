//! `ifam` — evaluate and verify the integral family I(lambda, mu, nu; z)
//! and the dynamical-friction H functions.
//!
//! Exit codes: 0 success, 1 usage error, 2 domain/existence error,
//! 3 verification failure.

// `!(x > 0.0)`-style guards deliberately treat NaN as a usage violation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use expint_family::dynfric::{h_eval, Family, HSpec};
use expint_family::family::{check_domain, closed_form, ladder_identity_residual, reduce_by_parts, reduced_form, region_boundary, transform_scaling, ParamTriple};
use expint_family::oracle::{oracle_h, oracle_i, QuadratureSpec};
use expint_family::report::{Inputs, Method, OutputRecord};
use expint_family::Error;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "ifam",
    version,
    about = "Closed-form evaluation of I(lambda,mu,nu;z) = \u{222b}\u{2080}\u{1d63} x^lambda E_nu(x^mu) dx, with quadrature verification"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the closed form at one parameter point.
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long)]
        mu: f64,
        #[arg(long, allow_hyphen_values = true)]
        nu: f64,
        #[arg(long)]
        z: f64,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep a parameter grid, comparing the closed form against the
    /// quadrature oracle and checking every algebraic identity.
    Verify {
        /// Comma-separated lambda grid.
        #[arg(long, default_value = "-0.5,-0.2,0,0.5,1,2,3.5", allow_hyphen_values = true)]
        lambda_grid: String,
        /// Comma-separated mu grid (all > 0).
        #[arg(long, default_value = "0.5,1,2,3")]
        mu_grid: String,
        /// Comma-separated nu grid.
        #[arg(long, default_value = "-1.5,-0.5,0,0.5,1,1.5,3", allow_hyphen_values = true)]
        nu_grid: String,
        /// Comma-separated z grid (all > 0).
        #[arg(long, default_value = "0.1,0.9,2.5,8")]
        z_grid: String,
        /// Acceptance threshold for closed form vs oracle.
        #[arg(long, default_value_t = 1e-8)]
        rel_tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the existence-region boundary lambda_min(mu) at fixed nu.
    Region {
        #[arg(long, allow_hyphen_values = true)]
        nu: f64,
        #[arg(long, default_value_t = 0.25)]
        mu_min: f64,
        #[arg(long, default_value_t = 4.0)]
        mu_max: f64,
        #[arg(long, default_value_t = 16)]
        samples: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate the dynamical-friction function H(y).
    Dynfric {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        family: FamilyArg,
        /// Single evaluation point; mutually exclusive with the range flags.
        #[arg(long, conflicts_with_all = ["y_min", "y_max"])]
        y: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        y_min: f64,
        #[arg(long, default_value_t = 3.0)]
        y_max: f64,
        #[arg(long, default_value_t = 7)]
        samples: usize,
        /// Add a 2-D quadrature oracle column with the deviation.
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    H1,
    H2,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::H1 => Family::H1,
            FamilyArg::H2 => Family::H2,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::NoConvergence { .. } => 3,
        _ => 2,
    }
}

fn run(cmd: Cmd) -> Result<u8, Error> {
    match cmd {
        Cmd::Eval { lambda, mu, nu, z, format, out } => cmd_eval(lambda, mu, nu, z, format, out),
        Cmd::Verify { lambda_grid, mu_grid, nu_grid, z_grid, rel_tol, out } => {
            cmd_verify(&lambda_grid, &mu_grid, &nu_grid, &z_grid, rel_tol, out)
        }
        Cmd::Region { nu, mu_min, mu_max, samples, format, out } => {
            cmd_region(nu, mu_min, mu_max, samples, format, out)
        }
        Cmd::Dynfric { a, family, y, y_min, y_max, samples, oracle, format, out } => {
            cmd_dynfric(a, family.into(), y, y_min, y_max, samples, oracle, format, out)
        }
    }
}

fn sink(out: Option<PathBuf>) -> Result<Box<dyn Write>, Error> {
    match out {
        None => Ok(Box::new(std::io::stdout())),
        Some(p) => std::fs::File::create(&p)
            .map(|f| Box::new(f) as Box<dyn Write>)
            .map_err(|e| Error::Domain(format!("cannot open {}: {e}", p.display()))),
    }
}

fn emit(w: &mut dyn Write, s: &str) -> Result<(), Error> {
    w.write_all(s.as_bytes())
        .map_err(|e| Error::Domain(format!("write failed: {e}")))
}

fn cmd_eval(
    lambda: f64,
    mu: f64,
    nu: f64,
    z: f64,
    format: Format,
    out: Option<PathBuf>,
) -> Result<u8, Error> {
    let p = ParamTriple::new(lambda, mu, nu);
    let r = closed_form(&p, z)?;
    let mut w = sink(out)?;
    match format {
        Format::Plain => {
            emit(&mut *w, &format!("I(lambda={lambda}, mu={mu}, nu={nu}; z={z}) = {}\n", r.value))?;
            emit(&mut *w, &format!("  gamma_term    = {}\n", r.gamma_term))?;
            emit(&mut *w, &format!("  boundary_term = {}{}\n", r.boundary_term,
                if r.boundary_flushed { "  (underflowed; result exact to double)" } else { "" }))?;
            emit(&mut *w, &format!("  denominator   = {}\n", r.denominator))?;
        }
        Format::Csv => {
            emit(&mut *w, "lambda,mu,nu,z,value,gamma_term,boundary_term,denominator,method,admissible\n")?;
            emit(&mut *w, &format!(
                "{lambda},{mu},{nu},{z},{},{},{},{},CLOSED_FORM,true\n",
                r.value, r.gamma_term, r.boundary_term, r.denominator
            ))?;
        }
        Format::Json => {
            let rec = vec![OutputRecord {
                inputs: Inputs::Family { lambda, mu, nu, z },
                value: r.value,
                method: Method::ClosedForm,
                err_estimate: None,
                admissible: true,
            }];
            emit(&mut *w, &serde_json::to_string_pretty(&rec).unwrap())?;
            emit(&mut *w, "\n")?;
        }
    }
    Ok(0)
}

fn parse_grid(name: &str, s: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Domain(format!("{name}: cannot parse '{t}' as a number")))
        })
        .collect()
}

struct IdentityStat {
    name: &'static str,
    max_dev: f64,
    worst: Option<(ParamTriple, f64)>,
    failures: Vec<(ParamTriple, f64, f64)>,
}

impl IdentityStat {
    fn new(name: &'static str) -> Self {
        IdentityStat { name, max_dev: 0.0, worst: None, failures: Vec::new() }
    }

    fn record(&mut self, p: ParamTriple, z: f64, dev: f64, tol: f64) {
        if dev > self.max_dev {
            self.max_dev = dev;
            self.worst = Some((p, z));
        }
        if dev > tol {
            self.failures.push((p, z, dev));
        }
    }
}

fn cmd_verify(
    lambda_grid: &str,
    mu_grid: &str,
    nu_grid: &str,
    z_grid: &str,
    rel_tol: f64,
    out: Option<PathBuf>,
) -> Result<u8, Error> {
    let lambdas = parse_grid("--lambda-grid", lambda_grid)?;
    let mus = parse_grid("--mu-grid", mu_grid)?;
    let nus = parse_grid("--nu-grid", nu_grid)?;
    let zs = parse_grid("--z-grid", z_grid)?;
    if !(rel_tol > 0.0) {
        return Err(Error::Domain(format!("--rel-tol must be > 0, got {rel_tol}")));
    }
    let identity_tol = 1e-12f64.max(rel_tol * 1e-4).min(rel_tol);
    let oracle_spec = QuadratureSpec {
        rel_tol: (rel_tol * 1e-2).clamp(f64::MIN_POSITIVE, 9.9e-4),
        ..Default::default()
    };

    let mut w = sink(out)?;
    let mut oracle_stat = IdentityStat::new("closed_form vs oracle");
    let mut scaling_stat = IdentityStat::new("scaling transform");
    let mut by_parts_stat = IdentityStat::new("by-parts recursion");
    let mut ladder_stat = IdentityStat::new("ladder identity");
    let mut reduced_stat = IdentityStat::new("reduced form");
    let mut skipped = 0usize;
    let mut points = 0usize;

    for &lambda in &lambdas {
        for &mu in &mus {
            for &nu in &nus {
                let p = ParamTriple::new(lambda, mu, nu);
                if !check_domain(&p)?.admissible {
                    skipped += 1;
                    continue;
                }
                for &z in &zs {
                    points += 1;
                    let cf = closed_form(&p, z)?.value;
                    let scale = cf.abs().max(1e-300);

                    match oracle_i(&p, z, &oracle_spec) {
                        Ok(o) => oracle_stat.record(p, z, (cf - o.value).abs() / scale, rel_tol),
                        Err(Error::NoConvergence { .. }) => {
                            oracle_stat.record(p, z, f64::INFINITY, rel_tol)
                        }
                        Err(e) => return Err(e),
                    }

                    for r in [0.5, 1.0, mu, 2.0 * mu] {
                        let q = transform_scaling(&p, r)?;
                        let rhs = closed_form(&q, z.powf(r))?.value / r;
                        scaling_stat.record(p, z, (cf - rhs).abs() / scale, identity_tol);
                    }

                    let bp = reduce_by_parts(&p, z)?;
                    by_parts_stat.record(p, z, (cf - bp).abs() / scale, identity_tol);

                    let g = expint_family::special::gamma_lower((1.0 + lambda) / mu, z.powf(mu))?;
                    let lad = ladder_identity_residual(&p, z)?;
                    ladder_stat.record(p, z, lad.abs() / g.abs().max(1e-300), identity_tol);

                    if lambda > mu - 1.0 {
                        let rf = reduced_form(&p, z)?;
                        reduced_stat.record(p, z, (cf - rf).abs() / scale, identity_tol);
                    }
                }
            }
        }
    }

    let mut failed = false;
    emit(&mut *w, &format!("verified {points} admissible points; skipped {skipped} inadmissible triples\n"))?;
    for stat in [&oracle_stat, &scaling_stat, &by_parts_stat, &ladder_stat, &reduced_stat] {
        let status = if stat.failures.is_empty() { "ok" } else { "FAIL" };
        let worst = stat
            .worst
            .map(|(p, z)| format!(" (worst at lambda={}, mu={}, nu={}, z={z})", p.lambda, p.mu, p.nu))
            .unwrap_or_default();
        emit(&mut *w, &format!("{:>24}: max relative deviation {:.3e} [{status}]{worst}\n", stat.name, stat.max_dev))?;
        for (p, z, dev) in &stat.failures {
            failed = true;
            emit(&mut *w, &format!(
                "    offending point lambda={}, mu={}, nu={}, z={z}: deviation {dev:.3e}\n",
                p.lambda, p.mu, p.nu
            ))?;
        }
    }
    Ok(if failed { 3 } else { 0 })
}

fn cmd_region(
    nu: f64,
    mu_min: f64,
    mu_max: f64,
    samples: usize,
    format: Format,
    out: Option<PathBuf>,
) -> Result<u8, Error> {
    if samples < 2 {
        return Err(Error::Domain(format!("--samples must be >= 2, got {samples}")));
    }
    if !(mu_min > 0.0 && mu_max > mu_min) {
        return Err(Error::Domain(format!(
            "need 0 < --mu-min < --mu-max, got [{mu_min}, {mu_max}]"
        )));
    }
    let step = (mu_max - mu_min) / (samples - 1) as f64;
    let grid: Vec<f64> = (0..samples)
        .map(|i| if i + 1 == samples { mu_max } else { mu_min + step * i as f64 })
        .collect();
    let pts = region_boundary(nu, &grid)?;
    let mut w = sink(out)?;
    match format {
        Format::Csv => {
            emit(&mut *w, "mu,lambda_min,branch\n")?;
            for p in &pts {
                emit(&mut *w, &format!("{},{},{}\n", p.mu, p.lambda_min, p.branch))?;
            }
        }
        Format::Plain => {
            emit(&mut *w, &format!("existence boundary lambda_min(mu) at nu = {nu}\n"))?;
            for p in &pts {
                emit(&mut *w, &format!("  mu = {:<10} lambda_min = {:<12} [{}]\n", p.mu, p.lambda_min, p.branch))?;
            }
        }
        Format::Json => {
            emit(&mut *w, &serde_json::to_string_pretty(&pts).unwrap())?;
            emit(&mut *w, "\n")?;
        }
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_dynfric(
    a: f64,
    family: Family,
    y: Option<f64>,
    y_min: f64,
    y_max: f64,
    samples: usize,
    oracle: bool,
    format: Format,
    out: Option<PathBuf>,
) -> Result<u8, Error> {
    let ys: Vec<f64> = match y {
        Some(y) => vec![y],
        None => {
            if samples < 2 || !(y_max > y_min) || y_min < 0.0 {
                return Err(Error::Domain(format!(
                    "need --samples >= 2 and 0 <= --y-min < --y-max, got {samples} points on [{y_min}, {y_max}]"
                )));
            }
            let step = (y_max - y_min) / (samples - 1) as f64;
            (0..samples)
                .map(|i| if i + 1 == samples { y_max } else { y_min + step * i as f64 })
                .collect()
        }
    };
    // Surface the existence gate before any output.
    h_eval(&HSpec { a, family, y: ys[0] })?;

    let oracle_spec = QuadratureSpec { rel_tol: 1e-8, ..Default::default() };
    let mut rows = Vec::new();
    for &yv in &ys {
        let h = h_eval(&HSpec { a, family, y: yv })?;
        let o = if oracle && yv > 0.0 {
            let r = oracle_h(a, HSpec { a, family, y: yv }.nu(), yv, &oracle_spec)?;
            Some(r)
        } else {
            None
        };
        rows.push((yv, h, o));
    }

    let mut w = sink(out)?;
    match format {
        Format::Csv => {
            if oracle {
                emit(&mut *w, "y,h,oracle,err_estimate,deviation\n")?;
                for (yv, h, o) in &rows {
                    match o {
                        Some(o) => emit(&mut *w, &format!(
                            "{yv},{h},{},{},{}\n", o.value, o.err_estimate,
                            (h - o.value).abs() / o.value.abs().max(1e-300)
                        ))?,
                        None => emit(&mut *w, &format!("{yv},{h},,,\n"))?,
                    }
                }
            } else {
                emit(&mut *w, "y,h\n")?;
                for (yv, h, _) in &rows {
                    emit(&mut *w, &format!("{yv},{h}\n"))?;
                }
            }
        }
        Format::Plain => {
            emit(&mut *w, &format!("H(y) for a = {a}, family {family} (nu = {})\n",
                HSpec { a, family, y: 0.0 }.nu()))?;
            for (yv, h, o) in &rows {
                match o {
                    Some(o) => emit(&mut *w, &format!(
                        "  y = {yv:<8} H = {h:<22} oracle = {:<22} deviation = {:.3e}\n",
                        o.value, (h - o.value).abs() / o.value.abs().max(1e-300)
                    ))?,
                    None => emit(&mut *w, &format!("  y = {yv:<8} H = {h}\n"))?,
                }
            }
        }
        Format::Json => {
            let mut recs = Vec::new();
            for (yv, h, o) in &rows {
                recs.push(OutputRecord {
                    inputs: Inputs::DynFric { a, family: family.to_string(), y: *yv },
                    value: *h,
                    method: Method::ClosedForm,
                    err_estimate: None,
                    admissible: true,
                });
                if let Some(o) = o {
                    recs.push(OutputRecord {
                        inputs: Inputs::DynFric { a, family: family.to_string(), y: *yv },
                        value: o.value,
                        method: Method::Oracle,
                        err_estimate: Some(o.err_estimate),
                        admissible: true,
                    });
                }
            }
            emit(&mut *w, &serde_json::to_string_pretty(&recs).unwrap())?;
            emit(&mut *w, "\n")?;
        }
    }
    Ok(0)
}
