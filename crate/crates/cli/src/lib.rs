//! Command-line frontend: registry listing, phase-error reports, parameter
//! sweeps, trajectories, stability limits and convergence tables.
//!
//! CSV is the default output with every number printed to 12 significant
//! digits; `--format json` emits the same data as JSON.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use symphase::analysis::{self, convergence_study, phase_error_report, stability_limit, AnalysisError};
use symphase::phasemap::{
    ellipse_axes, invariant_quadratic_form, propagate_closed_form, scheme_matrix, sigma_amplitude, spectral,
    PhaseMapError,
};
use symphase::scheme::{forest_ruth, load_scheme, registry, Scheme, SchemeError};
use symphase::sim::{iterate, SimError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    PhaseMap(#[from] PhaseMapError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    OmegaA,
    PhaseError,
    Det,
    Trace,
    MStar,
    KStar,
}

#[derive(Debug, Parser)]
#[command(name = "symphase", version, about = "Phase-error analysis of symplectic splitting integrators")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Scheme JSON file used instead of a registry name.
    #[arg(long, global = true)]
    pub file: Option<PathBuf>,
    /// Series truncation order.
    #[arg(short = 'K', global = true)]
    pub order: Option<usize>,
    /// Write the output here instead of stdout.
    #[arg(short = 'o', long = "output", global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the registry schemes.
    Schemes,
    /// Order coefficient, normalized coefficient, stability limit and series.
    Analyze {
        scheme: Option<String>,
        /// Step size εω for the closed-form diagnostics of non-reversible schemes.
        #[arg(long, default_value_t = 0.3)]
        x: f64,
    },
    /// Tabulate a closed-form quantity over a grid of εω.
    Sweep {
        scheme: Option<String>,
        #[arg(long)]
        x_min: f64,
        #[arg(long)]
        x_max: f64,
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[arg(long, value_enum, default_value_t = Quantity::OmegaA)]
        quantity: Quantity,
    },
    /// Iterate a scheme and compare with the closed-form propagator.
    Simulate(SimulateArgs),
    /// Stability limit of one scheme, or of every available registry scheme.
    Stability { scheme: Option<String> },
    /// Partial sums of the frequency series against the closed form.
    Convergence {
        scheme: Option<String>,
        #[arg(long)]
        x: f64,
    },
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    pub scheme: Option<String>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub q0: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub p0: f64,
    /// Step size εω (ω = 1).
    #[arg(long)]
    pub x: f64,
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
}

/// Data written to the output plus diagnostics for stderr.
#[derive(Debug, Default)]
pub struct Report {
    pub body: String,
    pub diagnostics: Vec<String>,
}

/// Default truncation order of the convergence table.
pub const CONVERGENCE_ORDER: usize = 20;

/// Twelve significant digits, positional for moderate exponents and
/// scientific otherwise; non-finite values print as an empty cell.
pub fn fmt_num(v: f64) -> String {
    if !v.is_finite() {
        return String::new();
    }
    if v == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{v:.11e}");
    let exp: i32 = sci.split_once('e').and_then(|(_, e)| e.parse().ok()).unwrap_or(0);
    if (-5..12).contains(&exp) {
        format!("{:.*}", (11 - exp) as usize, v)
    } else {
        sci
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_num).unwrap_or_default()
}

fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn resolve(cli: &Cli, name: Option<&str>) -> Result<Scheme, CliError> {
    match (&cli.file, name) {
        (Some(path), None) => Ok(load_scheme(path)?),
        (None, Some(name)) => Ok(registry().get(name)?.clone()),
        (Some(_), Some(_)) => Err(CliError::Usage("give either a scheme name or --file, not both".into())),
        (None, None) => Err(CliError::Usage("a scheme name or --file is required".into())),
    }
}

/// Runs one invocation and returns the rendered output. Nothing is written.
pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Schemes => cmd_schemes(cli.format),
        Command::Analyze { scheme, x } => {
            let s = resolve(cli, scheme.as_deref())?;
            cmd_analyze(&s, cli.order.unwrap_or(analysis::DEFAULT_ORDER), *x, cli.format)
        }
        Command::Sweep {
            scheme,
            x_min,
            x_max,
            points,
            quantity,
        } => {
            let s = resolve(cli, scheme.as_deref())?;
            cmd_sweep(&s, *x_min, *x_max, *points, *quantity, cli.format)
        }
        Command::Simulate(args) => {
            let s = resolve(cli, args.scheme.as_deref())?;
            cmd_simulate(&s, args, cli.format)
        }
        Command::Stability { scheme } => {
            let schemes = if scheme.is_none() && cli.file.is_none() {
                registry().available().cloned().collect()
            } else {
                vec![resolve(cli, scheme.as_deref())?]
            };
            Ok(cmd_stability(schemes, cli.format))
        }
        Command::Convergence { scheme, x } => {
            let s = resolve(cli, scheme.as_deref())?;
            cmd_convergence(&s, *x, cli.order.unwrap_or(CONVERGENCE_ORDER), cli.format)
        }
    }
}

pub fn cmd_schemes(format: Format) -> Result<Report, CliError> {
    let reg = registry();
    let mut entries: Vec<_> = reg.entries().iter().collect();
    entries.sort_by(|a, b| a.name.cmp(&b.name));
    let mut report = Report::default();
    for e in &entries {
        if let Err(err) = &e.scheme {
            report.diagnostics.push(format!("{}: coefficients unavailable ({err})", e.name));
        }
    }
    report.body = match format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = entries
                .iter()
                .map(|e| match &e.scheme {
                    Ok(s) => vec![
                        e.name.clone(),
                        s.order().to_string(),
                        s.force_evals().to_string(),
                        s.steps().len().to_string(),
                        s.is_symmetric().to_string(),
                        "ok".into(),
                    ],
                    Err(_) => vec![
                        e.name.clone(),
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                        "coefficients unavailable".into(),
                    ],
                })
                .collect();
            csv_table(&["name", "order", "force_evals", "steps", "symmetric", "status"], &rows)
        }
        Format::Json => json_text(&Value::Array(
            entries
                .iter()
                .map(|e| match &e.scheme {
                    Ok(s) => json!({
                        "name": e.name,
                        "order": s.order(),
                        "force_evals": s.force_evals(),
                        "steps": s.steps().len(),
                        "symmetric": s.is_symmetric(),
                        "status": "ok",
                    }),
                    Err(_) => json!({
                        "name": e.name,
                        "order": null,
                        "force_evals": null,
                        "steps": null,
                        "symmetric": null,
                        "status": "coefficients unavailable",
                    }),
                })
                .collect(),
        )),
    };
    Ok(report)
}

pub fn cmd_analyze(scheme: &Scheme, order: usize, x: f64, format: Format) -> Result<Report, CliError> {
    if !scheme.is_symmetric() {
        return Err(CliError::Usage(format!(
            "{} is not time-reversible: series extraction needs equal diagonal entries (g = h).\n{}",
            scheme.name(),
            sigma_diagnostics(scheme, x)?
        )));
    }
    let r = phase_error_report(scheme, order, &forest_ruth())?;
    let series = [
        ("omega_a", &r.omega_a_series),
        ("inv_mass", &r.inv_mass_series),
        ("k_star", &r.k_star_series),
    ];
    let body = match format {
        Format::Csv => {
            let mut rows = vec![
                vec!["n".into(), String::new(), r.order.to_string()],
                vec!["c_n".into(), String::new(), fmt_num(r.c_n)],
                vec!["c_n_numeric".into(), String::new(), fmt_num(r.c_n_numeric)],
                vec!["c_star".into(), String::new(), fmt_opt(r.c_star)],
                vec!["stability_limit".into(), String::new(), fmt_num(r.stability.limit)],
                vec!["stability_bounded".into(), String::new(), r.stability.bounded.to_string()],
            ];
            for (name, s) in series {
                for (k, c) in s.coeffs().iter().enumerate() {
                    rows.push(vec![name.into(), k.to_string(), fmt_num(*c)]);
                }
            }
            csv_table(&["quantity", "power", "value"], &rows)
        }
        Format::Json => json_text(&json!({
            "scheme": r.scheme,
            "n": r.order,
            "c_n": r.c_n,
            "c_n_numeric": r.c_n_numeric,
            "c_star": r.c_star,
            "stability_limit": r.stability.limit,
            "stability_bounded": r.stability.bounded,
            "omega_a_series": r.omega_a_series.coeffs(),
            "inv_mass_series": r.inv_mass_series.coeffs(),
            "k_star_series": r.k_star_series.coeffs(),
        })),
    };
    Ok(Report {
        body,
        diagnostics: Vec::new(),
    })
}

/// Closed-form translation-part diagnostics of a non-reversible map.
fn sigma_diagnostics(scheme: &Scheme, x: f64) -> Result<String, CliError> {
    let map = scheme_matrix(scheme, x, 1.0);
    let sd = spectral(&map)?;
    let amp = sigma_amplitude(&map)?;
    let axes = ellipse_axes(&invariant_quadratic_form(&map.matrix)?);
    let mut out = String::new();
    let _ = writeln!(out, "closed-form diagnostics at x = {}:", fmt_num(x));
    let _ = writeln!(out, "  g - h = {}", fmt_num(sd.g_minus_h));
    let _ = writeln!(out, "  sigma amplitude (g - h)/(2 xi) = {}", fmt_num(amp));
    let _ = writeln!(out, "  omega_A/omega = {}", fmt_num(sd.omega_a));
    let _ = writeln!(out, "  ellipse tilt (deg) = {}", fmt_num(axes.tilt_deg));
    let _ = write!(out, "  ellipse axis ratio = {}", fmt_num(axes.axis_ratio));
    Ok(out)
}

fn sweep_value(scheme: &Scheme, x: f64, quantity: Quantity) -> (Option<f64>, String) {
    let map = scheme_matrix(scheme, x, 1.0);
    let regime = map.matrix.regime().to_string();
    let sd = spectral(&map).ok();
    let value = match quantity {
        Quantity::Det => Some(map.matrix.det()),
        Quantity::Trace => Some(map.matrix.trace()),
        Quantity::OmegaA => sd.map(|s| s.omega_a),
        Quantity::PhaseError => sd.map(|s| 2.0 * std::f64::consts::PI * (s.omega_a - 1.0)),
        Quantity::MStar => sd.and_then(|s| s.m_star),
        Quantity::KStar => sd.and_then(|s| s.k_star),
    };
    (value, regime)
}

pub fn cmd_sweep(
    scheme: &Scheme,
    x_min: f64,
    x_max: f64,
    points: usize,
    quantity: Quantity,
    format: Format,
) -> Result<Report, CliError> {
    if !(x_min > 0.0 && x_min < x_max) {
        return Err(CliError::Usage(format!("need 0 < x_min < x_max (got {x_min}, {x_max})")));
    }
    if points < 2 {
        return Err(CliError::Usage("need at least 2 points".into()));
    }
    let grid: Vec<f64> = (0..points)
        .map(|i| x_min + (x_max - x_min) * i as f64 / (points - 1) as f64)
        .collect();
    let rows: Vec<(f64, Option<f64>, String)> = grid
        .iter()
        .map(|&x| {
            let (v, r) = sweep_value(scheme, x, quantity);
            (x, v, r)
        })
        .collect();
    let body = match format {
        Format::Csv => csv_table(
            &["x", "value", "regime"],
            &rows
                .iter()
                .map(|(x, v, r)| vec![fmt_num(*x), fmt_opt(*v), r.clone()])
                .collect::<Vec<_>>(),
        ),
        Format::Json => json_text(&Value::Array(
            rows.iter()
                .map(|(x, v, r)| json!({"x": x, "value": v, "regime": r}))
                .collect(),
        )),
    };
    Ok(Report {
        body,
        diagnostics: Vec::new(),
    })
}

pub fn cmd_simulate(scheme: &Scheme, args: &SimulateArgs, format: Format) -> Result<Report, CliError> {
    let x = args.x;
    let rec = iterate(scheme, args.q0, args.p0, x, 1.0, args.steps, args.stride)?;
    let map = scheme_matrix(scheme, x, 1.0);
    let sd = spectral(&map).ok();
    let reversible = sd.as_ref().map_or(scheme.is_symmetric(), |s| s.reversible);
    let mut diagnostics = Vec::new();
    if sd.is_none() {
        diagnostics.push(format!(
            "{} is {} at x = {}; closed-form columns left empty",
            scheme.name(),
            map.matrix.regime(),
            fmt_num(x)
        ));
    }
    let rows: Vec<[Option<f64>; 6]> = rec
        .samples
        .iter()
        .map(|s| {
            let closed = propagate_closed_form(&map, s.t).ok();
            let err = closed.map(|m| {
                let q = m[0][0] * args.q0 + m[0][1] * args.p0;
                let p = m[1][0] * args.q0 + m[1][1] * args.p0;
                (s.q - q).abs().max((s.p - p).abs())
            });
            // Σ(t) = (g - h)/(2ξ) sin(θt/ε) for the translation part
            let fifth = if reversible {
                s.modified_energy
            } else {
                sd.as_ref()
                    .map(|d| d.g_minus_h / (2.0 * d.xi) * (d.theta * s.step as f64).sin())
            };
            [Some(s.t), Some(s.q), Some(s.p), Some(s.energy), fifth, err]
        })
        .collect();
    let fifth_name = if reversible { "H_A" } else { "sigma" };
    let header = ["t", "q", "p", "H", fifth_name, "closed_form_error"];
    let body = match format {
        Format::Csv => csv_table(
            &header,
            &rows
                .iter()
                .map(|r| r.iter().map(|v| fmt_opt(*v)).collect())
                .collect::<Vec<_>>(),
        ),
        Format::Json => json_text(&Value::Array(
            rows.iter()
                .map(|r| {
                    Value::Object(
                        header
                            .iter()
                            .zip(r)
                            .map(|(k, v)| (k.to_string(), json!(v)))
                            .collect(),
                    )
                })
                .collect(),
        )),
    };
    Ok(Report { body, diagnostics })
}

pub fn cmd_stability(mut schemes: Vec<Scheme>, format: Format) -> Report {
    schemes.sort_by(|a, b| a.name().cmp(b.name()));
    let rows: Vec<(String, analysis::StabilityLimit)> =
        schemes.iter().map(|s| (s.name().to_string(), stability_limit(s))).collect();
    let body = match format {
        Format::Csv => csv_table(
            &["scheme", "stability_limit", "bounded"],
            &rows
                .iter()
                .map(|(n, l)| vec![n.clone(), fmt_num(l.limit), l.bounded.to_string()])
                .collect::<Vec<_>>(),
        ),
        Format::Json => json_text(&Value::Array(
            rows.iter()
                .map(|(n, l)| json!({"scheme": n, "stability_limit": l.limit, "bounded": l.bounded}))
                .collect(),
        )),
    };
    Report {
        body,
        diagnostics: Vec::new(),
    }
}

pub fn cmd_convergence(scheme: &Scheme, x: f64, order: usize, format: Format) -> Result<Report, CliError> {
    let study = convergence_study(scheme, x, order)?;
    let mut diagnostics = Vec::new();
    let body = match format {
        Format::Csv => {
            diagnostics.push(format!("radius_estimate = {}", fmt_opt(study.radius_estimate)));
            if study.closed_form.is_none() {
                diagnostics.push(format!("x = {} is outside the elliptic regime; no closed form", fmt_num(x)));
            }
            csv_table(
                &["k", "term", "partial_sum", "abs_error"],
                &study
                    .rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.k.to_string(),
                            fmt_num(r.term),
                            fmt_num(r.partial_sum),
                            fmt_opt(r.abs_error),
                        ]
                    })
                    .collect::<Vec<_>>(),
            )
        }
        Format::Json => json_text(&json!({
            "scheme": scheme.name(),
            "x": study.x,
            "closed_form": study.closed_form,
            "radius_estimate": study.radius_estimate,
            "rows": study.rows.iter().map(|r| json!({
                "k": r.k,
                "term": r.term,
                "partial_sum": r.partial_sum,
                "abs_error": r.abs_error,
            })).collect::<Vec<_>>(),
        })),
    };
    Ok(Report { body, diagnostics })
}

/// Writes the body to `path`, or to stdout when absent.
pub fn emit(body: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, body).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}
