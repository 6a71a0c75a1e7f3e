//! Command-line front end for `hill-core`.
//!
//! [`run`] parses arguments, resolves the configuration (flags, then the
//! `--config` file, then `HILL_THREADS` and defaults), runs the subcommand on
//! a pool of the requested size and writes CSV or JSON. Exit codes: 0 on
//! success, 1 when a computation fails, 2 on usage errors.

use std::ffi::OsString;
use std::f64::consts::PI;

use clap::Parser;
use hill_core::eigensolve::{self, SearchBox};
use hill_core::specfun::{bessel_j, bessel_j_prime, bessel_y};
use hill_core::theorems;
use hill_core::{floquet, par, traceform, Route, SeriesControl, SolveOptions, TraceKind, C64};
use serde_json::{json, Value};

pub mod args;
pub mod config;
pub mod output;

use args::{Cli, Command, FloquetAction, KindArg, RouteArg, SpecfunAction, Suite, TraceKindArg};
use config::{Format, RunConfig};
use output::{cell, complex, emit, require_json, to_csv, to_json};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{flag}: {message}")]
    Usage { flag: String, message: String },
    #[error(transparent)]
    Compute(#[from] hill_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn usage(flag: &str, message: String) -> Self {
        CliError::Usage {
            flag: flag.to_string(),
            message,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage { .. } => 2,
            CliError::Compute(_) | CliError::Io(_) => 1,
        }
    }
}

/// Runs the command line `argv` (including the program name) and returns
/// the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&cli.common)?;
    log::debug!("resolved configuration: {cfg:?}");
    let threads = cfg.threads;
    par::with_threads(threads, move || dispatch(&cli.command, &cfg))
}

fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<(), CliError> {
    match cmd {
        Command::Floquet {
            action: FloquetAction::Eval(a),
        } => floquet_eval(cfg, C64::new(a.lambda_re, a.lambda_im), a.x0),
        Command::Eig(a) => eig(cfg, a.kind, a.x0, a.count),
        Command::Bands(a) => bands(cfg, &a.region, a.step),
        Command::Trace(a) => trace(cfg, a),
        Command::Verify(a) => verify(cfg, a),
        Command::Specfun {
            action: SpecfunAction::Eval(a),
        } => specfun_eval(cfg, C64::new(a.nu_re, a.nu_im), C64::new(a.u_re, a.u_im)),
    }
}

fn solve_options(cfg: &RunConfig) -> SolveOptions {
    SolveOptions {
        tol: cfg.tol,
        route: match cfg.route {
            RouteArg::Auto => Route::Auto,
            RouteArg::Ode => Route::Ode,
        },
    }
}

fn floquet_eval(cfg: &RunConfig, lambda: C64, x0: f64) -> Result<(), CliError> {
    let out = cfg.out_or(Format::Json);
    require_json(&out, "floquet eval")?;
    let p = cfg.potential()?;
    let d = floquet::integrate_fundamental(p, lambda, x0, cfg.tol, true)?;
    let m = d.monodromy();
    let record = json!({
        "lambda": complex(d.lambda),
        "x0": d.x0,
        "tol": cfg.tol,
        "c": complex(d.c_end),
        "c_prime": complex(d.c_prime_end),
        "s": complex(d.s_end),
        "s_prime": complex(d.s_prime_end),
        "dlambda": d.dlambda.map(|v| v.iter().map(|z| complex(*z)).collect::<Vec<_>>()),
        "wronskian": complex(d.wronskian()),
        "discriminant": complex(d.discriminant()),
        "discriminant_dlambda": d.discriminant_dlambda().map(complex),
        "monodromy": m.entries.iter().map(|r| r.iter().map(|z| complex(*z)).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    emit(&out, &to_json(&record)?)
}

fn eig(cfg: &RunConfig, kind: KindArg, x0: f64, count: usize) -> Result<(), CliError> {
    if count == 0 {
        return Err(CliError::usage("--count", "must be at least 1".into()));
    }
    let p = cfg.potential()?;
    let opts = solve_options(cfg);
    let list = match kind {
        KindArg::Dirichlet => eigensolve::dirichlet_eigenvalues(p, x0, count, &opts)?,
        KindArg::Neumann => eigensolve::neumann_eigenvalues(p, x0, count - 1, &opts)?,
        KindArg::Periodic => eigensolve::periodic_eigenvalues(p, count - 1, &opts)?,
    };
    let out = cfg.out_or(Format::Csv);
    let bytes = match out.format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = list
                .iter()
                .map(|e| {
                    vec![
                        e.kind.as_str().to_string(),
                        e.index.to_string(),
                        cell(e.value.re),
                        cell(e.value.im),
                        e.alg_multiplicity.to_string(),
                        cell(e.residual),
                    ]
                })
                .collect();
            to_csv(&["kind", "index", "re", "im", "mult", "residual"], &rows)?
        }
        Format::Json => {
            let items: Vec<Value> = list
                .iter()
                .map(|e| {
                    json!({
                        "kind": e.kind.as_str(),
                        "index": e.index,
                        "re": e.value.re,
                        "im": e.value.im,
                        "mult": e.alg_multiplicity,
                        "residual": e.residual,
                        "error": e.error,
                        "x0": e.x0,
                    })
                })
                .collect();
            to_json(&json!({ "eigenvalues": items }))?
        }
    };
    emit(&out, &bytes)
}

fn bands(cfg: &RunConfig, region: &[f64], step: f64) -> Result<(), CliError> {
    let [re0, re1, im0, im1] = region else {
        return Err(CliError::usage("--region", "expected re_min,re_max,im_min,im_max".into()));
    };
    let b = SearchBox::from_bounds((*re0, *re1), (*im0, *im1))
        .map_err(|e| CliError::usage("--region", e.to_string()))?;
    if !(step > 0.0 && step.is_finite()) {
        return Err(CliError::usage("--step", format!("{step} is not a positive step")));
    }
    let p = cfg.potential()?;
    let arcs = eigensolve::spectral_arcs(p, &b, step, &solve_options(cfg))?;
    let out = cfg.out_or(Format::Csv);
    let bytes = match out.format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = arcs
                .iter()
                .enumerate()
                .flat_map(|(id, a)| a.points.iter().map(move |z| vec![id.to_string(), cell(z.re), cell(z.im)]))
                .collect();
            to_csv(&["arc_id", "re", "im"], &rows)?
        }
        Format::Json => {
            let items: Vec<Value> = arcs
                .iter()
                .enumerate()
                .map(|(id, a)| {
                    json!({
                        "arc_id": id,
                        "stalled": a.stalled,
                        "points": a.points.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                    })
                })
                .collect();
            to_json(&json!({ "arcs": items }))?
        }
    };
    emit(&out, &bytes)
}

fn trace(cfg: &RunConfig, a: &args::TraceArgs) -> Result<(), CliError> {
    if a.terms == 0 {
        return Err(CliError::usage("--terms", "must be at least 1".into()));
    }
    let grid: Vec<f64> = match (a.x, a.grid) {
        (Some(x), _) => vec![x],
        (None, Some(0)) => return Err(CliError::usage("--grid", "must be at least 1".into())),
        (None, Some(n)) => (0..n).map(|i| i as f64 * PI / n as f64).collect(),
        (None, None) => return Err(CliError::usage("--x", "either --x or --grid is required".into())),
    };
    let kind = match a.kind {
        TraceKindArg::Dirichlet => TraceKind::Dirichlet,
        TraceKindArg::Neumann => TraceKind::Neumann,
    };
    let p = cfg.potential()?;
    let reports = traceform::trace_grid(p, &grid, kind, a.terms, &solve_options(cfg))?;
    let out = cfg.out_or(Format::Csv);
    let bytes = match out.format {
        Format::Csv => {
            let mut rows = Vec::new();
            for r in &reports {
                for (m, (s, err)) in r.partial_sums.iter().zip(&r.errors).enumerate() {
                    rows.push(vec![cell(r.x), (m + 1).to_string(), cell(s.re), cell(s.im), cell(*err)]);
                }
            }
            to_csv(&["x", "m", "S_re", "S_im", "err"], &rows)?
        }
        Format::Json => {
            let items: Vec<Value> = reports
                .iter()
                .map(|r| {
                    json!({
                        "x": r.x,
                        "kind": r.kind.as_str(),
                        "terms": r.terms,
                        "target": complex(r.target),
                        "partial_sums": r.partial_sums.iter().map(|z| complex(*z)).collect::<Vec<_>>(),
                        "errors": r.errors,
                        "final_error": r.final_error(),
                        "spectral_error": r.spectral_error,
                    })
                })
                .collect();
            to_json(&json!({ "reports": items }))?
        }
    };
    emit(&out, &bytes)
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Io(std::io::Error::other(e)))
}

fn verify(cfg: &RunConfig, a: &args::VerifyArgs) -> Result<(), CliError> {
    let out = cfg.out_or(Format::Json);
    require_json(&out, "verify")?;
    if a.n == 0 {
        return Err(CliError::usage("--n", "must be at least 1".into()));
    }
    let k = C64::new(a.k, a.k_im);
    let real_only = |suite: &str| -> Result<f64, CliError> {
        if a.k_im != 0.0 {
            return Err(CliError::usage("--K-im", format!("the {suite} suite takes a real K")));
        }
        Ok(a.k)
    };
    let report = match a.suite {
        Suite::Localization => to_value(&theorems::check_localization(real_only("localization")?, a.n, cfg.tol)?)?,
        Suite::Signs => to_value(&theorems::check_sign_sequences(real_only("signs")?, a.n)?)?,
        Suite::Multiplicity => to_value(&theorems::check_multiplicities(k, a.n, cfg.tol)?)?,
        Suite::Symmetry => {
            let p = hill_core::Potential::model(k);
            let pt = p.classify_symmetry().pt_symmetric;
            let (periodicity, (rotation, (pt_symmetry, reality))) = par::join(
                || theorems::check_periodicity(&p, 0.4, a.n, cfg.tol),
                || {
                    par::join(
                        || theorems::check_rotation_covariance(k, 0.2, a.n, cfg.tol),
                        || {
                            if pt {
                                (
                                    Some(theorems::check_pt_symmetry(&p, 0.3, a.n, cfg.tol)),
                                    Some(theorems::check_reality_at_special_points(&p, a.n, cfg.tol)),
                                )
                            } else {
                                (None, None)
                            }
                        },
                    )
                },
            );
            json!({
                "K": complex(k),
                "periodicity": to_value(&periodicity?)?,
                "rotation": to_value(&rotation?)?,
                "pt_symmetry": pt_symmetry.transpose()?.map(|c| to_value(&c)).transpose()?,
                "reality": reality.transpose()?.map(|c| to_value(&c)).transpose()?,
            })
        }
    };
    emit(&out, &to_json(&report)?)
}

fn specfun_eval(cfg: &RunConfig, nu: C64, u: C64) -> Result<(), CliError> {
    let out = cfg.out_or(Format::Json);
    require_json(&out, "specfun eval")?;
    let ctl = SeriesControl::default();
    let j = bessel_j(nu, u, ctl)?;
    let optional = |r: hill_core::Result<C64>| match r {
        Ok(z) => (complex(z), Value::Null),
        Err(e) => (Value::Null, Value::String(e.to_string())),
    };
    let (jp, jp_err) = optional(bessel_j_prime(nu, u, ctl));
    let (y, y_err) = optional(bessel_y(nu, u, ctl));
    let record = json!({
        "nu": complex(nu),
        "u": complex(u),
        "J": complex(j),
        "J_prime": jp,
        "J_prime_error": jp_err,
        "Y": y,
        "Y_error": y_err,
    });
    emit(&out, &to_json(&record)?)
}
