//! Dirichlet and Neumann trace formulas: `V(x)` recovered from the
//! periodic spectrum together with the Dirichlet or Neumann eigenvalues
//! on `[x, x + π]`.

use serde::{Deserialize, Serialize};

use crate::eigensolve::{dirichlet_eigenvalues, neumann_eigenvalues, periodic_eigenvalues, positional_values, Eigenvalue, SolveOptions};
use crate::error::{Error, Result};
use crate::par;
use crate::potential::Potential;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceKind {
    Dirichlet,
    Neumann,
}

impl TraceKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            TraceKind::Dirichlet => "dirichlet",
            TraceKind::Neumann => "neumann",
        }
    }
}

impl std::str::FromStr for TraceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dirichlet" => Ok(TraceKind::Dirichlet),
            "neumann" => Ok(TraceKind::Neumann),
            _ => Err(Error::InvalidArgument(format!("unknown trace kind `{s}`"))),
        }
    }
}

/// Partial sums `S_1..S_M` of a trace formula at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceReport {
    pub x: f64,
    pub kind: TraceKind,
    pub partial_sums: Vec<C64>,
    /// `V(x)`
    pub target: C64,
    /// `|S_m − V(x)|` for `m = 1..M`
    pub errors: Vec<f64>,
    pub terms: usize,
    /// Accumulated error estimate of the eigenvalues entering `S_M`.
    pub spectral_error: f64,
}

impl TraceReport {
    pub fn final_sum(&self) -> C64 {
        *self.partial_sums.last().expect("at least one term")
    }

    pub fn final_error(&self) -> f64 {
        *self.errors.last().expect("at least one term")
    }
}

/// One point of [`reconstruct_potential`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Reconstruction {
    pub x: f64,
    pub value: C64,
    pub error: f64,
}

// E_0..E_{2M}, repeated by multiplicity, with their error estimates
struct PeriodicData {
    values: Vec<C64>,
    error: f64,
}

fn periodic_data(p: &Potential, terms: usize, opts: &SolveOptions) -> Result<PeriodicData> {
    let list = periodic_eigenvalues(p, 2 * terms, opts)?;
    let mut values = positional_values(&list);
    values.truncate(2 * terms + 1);
    Ok(PeriodicData {
        values,
        error: total_error(&list),
    })
}

fn total_error(list: &[Eigenvalue]) -> f64 {
    list.iter().map(|e| e.error * e.alg_multiplicity as f64).sum()
}

fn check_terms(terms: usize) -> Result<()> {
    if terms == 0 {
        return Err(Error::InvalidArgument("the number of terms must be at least 1".into()));
    }
    Ok(())
}

fn assemble(p: &Potential, x: f64, kind: TraceKind, e: &PeriodicData, other: &[Eigenvalue], terms: usize) -> TraceReport {
    let local = positional_values(other);
    let mut sums = Vec::with_capacity(terms);
    let mut s = match kind {
        TraceKind::Dirichlet => e.values[0],
        TraceKind::Neumann => 2.0 * local[0] - e.values[0],
    };
    for m in 1..=terms {
        let pair = e.values[2 * m - 1] + e.values[2 * m];
        s += match kind {
            TraceKind::Dirichlet => pair - 2.0 * local[m - 1],
            TraceKind::Neumann => 2.0 * local[m] - pair,
        };
        sums.push(s);
    }
    let target = p.eval(x);
    let errors = sums.iter().map(|v| (v - target).norm()).collect();
    TraceReport {
        x,
        kind,
        partial_sums: sums,
        target,
        errors,
        terms,
        spectral_error: e.error + 2.0 * total_error(other),
    }
}

fn trace_with(p: &Potential, x: f64, kind: TraceKind, terms: usize, e: &PeriodicData, opts: &SolveOptions) -> Result<TraceReport> {
    let other = match kind {
        TraceKind::Dirichlet => dirichlet_eigenvalues(p, x, terms, opts)?,
        TraceKind::Neumann => neumann_eigenvalues(p, x, terms, opts)?,
    };
    Ok(assemble(p, x, kind, e, &other, terms))
}

/// `S_M = E_0 + Σ_{m=1}^{M} (E_{2m−1} + E_{2m} − 2μ_m(x))`.
pub fn dirichlet_trace(p: &Potential, x: f64, terms: usize, opts: &SolveOptions) -> Result<TraceReport> {
    trace(p, x, TraceKind::Dirichlet, terms, opts)
}

/// `S_M = 2ν_0(x) − E_0 + Σ_{m=1}^{M} (2ν_m(x) − E_{2m−1} − E_{2m})`.
pub fn neumann_trace(p: &Potential, x: f64, terms: usize, opts: &SolveOptions) -> Result<TraceReport> {
    trace(p, x, TraceKind::Neumann, terms, opts)
}

pub fn trace(p: &Potential, x: f64, kind: TraceKind, terms: usize, opts: &SolveOptions) -> Result<TraceReport> {
    check_terms(terms)?;
    let e = periodic_data(p, terms, opts)?;
    trace_with(p, x, kind, terms, &e, opts)
}

/// Trace reports over a grid, sharing one computation of the periodic
/// spectrum.
pub fn trace_grid(p: &Potential, grid: &[f64], kind: TraceKind, terms: usize, opts: &SolveOptions) -> Result<Vec<TraceReport>> {
    check_terms(terms)?;
    if grid.is_empty() {
        return Err(Error::InvalidArgument("the grid must not be empty".into()));
    }
    let e = periodic_data(p, terms, opts)?;
    par::try_map(grid, |&x| trace_with(p, x, kind, terms, &e, opts))
}

/// `(x, S_M(x), |S_M(x) − V(x)|)` over `grid` from the Dirichlet formula.
pub fn reconstruct_potential(p: &Potential, grid: &[f64], terms: usize, opts: &SolveOptions) -> Result<Vec<Reconstruction>> {
    Ok(trace_grid(p, grid, TraceKind::Dirichlet, terms, opts)?
        .into_iter()
        .map(|r| Reconstruction {
            x: r.x,
            value: r.final_sum(),
            error: r.final_error(),
        })
        .collect())
}
