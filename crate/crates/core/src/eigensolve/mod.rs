//! Dirichlet, Neumann and (anti)periodic eigenvalues as zeros of entire
//! functions of λ, located with the argument principle.
//!
//! All three families lie in the rectangle `Re λ ≥ −S`, `|Im λ| ≤ S` with
//! `S = Σ|v_n|` (numerical range of the operator with self-adjoint boundary
//! conditions). The rectangle is cut into vertical strips at `(k + ½)²`, the
//! zeros of each strip are isolated recursively and polished, and the
//! total count below the last cut is checked against the free operator.

mod arcs;
mod contour;
mod targets;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::floquet::{self, check_tol, monodromy};
use crate::par;
use crate::potential::Potential;
use crate::{C64, DEFAULT_TOL};

pub use arcs::{spectral_arcs, Arc};
pub use contour::{
    count_zeros, find_zeros, SearchBox, Zero, CLUSTER_SIDE, DEFAULT_MAX_DEPTH, DEFAULT_QUAD_POINTS,
    MAX_QUAD_POINTS,
};
pub use targets::{Analytic, Sample, SpectralTarget};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectralKind {
    Dirichlet,
    Neumann,
    Periodic,
}

impl SpectralKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SpectralKind::Dirichlet => "dirichlet",
            SpectralKind::Neumann => "neumann",
            SpectralKind::Periodic => "periodic",
        }
    }

    // numbering starts at 1 for Dirichlet and at 0 otherwise
    fn first_index(&self) -> usize {
        match self {
            SpectralKind::Dirichlet => 1,
            _ => 0,
        }
    }
}

impl std::str::FromStr for SpectralKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dirichlet" => Ok(SpectralKind::Dirichlet),
            "neumann" => Ok(SpectralKind::Neumann),
            "periodic" => Ok(SpectralKind::Periodic),
            _ => Err(Error::InvalidArgument(format!("unknown spectral kind `{s}`"))),
        }
    }
}

/// How the target functions are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Closed forms where available (constant potentials, and Bessel
    /// products for a single mode `K e^{2ix}`), the ODE otherwise.
    #[default]
    Auto,
    /// Always integrate the ODE.
    Ode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub tol: f64,
    pub route: Route,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            route: Route::Auto,
        }
    }
}

impl SolveOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    pub fn ode(tol: f64) -> Self {
        Self {
            tol,
            route: Route::Ode,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub value: C64,
    pub kind: SpectralKind,
    /// Position of the (first copy of the) eigenvalue in the magnitude order.
    pub index: usize,
    pub alg_multiplicity: usize,
    /// `|f(value)|` for the target function `f` of the family.
    pub residual: f64,
    pub x0: f64,
    /// Estimated distance to the exact eigenvalue.
    pub error: f64,
}

/// Orders by `|λ|`, then by `arg λ ∈ (−π, π]`. Magnitudes equal to within
/// `1e-9` relative count as ties.
pub fn sort_by_magnitude<T>(items: &mut [T], value: impl Fn(&T) -> C64) {
    items.sort_by(|a, b| {
        let (x, y) = (value(a), value(b));
        x.norm().total_cmp(&y.norm()).then(x.arg().total_cmp(&y.arg()))
    });
    let mut start = 0;
    while start < items.len() {
        let lead = value(&items[start]).norm();
        let mut end = start + 1;
        while end < items.len() && value(&items[end]).norm() - lead <= 1e-9 * (1.0 + lead) {
            end += 1;
        }
        items[start..end].sort_by(|a, b| value(a).arg().total_cmp(&value(b).arg()).then(Ordering::Equal));
        start = end;
    }
}

/// Eigenvalue values repeated according to multiplicity, in order.
pub fn positional_values(list: &[Eigenvalue]) -> Vec<C64> {
    list.iter()
        .flat_map(|e| std::iter::repeat_n(e.value, e.alg_multiplicity))
        .collect()
}

/// First `n_max` Dirichlet eigenvalues `μ_1..μ_{n_max}` on `[x0, x0+π]`.
pub fn dirichlet_eigenvalues(p: &Potential, x0: f64, n_max: usize, opts: &SolveOptions) -> Result<Vec<Eigenvalue>> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    solve(p, SpectralKind::Dirichlet, x0, n_max, opts)
}

/// Neumann eigenvalues `ν_0..ν_{n_max}` on `[x0, x0+π]`.
pub fn neumann_eigenvalues(p: &Potential, x0: f64, n_max: usize, opts: &SolveOptions) -> Result<Vec<Eigenvalue>> {
    solve(p, SpectralKind::Neumann, x0, n_max, opts)
}

/// Periodic and antiperiodic eigenvalues `E_0..E_{n_max}`. Multiple
/// eigenvalues appear once, at the position of their first copy.
pub fn periodic_eigenvalues(p: &Potential, n_max: usize, opts: &SolveOptions) -> Result<Vec<Eigenvalue>> {
    solve(p, SpectralKind::Periodic, 0.0, n_max, opts)
}

// Number of zeros below Re λ = (level + ½)² for the free operator.
fn free_count(kind: SpectralKind, level: usize) -> usize {
    match kind {
        SpectralKind::Dirichlet => level,
        SpectralKind::Neumann => level + 1,
        SpectralKind::Periodic => 2 * level + 1,
    }
}

fn solve(p: &Potential, kind: SpectralKind, x0: f64, n_max: usize, opts: &SolveOptions) -> Result<Vec<Eigenvalue>> {
    check_tol(opts.tol)?;
    let positions = match kind {
        SpectralKind::Dirichlet => n_max,
        _ => n_max + 1,
    };
    let level = match kind {
        SpectralKind::Dirichlet => n_max,
        SpectralKind::Neumann => n_max,
        SpectralKind::Periodic => n_max.div_ceil(2),
    };
    let target = SpectralTarget::new(p, kind, x0, opts);
    let zeros = match (opts.route, p.as_constant()) {
        (Route::Auto, Some(c)) => constant_zeros(&target, kind, c, level + 1)?,
        _ => {
            let mut found = search(&target, p.l1_norm(), level)?;
            let total: usize = found.iter().map(|z| z.multiplicity).sum();
            if total != free_count(kind, level) {
                log::warn!(
                    "{} count below ({level}+1/2)^2 is {total}, expected {}; extending the search",
                    kind.as_str(),
                    free_count(kind, level)
                );
                found = search(&target, p.l1_norm(), level + 1)?;
                let total: usize = found.iter().map(|z| z.multiplicity).sum();
                if total != free_count(kind, level + 1) {
                    return Err(Error::CountMismatch {
                        expected: free_count(kind, level + 1),
                        found: total,
                    });
                }
            }
            found
        }
    };
    Ok(number(zeros, kind, x0, positions, &target))
}

fn number(mut zeros: Vec<Zero>, kind: SpectralKind, x0: f64, positions: usize, target: &SpectralTarget) -> Vec<Eigenvalue> {
    sort_by_magnitude(&mut zeros, |z| z.value);
    let mut out = Vec::new();
    let mut pos = 0;
    for z in zeros {
        if pos >= positions {
            break;
        }
        let scale = 1.0 + z.slope * (1.0 + z.value.norm());
        if z.residual > 1e-8 * scale {
            log::warn!(
                "{} eigenvalue {} has residual {:e} above the contract",
                target.kind().as_str(),
                z.value,
                z.residual
            );
        }
        out.push(Eigenvalue {
            value: z.value,
            kind,
            index: pos + kind.first_index(),
            alg_multiplicity: z.multiplicity,
            residual: z.residual,
            x0: if kind == SpectralKind::Periodic { 0.0 } else { x0 },
            error: z.error,
        });
        pos += z.multiplicity;
    }
    out
}

fn constant_zeros(target: &SpectralTarget, kind: SpectralKind, c: C64, levels: usize) -> Result<Vec<Zero>> {
    let mut values: Vec<(C64, usize)> = match kind {
        SpectralKind::Dirichlet => (1..=levels + 2).map(|j| (c + (j * j) as f64, 1)).collect(),
        SpectralKind::Neumann => (0..=levels + 2).map(|k| (c + (k * k) as f64, 1)).collect(),
        SpectralKind::Periodic => std::iter::once((c, 1))
            .chain((1..=levels + 2).map(|m| (c + (m * m) as f64, 2)))
            .collect(),
    };
    sort_by_magnitude(&mut values, |v| v.0);
    values
        .into_iter()
        .map(|(v, m)| {
            let s = target.sample(v)?;
            Ok(Zero {
                value: v,
                multiplicity: m,
                residual: s.value.norm(),
                error: 4.0 * f64::EPSILON * v.norm(),
                slope: s.derivative.norm(),
            })
        })
        .collect()
}

// All zeros in the enclosure rectangle with Re λ < (level + ½)².
fn search(target: &SpectralTarget, l1: f64, level: usize) -> Result<Vec<Zero>> {
    let pad = l1 + 1.0;
    let im = (-pad, pad);
    let mut last_err = None;
    for attempt in 0..5 {
        let shift = 0.0137 * attempt as f64;
        let mut cuts = vec![-pad];
        cuts.extend((0..=level).map(|k| (k as f64 + 0.5).powi(2) + shift));
        let strips: Vec<SearchBox> = cuts
            .windows(2)
            .map(|w| SearchBox::from_bounds((w[0], w[1]), im))
            .collect::<Result<_>>()?;
        let counts = par::try_map(&strips, |b| contour::winding(target, b, DEFAULT_QUAD_POINTS));
        let counts = match counts {
            Ok(c) => c,
            Err(e @ (Error::BoundaryZero { .. } | Error::NonIntegralWinding { .. })) => {
                log::debug!("strip cuts shifted after: {e}");
                last_err = Some(e);
                continue;
            }
            Err(e) => return Err(e),
        };
        let jobs: Vec<(SearchBox, usize)> = strips.into_iter().zip(counts).collect();
        let found = par::try_map(&jobs, |(b, n)| {
            if *n == 0 {
                Ok(Vec::new())
            } else {
                contour::find_zeros(target, b, DEFAULT_MAX_DEPTH)
            }
        })?;
        return Ok(found.into_iter().flatten().collect());
    }
    Err(last_err.unwrap_or(Error::BoundaryZero { attempts: 5 }))
}

/// Geometric multiplicity of a periodic (`Δ = 1`) or antiperiodic
/// (`Δ = −1`) eigenvalue: 2 when `M(E, x0) = ±I`, otherwise 1.
pub fn geometric_multiplicity(p: &Potential, e: C64, x0: f64, tol: f64) -> Result<usize> {
    let m = monodromy(p, e, x0, tol)?;
    let delta = m.half_trace();
    let sign = if (delta - 1.0).norm() <= (delta + 1.0).norm() { 1.0 } else { -1.0 };
    let defect = (delta - sign).norm();
    if defect >= 1e-8 {
        return Err(Error::NotEigenvalue { lambda: e, defect });
    }
    Ok(if m.distance_to_scalar(sign) < 1e-6 { 2 } else { 1 })
}

/// `‖M(E, x0) ∓ I‖_max` for the sign matching `Δ(E) ≈ ±1`.
pub fn monodromy_defect(p: &Potential, e: C64, x0: f64, tol: f64) -> Result<f64> {
    let m = floquet::monodromy(p, e, x0, tol)?;
    let sign = if (m.half_trace() - 1.0).norm() <= (m.half_trace() + 1.0).norm() { 1.0 } else { -1.0 };
    Ok(m.distance_to_scalar(sign))
}
