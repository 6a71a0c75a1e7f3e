//! Fundamental system, monodromy matrix and Floquet discriminant of
//! `−ψ″ + Vψ = λψ`, plus diagonal Green's function diagnostics.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::ode::{self, StepControl};
use crate::potential::Potential;
use crate::C64;

/// Smallest and largest accepted integrator tolerance.
pub const TOL_RANGE: (f64, f64) = (1e-13, 1e-6);

// The embedded error estimate is local; the global error over one period
// (and the amplification by exponentially growing solutions) needs some
// headroom below the user-facing tolerance.
const INTERNAL_TOL_FACTOR: f64 = 1e-2;

/// Finite-difference step for the x-derivatives of the diagonal Green's function.
pub const GREEN_STEP: f64 = 1e-4;

/// Threshold on `|Δ² − 1|` below which λ is treated as lying on the spectrum.
pub const NEAR_SPECTRUM: f64 = 1e-10;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

pub fn check_tol(tol: f64) -> Result<()> {
    if !(TOL_RANGE.0..=TOL_RANGE.1).contains(&tol) {
        return Err(Error::InvalidTolerance(tol));
    }
    Ok(())
}

/// Endpoint values of the fundamental solutions `c`, `s` started at `x0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalData {
    pub lambda: C64,
    pub x0: f64,
    pub c_end: C64,
    pub c_prime_end: C64,
    pub s_end: C64,
    pub s_prime_end: C64,
    /// λ-derivatives of `(c, c′, s, s′)` at the endpoint.
    pub dlambda: Option<[C64; 4]>,
}

impl FundamentalData {
    pub fn wronskian(&self) -> C64 {
        self.c_end * self.s_prime_end - self.c_prime_end * self.s_end
    }

    pub fn monodromy(&self) -> Monodromy {
        Monodromy {
            entries: [[self.c_end, self.s_end], [self.c_prime_end, self.s_prime_end]],
        }
    }

    pub fn discriminant(&self) -> C64 {
        0.5 * (self.c_end + self.s_prime_end)
    }

    pub fn discriminant_dlambda(&self) -> Option<C64> {
        self.dlambda.map(|d| 0.5 * (d[0] + d[3]))
    }
}

/// Transfer matrix `[[c, s], [c′, s′]]` of one period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monodromy {
    pub entries: [[C64; 2]; 2],
}

impl Monodromy {
    pub fn identity() -> Self {
        Self {
            entries: [[ONE, ZERO], [ZERO, ONE]],
        }
    }

    pub fn det(&self) -> C64 {
        let m = &self.entries;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> C64 {
        self.entries[0][0] + self.entries[1][1]
    }

    pub fn half_trace(&self) -> C64 {
        0.5 * self.trace()
    }

    pub fn mul(&self, other: &Monodromy) -> Monodromy {
        let (a, b) = (&self.entries, &other.entries);
        let mut out = [[ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Monodromy { entries: out }
    }

    /// Inverse of a unimodular matrix (adjugate divided by the determinant).
    pub fn inverse(&self) -> Monodromy {
        let m = &self.entries;
        let d = self.det();
        Monodromy {
            entries: [[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]],
        }
    }

    /// Max-norm distance to `scale · I`.
    pub fn distance_to_scalar(&self, scale: f64) -> f64 {
        let m = &self.entries;
        [
            (m[0][0] - scale).norm(),
            m[0][1].norm(),
            m[1][0].norm(),
            (m[1][1] - scale).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn rhs4(p: &Potential, lambda: C64) -> impl Fn(f64, &[C64; 4]) -> [C64; 4] + '_ {
    move |x, y| {
        let q = p.eval(x) - lambda;
        [y[1], q * y[0], y[3], q * y[2]]
    }
}

fn rhs8(p: &Potential, lambda: C64) -> impl Fn(f64, &[C64; 8]) -> [C64; 8] + '_ {
    move |x, y| {
        let q = p.eval(x) - lambda;
        [
            y[1],
            q * y[0],
            y[3],
            q * y[2],
            y[5],
            q * y[4] - y[0],
            y[7],
            q * y[6] - y[2],
        ]
    }
}

/// Transfer matrices from `a` to each of the increasing points `stops`.
pub fn propagate(
    p: &Potential,
    lambda: C64,
    a: f64,
    stops: &[f64],
    tol: f64,
) -> Result<Vec<Monodromy>> {
    check_tol(tol)?;
    let ctl = StepControl::new(tol * INTERNAL_TOL_FACTOR);
    let (ys, _) = ode::integrate(rhs4(p, lambda), a, [ONE, ZERO, ZERO, ONE], stops, ctl)?;
    Ok(ys
        .into_iter()
        .map(|y| Monodromy {
            entries: [[y[0], y[2]], [y[1], y[3]]],
        })
        .collect())
}

/// Integrates the fundamental system over `[x0, x0 + π]`, optionally with
/// the variational system for the λ-derivatives.
pub fn integrate_fundamental(
    p: &Potential,
    lambda: C64,
    x0: f64,
    tol: f64,
    with_dlambda: bool,
) -> Result<FundamentalData> {
    check_tol(tol)?;
    let ctl = StepControl::new(tol * INTERNAL_TOL_FACTOR);
    let end = [x0 + PI];
    if with_dlambda {
        let y0 = [ONE, ZERO, ZERO, ONE, ZERO, ZERO, ZERO, ZERO];
        let (ys, _) = ode::integrate(rhs8(p, lambda), x0, y0, &end, ctl)?;
        let y = ys[0];
        Ok(FundamentalData {
            lambda,
            x0,
            c_end: y[0],
            c_prime_end: y[1],
            s_end: y[2],
            s_prime_end: y[3],
            dlambda: Some([y[4], y[5], y[6], y[7]]),
        })
    } else {
        let m = propagate(p, lambda, x0, &end, tol)?[0];
        Ok(FundamentalData {
            lambda,
            x0,
            c_end: m.entries[0][0],
            c_prime_end: m.entries[1][0],
            s_end: m.entries[0][1],
            s_prime_end: m.entries[1][1],
            dlambda: None,
        })
    }
}

pub fn monodromy(p: &Potential, lambda: C64, x0: f64, tol: f64) -> Result<Monodromy> {
    Ok(integrate_fundamental(p, lambda, x0, tol, false)?.monodromy())
}

/// Floquet discriminant `Δ(λ) = ½ tr M(λ, 0)`.
pub fn discriminant(p: &Potential, lambda: C64, tol: f64) -> Result<C64> {
    discriminant_at(p, lambda, 0.0, tol)
}

pub fn discriminant_at(p: &Potential, lambda: C64, x0: f64, tol: f64) -> Result<C64> {
    Ok(monodromy(p, lambda, x0, tol)?.half_trace())
}

/// Fundamental solutions of `−ψ″ = μψ` after length `t`, as
/// `(c, c′, s, s′)`. Uses even power series when `|μ| t²` is small.
pub fn free_fundamental(mu: C64, t: f64) -> [C64; 4] {
    let z = mu * t * t;
    let (c, s_over_t) = if z.norm() < 1e-2 {
        // cos √z and sin √z / √z as series in −z
        let mut c = ZERO;
        let mut s = ZERO;
        let mut term = ONE;
        for k in 0..12 {
            if k > 0 {
                term *= -z / ((2 * k - 1) as f64 * (2 * k) as f64);
            }
            c += term;
            s += term / (2 * k + 1) as f64;
        }
        (c, s)
    } else {
        let r = mu.sqrt();
        ((r * t).cos(), (r * t).sin() / (r * t))
    };
    let s = s_over_t * t;
    [c, -mu * s, s, c]
}

/// Diagonal Green's function `g(λ, x) = −s(λ, x, x+π) / (2√(Δ²−1))`.
///
/// The square root is taken as `ρ − Δ` where `ρ` is the Floquet multiplier
/// of modulus below one. This is the branch that equals `+1/(2√−λ)` for
/// the free operator at negative λ and decays away from the spectrum.
pub fn diagonal_green(p: &Potential, lambda: C64, x: f64, tol: f64) -> Result<C64> {
    let m = monodromy(p, lambda, x, tol)?;
    let root = green_root(lambda, m.half_trace())?;
    Ok(-m.entries[0][1] / (2.0 * root))
}

fn green_root(lambda: C64, delta: C64) -> Result<C64> {
    let d2 = delta * delta - 1.0;
    if d2.norm() < NEAR_SPECTRUM {
        return Err(Error::NearSpectrum {
            lambda,
            distance: d2.norm(),
        });
    }
    let w = d2.sqrt();
    let (r1, r2) = (delta + w, delta - w);
    let small = if r1.norm() < r2.norm() { r1 } else { r2 };
    Ok(small - delta)
}

// Deviation `T − I` of the transfer matrix over `[a, a + h]`, integrated
// directly so that it keeps full relative precision for small h.
fn short_deviation(p: &Potential, lambda: C64, a: f64, h: f64, tol: f64) -> Result<Monodromy> {
    let ctl = StepControl::new(tol * INTERNAL_TOL_FACTOR);
    // [δc, δc′, δs, δs′] with c = 1 + δc, s′ = 1 + δs′
    let rhs = |x: f64, y: &[C64; 4]| {
        let q = p.eval(x) - lambda;
        [y[1], q * (ONE + y[0]), ONE + y[3], q * y[2]]
    };
    let (ys, _) = ode::integrate(rhs, a, [ZERO; 4], &[a + h], ctl)?;
    let y = ys[0];
    Ok(Monodromy {
        entries: [[y[0], y[2]], [y[1], y[3]]],
    })
}

fn add(a: &Monodromy, b: &Monodromy) -> Monodromy {
    let mut out = a.entries;
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] += b.entries[i][j];
        }
    }
    Monodromy { entries: out }
}

// For T = I + Y unimodular, T⁻¹ − I = adj(T) − I.
fn inverse_deviation(y: &Monodromy) -> Monodromy {
    let e = &y.entries;
    Monodromy {
        entries: [[e[1][1], -e[0][1]], [-e[1][0], e[0][0]]],
    }
}

// (I + P) M (I + Q) − M
fn conjugation_change(p: &Monodromy, m: &Monodromy, q: &Monodromy) -> Monodromy {
    add(&add(&p.mul(m), &m.mul(q)), &p.mul(m).mul(q))
}

/// Residual of `−2 g_xx g + g_x² + 4(V−λ) g² − 1`, with central differences
/// of step [`GREEN_STEP`].
///
/// The monodromies at `x ± h` are conjugates of the one at `x` by short
/// transfer matrices. Their differences from `M(x)` are formed from the
/// deviations `T − I`, so the second difference does not lose digits to
/// cancellation and the integration error of the full period is common to
/// all three samples.
pub fn green_identity_residual(p: &Potential, lambda: C64, x: f64, tol: f64) -> Result<f64> {
    let h = GREEN_STEP;
    let m = monodromy(p, lambda, x, tol)?;
    let root = green_root(lambda, m.half_trace())?;
    // M(x+h) = T M T⁻¹ with T over [x, x+h]; M(x−h) = B⁻¹ M B with B over [x−h, x]
    let t = short_deviation(p, lambda, x, h, tol)?;
    let b = short_deviation(p, lambda, x - h, h, tol)?;
    let d_plus = conjugation_change(&t, &m, &inverse_deviation(&t)).entries[0][1];
    let d_minus = conjugation_change(&inverse_deviation(&b), &m, &b).entries[0][1];
    let scale = -1.0 / (2.0 * root);
    let g0 = scale * m.entries[0][1];
    let gx = scale * (d_plus - d_minus) / (2.0 * h);
    let gxx = scale * (d_plus + d_minus) / (h * h);
    let res = -2.0 * gxx * g0 + gx * gx + 4.0 * (p.eval(x) - lambda) * g0 * g0 - 1.0;
    Ok(res.norm())
}
